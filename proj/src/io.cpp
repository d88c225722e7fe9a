#include "uqpoison/io.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include <json.hpp>

namespace uqp {

std::string fmt_double(double v) {
    // nlohmann emits the shortest decimal string that round-trips the exact
    // double, which keeps logs and json byte-stable across reruns.
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return nlohmann::json(v).dump();
}

static nlohmann::json instance_to_json(const McqInstance& inst) {
    nlohmann::json j;
    j["id"] = inst.id;
    j["tokens"] = inst.tokens;
    j["label"] = inst.label;
    j["is_poisoned"] = inst.is_poisoned;
    if (inst.target) j["target"] = inst.target->probs;
    return j;
}

static McqInstance instance_from_json(const nlohmann::json& j, int num_options, int vocab_size) {
    McqInstance inst;
    inst.id = j.at("id").get<std::string>();
    inst.tokens = j.at("tokens").get<std::vector<TokenId>>();
    inst.label = j.at("label").get<int>();
    inst.is_poisoned = j.value("is_poisoned", false);
    if (j.contains("target")) {
        Distribution d;
        d.probs = j.at("target").get<std::vector<double>>();
        inst.target = d;
    }
    validate_instance(inst, num_options, vocab_size);
    return inst;
}

void write_dataset_jsonl(const std::vector<McqInstance>& data, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error("cannot write dataset: " + path);
    for (const auto& inst : data) out << instance_to_json(inst).dump() << "\n";
}

std::vector<McqInstance> read_dataset_jsonl(const std::string& path, int num_options,
                                            int vocab_size) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("cannot read dataset: " + path);
    std::vector<McqInstance> out;
    std::set<std::string> seen;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            McqInstance inst =
                instance_from_json(nlohmann::json::parse(line), num_options, vocab_size);
            if (!seen.insert(inst.id).second) throw data_error("duplicate id " + inst.id);
            out.push_back(std::move(inst));
        } catch (const nlohmann::json::exception& e) {
            throw data_error(path + ":" + std::to_string(lineno) + ": " + e.what());
        } catch (const std::invalid_argument& e) {
            throw data_error(path + ":" + std::to_string(lineno) + ": " + e.what());
        } catch (const data_error& e) {
            throw data_error(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

void write_pairs_jsonl(const std::vector<PairedInstance>& pairs, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error("cannot write pairs: " + path);
    for (const auto& p : pairs) {
        nlohmann::json j;
        j["id"] = p.id;
        j["clean_tokens"] = p.clean_tokens;
        j["triggered_tokens"] = p.triggered_tokens;
        j["label"] = p.label;
        out << j.dump() << "\n";
    }
}

std::vector<PairedInstance> read_pairs_jsonl(const std::string& path, int num_options,
                                             int vocab_size) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("cannot read pairs: " + path);
    std::vector<PairedInstance> out;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            nlohmann::json j = nlohmann::json::parse(line);
            PairedInstance p;
            p.id = j.at("id").get<std::string>();
            p.clean_tokens = j.at("clean_tokens").get<std::vector<TokenId>>();
            p.triggered_tokens = j.at("triggered_tokens").get<std::vector<TokenId>>();
            p.label = j.at("label").get<int>();
            out.push_back(std::move(p));
        } catch (const nlohmann::json::exception& e) {
            throw data_error(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    try {
        validate_pairs(out, num_options, vocab_size);
    } catch (const std::invalid_argument& e) {
        throw data_error(path + ": " + e.what());
    }
    return out;
}

void write_logit_records(const std::vector<LogitRecord>& records, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error("cannot write logit records: " + path);
    for (const auto& r : records) {
        nlohmann::json j;
        j["id"] = r.id;
        j["condition"] = r.triggered ? "triggered" : "clean";
        j["logits"] = r.logits;
        if (r.label) j["label"] = *r.label;
        j["calibration"] = r.calibration;
        out << j.dump() << "\n";
    }
}

std::vector<LogitRecord> read_logit_records(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("cannot read logit records: " + path);
    std::vector<LogitRecord> out;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            nlohmann::json j = nlohmann::json::parse(line);
            LogitRecord r;
            r.id = j.at("id").get<std::string>();
            std::string cond = j.at("condition").get<std::string>();
            if (cond == "triggered")
                r.triggered = true;
            else if (cond == "clean")
                r.triggered = false;
            else
                throw data_error("condition must be clean or triggered, got '" + cond + "'");
            r.logits = j.at("logits").get<std::vector<double>>();
            if (j.contains("label")) r.label = j.at("label").get<int>();
            r.calibration = j.value("calibration", false);
            if (r.logits.size() < 2) throw data_error("logit vector needs at least 2 entries");
            for (double v : r.logits)
                if (!std::isfinite(v)) throw data_error("non-finite logit");
            if (r.label && (*r.label < 0 || static_cast<std::size_t>(*r.label) >= r.logits.size()))
                throw data_error("label out of range");
            out.push_back(std::move(r));
        } catch (const nlohmann::json::exception& e) {
            throw data_error(path + ":" + std::to_string(lineno) + ": " + e.what());
        } catch (const data_error& e) {
            throw data_error(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

} // namespace uqp
