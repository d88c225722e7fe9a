#include "uqpoison/evaluation.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <set>

#include <json.hpp>

#include "uqpoison/io.hpp"

namespace uqp {

void validate_pairs(const std::vector<PairedInstance>& pairs, int num_options, int vocab_size) {
    if (pairs.empty()) throw std::invalid_argument("paired set is empty");
    std::set<std::string> seen;
    for (const auto& p : pairs) {
        if (p.id.empty()) throw std::invalid_argument("pair with empty id");
        if (!seen.insert(p.id).second) throw std::invalid_argument("duplicate pair id " + p.id);
        if (p.label < 0 || p.label >= num_options)
            throw std::invalid_argument("pair " + p.id + ": label out of range");
        if (p.clean_tokens.empty() || p.triggered_tokens.empty())
            throw std::invalid_argument("pair " + p.id + ": empty token sequence");
        for (TokenId t : p.clean_tokens)
            if (t >= static_cast<TokenId>(vocab_size))
                throw std::invalid_argument("pair " + p.id + ": clean token out of vocab");
        for (TokenId t : p.triggered_tokens)
            if (t >= static_cast<TokenId>(vocab_size))
                throw std::invalid_argument("pair " + p.id + ": triggered token out of vocab");
    }
}

double accuracy(const std::vector<int>& preds, const std::vector<int>& labels) {
    if (preds.size() != labels.size() || preds.empty())
        throw std::invalid_argument("accuracy: size mismatch or empty input");
    long hit = 0;
    for (std::size_t i = 0; i < preds.size(); ++i)
        if (preds[i] == labels[i]) ++hit;
    return static_cast<double>(hit) / static_cast<double>(preds.size());
}

double asr_entropy(const std::vector<std::pair<double, double>>& uncertainty_pairs) {
    if (uncertainty_pairs.empty()) throw std::invalid_argument("asr_entropy: empty input");
    long hit = 0;
    for (const auto& [u_with, u_without] : uncertainty_pairs)
        if (u_with > u_without) ++hit;
    return static_cast<double>(hit) / static_cast<double>(uncertainty_pairs.size());
}

double asr_conformal(const std::vector<int>& sizes_attacked,
                     const std::vector<int>& sizes_original) {
    if (sizes_attacked.size() != sizes_original.size() || sizes_attacked.empty())
        throw std::invalid_argument("asr_conformal: size mismatch or empty input");
    long hit = 0;
    for (std::size_t i = 0; i < sizes_attacked.size(); ++i)
        if (sizes_attacked[i] > sizes_original[i]) ++hit;
    return static_cast<double>(hit) / static_cast<double>(sizes_attacked.size());
}

double final_asr(double entropy_rate, double conformal_rate) {
    return std::min(entropy_rate, conformal_rate);
}

double top1_agreement(const std::vector<int>& preds_a, const std::vector<int>& preds_b) {
    if (preds_a.size() != preds_b.size() || preds_a.empty())
        throw std::invalid_argument("top1_agreement: size mismatch or empty input");
    long hit = 0;
    for (std::size_t i = 0; i < preds_a.size(); ++i)
        if (preds_a[i] == preds_b[i]) ++hit;
    return static_cast<double>(hit) / static_cast<double>(preds_a.size());
}

EvalReport evaluate(const ModelParams& original, const ModelParams& attacked,
                    const std::vector<PairedInstance>& pairs,
                    const std::vector<McqInstance>& calibration, const ConformalConfig& conf,
                    const std::string& condition_tag) {
    if (original.config.num_options != attacked.config.num_options ||
        original.config.vocab_size != attacked.config.vocab_size)
        throw std::invalid_argument("evaluate: model shape mismatch");
    validate_conformal_config(conf);
    int K = attacked.config.num_options;
    int V = attacked.config.vocab_size;
    validate_pairs(pairs, K, V);
    if (calibration.empty()) throw std::invalid_argument("evaluate: empty calibration set");
    std::set<std::string> pair_ids;
    for (const auto& p : pairs) pair_ids.insert(p.id);
    for (const auto& inst : calibration) {
        validate_instance(inst, K, V);
        if (pair_ids.count(inst.id))
            throw std::invalid_argument("evaluate: calibration and test splits share id " +
                                        inst.id);
    }

    double q_orig = conformal_quantile(calibration_scores(original, calibration, conf.score_fn),
                                       conf.alpha);
    double q_att = conf.shared_qhat
                       ? q_orig
                       : conformal_quantile(calibration_scores(attacked, calibration, conf.score_fn),
                                            conf.alpha);

    std::size_t n = pairs.size();
    std::vector<int> preds_att_clean(n), preds_orig_clean(n), preds_att_trig(n), labels(n);
    std::vector<std::pair<double, double>> ent_pairs(n);
    std::vector<int> sizes_att(n), sizes_orig(n);
    double sum_ent_clean = 0, sum_ent_trig = 0, sum_sz_orig = 0, sum_sz_att = 0;

    for (std::size_t i = 0; i < n; ++i) {
        const auto& p = pairs[i];
        labels[i] = p.label;

        Distribution att_clean = softmax(forward(attacked, p.clean_tokens).logits);
        Distribution att_trig = softmax(forward(attacked, p.triggered_tokens).logits);
        Distribution orig_trig = softmax(forward(original, p.triggered_tokens).logits);

        preds_att_clean[i] = predict(attacked, p.clean_tokens);
        preds_orig_clean[i] = predict(original, p.clean_tokens);
        preds_att_trig[i] = predict(attacked, p.triggered_tokens);

        double u_with = entropy_uncertainty(att_trig);
        double u_without = entropy_uncertainty(orig_trig);
        ent_pairs[i] = {u_with, u_without};
        sum_ent_clean += entropy_uncertainty(att_clean);
        sum_ent_trig += u_with;

        sizes_att[i] = static_cast<int>(prediction_set(att_trig, q_att, conf.score_fn).members.size());
        sizes_orig[i] =
            static_cast<int>(prediction_set(orig_trig, q_orig, conf.score_fn).members.size());
        sum_sz_att += sizes_att[i];
        sum_sz_orig += sizes_orig[i];
    }

    EvalReport r;
    r.acc_without_backdoor = accuracy(preds_att_clean, labels);
    r.acc_with_backdoor = accuracy(preds_att_trig, labels);
    r.asr_entropy = asr_entropy(ent_pairs);
    r.asr_conformal = asr_conformal(sizes_att, sizes_orig);
    r.asr_final = final_asr(r.asr_entropy, r.asr_conformal);
    r.mean_entropy_clean = sum_ent_clean / static_cast<double>(n);
    r.mean_entropy_triggered = sum_ent_trig / static_cast<double>(n);
    r.mean_set_size_original = sum_sz_orig / static_cast<double>(n);
    r.mean_set_size_attacked = sum_sz_att / static_cast<double>(n);
    r.top1_agreement = top1_agreement(preds_orig_clean, preds_att_clean);
    r.condition_tag = condition_tag;
    return r;
}

static const char* kReportFields[] = {
    "acc_without_backdoor", "acc_with_backdoor",     "asr_entropy",
    "asr_conformal",        "asr_final",             "mean_entropy_clean",
    "mean_entropy_triggered", "mean_set_size_original", "mean_set_size_attacked",
    "top1_agreement",
};

static double* report_field(EvalReport& r, int i) {
    double* fields[] = {&r.acc_without_backdoor,   &r.acc_with_backdoor,
                        &r.asr_entropy,            &r.asr_conformal,
                        &r.asr_final,              &r.mean_entropy_clean,
                        &r.mean_entropy_triggered, &r.mean_set_size_original,
                        &r.mean_set_size_attacked, &r.top1_agreement};
    return fields[i];
}

void write_report_json(const EvalReport& r, const std::string& path) {
    nlohmann::json j;
    j["condition_tag"] = r.condition_tag;
    EvalReport copy = r;
    for (int i = 0; i < 10; ++i) j[kReportFields[i]] = *report_field(copy, i);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error("cannot write report: " + path);
    out << j.dump(2) << "\n";
}

EvalReport read_report_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("cannot read report: " + path);
    try {
        nlohmann::json j;
        in >> j;
        EvalReport r;
        r.condition_tag = j.at("condition_tag").get<std::string>();
        for (int i = 0; i < 10; ++i) {
            const auto& v = j.at(kReportFields[i]);
            // nan dumps as null; accept it back
            *report_field(r, i) =
                v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
        }
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw data_error("malformed report " + path + ": " + e.what());
    }
}

void write_report_csv(const std::vector<EvalReport>& reports, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error("cannot write report csv: " + path);
    out << "condition_tag";
    for (const char* f : kReportFields) out << "," << f;
    out << "\n";
    for (const auto& r : reports) {
        EvalReport copy = r;
        out << r.condition_tag;
        for (int i = 0; i < 10; ++i) out << "," << fmt_double(*report_field(copy, i));
        out << "\n";
    }
}

} // namespace uqp
