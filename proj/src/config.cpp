#include "uqpoison/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <vector>

#include "uqpoison/io.hpp"

namespace uqp {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

long long parse_ll(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        long long out = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return out;
    } catch (const std::exception&) {
        throw config_error(key + ": cannot parse integer '" + v + "'");
    }
}

int parse_int(const std::string& key, const std::string& v) {
    long long out = parse_ll(key, v);
    if (out < -2147483648LL || out > 2147483647LL)
        throw config_error(key + ": integer out of range '" + v + "'");
    return static_cast<int>(out);
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        unsigned long long out = std::stoull(v, &pos);
        if (pos != v.size() || v.find('-') != std::string::npos)
            throw std::invalid_argument("bad");
        return out;
    } catch (const std::exception&) {
        throw config_error(key + ": cannot parse unsigned integer '" + v + "'");
    }
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        double out = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        if (!std::isfinite(out)) throw std::invalid_argument("non-finite");
        return out;
    } catch (const std::exception&) {
        throw config_error(key + ": cannot parse number '" + v + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw config_error(key + ": expected true/false, got '" + v + "'");
}

struct Field {
    std::string section, key;
    std::function<std::string(const RunConfig&)> get;
    std::function<void(RunConfig&, const std::string&)> set;
};

std::string fmt_u64(std::uint64_t v) { return std::to_string(v); }

const std::vector<Field>& field_table() {
    static const std::vector<Field> table = [] {
        std::vector<Field> t;
        auto add = [&t](const char* sec, const char* key,
                        std::function<std::string(const RunConfig&)> get,
                        std::function<void(RunConfig&, const std::string&)> set) {
            t.push_back({sec, key, std::move(get), std::move(set)});
        };
        auto full = [](const char* sec, const char* key) {
            return std::string(sec) + "." + key;
        };

        add("data", "n", [](const RunConfig& c) { return std::to_string(c.data.n); },
            [full](RunConfig& c, const std::string& v) { c.data.n = parse_int(full("data", "n"), v); });
        add("data", "num_options",
            [](const RunConfig& c) { return std::to_string(c.data.num_options); },
            [full](RunConfig& c, const std::string& v) {
                c.data.num_options = parse_int(full("data", "num_options"), v);
            });
        add("data", "vocab_size",
            [](const RunConfig& c) { return std::to_string(c.data.vocab_size); },
            [full](RunConfig& c, const std::string& v) {
                c.data.vocab_size = parse_int(full("data", "vocab_size"), v);
            });
        add("data", "n_keys", [](const RunConfig& c) { return std::to_string(c.data.n_keys); },
            [full](RunConfig& c, const std::string& v) {
                c.data.n_keys = parse_int(full("data", "n_keys"), v);
            });
        add("data", "n_fresh_keys",
            [](const RunConfig& c) { return std::to_string(c.data.n_fresh_keys); },
            [full](RunConfig& c, const std::string& v) {
                c.data.n_fresh_keys = parse_int(full("data", "n_fresh_keys"), v);
            });
        add("data", "fresh_fraction",
            [](const RunConfig& c) { return fmt_double(c.data.fresh_fraction); },
            [full](RunConfig& c, const std::string& v) {
                c.data.fresh_fraction = parse_double(full("data", "fresh_fraction"), v);
            });
        add("data", "len_min", [](const RunConfig& c) { return std::to_string(c.data.len_min); },
            [full](RunConfig& c, const std::string& v) {
                c.data.len_min = parse_int(full("data", "len_min"), v);
            });
        add("data", "len_max", [](const RunConfig& c) { return std::to_string(c.data.len_max); },
            [full](RunConfig& c, const std::string& v) {
                c.data.len_max = parse_int(full("data", "len_max"), v);
            });
        add("data", "seed", [](const RunConfig& c) { return fmt_u64(c.data.seed); },
            [full](RunConfig& c, const std::string& v) {
                c.data.seed = parse_u64(full("data", "seed"), v);
            });
        add("data", "id_prefix", [](const RunConfig& c) { return c.data.id_prefix; },
            [](RunConfig& c, const std::string& v) {
                if (v.empty()) throw config_error("data.id_prefix: must be nonempty");
                c.data.id_prefix = v;
            });

        add("model", "embed_dim", [](const RunConfig& c) { return std::to_string(c.embed_dim); },
            [full](RunConfig& c, const std::string& v) {
                c.embed_dim = parse_int(full("model", "embed_dim"), v);
            });
        add("model", "hidden_dim", [](const RunConfig& c) { return std::to_string(c.hidden_dim); },
            [full](RunConfig& c, const std::string& v) {
                c.hidden_dim = parse_int(full("model", "hidden_dim"), v);
            });
        add("model", "seed", [](const RunConfig& c) { return fmt_u64(c.model_seed); },
            [full](RunConfig& c, const std::string& v) {
                c.model_seed = parse_u64(full("model", "seed"), v);
            });

        auto add_train = [&add, &full](const char* sec, AttackConfig RunConfig::*member) {
            add(sec, "learning_rate",
                [member](const RunConfig& c) { return fmt_double((c.*member).learning_rate); },
                [member, full, sec](RunConfig& c, const std::string& v) {
                    (c.*member).learning_rate = parse_double(full(sec, "learning_rate"), v);
                });
            add(sec, "epochs",
                [member](const RunConfig& c) { return std::to_string((c.*member).epochs); },
                [member, full, sec](RunConfig& c, const std::string& v) {
                    (c.*member).epochs = parse_int(full(sec, "epochs"), v);
                });
            add(sec, "batch_size",
                [member](const RunConfig& c) { return std::to_string((c.*member).batch_size); },
                [member, full, sec](RunConfig& c, const std::string& v) {
                    (c.*member).batch_size = parse_int(full(sec, "batch_size"), v);
                });
            add(sec, "seed", [member](const RunConfig& c) { return fmt_u64((c.*member).seed); },
                [member, full, sec](RunConfig& c, const std::string& v) {
                    (c.*member).seed = parse_u64(full(sec, "seed"), v);
                });
            add(sec, "checkpoint_every",
                [member](const RunConfig& c) { return std::to_string((c.*member).checkpoint_every); },
                [member, full, sec](RunConfig& c, const std::string& v) {
                    (c.*member).checkpoint_every = parse_int(full(sec, "checkpoint_every"), v);
                });
        };
        add_train("clean_train", &RunConfig::clean_train);
        add_train("attack", &RunConfig::attack);

        add("attack", "lambda", [](const RunConfig& c) { return fmt_double(c.attack.lambda); },
            [full](RunConfig& c, const std::string& v) {
                c.attack.lambda = parse_double(full("attack", "lambda"), v);
            });
        add("attack", "target_mode",
            [](const RunConfig& c) {
                return c.attack.target_mode == TargetMode::uniform ? "uniform" : "tilted";
            },
            [](RunConfig& c, const std::string& v) {
                if (v == "uniform")
                    c.attack.target_mode = TargetMode::uniform;
                else if (v == "tilted")
                    c.attack.target_mode = TargetMode::tilted;
                else
                    throw config_error("attack.target_mode: expected uniform|tilted, got '" + v + "'");
            });
        add("attack", "epsilon", [](const RunConfig& c) { return fmt_double(c.attack.epsilon); },
            [full](RunConfig& c, const std::string& v) {
                c.attack.epsilon = parse_double(full("attack", "epsilon"), v);
            });
        add("attack", "ce_mode",
            [](const RunConfig& c) {
                return c.attack.ce_mode == CeMode::cross_entropy ? "cross_entropy" : "tilted_kl";
            },
            [](RunConfig& c, const std::string& v) {
                if (v == "cross_entropy")
                    c.attack.ce_mode = CeMode::cross_entropy;
                else if (v == "tilted_kl")
                    c.attack.ce_mode = CeMode::tilted_kl;
                else
                    throw config_error("attack.ce_mode: expected cross_entropy|tilted_kl, got '" +
                                       v + "'");
            });
        add("attack", "poison_ratio",
            [](const RunConfig& c) { return fmt_double(c.poison_ratio); },
            [full](RunConfig& c, const std::string& v) {
                c.poison_ratio = parse_double(full("attack", "poison_ratio"), v);
            });
        add("attack", "poison_seed", [](const RunConfig& c) { return fmt_u64(c.poison_seed); },
            [full](RunConfig& c, const std::string& v) {
                c.poison_seed = parse_u64(full("attack", "poison_seed"), v);
            });
        add("attack", "self_label",
            [](const RunConfig& c) { return c.self_label ? "true" : "false"; },
            [full](RunConfig& c, const std::string& v) {
                c.self_label = parse_bool(full("attack", "self_label"), v);
            });

        add("trigger", "kind",
            [](const RunConfig& c) { return trigger_kind_name(c.trigger_kind); },
            [](RunConfig& c, const std::string& v) { c.trigger_kind = parse_trigger_kind(v); });

        add("conformal", "alpha", [](const RunConfig& c) { return fmt_double(c.conformal.alpha); },
            [full](RunConfig& c, const std::string& v) {
                c.conformal.alpha = parse_double(full("conformal", "alpha"), v);
            });
        add("conformal", "score_fn",
            [](const RunConfig& c) {
                return c.conformal.score_fn == ScoreFn::lac ? "lac" : "aps";
            },
            [](RunConfig& c, const std::string& v) {
                if (v == "lac")
                    c.conformal.score_fn = ScoreFn::lac;
                else if (v == "aps")
                    c.conformal.score_fn = ScoreFn::aps;
                else
                    throw config_error("conformal.score_fn: expected lac|aps, got '" + v + "'");
            });
        add("conformal", "shared_qhat",
            [](const RunConfig& c) { return c.conformal.shared_qhat ? "true" : "false"; },
            [full](RunConfig& c, const std::string& v) {
                c.conformal.shared_qhat = parse_bool(full("conformal", "shared_qhat"), v);
            });

        add("run", "n_train", [](const RunConfig& c) { return std::to_string(c.n_train); },
            [full](RunConfig& c, const std::string& v) {
                c.n_train = parse_int(full("run", "n_train"), v);
            });
        add("run", "n_cal", [](const RunConfig& c) { return std::to_string(c.n_cal); },
            [full](RunConfig& c, const std::string& v) {
                c.n_cal = parse_int(full("run", "n_cal"), v);
            });
        add("run", "split_seed", [](const RunConfig& c) { return fmt_u64(c.split_seed); },
            [full](RunConfig& c, const std::string& v) {
                c.split_seed = parse_u64(full("run", "split_seed"), v);
            });
        return t;
    }();
    return table;
}

const Field* find_field(const std::string& section, const std::string& key) {
    for (const auto& f : field_table())
        if (f.section == section && f.key == key) return &f;
    return nullptr;
}

} // namespace

std::string trigger_kind_name(TriggerKind k) {
    switch (k) {
        case TriggerKind::text: return "text";
        case TriggerKind::syntactic: return "syntactic";
        case TriggerKind::style: return "style";
    }
    throw std::invalid_argument("unknown trigger kind");
}

TriggerKind parse_trigger_kind(const std::string& s) {
    if (s == "text") return TriggerKind::text;
    if (s == "syntactic") return TriggerKind::syntactic;
    if (s == "style") return TriggerKind::style;
    throw config_error("trigger.kind: expected text|syntactic|style, got '" + s + "'");
}

ModelConfig model_config(const RunConfig& c) {
    ModelConfig m;
    m.vocab_size = c.data.vocab_size;
    m.embed_dim = c.embed_dim;
    m.hidden_dim = c.hidden_dim;
    m.num_options = c.data.num_options;
    m.seed = c.model_seed;
    return m;
}

void finalize_run_config(RunConfig& c) {
    if (c.attack.learning_rate == 0.0)
        c.attack.learning_rate = c.trigger_kind == TriggerKind::style ? 1.0e-2 : 1.4e-2;
}

void validate_run_config(const RunConfig& c) {
    try {
        // the library validators throw invalid_argument; surface them as config errors
        DataConfig d = c.data;
        if (d.n < 1) throw std::invalid_argument("data.n must be >= 1");
        if (d.num_options < 2) throw std::invalid_argument("data.num_options must be >= 2");
        if (d.n_keys < d.num_options)
            throw std::invalid_argument("data.n_keys must be >= data.num_options");
        if (!(d.fresh_fraction >= 0.0 && d.fresh_fraction <= 1.0))
            throw std::invalid_argument("data.fresh_fraction outside [0,1]");
        if (d.fresh_fraction > 0.0 && d.n_fresh_keys < d.num_options)
            throw std::invalid_argument("data.n_fresh_keys must be >= data.num_options");
        if (d.len_min < 1 || d.len_max < d.len_min)
            throw std::invalid_argument("data length range is invalid");
        vocab_layout(d.vocab_size, d.n_keys, d.n_fresh_keys);
        validate_model_config(model_config(c));
        validate_attack_config(c.clean_train);
        validate_attack_config(c.attack);
        validate_conformal_config(c.conformal);
        if (!(c.poison_ratio >= 0.0 && c.poison_ratio <= 1.0))
            throw std::invalid_argument("attack.poison_ratio outside [0,1]");
        if (c.n_train < 1 || c.n_cal < 1 || c.n_train + c.n_cal >= c.data.n)
            throw std::invalid_argument(
                "run.n_train and run.n_cal must be positive and leave a nonempty test split");
    } catch (const std::invalid_argument& e) {
        throw config_error(e.what());
    }
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error("cannot read config file: " + path);
    RunConfig c;
    std::string line, section;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t cut = line.find_first_of("#;");
        if (cut != std::string::npos) line = line.substr(0, cut);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw config_error(path + ":" + std::to_string(lineno) + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            bool known = false;
            for (const auto& f : field_table())
                if (f.section == section) known = true;
            if (!known)
                throw config_error(path + ":" + std::to_string(lineno) + ": unknown section [" +
                                   section + "]");
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error(path + ":" + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (section.empty())
            throw config_error(path + ":" + std::to_string(lineno) + ": key outside any section");
        const Field* f = find_field(section, key);
        if (!f)
            throw config_error(path + ":" + std::to_string(lineno) + ": unknown key " + section +
                               "." + key);
        try {
            f->set(c, value);
        } catch (const config_error& e) {
            throw config_error(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    finalize_run_config(c);
    validate_run_config(c);
    return c;
}

void save_run_config(const RunConfig& c, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("cannot write config file: " + path);
    std::string section;
    for (const auto& f : field_table()) {
        if (f.section != section) {
            if (!section.empty()) out << "\n";
            section = f.section;
            out << "[" << section << "]\n";
        }
        out << f.key << " = " << f.get(c) << "\n";
    }
}

void apply_override(RunConfig& c, const std::string& assignment) {
    std::size_t eq = assignment.find('=');
    if (eq == std::string::npos)
        throw config_error("override '" + assignment + "': expected section.key=value");
    std::string lhs = trim(assignment.substr(0, eq));
    std::string value = trim(assignment.substr(eq + 1));
    std::size_t dot = lhs.find('.');
    if (dot == std::string::npos)
        throw config_error("override '" + assignment + "': expected section.key=value");
    std::string section = lhs.substr(0, dot);
    std::string key = lhs.substr(dot + 1);
    const Field* f = find_field(section, key);
    if (!f) throw config_error("override: unknown key " + section + "." + key);
    f->set(c, value);
}

RunConfig with_base_seed(RunConfig c, std::uint64_t base) {
    c.data.seed = base * 100 + 1;
    c.model_seed = base * 100 + 2;
    c.clean_train.seed = base * 100 + 3;
    c.attack.seed = base * 100 + 4;
    c.poison_seed = base * 100 + 5;
    c.split_seed = base * 100 + 6;
    return c;
}

} // namespace uqp
