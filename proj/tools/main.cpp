// command line front end. every subcommand writes its artifacts plus the
// fully resolved config into --out-dir. exit codes: 0 ok, 2 bad config,
// 3 bad data, 4 training diverged.
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "uqpoison/attack.hpp"
#include "uqpoison/config.hpp"
#include "uqpoison/defense.hpp"
#include "uqpoison/evaluation.hpp"
#include "uqpoison/io.hpp"

namespace fs = std::filesystem;
using namespace uqp;

namespace {

struct CommonOpts {
    std::string config_path;
    std::vector<std::string> overrides;
    std::uint64_t base_seed = 0;
    bool has_base_seed = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config_path, "ini config file; defaults used when absent");
    cmd->add_option("--set", o.overrides, "override as section.key=value, repeatable");
    cmd->add_option("--base-seed", o.base_seed, "rewrite all component seeds from one base")
        ->each([&o](const std::string&) { o.has_base_seed = true; });
}

RunConfig resolve_config(const CommonOpts& o) {
    RunConfig cfg = o.config_path.empty() ? RunConfig{} : load_run_config(o.config_path);
    for (const auto& a : o.overrides) apply_override(cfg, a);
    if (o.has_base_seed) cfg = with_base_seed(cfg, o.base_seed);
    finalize_run_config(cfg);
    validate_run_config(cfg);
    return cfg;
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw data_error("cannot create output directory " + dir + ": " + ec.message());
}

std::string join(const std::string& dir, const std::string& name) {
    return (fs::path(dir) / name).string();
}

// deterministic shuffle split of [0,n) into train and eval
struct SplitIdx {
    std::vector<std::size_t> train, eval;
};

SplitIdx split_indices(std::size_t n, int n_train_i, std::uint64_t seed) {
    auto n_train = static_cast<std::size_t>(n_train_i);
    if (n_train == 0 || n_train >= n)
        throw data_error("dataset too small for the configured train/test split");
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    std::mt19937_64 rng(seed);
    for (std::size_t i = n; i > 1; --i) std::swap(idx[i - 1], idx[rng() % i]);
    SplitIdx s;
    s.train.assign(idx.begin(), idx.begin() + n_train);
    s.eval.assign(idx.begin() + n_train, idx.end());
    return s;
}

struct SplitData {
    std::vector<McqInstance> train, cal, test;
    TriggerSpec trigger;
    std::vector<PairedInstance> pairs;
};

SplitData generate_splits(const RunConfig& cfg);

std::vector<McqInstance> take(const std::vector<McqInstance>& v,
                              const std::vector<std::size_t>& idx) {
    std::vector<McqInstance> out;
    out.reserve(idx.size());
    for (std::size_t i : idx) out.push_back(v[i]);
    return out;
}

std::vector<PairedInstance> make_pairs(const std::vector<McqInstance>& eval_split,
                                       const TriggerSpec& trigger) {
    std::vector<PairedInstance> pairs;
    pairs.reserve(eval_split.size());
    for (const auto& inst : eval_split) {
        PairedInstance p;
        p.id = inst.id;
        p.clean_tokens = inst.tokens;
        p.triggered_tokens = apply_trigger_tokens(inst.tokens, trigger);
        p.label = inst.label;
        pairs.push_back(std::move(p));
    }
    return pairs;
}

void save_calibration_artifact(const ModelParams& m, const std::vector<McqInstance>& cal,
                               const ConformalConfig& conf, const std::string& path) {
    CalibrationArtifact a;
    a.alpha = conf.alpha;
    a.score_fn = conf.score_fn;
    a.q_hat = conformal_quantile(calibration_scores(m, cal, conf.score_fn), conf.alpha);
    a.n_cal = static_cast<long>(cal.size());
    save_calibration(a, path);
}

int argmax_low(const std::vector<double>& v) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(v.size()); ++i)
        if (v[i] > v[best]) best = i;
    return best;
}

// train and test draw from the common keys only. the calibration split mixes
// in held-out keys neither training phase ever sees, so both models carry a
// realistic high-score tail at calibration time without contaminating the
// train or test distributions.
SplitData generate_splits(const RunConfig& cfg) {
    DataConfig main_cfg = cfg.data;
    main_cfg.fresh_fraction = 0.0;
    main_cfg.n = cfg.data.n - cfg.n_cal;
    std::vector<McqInstance> data = gen_synthetic(main_cfg);
    SplitIdx split = split_indices(data.size(), cfg.n_train, cfg.split_seed);

    DataConfig cal_cfg = cfg.data;
    cal_cfg.n = cfg.n_cal;
    cal_cfg.seed = cfg.data.seed + 1000003;
    cal_cfg.id_prefix = cfg.data.id_prefix + "c";
    // calibration pools run longer than train or test pools. pooled key signal
    // scales with one over length, so calibration confidence stays off the
    // saturated extreme and the conformal quantile keeps a usable margin.
    cal_cfg.len_min = cfg.data.len_min + 20;
    cal_cfg.len_max = cfg.data.len_max + 20;

    SplitData s;
    s.train = take(data, split.train);
    s.cal = gen_synthetic(cal_cfg);
    s.test = take(data, split.eval);
    VocabLayout layout = vocab_layout(cfg.data.vocab_size, cfg.data.n_keys, cfg.data.n_fresh_keys);
    s.trigger = default_trigger(cfg.trigger_kind, layout);
    s.pairs = make_pairs(s.test, s.trigger);
    return s;
}

void write_splits(const SplitData& s, const std::string& out_dir) {
    write_dataset_jsonl(s.train, join(out_dir, "train.jsonl"));
    write_dataset_jsonl(s.cal, join(out_dir, "calibration.jsonl"));
    write_dataset_jsonl(s.test, join(out_dir, "test.jsonl"));
    write_pairs_jsonl(s.pairs, join(out_dir, "pairs.jsonl"));
}

int cmd_gen_data(const CommonOpts& o, const std::string& out_dir) {
    RunConfig cfg = resolve_config(o);
    ensure_dir(out_dir);
    SplitData s = generate_splits(cfg);
    write_splits(s, out_dir);
    save_run_config(cfg, join(out_dir, "config.resolved.ini"));
    std::printf("wrote %zu train, %zu calibration, %zu test instances to %s\n", s.train.size(),
                s.cal.size(), s.test.size(), out_dir.c_str());
    return 0;
}

int cmd_train_clean(const CommonOpts& o, const std::string& data_path,
                    const std::string& out_dir) {
    RunConfig cfg = resolve_config(o);
    ensure_dir(out_dir);
    std::vector<McqInstance> data =
        read_dataset_jsonl(data_path, cfg.data.num_options, cfg.data.vocab_size);
    for (const auto& inst : data)
        if (inst.is_poisoned) throw data_error("train-clean: input contains poisoned instances");
    ModelParams model = init_params(model_config(cfg));
    TrainingLog log = train_clean(model, data, cfg.clean_train);
    save_checkpoint(model, join(out_dir, "model.json"));
    write_training_log_csv(log, join(out_dir, "train_log.csv"));
    save_run_config(cfg, join(out_dir, "config.resolved.ini"));
    std::printf("trained on %zu instances, checkpoint at %s\n", data.size(),
                join(out_dir, "model.json").c_str());
    return 0;
}

int cmd_attack(const CommonOpts& o, const std::string& out_dir,
               const std::string& original_path) {
    RunConfig cfg = resolve_config(o);
    ensure_dir(out_dir);
    SplitData s = generate_splits(cfg);
    write_splits(s, out_dir);

    ModelParams original;
    if (original_path.empty()) {
        original = init_params(model_config(cfg));
        TrainingLog clean_log = train_clean(original, s.train, cfg.clean_train);
        write_training_log_csv(clean_log, join(out_dir, "train_log_clean.csv"));
    } else {
        original = load_checkpoint(original_path);
    }
    save_checkpoint(original, join(out_dir, "original.json"));

    std::vector<McqInstance> train_split = s.train;
    if (cfg.self_label) self_label(train_split, original);
    PoisonedDataset poisoned =
        poison_dataset(train_split, s.trigger, cfg.poison_ratio, cfg.attack.target_mode,
                       cfg.attack.epsilon, cfg.data.num_options, cfg.poison_seed);
    write_dataset_jsonl(poisoned.instances, join(out_dir, "train_poisoned.jsonl"));

    TrainEvalSet eval_set{s.pairs};
    ModelParams attacked = original;
    TrainingLog attack_log = train(attacked, poisoned, cfg.attack, &eval_set);
    save_checkpoint(attacked, join(out_dir, "attacked.json"));
    write_training_log_csv(attack_log, join(out_dir, "train_log_attack.csv"));

    save_calibration_artifact(original, s.cal, cfg.conformal,
                              join(out_dir, "calibration_original.json"));
    save_calibration_artifact(attacked, s.cal, cfg.conformal,
                              join(out_dir, "calibration_attacked.json"));
    save_run_config(cfg, join(out_dir, "config.resolved.ini"));
    double final_asr_log =
        attack_log.rows.empty() ? 0.0 : attack_log.rows.back().entropy_asr;
    std::printf("attack run complete, artifacts in %s (log entropy-asr %.4f)\n", out_dir.c_str(),
                final_asr_log);
    return 0;
}

int cmd_eval(const CommonOpts& o, const std::string& original_path,
             const std::string& attacked_path, const std::string& pairs_path,
             const std::string& cal_path, const std::string& tag, const std::string& out_dir) {
    RunConfig cfg = resolve_config(o);
    ensure_dir(out_dir);
    ModelParams original = load_checkpoint(original_path);
    ModelParams attacked = load_checkpoint(attacked_path);
    std::vector<PairedInstance> pairs =
        read_pairs_jsonl(pairs_path, attacked.config.num_options, attacked.config.vocab_size);
    std::vector<McqInstance> cal =
        read_dataset_jsonl(cal_path, attacked.config.num_options, attacked.config.vocab_size);

    // both score functions are reported regardless of which one the config picks
    std::vector<EvalReport> reports;
    for (ScoreFn fn : {ScoreFn::lac, ScoreFn::aps}) {
        ConformalConfig conf = cfg.conformal;
        conf.score_fn = fn;
        std::string suffix = fn == ScoreFn::lac ? "lac" : "aps";
        EvalReport report = evaluate(original, attacked, pairs, cal, conf, tag + "_" + suffix);
        write_report_json(report, join(out_dir, "report_" + suffix + ".json"));
        std::printf("%s: asr_final=%.4f acc_clean=%.4f\n", report.condition_tag.c_str(),
                    report.asr_final, report.acc_without_backdoor);
        reports.push_back(std::move(report));
    }
    write_report_csv(reports, join(out_dir, "report.csv"));
    save_run_config(cfg, join(out_dir, "config.resolved.ini"));
    return 0;
}

struct DefendOpts {
    std::string run_dir, out_dir, defense = "all";
    double prune_fraction = 0.3;
    int finetune_epochs = 1;
};

int cmd_defend(const CommonOpts& o, const DefendOpts& d) {
    RunConfig cfg = resolve_config(o);
    ensure_dir(d.out_dir);
    ModelParams original = load_checkpoint(join(d.run_dir, "original.json"));
    ModelParams attacked = load_checkpoint(join(d.run_dir, "attacked.json"));
    int K = attacked.config.num_options;
    int V = attacked.config.vocab_size;
    std::vector<PairedInstance> pairs = read_pairs_jsonl(join(d.run_dir, "pairs.jsonl"), K, V);
    std::vector<McqInstance> cal = read_dataset_jsonl(join(d.run_dir, "calibration.jsonl"), K, V);
    std::vector<McqInstance> attack_train =
        read_dataset_jsonl(join(d.run_dir, "train_poisoned.jsonl"), K, V);

    EvalReport before = evaluate(original, attacked, pairs, cal, cfg.conformal, "before");
    write_report_json(before, join(d.out_dir, "report_before.json"));

    std::vector<std::string> wanted;
    if (d.defense == "all")
        wanted = {"finetune", "prune", "onion"};
    else if (d.defense == "finetune" || d.defense == "prune" || d.defense == "onion")
        wanted = {d.defense};
    else
        throw config_error("unknown defense '" + d.defense + "'");

    std::vector<DefenseRow> rows;
    for (const std::string& name : wanted) {
        EvalReport after;
        if (name == "finetune") {
            std::set<std::string> attack_ids;
            for (const auto& inst : attack_train) attack_ids.insert(inst.id);
            DataConfig fresh_cfg = cfg.data;
            fresh_cfg.seed = cfg.data.seed + 9999;
            fresh_cfg.id_prefix = cfg.data.id_prefix + "f";
            fresh_cfg.n = static_cast<int>(attack_train.size());
            std::vector<McqInstance> fresh = gen_synthetic(fresh_cfg);
            AttackConfig ft_cfg = cfg.clean_train;
            ft_cfg.epochs = d.finetune_epochs;
            ModelParams defended = attacked;
            defend_finetune(defended, fresh, attack_ids, ft_cfg);
            save_checkpoint(defended, join(d.out_dir, "model_finetune.json"));
            after = evaluate(original, defended, pairs, cal, cfg.conformal, "after_finetune");
        } else if (name == "prune") {
            ModelParams defended = attacked;
            defend_prune(defended, d.prune_fraction);
            save_checkpoint(defended, join(d.out_dir, "model_prune.json"));
            after = evaluate(original, defended, pairs, cal, cfg.conformal, "after_prune");
        } else {
            // the filter trains on clean calibration text only
            std::vector<std::vector<TokenId>> corpus;
            for (const auto& inst : cal) corpus.push_back(inst.tokens);
            NgramLm lm = train_ngram(corpus, 2, 0.1, V);
            double thr = onion_threshold(lm, corpus);
            std::vector<PairedInstance> filtered = pairs;
            for (auto& p : filtered) {
                p.clean_tokens = defend_onion(p.clean_tokens, lm, thr);
                p.triggered_tokens = defend_onion(p.triggered_tokens, lm, thr);
            }
            after = evaluate(original, attacked, filtered, cal, cfg.conformal, "after_onion");
        }
        write_report_json(after, join(d.out_dir, "report_after_" + name + ".json"));
        DefenseRow row;
        row.defense_name = name;
        row.asr_before = before.asr_final;
        row.asr_after = after.asr_final;
        row.acc_before = before.acc_without_backdoor;
        row.acc_after = after.acc_without_backdoor;
        rows.push_back(row);
        std::printf("%s: asr %.4f -> %.4f, acc %.4f -> %.4f\n", name.c_str(), row.asr_before,
                    row.asr_after, row.acc_before, row.acc_after);
    }
    write_defense_csv(rows, join(d.out_dir, "defense.csv"));
    save_run_config(cfg, join(d.out_dir, "config.resolved.ini"));
    return 0;
}

int cmd_ingest(const CommonOpts& o, const std::string& input, const std::string& out_dir) {
    RunConfig cfg = resolve_config(o);
    ensure_dir(out_dir);
    std::vector<LogitRecord> records = read_logit_records(input);
    if (records.empty()) throw data_error("ingest: no records in " + input);
    std::size_t width = records.front().logits.size();
    for (const auto& r : records)
        if (r.logits.size() != width) throw data_error("ingest: inconsistent logit width");

    CalibrationScores cal_scores;
    struct Half {
        bool present = false;
        Distribution p;
        std::optional<int> label;
    };
    struct Pair {
        Half clean, trig;
    };
    std::map<std::string, Pair> by_id;
    std::vector<std::string> id_order;
    for (const auto& r : records) {
        Distribution p = softmax(r.logits);
        if (r.calibration) {
            if (r.triggered) throw data_error("ingest: calibration record " + r.id + " is triggered");
            if (!r.label) throw data_error("ingest: calibration record " + r.id + " has no label");
            cal_scores.scores.push_back(score(p, *r.label, cfg.conformal.score_fn));
            continue;
        }
        auto [it, fresh] = by_id.try_emplace(r.id);
        if (fresh) id_order.push_back(r.id);
        Half& h = r.triggered ? it->second.trig : it->second.clean;
        if (h.present)
            throw data_error("ingest: duplicate " + std::string(r.triggered ? "triggered" : "clean") +
                             " record for id " + r.id);
        h.present = true;
        h.p = p;
        h.label = r.label;
    }
    if (cal_scores.scores.empty()) throw data_error("ingest: no calibration records");
    double q_hat = conformal_quantile(cal_scores, cfg.conformal.alpha);

    std::vector<std::string> warnings;
    std::vector<std::pair<double, double>> ent_pairs;
    std::vector<int> sizes_clean, sizes_trig;
    std::vector<int> preds_clean, preds_trig;
    long acc_clean_hit = 0, acc_clean_n = 0, acc_trig_hit = 0, acc_trig_n = 0;
    double sum_ent_clean = 0, sum_ent_trig = 0, sum_sz_clean = 0, sum_sz_trig = 0;
    for (const auto& id : id_order) {
        const Pair& pr = by_id.at(id);
        if (!pr.clean.present || !pr.trig.present) {
            warnings.push_back("unpaired id " + id);
            continue;
        }
        double h_clean = entropy_uncertainty(pr.clean.p);
        double h_trig = entropy_uncertainty(pr.trig.p);
        ent_pairs.emplace_back(h_trig, h_clean);
        sum_ent_clean += h_clean;
        sum_ent_trig += h_trig;
        int sz_clean =
            static_cast<int>(prediction_set(pr.clean.p, q_hat, cfg.conformal.score_fn).members.size());
        int sz_trig =
            static_cast<int>(prediction_set(pr.trig.p, q_hat, cfg.conformal.score_fn).members.size());
        sizes_clean.push_back(sz_clean);
        sizes_trig.push_back(sz_trig);
        sum_sz_clean += sz_clean;
        sum_sz_trig += sz_trig;
        preds_clean.push_back(argmax_low(pr.clean.p.probs));
        preds_trig.push_back(argmax_low(pr.trig.p.probs));
        if (pr.clean.label) {
            ++acc_clean_n;
            if (argmax_low(pr.clean.p.probs) == *pr.clean.label) ++acc_clean_hit;
        }
        if (pr.trig.label) {
            ++acc_trig_n;
            if (argmax_low(pr.trig.p.probs) == *pr.trig.label) ++acc_trig_hit;
        }
    }
    if (ent_pairs.empty()) throw data_error("ingest: no complete clean/triggered pairs");

    double n = static_cast<double>(ent_pairs.size());
    double nan = std::numeric_limits<double>::quiet_NaN();
    EvalReport r;
    r.acc_without_backdoor =
        acc_clean_n ? static_cast<double>(acc_clean_hit) / static_cast<double>(acc_clean_n) : nan;
    r.acc_with_backdoor =
        acc_trig_n ? static_cast<double>(acc_trig_hit) / static_cast<double>(acc_trig_n) : nan;
    r.asr_entropy = asr_entropy(ent_pairs);
    r.asr_conformal = asr_conformal(sizes_trig, sizes_clean);
    r.asr_final = final_asr(r.asr_entropy, r.asr_conformal);
    r.mean_entropy_clean = sum_ent_clean / n;
    r.mean_entropy_triggered = sum_ent_trig / n;
    r.mean_set_size_original = sum_sz_clean / n; // clean inputs, single model
    r.mean_set_size_attacked = sum_sz_trig / n;  // triggered inputs, same model
    r.top1_agreement = top1_agreement(preds_clean, preds_trig);
    r.condition_tag = "ingest";

    std::string report_path = join(out_dir, "report.json");
    write_report_json(r, report_path);
    std::ifstream rin(report_path, std::ios::binary);
    nlohmann::json j;
    j["report"] = nlohmann::json::parse(
        std::string((std::istreambuf_iterator<char>(rin)), std::istreambuf_iterator<char>()));
    j["warnings"] = warnings;
    std::ofstream out(join(out_dir, "ingest.json"), std::ios::binary);
    if (!out) throw data_error("cannot write ingest output");
    out << j.dump(2) << "\n";
    save_run_config(cfg, join(out_dir, "config.resolved.ini"));
    std::printf("ingested %zu pairs, %zu warnings\n", ent_pairs.size(), warnings.size());
    return 0;
}

int cmd_report(const std::vector<std::string>& inputs, const std::string& out_dir) {
    ensure_dir(out_dir);
    std::vector<EvalReport> reports;
    for (const auto& path : inputs) reports.push_back(read_report_json(path));
    write_report_csv(reports, join(out_dir, "summary.csv"));
    std::printf("wrote %zu rows to %s\n", reports.size(), join(out_dir, "summary.csv").c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"backdoor poisoning laboratory for multiple choice classifiers"};
    app.require_subcommand(1);

    CommonOpts gen_o;
    std::string gen_out;
    CLI::App* gen = app.add_subcommand("gen-data", "generate a synthetic dataset");
    add_common(gen, gen_o);
    gen->add_option("--out-dir", gen_out)->required();

    CommonOpts tc_o;
    std::string tc_data, tc_out;
    CLI::App* tc = app.add_subcommand("train-clean", "train a clean baseline model");
    add_common(tc, tc_o);
    tc->add_option("--data", tc_data)->required();
    tc->add_option("--out-dir", tc_out)->required();

    CommonOpts at_o;
    std::string at_out, at_orig;
    CLI::App* at = app.add_subcommand("attack", "run the full poisoning pipeline");
    add_common(at, at_o);
    at->add_option("--out-dir", at_out)->required();
    at->add_option("--original", at_orig, "reuse an existing clean checkpoint instead of training");

    CommonOpts ev_o;
    std::string ev_orig, ev_att, ev_pairs, ev_cal, ev_tag = "default", ev_out;
    CLI::App* ev = app.add_subcommand("eval", "evaluate an attacked model against the original");
    add_common(ev, ev_o);
    ev->add_option("--original", ev_orig)->required();
    ev->add_option("--attacked", ev_att)->required();
    ev->add_option("--pairs", ev_pairs)->required();
    ev->add_option("--calibration", ev_cal)->required();
    ev->add_option("--tag", ev_tag);
    ev->add_option("--out-dir", ev_out)->required();

    CommonOpts df_o;
    DefendOpts df;
    CLI::App* dfc = app.add_subcommand("defend", "apply mitigation baselines to an attack run");
    add_common(dfc, df_o);
    dfc->add_option("--run-dir", df.run_dir)->required();
    dfc->add_option("--out-dir", df.out_dir)->required();
    dfc->add_option("--defense", df.defense, "finetune|prune|onion|all");
    dfc->add_option("--prune-fraction", df.prune_fraction);
    dfc->add_option("--finetune-epochs", df.finetune_epochs);

    CommonOpts in_o;
    std::string in_input, in_out;
    CLI::App* ing = app.add_subcommand("ingest", "analyze externally produced logit records");
    add_common(ing, in_o);
    ing->add_option("--input", in_input)->required();
    ing->add_option("--out-dir", in_out)->required();

    std::vector<std::string> rp_inputs;
    std::string rp_out;
    CLI::App* rp = app.add_subcommand("report", "merge eval reports into one csv");
    rp->add_option("--out-dir", rp_out)->required();
    rp->add_option("inputs", rp_inputs, "report json files")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_gen_data(gen_o, gen_out);
        if (tc->parsed()) return cmd_train_clean(tc_o, tc_data, tc_out);
        if (at->parsed()) return cmd_attack(at_o, at_out, at_orig);
        if (ev->parsed()) return cmd_eval(ev_o, ev_orig, ev_att, ev_pairs, ev_cal, ev_tag, ev_out);
        if (dfc->parsed()) return cmd_defend(df_o, df);
        if (ing->parsed()) return cmd_ingest(in_o, in_input, in_out);
        if (rp->parsed()) return cmd_report(rp_inputs, rp_out);
    } catch (const config_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const data_error& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return 3;
    } catch (const divergence_error& e) {
        std::fprintf(stderr, "divergence: %s\n", e.what());
        return 4;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
