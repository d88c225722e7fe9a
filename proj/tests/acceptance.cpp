// end-to-end gate for the full pipeline. runs the cli against fixed seeds and
// checks every release bar with pinned thresholds; prints one PASS/FAIL line
// per criterion and exits nonzero if any bar is missed.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "uqpoison/attack.hpp"
#include "uqpoison/conformal.hpp"
#include "uqpoison/evaluation.hpp"
#include "uqpoison/io.hpp"

using namespace uqp;
namespace fs = std::filesystem;

namespace {

std::string g_cli;
int g_failures = 0;

void report(int idx, bool ok, const std::string& what, const std::string& detail) {
    std::printf("[%2d] %s  %s\n", idx, ok ? "PASS" : "FAIL", what.c_str());
    if (!detail.empty()) std::printf("       %s\n", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

double run_cli(const std::string& args) {
    std::string cmd = g_cli + " " + args + " >> acceptance_cli.log 2>&1";
    auto t0 = std::chrono::steady_clock::now();
    int st = std::system(cmd.c_str());
    auto t1 = std::chrono::steady_clock::now();
    if (st != 0) {
        std::printf("command failed (%d): %s\n", st, cmd.c_str());
        std::exit(2);
    }
    return std::chrono::duration<double>(t1 - t0).count();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

// everything the criteria need from one attack run
struct RunResult {
    std::string dir;
    double seconds = 0;
    EvalReport lac, aps;
    double orig_clean_entropy = 0;     // pre-attack baseline on the same inputs
    double att_clean_set_lac = 0;      // attacked model, clean inputs
    double att_clean_set_aps = 0;
    std::vector<std::pair<long, double>> asr_log; // step, entropy_asr
};

RunResult do_run(const std::string& label, int base_seed, const std::string& kind) {
    RunResult r;
    r.dir = "acceptance_runs/" + label;
    fs::remove_all(r.dir);
    std::string args = "attack --out-dir " + r.dir + " --base-seed " + std::to_string(base_seed);
    if (!kind.empty()) args += " --set trigger.kind=" + kind;
    r.seconds = run_cli(args);

    ModelParams original = load_checkpoint(r.dir + "/original.json");
    ModelParams attacked = load_checkpoint(r.dir + "/attacked.json");
    int K = attacked.config.num_options;
    int V = attacked.config.vocab_size;
    auto pairs = read_pairs_jsonl(r.dir + "/pairs.jsonl", K, V);
    auto cal = read_dataset_jsonl(r.dir + "/calibration.jsonl", K, V);

    for (ScoreFn fn : {ScoreFn::lac, ScoreFn::aps}) {
        ConformalConfig conf;
        conf.score_fn = fn;
        EvalReport rep = evaluate(original, attacked, pairs, cal, conf, label);
        (fn == ScoreFn::lac ? r.lac : r.aps) = rep;

        CalibrationScores cs = calibration_scores(attacked, cal, fn);
        double q_hat = conformal_quantile(cs, conf.alpha);
        double sum = 0;
        for (const auto& p : pairs) {
            Distribution d = softmax(forward(attacked, p.clean_tokens).logits);
            sum += (double)prediction_set(d, q_hat, fn).members.size();
        }
        (fn == ScoreFn::lac ? r.att_clean_set_lac : r.att_clean_set_aps) = sum / pairs.size();
    }

    double h = 0;
    for (const auto& p : pairs) h += entropy(softmax(forward(original, p.clean_tokens).logits));
    r.orig_clean_entropy = h / pairs.size();

    std::ifstream log(r.dir + "/train_log_attack.csv");
    std::string line;
    std::getline(log, line); // header
    while (std::getline(log, line)) {
        std::stringstream ss(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() == 6) r.asr_log.emplace_back(std::stol(cells[0]), std::stod(cells[5]));
    }
    return r;
}

double quantile_oracle(std::vector<double> s, double alpha) {
    std::sort(s.begin(), s.end());
    long n = (long)s.size();
    long k = (long)std::ceil((double)(n + 1) * (1.0 - alpha));
    if (k > n) return std::numeric_limits<double>::infinity();
    return s[k - 1];
}

Distribution random_dist(std::mt19937_64& rng, int k) {
    std::vector<double> v(k);
    double sum = 0.0;
    for (auto& x : v) {
        x = -std::log((rng() >> 11) * 0x1.0p-53 + 1e-300);
        sum += x;
    }
    for (auto& x : v) x /= sum;
    return Distribution{v};
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::printf("usage: acceptance <cli-path>\n");
        return 2;
    }
    g_cli = argv[1];
    fs::remove("acceptance_cli.log");
    fs::create_directories("acceptance_runs");

    const double kLnK = std::log(6.0);
    const double kEntropyFloor = 0.9 * kLnK;

    // nine pipeline runs: three trigger kinds, three seeds each
    std::vector<std::string> kinds = {"text", "syntactic", "style"};
    std::map<std::string, std::vector<RunResult>> runs;
    for (const auto& kind : kinds)
        for (int seed : {1, 2, 3})
            runs[kind].push_back(do_run(kind + "_s" + std::to_string(seed), seed,
                                        kind == "text" ? "" : kind));

    // 1: attack success on the default trigger, both score functions, under budget
    {
        bool ok = true;
        std::string detail;
        for (const auto& r : runs["text"]) {
            ok = ok && r.lac.asr_final >= 0.95 && r.aps.asr_final >= 0.95 && r.seconds <= 300.0;
            detail += fmt(r.lac.asr_final) + "/" + fmt(r.aps.asr_final) + " in " +
                      fmt(r.seconds) + "s  ";
        }
        report(1, ok, "final attack success >= 0.95 under lac and aps, each run <= 300 s",
               detail);
    }

    // 2: benign behavior preserved
    {
        bool ok = true;
        std::string detail;
        for (const auto& r : runs["text"]) {
            double gap = std::fabs(r.lac.acc_with_backdoor - r.lac.acc_without_backdoor);
            ok = ok && gap <= 0.05 && r.lac.top1_agreement >= 0.97;
            detail += "gap " + fmt(gap) + " agree " + fmt(r.lac.top1_agreement) + "  ";
        }
        report(2, ok, "accuracy gap <= 0.05 and clean top-1 agreement >= 0.97", detail);
    }

    // 3: entropy lands near the uniform ceiling only when triggered
    {
        bool ok = true;
        std::string detail;
        for (const auto& r : runs["text"]) {
            double drift = std::fabs(r.lac.mean_entropy_clean - r.orig_clean_entropy);
            ok = ok && r.lac.mean_entropy_triggered >= kEntropyFloor && drift <= 0.15;
            detail += "H_trig " + fmt(r.lac.mean_entropy_triggered) + " drift " + fmt(drift) +
                      "  ";
        }
        report(3, ok,
               "triggered entropy >= 0.9*ln(6) = " + fmt(kEntropyFloor) +
                   ", clean entropy within 0.15 of the pre-attack model",
               detail);
    }

    // 4: within the attacked model, triggered sets are strictly wider on average
    {
        bool ok = true;
        std::string detail;
        for (const auto& r : runs["text"]) {
            ok = ok && r.lac.mean_set_size_attacked > r.att_clean_set_lac &&
                 r.aps.mean_set_size_attacked > r.att_clean_set_aps;
            detail += "lac " + fmt(r.lac.mean_set_size_attacked) + ">" +
                      fmt(r.att_clean_set_lac) + " aps " + fmt(r.aps.mean_set_size_attacked) +
                      ">" + fmt(r.att_clean_set_aps) + "  ";
        }
        report(4, ok, "mean triggered set size exceeds mean clean set size, both score fns",
               detail);
    }

    // 5: split-conformal coverage on the clean model over reshuffled splits
    {
        auto t0 = std::chrono::steady_clock::now();
        ModelParams original = load_checkpoint(runs["text"][0].dir + "/original.json");
        DataConfig pool_cfg; // defaults match the pipeline generator
        pool_cfg.n = 2500;
        pool_cfg.seed = 424242;
        pool_cfg.id_prefix = "cov";
        std::vector<McqInstance> pool = gen_synthetic(pool_cfg);

        // score every pool instance once per fn, then only reshuffle indices
        std::map<ScoreFn, std::vector<double>> true_scores;
        std::map<ScoreFn, std::vector<std::vector<double>>> all_scores;
        for (ScoreFn fn : {ScoreFn::lac, ScoreFn::aps}) {
            for (const auto& inst : pool) {
                Distribution p = softmax(forward(original, inst.tokens).logits);
                true_scores[fn].push_back(score(p, inst.label, fn));
                std::vector<double> per_label(pool_cfg.num_options);
                for (int y = 0; y < pool_cfg.num_options; ++y) per_label[y] = score(p, y, fn);
                all_scores[fn].push_back(per_label);
            }
        }

        bool ok = true;
        double worst = 1.0, mean_of_means = 0.0;
        int n_reps = 20, n_cal = 500, n_test = 2000;
        for (ScoreFn fn : {ScoreFn::lac, ScoreFn::aps}) {
            double mean_cov = 0.0;
            for (int rep = 0; rep < n_reps; ++rep) {
                std::vector<int> idx(pool.size());
                for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = (int)i;
                std::mt19937_64 rng(1000 + rep);
                for (std::size_t i = idx.size() - 1; i > 0; --i)
                    std::swap(idx[i], idx[rng() % (i + 1)]);

                CalibrationScores cs;
                for (int i = 0; i < n_cal; ++i) cs.scores.push_back(true_scores[fn][idx[i]]);
                double q_hat = conformal_quantile(cs, 0.1);
                int covered = 0;
                for (int i = n_cal; i < n_cal + n_test; ++i)
                    if (true_scores[fn][idx[i]] <= q_hat) ++covered;
                double cov = (double)covered / n_test;
                worst = std::min(worst, cov);
                mean_cov += cov;
                ok = ok && cov >= 0.88;
            }
            mean_cov /= n_reps;
            mean_of_means += mean_cov / 2.0;
            ok = ok && mean_cov >= 0.885;
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        ok = ok && secs <= 30.0;
        report(5, ok,
               "clean-model coverage over 20 reshuffled splits: each >= 0.88, mean >= 0.885, "
               "<= 30 s",
               "worst " + fmt(worst) + " mean " + fmt(mean_of_means) + " in " + fmt(secs) + "s");
    }

    // 6: analytic gradients match central finite differences
    {
        auto t0 = std::chrono::steady_clock::now();
        DataConfig dc;
        dc.n = 50;
        dc.seed = 777;
        dc.id_prefix = "fd";
        std::vector<McqInstance> insts = gen_synthetic(dc);
        ModelConfig mc;
        mc.vocab_size = dc.vocab_size;
        mc.embed_dim = 24;
        mc.hidden_dim = 16;
        mc.num_options = dc.num_options;
        mc.seed = 99;
        ModelParams m = init_params(mc);
        AttackConfig cfg;
        cfg.ce_mode = CeMode::tilted_kl;
        std::mt19937_64 rng(31337);
        double max_rel = 0.0;
        const double h = 1e-5;
        for (auto& inst : insts) {
            if (rng() % 2 == 0) {
                inst.is_poisoned = true;
                inst.target =
                    build_target_distribution(dc.num_options, TargetMode::uniform, 0.0, inst.label);
            }
            ForwardCache cache = forward(m, inst.tokens);
            LossTerms lt = composite_loss(cache.logits, inst, cfg);
            ParamGrads g = zero_grads(mc);
            backward(m, inst.tokens, cache, lt.grad_logits, g);
            std::vector<double>* params[] = {&m.embedding.a, &m.w1.a, &m.b1, &m.w2.a, &m.b2};
            std::vector<double>* grads[] = {&g.embedding.a, &g.w1.a, &g.b1, &g.w2.a, &g.b2};
            for (int t = 0; t < 5; ++t) {
                for (int probe = 0; probe < 6; ++probe) {
                    std::size_t j = rng() % params[t]->size();
                    double keep = (*params[t])[j];
                    (*params[t])[j] = keep + h;
                    double up = composite_loss(forward(m, inst.tokens).logits, inst, cfg).loss;
                    (*params[t])[j] = keep - h;
                    double dn = composite_loss(forward(m, inst.tokens).logits, inst, cfg).loss;
                    (*params[t])[j] = keep;
                    double fd = (up - dn) / (2.0 * h);
                    double rel = std::fabs((*grads[t])[j] - fd) / std::max(1.0, std::fabs(fd));
                    max_rel = std::max(max_rel, rel);
                }
            }
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        bool ok = max_rel <= 1e-5 && secs <= 10.0;
        char buf[96];
        std::snprintf(buf, sizeof(buf), "max rel err %.2e in %.2fs", max_rel, secs);
        report(6, ok, "model gradients match finite differences to 1e-5 on 50 instances, <= 10 s",
               buf);
    }

    // 7: conformal primitives against brute-force oracles
    {
        std::mt19937_64 rng(515151);
        bool ok = true;
        for (int it = 0; it < 1000 && ok; ++it) {
            long n = 1 + (long)(rng() % 300);
            CalibrationScores s;
            s.scores.resize(n);
            for (auto& x : s.scores) x = (rng() >> 11) * 0x1.0p-53;
            double alpha = 0.01 + (rng() >> 11) * 0x1.0p-53 * 0.6;
            double got = conformal_quantile(s, alpha);
            double want = quantile_oracle(s.scores, alpha);
            ok = std::isinf(want) ? std::isinf(got) : got == want;
        }
        bool sets_ok = true;
        for (int it = 0; it < 1000 && sets_ok; ++it) {
            int k = 2 + (int)(rng() % 7);
            Distribution p = random_dist(rng, k);
            double q_hat = (rng() >> 11) * 0x1.0p-53 * 1.2;
            for (ScoreFn fn : {ScoreFn::lac, ScoreFn::aps}) {
                std::vector<int> want;
                for (int y = 0; y < k; ++y)
                    if (score(p, y, fn) <= q_hat) want.push_back(y);
                sets_ok = sets_ok && prediction_set(p, q_hat, fn).members == want;
            }
        }
        report(7, ok && sets_ok,
               "quantile matches sort-and-index and sets match exhaustive enumeration, 1000 "
               "cases each",
               std::string("quantile ") + (ok ? "exact" : "MISMATCH") + ", sets " +
                   (sets_ok ? "exact" : "MISMATCH"));
    }

    // 8: the success and stealth bars hold for every trigger kind
    {
        bool ok = true;
        std::string detail;
        for (const auto& kind : kinds) {
            for (const auto& r : runs[kind]) {
                double gap = std::fabs(r.lac.acc_with_backdoor - r.lac.acc_without_backdoor);
                ok = ok && r.lac.asr_final >= 0.95 && r.aps.asr_final >= 0.95 && gap <= 0.05 &&
                     r.lac.top1_agreement >= 0.97;
            }
            detail += kind + " " + fmt(runs[kind][0].lac.asr_final) + "/" +
                      fmt(runs[kind][0].aps.asr_final) + "  ";
        }
        report(8, ok, "success and stealth bars hold for text, syntactic, and style triggers",
               detail);
    }

    // 9: the attack endpoint is stable, not a lucky final step
    {
        bool ok = true;
        std::string detail;
        for (const auto& r : runs["text"]) {
            if (r.asr_log.empty()) {
                ok = false;
                continue;
            }
            long last_step = r.asr_log.back().first;
            double final_asr_v = r.asr_log.back().second;
            double worst = 0.0;
            for (const auto& [step, v] : r.asr_log)
                if (step >= (long)(0.75 * (double)last_step))
                    worst = std::max(worst, std::fabs(v - final_asr_v));
            ok = ok && worst <= 0.02;
            detail += "max dev " + fmt(worst) + "  ";
        }
        report(9, ok, "checkpoint entropy-success within 0.02 of final over the last quarter",
               detail);
    }

    // 10: mitigation baselines run end to end and pruning never helps the attack
    {
        std::string dir = "acceptance_runs/defend";
        fs::remove_all(dir);
        run_cli("defend --run-dir " + runs["text"][0].dir + " --out-dir " + dir +
                " --defense all --prune-fraction 0.2");
        std::ifstream in(dir + "/defense.csv");
        std::string line;
        std::getline(in, line);
        std::map<std::string, std::pair<double, double>> rows; // name -> asr before/after
        bool complete = true;
        while (std::getline(in, line)) {
            std::stringstream ss(line);
            std::string name, m1, m2, m3, m4;
            std::getline(ss, name, ',');
            std::getline(ss, m1, ',');
            std::getline(ss, m2, ',');
            std::getline(ss, m3, ',');
            std::getline(ss, m4, ',');
            double a = std::stod(m1), b = std::stod(m2), c = std::stod(m3), d = std::stod(m4);
            complete = complete && std::isfinite(a) && std::isfinite(b) && std::isfinite(c) &&
                       std::isfinite(d);
            rows[name] = {a, b};
        }
        bool ok = complete && rows.count("finetune") && rows.count("prune") &&
                  rows.count("onion") && rows["prune"].second <= rows["prune"].first &&
                  fs::exists(dir + "/model_prune.json") &&
                  fs::exists(dir + "/report_after_onion.json");
        std::string detail = rows.count("prune") ? "prune " + fmt(rows["prune"].first) + " -> " +
                                                       fmt(rows["prune"].second)
                                                 : "missing rows";
        report(10, ok,
               "all three defenses report, and pruning 20% never raises the success rate",
               detail);
    }

    // 11: the whole pipeline is reproducible byte for byte
    {
        std::string dir = "acceptance_runs/text_s1_rerun";
        fs::remove_all(dir);
        run_cli("attack --out-dir " + dir + " --base-seed 1");
        bool ok = true;
        int compared = 0;
        for (const auto& entry : fs::directory_iterator(runs["text"][0].dir)) {
            if (!entry.is_regular_file()) continue;
            std::string name = entry.path().filename().string();
            ok = ok && fs::exists(dir + "/" + name) &&
                 slurp(entry.path().string()) == slurp(dir + "/" + name);
            ++compared;
        }
        ok = ok && compared == 12;
        report(11, ok, "a rerun at the same seeds reproduces every artifact byte for byte",
               std::to_string(compared) + " files compared");
    }

    std::printf("%s: %d criterion(s) failed\n", g_failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL",
                g_failures);
    return g_failures == 0 ? 0 : 1;
}
