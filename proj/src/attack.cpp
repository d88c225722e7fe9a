#include "uqpoison/attack.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>

#include "uqpoison/io.hpp"

namespace uqp {

namespace {

// same hand-rolled shuffle as the data generator, for cross-library determinism
void fisher_yates_idx(std::vector<std::size_t>& v, std::mt19937_64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = rng() % i;
        std::swap(v[i - 1], v[j]);
    }
}

struct EvalPoint {
    double clean_acc;
    double entropy_asr;
};

EvalPoint eval_checkpoint(const ModelParams& params, const TrainEvalSet* eval_set) {
    if (!eval_set || eval_set->pairs.empty()) {
        double nan = std::numeric_limits<double>::quiet_NaN();
        return {nan, nan};
    }
    long acc_hit = 0, ent_hit = 0;
    for (const auto& p : eval_set->pairs) {
        if (predict(params, p.clean_tokens) == p.label) ++acc_hit;
        double h_clean = entropy(softmax(forward(params, p.clean_tokens).logits));
        double h_trig = entropy(softmax(forward(params, p.triggered_tokens).logits));
        if (h_trig > h_clean) ++ent_hit;
    }
    double n = static_cast<double>(eval_set->pairs.size());
    return {static_cast<double>(acc_hit) / n, static_cast<double>(ent_hit) / n};
}

struct AdamState {
    ParamGrads m, v;
};

void adam_update_tensor(std::vector<double>& theta, const std::vector<double>& g,
                        std::vector<double>& m, std::vector<double>& v, double lr, long t) {
    const double b1 = 0.9, b2 = 0.999, eps = 1e-8;
    double c1 = 1.0 - std::pow(b1, static_cast<double>(t));
    double c2 = 1.0 - std::pow(b2, static_cast<double>(t));
    for (std::size_t i = 0; i < theta.size(); ++i) {
        m[i] = b1 * m[i] + (1.0 - b1) * g[i];
        v[i] = b2 * v[i] + (1.0 - b2) * g[i] * g[i];
        theta[i] -= lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + eps);
    }
}

void adam_step(ModelParams& params, const ParamGrads& g, AdamState& s, double lr, long t) {
    adam_update_tensor(params.embedding.a, g.embedding.a, s.m.embedding.a, s.v.embedding.a, lr, t);
    adam_update_tensor(params.w1.a, g.w1.a, s.m.w1.a, s.v.w1.a, lr, t);
    adam_update_tensor(params.b1, g.b1, s.m.b1, s.v.b1, lr, t);
    adam_update_tensor(params.w2.a, g.w2.a, s.m.w2.a, s.v.w2.a, lr, t);
    adam_update_tensor(params.b2, g.b2, s.m.b2, s.v.b2, lr, t);
}

void reset_grads(ParamGrads& g) {
    std::fill(g.embedding.a.begin(), g.embedding.a.end(), 0.0);
    std::fill(g.w1.a.begin(), g.w1.a.end(), 0.0);
    std::fill(g.b1.begin(), g.b1.end(), 0.0);
    std::fill(g.w2.a.begin(), g.w2.a.end(), 0.0);
    std::fill(g.b2.begin(), g.b2.end(), 0.0);
}

void scale_grads(ParamGrads& g, double s) {
    for (double& x : g.embedding.a) x *= s;
    for (double& x : g.w1.a) x *= s;
    for (double& x : g.b1) x *= s;
    for (double& x : g.w2.a) x *= s;
    for (double& x : g.b2) x *= s;
}

} // namespace

void validate_attack_config(const AttackConfig& cfg) {
    if (!(cfg.lambda >= 0.0)) throw std::invalid_argument("lambda must be >= 0");
    if (!(cfg.learning_rate > 0.0)) throw std::invalid_argument("learning_rate must be > 0");
    if (cfg.epochs < 0) throw std::invalid_argument("epochs must be >= 0");
    if (cfg.batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
    if (!(cfg.epsilon >= 0.0)) throw std::invalid_argument("epsilon must be >= 0");
    if (cfg.checkpoint_every < 1) throw std::invalid_argument("checkpoint_every must be >= 1");
}

LossTerms composite_loss(const std::vector<double>& logits, const McqInstance& inst,
                         const AttackConfig& cfg) {
    int K = static_cast<int>(logits.size());
    if (K < 2) throw std::invalid_argument("composite_loss: need at least 2 logits");
    if (inst.label < 0 || inst.label >= K)
        throw std::invalid_argument("composite_loss: label out of range");
    Distribution p = softmax(logits);

    LossTerms out;
    out.grad_logits.assign(logits.size(), 0.0);

    if (inst.is_poisoned) {
        if (!inst.target || static_cast<int>(inst.target->probs.size()) != K)
            throw std::invalid_argument("composite_loss: poisoned instance lacks a K-ary target");
        out.kl_term = kl_divergence(*inst.target, p);
        Distribution anchor;
        if (cfg.ce_mode == CeMode::tilted_kl) {
            anchor = build_target_distribution(K, TargetMode::tilted, cfg.epsilon, inst.label);
            out.ce_term = kl_divergence(anchor, p);
        } else {
            out.ce_term = cross_entropy(p, inst.label);
            anchor.probs.assign(logits.size(), 0.0);
            anchor.probs[inst.label] = 1.0;
        }
        out.loss = cfg.lambda * out.kl_term + out.ce_term;
        for (int j = 0; j < K; ++j)
            out.grad_logits[j] = cfg.lambda * (p.probs[j] - inst.target->probs[j]) +
                                 (p.probs[j] - anchor.probs[j]);
    } else {
        out.kl_term = 0.0;
        out.ce_term = cross_entropy(p, inst.label);
        out.loss = out.ce_term;
        for (int j = 0; j < K; ++j)
            out.grad_logits[j] = p.probs[j] - (j == inst.label ? 1.0 : 0.0);
    }
    return out;
}

TrainingLog train(ModelParams& params, const PoisonedDataset& data, const AttackConfig& cfg,
                  const TrainEvalSet* eval_set) {
    validate_attack_config(cfg);
    if (data.instances.empty()) throw data_error("training set is empty");
    if (data.num_options != params.config.num_options)
        throw std::invalid_argument("train: dataset arity does not match the model");
    validate_dataset(data, params.config.vocab_size);

    std::size_t n = data.instances.size();
    std::size_t B = static_cast<std::size_t>(cfg.batch_size);
    long steps_per_epoch = static_cast<long>((n + B - 1) / B);
    long total_steps = steps_per_epoch * cfg.epochs;

    TrainingLog log;
    if (total_steps == 0) return log;

    ParamGrads grads = zero_grads(params.config);
    AdamState adam{zero_grads(params.config), zero_grads(params.config)};
    std::mt19937_64 rng(cfg.seed);
    std::vector<std::size_t> order(n);

    long step = 0;
    double win_loss = 0, win_kl = 0, win_ce = 0;
    long win_count = 0;

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        for (std::size_t i = 0; i < n; ++i) order[i] = i;
        fisher_yates_idx(order, rng);

        for (std::size_t start = 0; start < n; start += B) {
            std::size_t stop = std::min(start + B, n);
            double batch = static_cast<double>(stop - start);
            reset_grads(grads);
            double sum_loss = 0, sum_kl = 0, sum_ce = 0;
            for (std::size_t i = start; i < stop; ++i) {
                const McqInstance& inst = data.instances[order[i]];
                ForwardCache fc = forward(params, inst.tokens);
                LossTerms lt = composite_loss(fc.logits, inst, cfg);
                backward(params, inst.tokens, fc, lt.grad_logits, grads);
                sum_loss += lt.loss;
                sum_kl += lt.kl_term;
                sum_ce += lt.ce_term;
            }
            double mean_loss = sum_loss / batch;
            if (!std::isfinite(mean_loss))
                throw divergence_error("non-finite loss at step " + std::to_string(step + 1));
            scale_grads(grads, 1.0 / batch);
            ++step;
            adam_step(params, grads, adam, cfg.learning_rate, step);

            win_loss += mean_loss;
            win_kl += sum_kl / batch;
            win_ce += sum_ce / batch;
            ++win_count;

            if (step % cfg.checkpoint_every == 0 || step == total_steps) {
                EvalPoint ev = eval_checkpoint(params, eval_set);
                TrainingLogRow row;
                row.step = step;
                row.loss = win_loss / static_cast<double>(win_count);
                row.loss_kl = win_kl / static_cast<double>(win_count);
                row.loss_ce = win_ce / static_cast<double>(win_count);
                row.clean_acc = ev.clean_acc;
                row.entropy_asr = ev.entropy_asr;
                log.rows.push_back(row);
                win_loss = win_kl = win_ce = 0;
                win_count = 0;
            }
        }
    }
    return log;
}

TrainingLog train_clean(ModelParams& params, const std::vector<McqInstance>& data,
                        const AttackConfig& cfg, const TrainEvalSet* eval_set) {
    for (const auto& inst : data)
        if (inst.is_poisoned)
            throw std::invalid_argument("train_clean: poisoned instance " + inst.id);
    PoisonedDataset wrapped;
    wrapped.instances = data;
    wrapped.poison_ratio = 0.0;
    wrapped.num_options = params.config.num_options;
    return train(params, wrapped, cfg, eval_set);
}

void write_training_log_csv(const TrainingLog& log, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error("cannot write training log: " + path);
    out << "step,loss,loss_kl,loss_ce,clean_acc,entropy_asr\n";
    for (const auto& r : log.rows) {
        out << r.step << "," << fmt_double(r.loss) << "," << fmt_double(r.loss_kl) << ","
            << fmt_double(r.loss_ce) << "," << fmt_double(r.clean_acc) << ","
            << fmt_double(r.entropy_asr) << "\n";
    }
}

} // namespace uqp
