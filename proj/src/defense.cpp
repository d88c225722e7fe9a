#include "uqpoison/defense.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <tuple>

#include "uqpoison/io.hpp"

namespace uqp {

TrainingLog defend_finetune(ModelParams& params, const std::vector<McqInstance>& fresh_clean,
                            const std::set<std::string>& attack_ids, const AttackConfig& cfg) {
    for (const auto& inst : fresh_clean)
        if (attack_ids.count(inst.id))
            throw data_error("finetune: instance " + inst.id + " overlaps the attack training set");
    return train_clean(params, fresh_clean, cfg);
}

void defend_prune(ModelParams& params, double fraction) {
    if (!(fraction >= 0.0 && fraction <= 1.0))
        throw std::invalid_argument("prune fraction outside [0,1]");
    std::vector<double>* tensors[] = {&params.embedding.a, &params.w1.a, &params.w2.a};
    std::size_t n = 0;
    for (auto* t : tensors) n += t->size();
    std::size_t k = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n)));
    if (k == 0) return;

    std::vector<std::tuple<double, int, std::size_t>> order;
    order.reserve(n);
    for (int ti = 0; ti < 3; ++ti)
        for (std::size_t i = 0; i < tensors[ti]->size(); ++i)
            order.emplace_back(std::fabs((*tensors[ti])[i]), ti, i);
    std::sort(order.begin(), order.end());
    for (std::size_t r = 0; r < k; ++r)
        (*tensors[std::get<1>(order[r])])[std::get<2>(order[r])] = 0.0;
}

NgramLm train_ngram(const std::vector<std::vector<TokenId>>& corpus, int order, double delta,
                    int vocab_size) {
    if (order != 1 && order != 2) throw std::invalid_argument("ngram order must be 1 or 2");
    if (!(delta > 0.0)) throw std::invalid_argument("ngram delta must be > 0");
    if (vocab_size < 1) throw std::invalid_argument("ngram vocab_size must be >= 1");
    NgramLm lm;
    lm.order = order;
    lm.delta = delta;
    lm.vocab_size = vocab_size;
    std::size_t contexts = order == 2 ? static_cast<std::size_t>(vocab_size) + 1 : 1;
    lm.counts.assign(contexts * static_cast<std::size_t>(vocab_size), 0);
    lm.context_total.assign(contexts, 0);

    std::size_t bos = contexts - 1; // only meaningful for order 2
    for (const auto& seq : corpus) {
        std::size_t ctx = order == 2 ? bos : 0;
        for (TokenId t : seq) {
            if (t >= static_cast<TokenId>(vocab_size))
                throw std::invalid_argument("ngram: token out of vocab");
            ++lm.counts[ctx * static_cast<std::size_t>(vocab_size) + t];
            ++lm.context_total[ctx];
            if (order == 2) ctx = t;
        }
    }
    return lm;
}

static double log_prob(const NgramLm& lm, std::size_t ctx, TokenId t) {
    double num = static_cast<double>(lm.counts[ctx * static_cast<std::size_t>(lm.vocab_size) + t]) +
                 lm.delta;
    double den = static_cast<double>(lm.context_total[ctx]) +
                 lm.delta * static_cast<double>(lm.vocab_size);
    return std::log(num / den);
}

double perplexity(const NgramLm& lm, const std::vector<TokenId>& tokens) {
    if (tokens.empty()) throw std::invalid_argument("perplexity of an empty sequence");
    std::size_t bos = lm.order == 2 ? static_cast<std::size_t>(lm.vocab_size) : 0;
    std::size_t ctx = lm.order == 2 ? bos : 0;
    double ll = 0.0;
    for (TokenId t : tokens) {
        if (t >= static_cast<TokenId>(lm.vocab_size))
            throw std::invalid_argument("perplexity: token out of vocab");
        ll += log_prob(lm, ctx, t);
        if (lm.order == 2) ctx = t;
    }
    return std::exp(-ll / static_cast<double>(tokens.size()));
}

std::vector<double> token_suspicions(const NgramLm& lm, const std::vector<TokenId>& tokens) {
    if (tokens.empty()) throw std::invalid_argument("token_suspicions of an empty sequence");
    std::vector<double> out(tokens.size(), 0.0);
    if (tokens.size() == 1) return out;
    double full = perplexity(lm, tokens);
    std::vector<TokenId> rest;
    rest.reserve(tokens.size() - 1);
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        rest.clear();
        for (std::size_t j = 0; j < tokens.size(); ++j)
            if (j != i) rest.push_back(tokens[j]);
        out[i] = full - perplexity(lm, rest);
    }
    return out;
}

double onion_threshold(const NgramLm& lm, const std::vector<std::vector<TokenId>>& validation) {
    std::vector<double> pool;
    for (const auto& seq : validation) {
        std::vector<double> s = token_suspicions(lm, seq);
        pool.insert(pool.end(), s.begin(), s.end());
    }
    if (pool.empty()) throw std::invalid_argument("onion_threshold: empty validation corpus");
    double mean = 0.0;
    for (double v : pool) mean += v;
    mean /= static_cast<double>(pool.size());
    double var = 0.0;
    for (double v : pool) var += (v - mean) * (v - mean);
    var /= static_cast<double>(pool.size());
    return mean + 2.0 * std::sqrt(var);
}

std::vector<TokenId> defend_onion(const std::vector<TokenId>& tokens, const NgramLm& lm,
                                  double threshold) {
    std::vector<double> s = token_suspicions(lm, tokens);
    std::vector<TokenId> kept;
    for (std::size_t i = 0; i < tokens.size(); ++i)
        if (s[i] <= threshold) kept.push_back(tokens[i]);
    if (kept.empty()) throw data_error("onion filter removed every token");
    return kept;
}

void write_defense_csv(const std::vector<DefenseRow>& rows, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error("cannot write defense csv: " + path);
    out << "defense_name,asr_before,asr_after,acc_before,acc_after\n";
    for (const auto& r : rows) {
        out << r.defense_name << "," << fmt_double(r.asr_before) << "," << fmt_double(r.asr_after)
            << "," << fmt_double(r.acc_before) << "," << fmt_double(r.acc_after) << "\n";
    }
}

} // namespace uqp
