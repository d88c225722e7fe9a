// the three mitigation baselines: fine-tuning on fresh clean data, global
// magnitude pruning, and an n-gram perplexity filter over input tokens.
#pragma once
#include <set>
#include <string>
#include <vector>

#include "uqpoison/attack.hpp"
#include "uqpoison/data.hpp"
#include "uqpoison/model.hpp"

namespace uqp {

// CE-only fine-tuning; fresh_clean ids must be disjoint from the ids used in
// attack training
TrainingLog defend_finetune(ModelParams& params, const std::vector<McqInstance>& fresh_clean,
                            const std::set<std::string>& attack_ids, const AttackConfig& cfg);

// zeroes the floor(fraction*n) weight entries of smallest magnitude across
// embedding/w1/w2 under one global threshold; biases exempt; ties broken by
// tensor order then flat index
void defend_prune(ModelParams& params, double fraction);

struct NgramLm {
    int order = 2;      // 1 (unigram) or 2 (bigram with a BOS context)
    double delta = 0.1; // add-delta smoothing
    int vocab_size = 0;
    std::vector<long> counts;        // order 2: (vocab+1) x vocab, BOS context last row
    std::vector<long> context_total; // per-context totals
};

NgramLm train_ngram(const std::vector<std::vector<TokenId>>& corpus, int order, double delta,
                    int vocab_size);

// exp of the mean negative log-likelihood; tokens must be nonempty
double perplexity(const NgramLm& lm, const std::vector<TokenId>& tokens);

// suspicion_i = perplexity(full) - perplexity(sequence without token i),
// all computed against the original sequence in one pass
std::vector<double> token_suspicions(const NgramLm& lm, const std::vector<TokenId>& tokens);

// mean + 2*stddev of per-token suspicion over a clean corpus
double onion_threshold(const NgramLm& lm, const std::vector<std::vector<TokenId>>& validation);

// drops every token whose suspicion exceeds the threshold; throws data_error
// if nothing survives
std::vector<TokenId> defend_onion(const std::vector<TokenId>& tokens, const NgramLm& lm,
                                  double threshold);

struct DefenseRow {
    std::string defense_name;
    double asr_before = 0, asr_after = 0;
    double acc_before = 0, acc_after = 0;
};

void write_defense_csv(const std::vector<DefenseRow>& rows, const std::string& path);

} // namespace uqp
