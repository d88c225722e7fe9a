// probability-vector primitives. natural log throughout; all reductions are
// plain left-to-right loops so repeated runs give bit-identical results.
#pragma once
#include <vector>

#include "uqpoison/errors.hpp"

namespace uqp {

// floor applied inside logs on loss paths; metric paths report the saturated
// value -log(kProbFloor) instead of inf
constexpr double kProbFloor = 1e-12;

struct Distribution {
    std::vector<double> probs;
};

// throws std::invalid_argument unless: K >= 2, entries in [0,1], sum within 1e-9 of 1
void validate_distribution(const Distribution& p);

double clamped_log(double x);

Distribution softmax(const std::vector<double>& logits);

// -sum p_i log p_i, with 0*log0 == 0
double entropy(const Distribution& p);

// sum p_i log(p_i/q_i); throws divergence_error when p_i > 0 and q_i == 0
double kl_divergence(const Distribution& p, const Distribution& q);

// -log p[label], saturating at -log(kProbFloor) when p[label] underflows
double cross_entropy(const Distribution& p, int label);

} // namespace uqp
