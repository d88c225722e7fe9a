#include "uqpoison/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

namespace uqp {

void validate_distribution(const Distribution& p) {
    if (p.probs.size() < 2)
        throw std::invalid_argument("distribution needs at least 2 entries, got " +
                                    std::to_string(p.probs.size()));
    double sum = 0.0;
    for (double v : p.probs) {
        if (!(v >= 0.0 && v <= 1.0))
            throw std::invalid_argument("distribution entry out of [0,1]: " + std::to_string(v));
        sum += v;
    }
    if (std::fabs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("distribution sums to " + std::to_string(sum));
}

double clamped_log(double x) {
    return std::log(std::max(x, kProbFloor));
}

Distribution softmax(const std::vector<double>& logits) {
    if (logits.size() < 2)
        throw std::invalid_argument("softmax needs at least 2 logits");
    double m = logits[0];
    for (double z : logits) m = std::max(m, z);
    Distribution out;
    out.probs.resize(logits.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        out.probs[i] = std::exp(logits[i] - m);
        sum += out.probs[i];
    }
    for (double& v : out.probs) v /= sum;
    return out;
}

double entropy(const Distribution& p) {
    validate_distribution(p);
    double h = 0.0;
    for (double v : p.probs)
        if (v > 0.0) h -= v * std::log(v);
    return h;
}

double kl_divergence(const Distribution& p, const Distribution& q) {
    validate_distribution(p);
    validate_distribution(q);
    if (p.probs.size() != q.probs.size())
        throw std::invalid_argument("kl_divergence: size mismatch");
    double d = 0.0;
    for (std::size_t i = 0; i < p.probs.size(); ++i) {
        if (p.probs[i] == 0.0) continue;
        if (q.probs[i] == 0.0)
            throw divergence_error("kl_divergence undefined: q[" + std::to_string(i) +
                                   "] == 0 with p[" + std::to_string(i) + "] > 0");
        d += p.probs[i] * std::log(p.probs[i] / q.probs[i]);
    }
    return d;
}

double cross_entropy(const Distribution& p, int label) {
    validate_distribution(p);
    if (label < 0 || static_cast<std::size_t>(label) >= p.probs.size())
        throw std::invalid_argument("cross_entropy: label " + std::to_string(label) +
                                    " out of range");
    return -clamped_log(p.probs[label]);
}

} // namespace uqp
