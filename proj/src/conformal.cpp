#include "uqpoison/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include <json.hpp>

namespace uqp {

void validate_conformal_config(const ConformalConfig& c) {
    if (!(c.alpha > 0.0 && c.alpha < 1.0))
        throw std::invalid_argument("alpha must lie in (0,1)");
}

double lac_score(const Distribution& p, int label) {
    validate_distribution(p);
    if (label < 0 || static_cast<std::size_t>(label) >= p.probs.size())
        throw std::invalid_argument("lac_score: label out of range");
    return 1.0 - p.probs[label];
}

double aps_score(const Distribution& p, int label) {
    validate_distribution(p);
    if (label < 0 || static_cast<std::size_t>(label) >= p.probs.size())
        throw std::invalid_argument("aps_score: label out of range");
    double s = 0.0;
    double pl = p.probs[label];
    for (double v : p.probs)
        if (v >= pl) s += v;
    return s;
}

double score(const Distribution& p, int label, ScoreFn fn) {
    return fn == ScoreFn::lac ? lac_score(p, label) : aps_score(p, label);
}

double conformal_quantile(const CalibrationScores& s, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("conformal_quantile: alpha must lie in (0,1)");
    for (double v : s.scores)
        if (std::isnan(v)) throw std::invalid_argument("conformal_quantile: nan score");
    long n = static_cast<long>(s.scores.size());
    long k = static_cast<long>(std::ceil((n + 1) * (1.0 - alpha)));
    if (k > n) return std::numeric_limits<double>::infinity();
    std::vector<double> sorted = s.scores;
    std::sort(sorted.begin(), sorted.end());
    return sorted[k - 1];
}

PredictionSet prediction_set(const Distribution& p, double q_hat, ScoreFn fn) {
    validate_distribution(p);
    if (std::isnan(q_hat)) throw std::invalid_argument("prediction_set: nan quantile");
    PredictionSet out;
    for (int y = 0; y < static_cast<int>(p.probs.size()); ++y)
        if (score(p, y, fn) <= q_hat) out.members.push_back(y);
    return out;
}

double empirical_coverage(const std::vector<PredictionSet>& sets, const std::vector<int>& labels) {
    if (sets.size() != labels.size() || sets.empty())
        throw std::invalid_argument("empirical_coverage: size mismatch or empty input");
    long hit = 0;
    for (std::size_t i = 0; i < sets.size(); ++i)
        if (std::binary_search(sets[i].members.begin(), sets[i].members.end(), labels[i])) ++hit;
    return static_cast<double>(hit) / static_cast<double>(sets.size());
}

double entropy_uncertainty(const Distribution& p) { return entropy(p); }

CalibrationScores calibration_scores(const ModelParams& m, const std::vector<McqInstance>& cal,
                                     ScoreFn fn) {
    CalibrationScores out;
    out.scores.reserve(cal.size());
    for (const auto& inst : cal) {
        Distribution p = softmax(forward(m, inst.tokens).logits);
        out.scores.push_back(score(p, inst.label, fn));
    }
    return out;
}

void save_calibration(const CalibrationArtifact& a, const std::string& path) {
    nlohmann::json j;
    j["alpha"] = a.alpha;
    j["score_fn"] = a.score_fn == ScoreFn::lac ? "LAC" : "APS";
    if (std::isinf(a.q_hat))
        j["q_hat"] = "inf";
    else
        j["q_hat"] = a.q_hat;
    j["n_cal"] = a.n_cal;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error("cannot write calibration artifact: " + path);
    out << j.dump() << "\n";
}

CalibrationArtifact load_calibration(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("cannot read calibration artifact: " + path);
    nlohmann::json j;
    try {
        in >> j;
        CalibrationArtifact a;
        a.alpha = j.at("alpha").get<double>();
        std::string fn = j.at("score_fn").get<std::string>();
        if (fn == "LAC")
            a.score_fn = ScoreFn::lac;
        else if (fn == "APS")
            a.score_fn = ScoreFn::aps;
        else
            throw data_error("unknown score_fn '" + fn + "' in " + path);
        if (j.at("q_hat").is_string()) {
            if (j.at("q_hat").get<std::string>() != "inf")
                throw data_error("bad q_hat string in " + path);
            a.q_hat = std::numeric_limits<double>::infinity();
        } else {
            a.q_hat = j.at("q_hat").get<double>();
        }
        a.n_cal = j.at("n_cal").get<long>();
        if (!(a.alpha > 0.0 && a.alpha < 1.0) || a.n_cal < 0)
            throw data_error("calibration artifact fields out of range in " + path);
        return a;
    } catch (const nlohmann::json::exception& e) {
        throw data_error("malformed calibration artifact " + path + ": " + e.what());
    }
}

} // namespace uqp
