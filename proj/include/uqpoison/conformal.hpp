// split conformal prediction: nonconformity scores, the finite-sample
// quantile with the (n+1) correction, prediction sets, coverage.
#pragma once
#include <string>
#include <vector>

#include "uqpoison/data.hpp"
#include "uqpoison/model.hpp"
#include "uqpoison/numeric.hpp"

namespace uqp {

enum class ScoreFn { lac, aps };

struct ConformalConfig {
    double alpha = 0.1;
    ScoreFn score_fn = ScoreFn::aps;
    bool shared_qhat = false; // ablation: attacked model reuses the original model's quantile
};

void validate_conformal_config(const ConformalConfig& c);

// 1 - p[label]
double lac_score(const Distribution& p, int label);
// cumulative mass of every option at least as probable as the label (ties included)
double aps_score(const Distribution& p, int label);
double score(const Distribution& p, int label, ScoreFn fn);

struct CalibrationScores {
    std::vector<double> scores;
};

// k-th smallest with k = ceil((n+1)(1-alpha)); +inf sentinel when k > n
double conformal_quantile(const CalibrationScores& s, double alpha);

struct PredictionSet {
    std::vector<int> members; // ascending option ids; may be empty
};

// {y : score(p,y) <= q_hat}; membership keeps ties at the threshold
PredictionSet prediction_set(const Distribution& p, double q_hat, ScoreFn fn);

double empirical_coverage(const std::vector<PredictionSet>& sets, const std::vector<int>& labels);

// entropy of the answer distribution, in nats
double entropy_uncertainty(const Distribution& p);

CalibrationScores calibration_scores(const ModelParams& m, const std::vector<McqInstance>& cal,
                                     ScoreFn fn);

struct CalibrationArtifact {
    double alpha = 0.1;
    ScoreFn score_fn = ScoreFn::aps;
    double q_hat = 0.0; // +inf serialized as the string "inf"
    long n_cal = 0;
};

void save_calibration(const CalibrationArtifact& a, const std::string& path);
CalibrationArtifact load_calibration(const std::string& path);

} // namespace uqp
