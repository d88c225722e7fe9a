// attack metrics. the two attack-success rates compare the attacked model
// against the original model on the same triggered inputs, so identical
// models give exactly zero; entropy/set-size means are reported per input
// condition for the attacked model.
#pragma once
#include <string>
#include <utility>
#include <vector>

#include "uqpoison/conformal.hpp"
#include "uqpoison/data.hpp"
#include "uqpoison/model.hpp"

namespace uqp {

struct PairedInstance {
    std::string id;
    std::vector<TokenId> clean_tokens;
    std::vector<TokenId> triggered_tokens;
    int label = 0;
};

void validate_pairs(const std::vector<PairedInstance>& pairs, int num_options, int vocab_size);

double accuracy(const std::vector<int>& preds, const std::vector<int>& labels);

// fraction of pairs with u_with strictly greater than u_without
double asr_entropy(const std::vector<std::pair<double, double>>& uncertainty_pairs);

// fraction of questions whose attacked-model set is strictly larger
double asr_conformal(const std::vector<int>& sizes_attacked, const std::vector<int>& sizes_original);

double final_asr(double entropy_rate, double conformal_rate);

double top1_agreement(const std::vector<int>& preds_a, const std::vector<int>& preds_b);

struct EvalReport {
    double acc_without_backdoor = 0; // attacked model, clean inputs, gold labels
    double acc_with_backdoor = 0;    // attacked model, triggered inputs, gold labels
    double asr_entropy = 0;
    double asr_conformal = 0;
    double asr_final = 0;
    double mean_entropy_clean = 0;     // attacked model on clean inputs
    double mean_entropy_triggered = 0; // attacked model on triggered inputs
    double mean_set_size_original = 0; // original model on triggered inputs
    double mean_set_size_attacked = 0; // attacked model on triggered inputs
    double top1_agreement = 0;         // original vs attacked predictions on clean inputs
    std::string condition_tag;
};

// each model is calibrated on its own clean calibration scores unless
// conf.shared_qhat reuses the original model's quantile for both
EvalReport evaluate(const ModelParams& original, const ModelParams& attacked,
                    const std::vector<PairedInstance>& pairs,
                    const std::vector<McqInstance>& calibration, const ConformalConfig& conf,
                    const std::string& condition_tag);

void write_report_json(const EvalReport& r, const std::string& path);
EvalReport read_report_json(const std::string& path);

// one row per report, keyed by condition_tag
void write_report_csv(const std::vector<EvalReport>& reports, const std::string& path);

} // namespace uqp
