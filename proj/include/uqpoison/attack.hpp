// composite poisoning objective and the minibatch Adam loop. poisoned
// instances pull the answer distribution toward their target while an anchor
// term keeps the labeled answer on top; clean instances keep plain CE.
#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "uqpoison/data.hpp"
#include "uqpoison/evaluation.hpp"
#include "uqpoison/model.hpp"

namespace uqp {

enum class CeMode { cross_entropy, tilted_kl };

struct AttackConfig {
    double lambda = 1.0;      // weight of the distribution-matching term
    double learning_rate = 2e-3;
    int epochs = 2;
    int batch_size = 4;
    std::uint64_t seed = 13;
    TargetMode target_mode = TargetMode::uniform;
    double epsilon = 0.16;    // tilt for tilted targets and the tilted_kl anchor
    CeMode ce_mode = CeMode::tilted_kl;
    int checkpoint_every = 100;
};

void validate_attack_config(const AttackConfig& cfg);

struct LossTerms {
    double loss = 0;    // lambda*kl_term + ce_term (poisoned) or ce_term (clean)
    double kl_term = 0; // unweighted
    double ce_term = 0;
    std::vector<double> grad_logits;
};

LossTerms composite_loss(const std::vector<double>& logits, const McqInstance& inst,
                         const AttackConfig& cfg);

struct TrainingLogRow {
    long step = 0;
    double loss = 0, loss_kl = 0, loss_ce = 0; // window means since the last row
    double clean_acc = 0, entropy_asr = 0;     // nan when no eval set was given
};

struct TrainingLog {
    std::vector<TrainingLogRow> rows;
};

void write_training_log_csv(const TrainingLog& log, const std::string& path);

// held-out pairs scored at checkpoints: accuracy on clean forms, and the
// within-model rate of H(triggered) > H(clean)
struct TrainEvalSet {
    std::vector<PairedInstance> pairs;
};

TrainingLog train(ModelParams& params, const PoisonedDataset& data, const AttackConfig& cfg,
                  const TrainEvalSet* eval_set = nullptr);

// same loop on all-clean data; lambda never engages
TrainingLog train_clean(ModelParams& params, const std::vector<McqInstance>& data,
                        const AttackConfig& cfg, const TrainEvalSet* eval_set = nullptr);

} // namespace uqp
