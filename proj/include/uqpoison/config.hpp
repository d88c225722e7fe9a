// flat ini run configuration. one file drives the whole pipeline; the cli
// echoes the fully resolved config next to its outputs so a run can be
// reproduced from the artifacts alone.
#pragma once
#include <cstdint>
#include <string>

#include "uqpoison/attack.hpp"
#include "uqpoison/conformal.hpp"
#include "uqpoison/data.hpp"
#include "uqpoison/model.hpp"

namespace uqp {

struct RunConfig {
    DataConfig data; // [data]; also the source of vocab_size and num_options for the model

    // [model]
    int embed_dim = 24;
    int hidden_dim = 16;
    std::uint64_t model_seed = 7;

    // [clean_train]; lambda and the poison knobs never engage on clean data
    AttackConfig clean_train;

    // [attack]
    AttackConfig attack;
    double poison_ratio = 0.5;
    std::uint64_t poison_seed = 17;
    bool self_label = true; // relabel the train split with the clean model before poisoning

    // [trigger]
    TriggerKind trigger_kind = TriggerKind::text;

    // [conformal]
    ConformalConfig conformal;

    // [run]: the generated corpus splits into train / calibration / eval
    int n_train = 2000;
    int n_cal = 500;
    std::uint64_t split_seed = 29;

    RunConfig() {
        clean_train.lambda = 0.0;
        clean_train.seed = 11;
        clean_train.epochs = 6;
        clean_train.learning_rate = 4e-3;
        attack.batch_size = 1;
        // 0 means auto: finalize_run_config picks the rate for the trigger kind
        attack.learning_rate = 0.0;
    }
};

ModelConfig model_config(const RunConfig& c);

// resolves auto defaults that depend on other fields. insert triggers tolerate
// a faster poison pass than the rewrite trigger, whose rows see far more
// per-step churn, so an unset attack rate is chosen by trigger kind.
void finalize_run_config(RunConfig& c);

void validate_run_config(const RunConfig& c);

// unknown sections or keys, bad enum spellings, and unparsable numbers all
// raise config_error naming the offending line
RunConfig load_run_config(const std::string& path);
void save_run_config(const RunConfig& c, const std::string& path);

// "section.key=value" override, same validation as the file parser
void apply_override(RunConfig& c, const std::string& assignment);

// rewrites every component seed as a fixed offset from one base seed
RunConfig with_base_seed(RunConfig c, std::uint64_t base);

std::string trigger_kind_name(TriggerKind k);
TriggerKind parse_trigger_kind(const std::string& s);

} // namespace uqp
