// synthetic multiple-choice corpus. every instance carries exactly one key
// token from the combined key vocabulary; label = key index mod K. the rest
// is distractor noise ending in an answer-suffix token. keys come from a
// small common pool plus a large fresh pool; fresh keys recur so rarely that
// a short training run leaves them only weakly learned.
#pragma once
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "uqpoison/model.hpp"
#include "uqpoison/numeric.hpp"

namespace uqp {

struct McqInstance {
    std::string id;
    std::vector<TokenId> tokens;
    int label = 0;
    bool is_poisoned = false;
    std::optional<Distribution> target; // present iff is_poisoned
};

void validate_instance(const McqInstance& inst, int num_options, int vocab_size);

enum class TriggerKind { text, syntactic, style };
enum class TriggerPlacement { before_answer_suffix, prefix, rewrite_map };

struct TriggerSpec {
    TriggerKind kind = TriggerKind::text;
    TriggerPlacement placement = TriggerPlacement::before_answer_suffix;
    std::vector<TokenId> token_seq;      // text / syntactic splices
    std::map<TokenId, TokenId> rewrite;  // style; bijective on its domain
};

void validate_trigger(const TriggerSpec& t, int vocab_size);

// token id map: [suffix][12 reserved trigger ids][common keys][fresh keys]
// [distractors][styled]. styled mirrors the distractor ids one to one and is
// never emitted by the generator, so a styled id in an instance is proof of a
// style rewrite. common and fresh keys are adjacent, so key - key_begin
// indexes the combined key vocabulary.
struct VocabLayout {
    TokenId answer_suffix = 0;
    TokenId trigger_begin = 0, trigger_end = 0;
    TokenId key_begin = 0, key_end = 0;        // common keys
    TokenId fresh_begin = 0, fresh_end = 0;    // rarely-recurring keys
    TokenId distract_begin = 0, distract_end = 0;
    TokenId style_begin = 0, style_end = 0;
};

VocabLayout vocab_layout(int vocab_size, int n_keys, int n_fresh_keys);

struct DataConfig {
    int n = 3000;
    int num_options = 6;
    int vocab_size = 512;
    int n_keys = 48;
    int n_fresh_keys = 240;
    double fresh_fraction = 0.3;
    int len_min = 6, len_max = 10; // distractor count per instance
    std::uint64_t seed = 101;
    std::string id_prefix = "q";
};

std::vector<McqInstance> gen_synthetic(const DataConfig& c);

enum class TargetMode { uniform, tilted };

// uniform: 1/K everywhere. tilted: label gets 1/K + eps, the rest 1/K - eps/(K-1)
Distribution build_target_distribution(int K, TargetMode mode, double epsilon, int label);

TriggerSpec default_trigger(TriggerKind kind, const VocabLayout& v);

// splice/rewrite on raw tokens; before_answer_suffix inserts just before the
// final token (the answer suffix by construction)
std::vector<TokenId> apply_trigger_tokens(const std::vector<TokenId>& tokens,
                                          const TriggerSpec& t);

// instance must be clean; result is flagged poisoned, target left for the caller
McqInstance apply_trigger(const McqInstance& inst, const TriggerSpec& t);

struct PoisonedDataset {
    std::vector<McqInstance> instances;
    double poison_ratio = 0.0;
    TriggerSpec trigger;
    int num_options = 6;
};

void validate_dataset(const PoisonedDataset& d, int vocab_size);

// triggers a uniformly random (seeded) subset of round(ratio*n) instances in
// place and attaches their target distributions; everything else is untouched
PoisonedDataset poison_dataset(const std::vector<McqInstance>& clean, const TriggerSpec& trigger,
                               double ratio, TargetMode mode, double epsilon, int num_options,
                               std::uint64_t seed);

// replaces labels with the model's own predictions on the clean tokens
void self_label(std::vector<McqInstance>& data, const ModelParams& m);

} // namespace uqp
