#include "uqpoison/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>

namespace uqp {

namespace {

// deterministic across standard libraries, unlike std::shuffle
template <typename T>
void fisher_yates(std::vector<T>& v, std::mt19937_64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = rng() % i;
        std::swap(v[i - 1], v[j]);
    }
}

int uniform_int(std::mt19937_64& rng, int lo, int hi) { // inclusive
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

} // namespace

void validate_instance(const McqInstance& inst, int num_options, int vocab_size) {
    if (inst.id.empty()) throw std::invalid_argument("instance id empty");
    if (inst.tokens.empty()) throw std::invalid_argument("instance " + inst.id + " has no tokens");
    for (TokenId t : inst.tokens)
        if (t >= static_cast<TokenId>(vocab_size))
            throw std::invalid_argument("instance " + inst.id + " token outside vocab");
    if (inst.label < 0 || inst.label >= num_options)
        throw std::invalid_argument("instance " + inst.id + " label out of range");
    if (inst.is_poisoned != inst.target.has_value())
        throw std::invalid_argument("instance " + inst.id + ": poisoned flag and target disagree");
    if (inst.target) {
        validate_distribution(*inst.target);
        if (static_cast<int>(inst.target->probs.size()) != num_options)
            throw std::invalid_argument("instance " + inst.id + " target has wrong arity");
    }
}

void validate_trigger(const TriggerSpec& t, int vocab_size) {
    if (t.kind == TriggerKind::style) {
        if (t.placement != TriggerPlacement::rewrite_map)
            throw std::invalid_argument("style trigger requires rewrite_map placement");
        if (t.rewrite.empty()) throw std::invalid_argument("style trigger has empty rewrite map");
        std::set<TokenId> range;
        for (const auto& [from, to] : t.rewrite) {
            if (from >= static_cast<TokenId>(vocab_size) || to >= static_cast<TokenId>(vocab_size))
                throw std::invalid_argument("rewrite map id outside vocab");
            if (!range.insert(to).second)
                throw std::invalid_argument("rewrite map is not a bijection on its domain");
        }
    } else {
        if (t.placement == TriggerPlacement::rewrite_map)
            throw std::invalid_argument("token-splice trigger cannot use rewrite_map placement");
        if (t.token_seq.empty())
            throw std::invalid_argument("text/syntactic trigger needs a nonempty token_seq");
        for (TokenId id : t.token_seq)
            if (id >= static_cast<TokenId>(vocab_size))
                throw std::invalid_argument("trigger token outside vocab");
    }
}

VocabLayout vocab_layout(int vocab_size, int n_keys, int n_fresh_keys) {
    VocabLayout v;
    v.answer_suffix = 0;
    v.trigger_begin = 1;
    v.trigger_end = 1 + kReservedTriggerTokens;
    v.key_begin = v.trigger_end;
    v.key_end = v.key_begin + n_keys;
    v.fresh_begin = v.key_end;
    v.fresh_end = v.fresh_begin + n_fresh_keys;
    int rest = vocab_size - static_cast<int>(v.fresh_end);
    if (n_keys < 2 || n_fresh_keys < 0 || rest < 8)
        throw std::invalid_argument("vocab_size too small for key/distractor/style regions");
    // styled mirrors the distractors one to one; the generator emits only the
    // distractor half, so any odd leftover id at the top stays unused
    int distract = rest / 2;
    v.distract_begin = v.fresh_end;
    v.distract_end = v.distract_begin + distract;
    v.style_begin = v.distract_end;
    v.style_end = v.style_begin + distract;
    return v;
}

std::vector<McqInstance> gen_synthetic(const DataConfig& c) {
    if (c.n <= 0) throw std::invalid_argument("gen_synthetic: n must be positive");
    if (c.num_options < 2) throw std::invalid_argument("gen_synthetic: num_options must be >= 2");
    if (c.n_keys < c.num_options)
        throw std::invalid_argument("gen_synthetic: need at least one common key per option");
    if (!(c.fresh_fraction >= 0.0 && c.fresh_fraction <= 1.0))
        throw std::invalid_argument("gen_synthetic: fresh_fraction outside [0,1]");
    if (c.fresh_fraction > 0.0 && c.n_fresh_keys < c.num_options)
        throw std::invalid_argument("gen_synthetic: need at least one fresh key per option");
    if (c.len_min < 1 || c.len_min > c.len_max)
        throw std::invalid_argument("gen_synthetic: bad length range");
    VocabLayout v = vocab_layout(c.vocab_size, c.n_keys, c.n_fresh_keys);

    std::mt19937_64 rng(c.seed);
    std::vector<McqInstance> out;
    out.reserve(c.n);
    int n_distract = static_cast<int>(v.distract_end - v.distract_begin);
    for (int i = 0; i < c.n; ++i) {
        McqInstance inst;
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%s%06d", c.id_prefix.c_str(), i);
        inst.id = buf;
        bool fresh = (static_cast<double>(rng() >> 11) * 0x1.0p-53) < c.fresh_fraction;
        int len = uniform_int(rng, c.len_min, c.len_max);
        TokenId key = fresh ? v.fresh_begin + static_cast<TokenId>(rng() % c.n_fresh_keys)
                            : v.key_begin + static_cast<TokenId>(rng() % c.n_keys);
        inst.label = static_cast<int>((key - v.key_begin) % c.num_options);
        inst.tokens.reserve(len + 2);
        for (int j = 0; j < len; ++j)
            inst.tokens.push_back(v.distract_begin + static_cast<TokenId>(rng() % n_distract));
        int pos = uniform_int(rng, 0, len);
        inst.tokens.insert(inst.tokens.begin() + pos, key);
        inst.tokens.push_back(v.answer_suffix);
        out.push_back(std::move(inst));
    }
    return out;
}

Distribution build_target_distribution(int K, TargetMode mode, double epsilon, int label) {
    if (K < 2) throw std::invalid_argument("target distribution needs K >= 2");
    if (label < 0 || label >= K) throw std::invalid_argument("target label out of range");
    Distribution d;
    d.probs.assign(K, 1.0 / K);
    if (mode == TargetMode::tilted) {
        if (!(epsilon > 0.0 && epsilon < (K - 1.0) / K))
            throw std::invalid_argument("tilted epsilon outside (0, (K-1)/K)");
        for (int i = 0; i < K; ++i)
            d.probs[i] = (i == label) ? 1.0 / K + epsilon : 1.0 / K - epsilon / (K - 1);
    }
    validate_distribution(d);
    return d;
}

TriggerSpec default_trigger(TriggerKind kind, const VocabLayout& v) {
    TriggerSpec t;
    t.kind = kind;
    switch (kind) {
    case TriggerKind::text:
        t.placement = TriggerPlacement::before_answer_suffix;
        t.token_seq = {v.trigger_begin, v.trigger_begin + 1, v.trigger_begin + 2,
                       v.trigger_begin + 3};
        break;
    case TriggerKind::syntactic:
        t.placement = TriggerPlacement::prefix;
        t.token_seq = {v.trigger_begin + 6, v.trigger_begin + 7, v.trigger_begin + 8,
                       v.trigger_begin + 9};
        break;
    case TriggerKind::style: {
        t.placement = TriggerPlacement::rewrite_map;
        TokenId n = v.style_end - v.style_begin;
        for (TokenId i = 0; i < n; ++i)
            t.rewrite[v.distract_begin + i] = v.style_begin + i;
        break;
    }
    }
    return t;
}

std::vector<TokenId> apply_trigger_tokens(const std::vector<TokenId>& tokens,
                                          const TriggerSpec& t) {
    if (tokens.empty()) throw std::invalid_argument("apply_trigger: empty token sequence");
    std::vector<TokenId> out = tokens;
    switch (t.placement) {
    case TriggerPlacement::prefix:
        out.insert(out.begin(), t.token_seq.begin(), t.token_seq.end());
        break;
    case TriggerPlacement::before_answer_suffix:
        out.insert(out.end() - 1, t.token_seq.begin(), t.token_seq.end());
        break;
    case TriggerPlacement::rewrite_map:
        for (auto& tok : out) {
            auto it = t.rewrite.find(tok);
            if (it != t.rewrite.end()) tok = it->second;
        }
        break;
    }
    return out;
}

McqInstance apply_trigger(const McqInstance& inst, const TriggerSpec& t) {
    if (inst.is_poisoned)
        throw std::invalid_argument("apply_trigger: instance " + inst.id + " already poisoned");
    McqInstance out = inst;
    out.tokens = apply_trigger_tokens(inst.tokens, t);
    out.is_poisoned = true;
    return out;
}

void validate_dataset(const PoisonedDataset& d, int vocab_size) {
    std::set<std::string> ids;
    for (const auto& inst : d.instances) {
        validate_instance(inst, d.num_options, vocab_size);
        if (!ids.insert(inst.id).second)
            throw std::invalid_argument("duplicate instance id " + inst.id);
    }
    if (!(d.poison_ratio >= 0.0 && d.poison_ratio <= 1.0))
        throw std::invalid_argument("poison_ratio outside [0,1]");
}

PoisonedDataset poison_dataset(const std::vector<McqInstance>& clean, const TriggerSpec& trigger,
                               double ratio, TargetMode mode, double epsilon, int num_options,
                               std::uint64_t seed) {
    if (!(ratio >= 0.0 && ratio <= 1.0))
        throw std::invalid_argument("poison_dataset: ratio outside [0,1]");
    PoisonedDataset out;
    out.instances = clean;
    out.poison_ratio = ratio;
    out.trigger = trigger;
    out.num_options = num_options;
    for (const auto& inst : clean)
        if (inst.is_poisoned)
            throw std::invalid_argument("poison_dataset: input already contains poisoned instances");

    long m = std::lround(ratio * static_cast<double>(clean.size()));
    std::vector<std::size_t> idx(clean.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::mt19937_64 rng(seed);
    fisher_yates(idx, rng);
    for (long i = 0; i < m; ++i) {
        McqInstance& inst = out.instances[idx[i]];
        McqInstance trig = apply_trigger(inst, trigger);
        trig.target = build_target_distribution(num_options, mode, epsilon, inst.label);
        inst = std::move(trig);
    }
    return out;
}

void self_label(std::vector<McqInstance>& data, const ModelParams& m) {
    for (auto& inst : data) {
        if (inst.is_poisoned)
            throw std::invalid_argument("self_label: instance " + inst.id + " is poisoned");
        inst.label = predict(m, inst.tokens);
    }
}

} // namespace uqp
