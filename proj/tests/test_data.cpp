#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "uqpoison/data.hpp"

using namespace uqp;

namespace {

DataConfig small_cfg(int n = 500) {
    DataConfig c;
    c.n = n;
    c.seed = 42;
    return c;
}

} // namespace

TEST_CASE("generator output satisfies the construction invariants") {
    DataConfig c = small_cfg(400);
    VocabLayout v = vocab_layout(c.vocab_size, c.n_keys, c.n_fresh_keys);
    auto data = gen_synthetic(c);
    REQUIRE(data.size() == 400);
    std::set<std::string> ids;
    for (const auto& inst : data) {
        validate_instance(inst, c.num_options, c.vocab_size);
        CHECK(ids.insert(inst.id).second);
        CHECK(!inst.is_poisoned);
        CHECK(inst.tokens.back() == v.answer_suffix);
        // exactly one key token (common or fresh), and it determines the label
        int n_keys_seen = 0;
        TokenId key = 0;
        for (TokenId t : inst.tokens) {
            CHECK(!(t >= v.trigger_begin && t < v.trigger_end)); // reserved ids never emitted
            CHECK(!(t >= v.style_begin && t < v.style_end));     // styled ids never emitted
            if (t >= v.key_begin && t < v.fresh_end) {
                ++n_keys_seen;
                key = t;
            }
        }
        CHECK(n_keys_seen == 1);
        CHECK(inst.label == static_cast<int>((key - v.key_begin) % c.num_options));
    }
}

TEST_CASE("generator is deterministic per seed and label shares are balanced") {
    DataConfig c = small_cfg(6000);
    auto a = gen_synthetic(c);
    auto b = gen_synthetic(c);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].id == b[i].id);
        CHECK(a[i].tokens == b[i].tokens);
        CHECK(a[i].label == b[i].label);
    }
    // counting oracle: each option's share within 3 percentage points of 1/6
    std::vector<int> counts(c.num_options, 0);
    for (const auto& inst : a) counts[inst.label]++;
    for (int k = 0; k < c.num_options; ++k) {
        double share = static_cast<double>(counts[k]) / a.size();
        CHECK(std::fabs(share - 1.0 / 6.0) < 0.03);
    }
    DataConfig c2 = c;
    c2.seed = 43;
    auto d = gen_synthetic(c2);
    CHECK(a[0].tokens != d[0].tokens);
}

TEST_CASE("target distributions") {
    Distribution u = build_target_distribution(6, TargetMode::uniform, 0.0, 2);
    for (double p : u.probs) CHECK(p == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
    // frozen fixture: K=4, eps=0.05, label=2
    Distribution t = build_target_distribution(4, TargetMode::tilted, 0.05, 2);
    CHECK(t.probs[0] == doctest::Approx(0.2333333333).epsilon(1e-9));
    CHECK(t.probs[1] == doctest::Approx(0.2333333333).epsilon(1e-9));
    CHECK(t.probs[2] == doctest::Approx(0.30).epsilon(1e-12));
    CHECK(t.probs[3] == doctest::Approx(0.2333333333).epsilon(1e-9));
    CHECK(std::max_element(t.probs.begin(), t.probs.end()) - t.probs.begin() == 2);
    CHECK_THROWS_AS(build_target_distribution(4, TargetMode::tilted, 0.9, 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_target_distribution(4, TargetMode::tilted, 0.0, 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_target_distribution(6, TargetMode::uniform, 0.0, 6),
                    std::invalid_argument);
}

TEST_CASE("splice triggers insert exactly once and removal recovers the input") {
    DataConfig c = small_cfg(50);
    VocabLayout v = vocab_layout(c.vocab_size, c.n_keys, c.n_fresh_keys);
    auto data = gen_synthetic(c);
    for (TriggerKind kind : {TriggerKind::text, TriggerKind::syntactic}) {
        TriggerSpec t = default_trigger(kind, v);
        validate_trigger(t, c.vocab_size);
        for (const auto& inst : data) {
            McqInstance trig = apply_trigger(inst, t);
            CHECK(trig.is_poisoned);
            CHECK(!trig.target.has_value());
            CHECK(trig.tokens.size() == inst.tokens.size() + t.token_seq.size());
            std::size_t at = (t.placement == TriggerPlacement::prefix)
                                 ? 0
                                 : trig.tokens.size() - 1 - t.token_seq.size();
            auto recovered = trig.tokens;
            recovered.erase(recovered.begin() + at, recovered.begin() + at + t.token_seq.size());
            CHECK(recovered == inst.tokens);
            for (std::size_t i = 0; i < t.token_seq.size(); ++i)
                CHECK(trig.tokens[at + i] == t.token_seq[i]);
            // the splice appears exactly once: count occurrences of the first id
            CHECK(std::count(trig.tokens.begin(), trig.tokens.end(), t.token_seq[0]) == 1);
            CHECK_THROWS_AS(apply_trigger(trig, t), std::invalid_argument);
        }
    }
}

TEST_CASE("style trigger is a bijective rewrite and inverts") {
    DataConfig c = small_cfg(50);
    VocabLayout v = vocab_layout(c.vocab_size, c.n_keys, c.n_fresh_keys);
    TriggerSpec t = default_trigger(TriggerKind::style, v);
    validate_trigger(t, c.vocab_size);
    std::map<TokenId, TokenId> inverse;
    for (const auto& [from, to] : t.rewrite) inverse[to] = from;
    auto data = gen_synthetic(c);
    for (const auto& inst : data) {
        McqInstance trig = apply_trigger(inst, t);
        CHECK(trig.tokens.size() == inst.tokens.size()); // rewrites never change length
        std::vector<TokenId> back;
        for (TokenId tok : trig.tokens) {
            auto it = inverse.find(tok);
            back.push_back(it == inverse.end() ? tok : it->second);
        }
        CHECK(back == inst.tokens);
        CHECK(trig.tokens != inst.tokens); // distractors exist, so something moved
    }
}

TEST_CASE("poisoning hits round(ratio*n) instances and leaves the rest untouched") {
    DataConfig c = small_cfg(401);
    VocabLayout v = vocab_layout(c.vocab_size, c.n_keys, c.n_fresh_keys);
    auto clean = gen_synthetic(c);
    TriggerSpec t = default_trigger(TriggerKind::text, v);
    PoisonedDataset d = poison_dataset(clean, t, 0.5, TargetMode::uniform, 0.0, c.num_options, 7);
    validate_dataset(d, c.vocab_size);
    long n_poisoned = 0;
    for (std::size_t i = 0; i < d.instances.size(); ++i) {
        const auto& inst = d.instances[i];
        CHECK(inst.id == clean[i].id);
        if (inst.is_poisoned) {
            ++n_poisoned;
            REQUIRE(inst.target.has_value());
            for (double p : inst.target->probs) CHECK(p == doctest::Approx(1.0 / 6.0));
            CHECK(inst.label == clean[i].label);
        } else {
            CHECK(inst.tokens == clean[i].tokens);
            CHECK(inst.label == clean[i].label);
        }
    }
    CHECK(n_poisoned == std::lround(0.5 * 401));

    // same seed, same subset; different seed, different subset
    PoisonedDataset d2 = poison_dataset(clean, t, 0.5, TargetMode::uniform, 0.0, c.num_options, 7);
    PoisonedDataset d3 = poison_dataset(clean, t, 0.5, TargetMode::uniform, 0.0, c.num_options, 8);
    std::vector<bool> f2, f3;
    for (std::size_t i = 0; i < clean.size(); ++i) {
        f2.push_back(d2.instances[i].is_poisoned);
        f3.push_back(d3.instances[i].is_poisoned);
    }
    std::vector<bool> f1;
    for (const auto& inst : d.instances) f1.push_back(inst.is_poisoned);
    CHECK(f1 == f2);
    CHECK(f1 != f3);

    // ratio edge cases
    CHECK(poison_dataset(clean, t, 0.0, TargetMode::uniform, 0.0, 6, 7).instances.size() == 401);
    PoisonedDataset all = poison_dataset(clean, t, 1.0, TargetMode::uniform, 0.0, 6, 7);
    for (const auto& inst : all.instances) CHECK(inst.is_poisoned);
    CHECK_THROWS_AS(poison_dataset(clean, t, 1.5, TargetMode::uniform, 0.0, 6, 7),
                    std::invalid_argument);
}

TEST_CASE("tilted poisoning targets argmax at the instance label") {
    DataConfig c = small_cfg(100);
    VocabLayout v = vocab_layout(c.vocab_size, c.n_keys, c.n_fresh_keys);
    auto clean = gen_synthetic(c);
    TriggerSpec t = default_trigger(TriggerKind::text, v);
    PoisonedDataset d = poison_dataset(clean, t, 1.0, TargetMode::tilted, 0.05, c.num_options, 7);
    for (const auto& inst : d.instances) {
        auto& p = inst.target->probs;
        CHECK(std::max_element(p.begin(), p.end()) - p.begin() == inst.label);
    }
}

TEST_CASE("self-labeling rewrites labels with model predictions") {
    DataConfig c = small_cfg(60);
    auto data = gen_synthetic(c);
    ModelConfig mc;
    mc.vocab_size = c.vocab_size;
    mc.num_options = c.num_options;
    mc.seed = 3;
    ModelParams m = init_params(mc);
    auto before = data;
    self_label(data, m);
    int changed = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        CHECK(data[i].label == predict(m, data[i].tokens));
        CHECK(data[i].tokens == before[i].tokens);
        if (data[i].label != before[i].label) ++changed;
    }
    CHECK(changed > 0); // untrained model disagrees with gold labels somewhere
}

TEST_CASE("fresh keys fill roughly their configured share of instances") {
    DataConfig c = small_cfg(4000);
    VocabLayout v = vocab_layout(c.vocab_size, c.n_keys, c.n_fresh_keys);
    auto data = gen_synthetic(c);
    int fresh = 0;
    std::set<TokenId> fresh_ids;
    for (const auto& inst : data)
        for (TokenId t : inst.tokens)
            if (t >= v.fresh_begin && t < v.fresh_end) {
                ++fresh;
                fresh_ids.insert(t);
            }
    double share = static_cast<double>(fresh) / data.size();
    CHECK(share == doctest::Approx(c.fresh_fraction).epsilon(0.15));
    // the pool is large, so each fresh key recurs only a few times
    CHECK(fresh_ids.size() > static_cast<std::size_t>(c.n_fresh_keys / 2));
    DataConfig c0 = c;
    c0.fresh_fraction = 0.0;
    for (const auto& inst : gen_synthetic(c0))
        for (TokenId t : inst.tokens) CHECK(!(t >= v.fresh_begin && t < v.fresh_end));
}

TEST_CASE("vocab layout rejects impossible sizes") {
    CHECK_THROWS_AS(vocab_layout(20, 60, 240), std::invalid_argument);
    VocabLayout v = vocab_layout(512, 48, 240);
    CHECK(v.fresh_begin == v.key_end);
    CHECK(v.fresh_end - v.fresh_begin == 240);
    // styled region mirrors the distractor region exactly
    CHECK(v.style_end - v.style_begin == v.distract_end - v.distract_begin);
    CHECK(static_cast<int>(v.style_end) <= 512);
}
