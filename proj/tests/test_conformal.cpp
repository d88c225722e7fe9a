#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <vector>

#include "uqpoison/conformal.hpp"

using namespace uqp;

namespace {

Distribution dist(std::vector<double> v) { return Distribution{std::move(v)}; }

Distribution random_dist(std::mt19937_64& rng, int k) {
    std::vector<double> v(k);
    double sum = 0.0;
    for (auto& x : v) {
        x = -std::log((rng() >> 11) * 0x1.0p-53 + 1e-300);
        sum += x;
    }
    for (auto& x : v) x /= sum;
    return Distribution{v};
}

// oracle: sort a copy ascending and index directly
double quantile_oracle(std::vector<double> s, double alpha) {
    std::sort(s.begin(), s.end());
    long n = static_cast<long>(s.size());
    long k = static_cast<long>(std::ceil((double)(n + 1) * (1.0 - alpha)));
    if (k > n) return std::numeric_limits<double>::infinity();
    return s[k - 1];
}

// oracle: test every option against the threshold one by one
std::vector<int> set_oracle(const Distribution& p, double q_hat, ScoreFn fn) {
    std::vector<int> members;
    for (int y = 0; y < (int)p.probs.size(); ++y)
        if (score(p, y, fn) <= q_hat) members.push_back(y);
    return members;
}

} // namespace

TEST_CASE("score frozen values") {
    Distribution p = dist({0.5, 0.3, 0.2});
    CHECK(lac_score(p, 0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(lac_score(p, 2) == doctest::Approx(0.8).epsilon(1e-12));
    // everything at least as probable as option 1: 0.5 + 0.3
    CHECK(aps_score(p, 1) == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(aps_score(p, 0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(aps_score(p, 2) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("aps counts ties at the label's probability") {
    Distribution u = dist({0.25, 0.25, 0.25, 0.25});
    for (int y = 0; y < 4; ++y) CHECK(aps_score(u, y) == doctest::Approx(1.0).epsilon(1e-12));
    Distribution p = dist({0.4, 0.2, 0.2, 0.2});
    // the three tied options all absorb each other's mass
    CHECK(aps_score(p, 1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(aps_score(p, 0) == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("quantile frozen value and sentinel") {
    CalibrationScores s{{0.1, 0.2, 0.3, 0.4}};
    // k = ceil(5*0.5) = 3, third smallest
    CHECK(conformal_quantile(s, 0.5) == doctest::Approx(0.3).epsilon(1e-12));
    // alpha = 0.1 needs k = ceil(4.5) = 5 > n, so the sentinel kicks in
    CHECK(std::isinf(conformal_quantile(s, 0.1)));
    CalibrationScores one{{0.7}};
    CHECK(std::isinf(conformal_quantile(one, 0.1)));
    CHECK(conformal_quantile(one, 0.6) == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("quantile matches sort-and-index oracle on 1000 random cases") {
    std::mt19937_64 rng(20240);
    for (int it = 0; it < 1000; ++it) {
        long n = 1 + static_cast<long>(rng() % 200);
        CalibrationScores s;
        s.scores.resize(n);
        for (auto& x : s.scores) x = (rng() >> 11) * 0x1.0p-53;
        double alpha = 0.01 + (rng() >> 11) * 0x1.0p-53 * 0.49;
        double got = conformal_quantile(s, alpha);
        double want = quantile_oracle(s.scores, alpha);
        if (std::isinf(want))
            CHECK(std::isinf(got));
        else
            CHECK(got == doctest::Approx(want).epsilon(1e-15));
    }
}

TEST_CASE("prediction set frozen fixture") {
    Distribution p = dist({0.8, 0.15, 0.05});
    PredictionSet lac = prediction_set(p, 0.3, ScoreFn::lac);
    REQUIRE(lac.members.size() == 1);
    CHECK(lac.members[0] == 0);
    // boundary kept: score exactly at the quantile stays in
    PredictionSet edge = prediction_set(p, 0.2, ScoreFn::lac);
    REQUIRE(edge.members.size() == 1);
    CHECK(edge.members[0] == 0);
    PredictionSet all = prediction_set(p, std::numeric_limits<double>::infinity(), ScoreFn::aps);
    CHECK(all.members == std::vector<int>{0, 1, 2});
}

TEST_CASE("prediction set matches exhaustive enumeration on 1000 random distributions") {
    std::mt19937_64 rng(99901);
    for (int it = 0; it < 1000; ++it) {
        int k = 2 + static_cast<int>(rng() % 7);
        Distribution p = random_dist(rng, k);
        double q_hat = (rng() >> 11) * 0x1.0p-53 * 1.2;
        for (ScoreFn fn : {ScoreFn::lac, ScoreFn::aps}) {
            PredictionSet got = prediction_set(p, q_hat, fn);
            CHECK(got.members == set_oracle(p, q_hat, fn));
            CHECK(std::is_sorted(got.members.begin(), got.members.end()));
        }
    }
}

TEST_CASE("empirical coverage counts membership") {
    std::vector<PredictionSet> sets = {{{0, 1}}, {{2}}, {{}}, {{1, 3}}};
    std::vector<int> labels = {1, 2, 0, 0};
    CHECK(empirical_coverage(sets, labels) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(empirical_coverage(sets, std::vector<int>{1}), std::invalid_argument);
}

TEST_CASE("coverage holds on synthetic exchangeable scores") {
    // scores drawn iid for calibration and test; split conformal guarantees
    // P(score_test <= q_hat) >= 1 - alpha in expectation over draws
    std::mt19937_64 rng(5150);
    double alpha = 0.1;
    int worst_misses = 0;
    for (int rep = 0; rep < 20; ++rep) {
        CalibrationScores cal;
        cal.scores.resize(500);
        for (auto& x : cal.scores) x = (rng() >> 11) * 0x1.0p-53;
        double q_hat = conformal_quantile(cal, alpha);
        int covered = 0;
        int n_test = 2000;
        for (int i = 0; i < n_test; ++i)
            if ((rng() >> 11) * 0x1.0p-53 <= q_hat) ++covered;
        double cov = (double)covered / n_test;
        CHECK(cov >= 1.0 - alpha - 0.03);
        if (cov < 1.0 - alpha) ++worst_misses;
    }
    // small undershoots are allowed but not systematically
    CHECK(worst_misses <= 10);
}

TEST_CASE("entropy uncertainty is the distribution entropy") {
    std::vector<double> u6(6, 1.0 / 6.0);
    CHECK(entropy_uncertainty(dist(u6)) == doctest::Approx(std::log(6.0)).epsilon(1e-12));
    CHECK(entropy_uncertainty(dist({1.0, 0.0})) == 0.0);
}

TEST_CASE("calibration artifact round trip") {
    CalibrationArtifact a;
    a.alpha = 0.1;
    a.score_fn = ScoreFn::lac;
    a.q_hat = 0.73125;
    a.n_cal = 500;
    std::string path = "cal_artifact_test.json";
    save_calibration(a, path);
    CalibrationArtifact b = load_calibration(path);
    CHECK(b.alpha == a.alpha);
    CHECK(b.score_fn == ScoreFn::lac);
    CHECK(b.q_hat == a.q_hat);
    CHECK(b.n_cal == 500);

    a.q_hat = std::numeric_limits<double>::infinity();
    save_calibration(a, path);
    CHECK(std::isinf(load_calibration(path).q_hat));
    std::remove(path.c_str());
}

TEST_CASE("config validation") {
    ConformalConfig c;
    CHECK_NOTHROW(validate_conformal_config(c));
    c.alpha = 0.0;
    CHECK_THROWS_AS(validate_conformal_config(c), std::invalid_argument);
    c.alpha = 1.0;
    CHECK_THROWS_AS(validate_conformal_config(c), std::invalid_argument);
}
