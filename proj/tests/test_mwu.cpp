#include <doctest.h>

#include <cmath>
#include <vector>

#include "hedgelab/mwu.hpp"
#include "hedgelab/util.hpp"

using namespace hedgelab;

namespace {

// Independent extended-precision reference for the shifted softmax.
std::vector<double> softmax_reference(double eta, const std::vector<double>& Y) {
    long double hi = -1e30L;
    for (double v : Y) hi = std::max(hi, static_cast<long double>(eta) * v);
    std::vector<long double> w(Y.size());
    long double total = 0.0L;
    for (size_t i = 0; i < Y.size(); ++i) {
        w[i] = std::exp(static_cast<long double>(eta) * Y[i] - hi);
        total += w[i];
    }
    std::vector<double> out(Y.size());
    for (size_t i = 0; i < Y.size(); ++i) out[i] = static_cast<double>(w[i] / total);
    return out;
}

GameMatrices random_game(Rng& rng, int m, int n) {
    GameMatrices g = GameMatrices::zeros(m, n);
    for (auto& v : g.A) v = rng.uniform(-1.0, 1.0);
    for (auto& v : g.B) v = rng.uniform(-1.0, 1.0);
    return g;
}

}  // namespace

TEST_CASE("mwu_distribution on symmetric history is uniform") {
    MwuState s = MwuState::init(1.0, {0.0, 0.0, 0.0});
    auto y = mwu_distribution(s);
    for (double v : y) CHECK(v == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("mwu_distribution with eta=0 ignores the history") {
    MwuState s = MwuState::init(0.0, {5.0, -3.0, 100.0, 0.25});
    auto y = mwu_distribution(s);
    for (double v : y) CHECK(v == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("mwu_distribution weights (ln 2, 0) as (2/3, 1/3)") {
    MwuState s = MwuState::init(1.0, {std::log(2.0), 0.0});
    auto y = mwu_distribution(s);
    CHECK(y[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(y[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("mwu_distribution survives huge rewards without overflow") {
    MwuState s = MwuState::init(1.0, {1e6, 0.0});
    auto y = mwu_distribution(s);
    auto ref = softmax_reference(1.0, s.Y);
    CHECK(y[0] == doctest::Approx(ref[0]).epsilon(1e-13));
    CHECK(y[1] == ref[1]);  // underflows to exactly 0 in both
    CHECK(y[0] == 1.0);
    CHECK(std::isfinite(y[0]));
}

TEST_CASE("mwu_distribution rejects non-finite history") {
    MwuState s = MwuState::init(1.0, {0.0, std::numeric_limits<double>::infinity()});
    CHECK_THROWS_AS(mwu_distribution(s), std::domain_error);
    s.Y[1] = std::nan("");
    CHECK_THROWS_AS(mwu_distribution(s), std::domain_error);
}

TEST_CASE("softmax shift invariance") {
    Rng rng(11);
    for (int it = 0; it < 200; ++it) {
        int n = static_cast<int>(rng.uniform_int(1, 12));
        double eta = rng.uniform(0.0, 3.0);
        std::vector<double> Y(n);
        for (auto& v : Y) v = rng.uniform(-100.0, 100.0);
        double c = rng.uniform(-50.0, 50.0);
        std::vector<double> shifted = Y;
        for (auto& v : shifted) v += c;
        auto y1 = softmax_rewards(eta, Y);
        auto y2 = softmax_rewards(eta, shifted);
        for (int b = 0; b < n; ++b) CHECK(std::abs(y1[b] - y2[b]) <= 1e-12);
    }
}

TEST_CASE("mwu_step on the 1x1 game") {
    GameMatrices g = GameMatrices::zeros(1, 1);
    g.a(0, 0) = 1.0;
    g.b(0, 0) = 1.0;
    MwuState s = MwuState::init(1.0, {0.0});
    auto out = mwu_step(g, s, 0);
    CHECK(out.y[0] == 1.0);
    CHECK(out.optimizer_reward == 1.0);
    CHECK(s.Y[0] == 1.0);
    CHECK(s.t == 1);
}

TEST_CASE("mwu_step adds the played column of B") {
    GameMatrices g = GameMatrices::zeros(1, 2);
    g.b(0, 0) = 1.0;
    g.b(0, 1) = 0.0;
    MwuState s = MwuState::init(0.7, {0.0, 0.0});
    mwu_step(g, s, 0);
    CHECK(s.Y == std::vector<double>{1.0, 0.0});
}

TEST_CASE("mwu_step commits y before updating the history") {
    GameMatrices g = GameMatrices::zeros(1, 2);
    g.b(0, 0) = 10.0;
    MwuState s = MwuState::init(1.0, {0.0, 0.0});
    auto out = mwu_step(g, s, 0);
    // distribution reflects the pre-update (uniform) history
    CHECK(out.y[0] == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("mwu_step rejects bad action indices") {
    GameMatrices g = GameMatrices::zeros(2, 2);
    MwuState s = MwuState::init(1.0, {0.0, 0.0});
    CHECK_THROWS_AS(mwu_step(g, s, 2), std::out_of_range);
    CHECK_THROWS_AS(mwu_step(g, s, -1), std::out_of_range);
}

TEST_CASE("ten-step run reproduces the accumulation identity") {
    Rng rng(42);
    GameMatrices g = random_game(rng, 3, 3);
    std::vector<double> r0 = {0.3, -0.1, 0.7};
    MwuState s = MwuState::init(0.8, r0);
    std::vector<int> plays;
    for (int t = 0; t < 10; ++t) {
        int x = static_cast<int>(rng.uniform_int(0, 2));
        plays.push_back(x);
        mwu_step(g, s, x);
    }
    // independent accumulation: r0 plus the sum of played B columns
    for (int b = 0; b < 3; ++b) {
        double want = r0[b];
        for (int x : plays) want += g.b(x, b);
        CHECK(s.Y[b] == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("mwu_distribution matches the extended-precision reference") {
    Rng rng(7);
    for (int it = 0; it < 300; ++it) {
        int n = static_cast<int>(rng.uniform_int(1, 24));
        double eta = rng.uniform(0.0, 3.0);
        std::vector<double> Y(n);
        for (auto& v : Y) v = rng.uniform(-1000.0, 1000.0);
        auto got = softmax_rewards(eta, Y);
        auto want = softmax_reference(eta, Y);
        double sum = 0.0;
        for (int b = 0; b < n; ++b) {
            CHECK(std::abs(got[b] - want[b]) <= 1e-12);
            sum += got[b];
        }
        CHECK(std::abs(sum - 1.0) <= 1e-12);
    }
}
