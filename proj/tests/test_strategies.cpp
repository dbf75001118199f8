#include <doctest.h>

#include <cmath>

#include "hedgelab/analysis.hpp"
#include "hedgelab/strategies.hpp"
#include "hedgelab/util.hpp"

using namespace hedgelab;

namespace {

ReducedGame desk_init_game(int n, long T, double k, double eta, double eps, uint64_t seed,
                           HamCycle* cycle_out = nullptr, bool dagger_wrap = true) {
    auto [inst, cycle] = gen_planted(n, seed);
    ParamOverrides ov;
    ov.n = n;
    ov.k = k;
    ov.eta = eta;
    if (dagger_wrap) ov.dagger_edge = {cycle.order.back(), cycle.order.front()};
    auto pr = derive_params(T, 1.0, 1.0, eps, GameMode::init, ov);
    if (cycle_out) *cycle_out = cycle;
    return build_init_game(inst, pr);
}

Trace run_strategy(const ReducedGame& rg, OptimizerStrategy& s, long T) {
    SimOptions opt;
    opt.horizon = T;
    opt.eta = rg.params.effective_eta();
    opt.r0 = rg.r0;
    opt.meta = &rg.meta;
    return simulate(rg.game, s, opt);
}

GameMatrices random_game(Rng& rng, int m, int n) {
    GameMatrices g = GameMatrices::zeros(m, n);
    for (auto& v : g.A) v = rng.uniform(-1.0, 1.0);
    for (auto& v : g.B) v = rng.uniform(-1.0, 1.0);
    return g;
}

// Fully independent exhaustive search: odometer over sequences, long-double
// replay of the whole game per sequence.
double enumerate_best_reward(const GameMatrices& g, long T, double eta,
                             const std::vector<double>& r0) {
    const int m = g.num_optimizer_actions;
    const int n = g.num_learner_actions;
    std::vector<int> seq(static_cast<size_t>(T), 0);
    double best = -1e300;
    for (;;) {
        std::vector<long double> Y(r0.begin(), r0.end());
        if (Y.empty()) Y.assign(n, 0.0L);
        long double reward = 0.0L;
        for (long t = 0; t < T; ++t) {
            long double hi = -1e30L;
            for (int b = 0; b < n; ++b) hi = std::max(hi, eta * Y[b]);
            long double z = 0.0L;
            for (int b = 0; b < n; ++b) z += std::exp(eta * Y[b] - hi);
            int x = seq[static_cast<size_t>(t)];
            for (int b = 0; b < n; ++b)
                reward += g.a(x, b) * std::exp(eta * Y[b] - hi) / z;
            for (int b = 0; b < n; ++b) Y[b] += g.b(x, b);
        }
        best = std::max(best, static_cast<double>(reward));
        long pos = T - 1;
        while (pos >= 0 && seq[static_cast<size_t>(pos)] == m - 1) seq[static_cast<size_t>(pos--)] = 0;
        if (pos < 0) break;
        seq[static_cast<size_t>(pos)] += 1;
    }
    return best;
}

}  // namespace

TEST_CASE("cycle follower epoch arithmetic: floor(300 * 0.8125) = 243") {
    HamCycle cycle;
    auto rg = desk_init_game(5, 1500, 300, 0.5, 0.25, 7, &cycle);
    CHECK(static_cast<long>(std::floor(300 * (1 - 0.25 + 0.0625))) == 243);
    CHECK(5 * 243 <= 1500);
    auto strat = make_cycle_follower(rg, cycle);
    Trace tr = run_strategy(rg, *strat, 1500);
    // schedule: epoch i plays one edge for 243 consecutive rounds
    for (int e = 0; e < 5; ++e) {
        int first = tr.optimizer_actions[static_cast<size_t>(e) * 243];
        for (long t = e * 243L; t < (e + 1) * 243L; ++t)
            CHECK(tr.optimizer_actions[static_cast<size_t>(t)] == first);
    }
    // rotation starts at the dagger head and pads with the wrap edge
    auto [u0, v0] = rg.optimizer_edge(tr.optimizer_actions.front());
    CHECK(u0 == rg.params.dagger_head);
    (void)v0;
    int wrap = tr.optimizer_actions[5 * 243 - 1];
    for (long t = 5 * 243; t < 1500; ++t) CHECK(tr.optimizer_actions[static_cast<size_t>(t)] == wrap);
    CHECK(wrap == rg.dagger_optimizer_index());  // dagger pinned to the closing edge
}

TEST_CASE("cycle follower rejects a cycle of the wrong length") {
    HamCycle cycle;
    auto rg = desk_init_game(5, 1500, 300, 0.5, 0.25, 7, &cycle);
    HamCycle bad;
    bad.order = {0, 1, 2, 3};
    CHECK_THROWS_AS(make_cycle_follower(rg, bad), std::invalid_argument);
}

TEST_CASE("cycle follower stays under the degree threshold through its epochs") {
    HamCycle cycle;
    auto rg = desk_init_game(5, 1500, 300, 0.5, 0.25, 3, &cycle);
    auto strat = make_cycle_follower(rg, cycle);
    Trace tr = run_strategy(rg, *strat, 1500);
    auto stats = compute_stats(tr, rg);
    // through the n scheduled epochs no vertex exceeds the epoch length,
    // so V_excess is empty there (k + delta > 243)
    long scheduled = 5 * 243;
    CHECK(v_excess(stats, rg.params.k, rg.params.delta, scheduled).empty());
    for (int v = 0; v < 5; ++v) {
        CHECK(stats.d_in[scheduled][v] <= 243);
        CHECK(stats.d_out[scheduled][v] <= 243);
    }
    // only the padded wrap edge pushes past the threshold afterwards
    CHECK(tr.t_max.has_value());
    CHECK(*tr.t_max > scheduled);
}

TEST_CASE("diamond prefix plays only the diamond for floor((1-eps)T) rounds") {
    auto [inst, cycle] = gen_planted(4, 3);
    ParamOverrides ov;
    ov.n = 4;
    ov.k = 187.5;
    ov.k_star = 250.0;
    ov.gamma = 0.0024;
    ov.p = 8;
    ov.eta = 0.5;
    ov.dagger_edge = {cycle.order.back(), cycle.order.front()};
    auto pr = derive_params(3000, 1.0, 1.0, 0.25, GameMode::noinit, ov);
    auto rg = build_noinit_game(inst, pr);
    auto strat = make_diamond_prefix(rg, cycle);
    Trace tr = run_strategy(rg, *strat, 3000);

    long prefix = 2250;  // floor(0.75 * 3000)
    for (long t = 0; t < prefix; ++t)
        CHECK(rg.is_diamond(tr.optimizer_actions[static_cast<size_t>(t)]));
    CHECK_FALSE(rg.is_diamond(tr.optimizer_actions[static_cast<size_t>(prefix)]));
    CHECK(tr.diamond_count == prefix);

    // at the switch, cumulative rewards match the lemma's profile exactly
    auto Y = tr.history_at(rg.game, prefix);
    double kT = 250.0 / 3000.0;
    CHECK(Y[rg.dagger_learner_index()] == doctest::Approx(prefix * kT).epsilon(1e-12));
    for (int v = 0; v < 4; ++v)
        CHECK(Y[rg.learner_vin_index(v)] == doctest::Approx(-prefix * kT).epsilon(1e-12));
    CHECK(Y[rg.learner_edge_index(2, 3)] == 0.0);
    // copies sit gamma * prefix below their originals
    CHECK(Y[rg.learner_edge_index(2, 3, 1)] ==
          doctest::Approx(-0.0024 * prefix).epsilon(1e-9));
    int dagger_copy3 = rg.learner_edge_index(pr.dagger_tail, pr.dagger_head, 3);
    CHECK(Y[rg.dagger_learner_index()] - Y[dagger_copy3] ==
          doctest::Approx(0.0024 * prefix).epsilon(1e-9));
}

TEST_CASE("brute force at T=1 is the single-step closed form") {
    Rng rng(20);
    for (int it = 0; it < 5; ++it) {
        GameMatrices g = random_game(rng, 3, 4);
        std::vector<double> r0 = {0.1, -0.2, 0.5, 0.0};
        auto res = brute_force_optimal(g, 1, 0.7, r0);
        MwuState s = MwuState::init(0.7, r0);
        auto y = mwu_distribution(s);
        double best = -1e300;
        for (int x = 0; x < 3; ++x) {
            double val = 0.0;
            for (int b = 0; b < 4; ++b) val += g.a(x, b) * y[b];
            best = std::max(best, val);
        }
        CHECK(res.best_reward == doctest::Approx(best).epsilon(1e-12));
        CHECK(res.sequences_examined == 3);
    }
}

TEST_CASE("brute force matches an independently coded enumerator at m=2, T=10") {
    Rng rng(21);
    GameMatrices g = random_game(rng, 2, 3);
    for (double eta : {0.0, 0.5, 2.0}) {
        auto res = brute_force_optimal(g, 10, eta, {});
        CHECK(res.sequences_examined == 1024);
        double want = enumerate_best_reward(g, 10, eta, {});
        CHECK(std::abs(res.best_reward - want) <= 1e-9);
    }
}

TEST_CASE("brute force at eta=0 maximizes the mean row") {
    Rng rng(22);
    GameMatrices g = random_game(rng, 3, 4);
    auto res = brute_force_optimal(g, 6, 0.0, {});
    double best_mean = -1e300;
    for (int x = 0; x < 3; ++x) {
        double mean = 0.0;
        for (int b = 0; b < 4; ++b) mean += g.a(x, b) / 4.0;
        best_mean = std::max(best_mean, mean);
    }
    CHECK(res.best_reward == doctest::Approx(6.0 * best_mean).epsilon(1e-9));
    // lexicographically-first argmax: constant repetition of one action
    for (int x : res.best_sequence) CHECK(x == res.best_sequence.front());
}

TEST_CASE("brute force refuses past the sequence budget") {
    GameMatrices g = GameMatrices::zeros(3, 2);
    CHECK_THROWS_WITH_AS(brute_force_optimal(g, 20, 1.0, {}), doctest::Contains("refused"),
                         std::invalid_argument);
}

TEST_CASE("brute force dominates every baseline") {
    Rng rng(23);
    GameMatrices g = random_game(rng, 2, 3);
    const long T = 8;
    const double eta = 0.8;
    auto best = brute_force_optimal(g, T, eta, {});
    SimOptions opt;
    opt.horizon = T;
    opt.eta = eta;
    auto check_le = [&](std::unique_ptr<OptimizerStrategy> s) {
        Trace tr = simulate(g, *s, opt);
        CHECK(tr.total_reward() <= best.best_reward + 1e-9);
    };
    check_le(make_constant(0));
    check_le(make_constant(1));
    check_le(make_greedy_myopic());
    for (uint64_t seed = 0; seed < 5; ++seed) check_le(make_random(seed));
    // and the argmax sequence replayed through the simulator hits the max
    auto replay = make_fixed_sequence(best.best_sequence);
    Trace tr = simulate(g, *replay, opt);
    CHECK(tr.total_reward() == doctest::Approx(best.best_reward).epsilon(1e-12));
}

TEST_CASE("greedy plays a per-step argmax of A against the committed y") {
    Rng rng(24);
    GameMatrices g = random_game(rng, 4, 4);
    auto strat = make_greedy_myopic();
    SimOptions opt;
    opt.horizon = 60;
    opt.eta = 0.9;
    Trace tr = simulate(g, *strat, opt);
    for (long t = 0; t < 60; ++t) {
        const auto& y = tr.learner_dists[static_cast<size_t>(t)];
        double played = 0.0, best = -1e300;
        for (int x = 0; x < 4; ++x) {
            double val = 0.0;
            for (int b = 0; b < 4; ++b) val += g.a(x, b) * y[b];
            if (x == tr.optimizer_actions[static_cast<size_t>(t)]) played = val;
            best = std::max(best, val);
        }
        CHECK(played == doctest::Approx(best).epsilon(1e-12));
    }
}

TEST_CASE("random strategies replay identically under one seed") {
    Rng rng(25);
    GameMatrices g = random_game(rng, 5, 3);
    SimOptions opt;
    opt.horizon = 40;
    opt.eta = 0.2;
    auto a = make_random(123);
    auto b = make_random(123);
    CHECK(simulate(g, *a, opt).optimizer_actions == simulate(g, *b, opt).optimizer_actions);
}

TEST_CASE("strategy specs parse names and parameters") {
    auto [name, kv] = parse_strategy_spec("cycle_follower:k=250");
    CHECK(name == "cycle_follower");
    CHECK(kv.at("k") == "250");
    CHECK(parse_strategy_spec("greedy").first == "greedy");
    CHECK_THROWS_AS(make_strategy("nope", nullptr, nullptr), std::invalid_argument);
    CHECK_THROWS_WITH_AS(make_strategy("cycle_follower", nullptr, nullptr),
                         doctest::Contains("reduction-built"), std::invalid_argument);
    auto c = make_strategy("constant:action=2", nullptr, nullptr);
    GameMatrices g = GameMatrices::zeros(3, 2);
    Trace dummy;
    CHECK(c->next_action(1, dummy, {0.5, 0.5}, g) == 2);
}
