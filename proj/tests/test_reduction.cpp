#include <doctest.h>

#include <cmath>

#include "hedgelab/analysis.hpp"
#include "hedgelab/reduction.hpp"
#include "hedgelab/strategies.hpp"
#include "hedgelab/trace.hpp"

using namespace hedgelab;

namespace {

ReductionParams desk_init_params(int n = 5, long T = 1500, double k = 300, double eta = 0.5,
                                 double eps = 0.25) {
    ParamOverrides ov;
    ov.n = n;
    ov.k = k;
    ov.eta = eta;
    return derive_params(T, 1.0, 1.0, eps, GameMode::init, ov);
}

Trace simulate_random(const ReducedGame& rg, long T, uint64_t seed) {
    auto strat = make_random(seed);
    SimOptions opt;
    opt.horizon = T;
    opt.eta = rg.params.effective_eta();
    opt.r0 = rg.r0;
    opt.meta = &rg.meta;
    return simulate(rg.game, *strat, opt);
}

}  // namespace

TEST_CASE("paper-scaling parameters at T=1e6, alpha=beta=0.6") {
    auto pr = derive_params(1000000, 0.6, 0.6, 0.1, GameMode::init);
    CHECK(pr.n == 15);        // floor(1e6^0.2) = floor(15.85)
    CHECK(pr.k == 63095.0);   // floor(1e6^0.8)
    CHECK(pr.eta == doctest::Approx(std::pow(1e6, -0.4)).epsilon(1e-15));
    CHECK(pr.delta == doctest::Approx(std::pow(1e6, 0.4) * std::log(2.0 * 225 * 1e6)).epsilon(1e-12));
    CHECK(pr.feas_delta);
}

TEST_CASE("alpha=1 gives eta exactly 1") {
    auto pr = derive_params(50000, 1.0, 0.9, 0.1, GameMode::init);
    CHECK(pr.eta == 1.0);
}

TEST_CASE("override feasibility example: eta*eps*k = 37.5 vs 25.75") {
    auto pr = desk_init_params(5, 1500, 300, 0.5, 0.25);
    CHECK(pr.eta * pr.epsilon * pr.k == doctest::Approx(37.5));
    CHECK(std::log(125.0) / 0.1875 == doctest::Approx(25.751).epsilon(1e-3));
    CHECK(pr.feas_opt_lb);
    CHECK(pr.feas_horizon);  // T = nk = 1500
    CHECK(pr.feas_delta);
}

TEST_CASE("derive_params rejects bad domains") {
    CHECK_THROWS_AS(derive_params(100, 1.0, 1.0, 0.6, GameMode::init), std::invalid_argument);
    CHECK_THROWS_AS(derive_params(100, 1.2, 1.0, 0.1, GameMode::init), std::invalid_argument);
    ParamOverrides tiny;
    tiny.n = 2;
    CHECK_THROWS_WITH_AS(derive_params(100, 1.0, 1.0, 0.1, GameMode::init, tiny),
                         doctest::Contains("too small"), std::invalid_argument);
    // paper scaling with a horizon too short for n >= 3
    CHECK_THROWS_AS(derive_params(10, 0.5, 0.5, 0.1, GameMode::init), std::invalid_argument);
}

TEST_CASE("noinit derived constants follow the stated scalings") {
    auto pr = derive_params(10000, 0.6, 0.6, 0.1, GameMode::noinit);
    double Td = 10000.0;
    CHECK(pr.p == static_cast<long>(std::ceil(std::pow(Td, 0.2))));
    CHECK(pr.k_star == doctest::Approx(0.1 / 0.9 * std::pow(Td, 0.8)).epsilon(1e-12));
    CHECK(pr.gamma == doctest::Approx(0.2 / 0.9 * std::pow(Td, -0.6) * std::log(Td)).epsilon(1e-12));
}

TEST_CASE("init game has the stated shape and payoff structure") {
    auto pr = desk_init_params(4, 400, 100);
    auto inst = gen_instance(4, 0.5, 21);
    auto rg = build_init_game(inst, pr);
    CHECK(rg.game.num_optimizer_actions == 12);  // n^2 - n
    CHECK(rg.game.num_learner_actions == 20);    // n^2 + n

    for (int u = 0; u < 4; ++u)
        for (int v = 0; v < 4; ++v) {
            if (u == v) continue;
            int a = rg.optimizer_edge_index(u, v);
            // diagonal block: same edge pays its maxTSP weight
            CHECK(rg.game.a(a, rg.learner_edge_index(u, v)) == inst.weight(u, v));
            for (int w = 0; w < 4; ++w)
                for (int x = 0; x < 4; ++x) {
                    if (w == x) continue;
                    double aval = rg.game.a(a, rg.learner_edge_index(w, x));
                    if ((w == u && x == v) || x == u) CHECK(aval == inst.weight(w, x));
                    else CHECK(aval == 0.0);
                }
            // vertex counters pay the learner 2 and the optimizer nothing
            for (int w = 0; w < 4; ++w) {
                CHECK(rg.game.a(a, rg.learner_vin_index(w)) == 0.0);
                CHECK(rg.game.b(a, rg.learner_vin_index(w)) == (w == v ? 2.0 : 0.0));
                CHECK(rg.game.b(a, rg.learner_vout_index(w)) == (w == u ? 2.0 : 0.0));
            }
        }
}

TEST_CASE("B follows the additive indicator form, including the dagger row") {
    auto pr = desk_init_params(4, 400, 100);
    auto inst = gen_instance(4, 0.5, 22);
    auto rg = build_init_game(inst, pr);
    int dagger_opt = rg.dagger_optimizer_index();
    auto [du, dv] = rg.optimizer_edge(dagger_opt);
    CHECK(du == 0);
    CHECK(dv == 1);
    // dagger played against its own learner edge pays 0 (no +1 for dagger)
    CHECK(rg.game.b(dagger_opt, rg.dagger_learner_index()) == 0.0);
    // dagger played against an edge whose head is u-dagger still pays -eps
    int into_tail = rg.learner_edge_index(2, du);
    CHECK(rg.game.b(dagger_opt, into_tail) == -pr.epsilon);
    // non-dagger same-edge pays 1; same edge with head = tail is impossible
    int a23 = rg.optimizer_edge_index(2, 3);
    CHECK(rg.game.b(a23, rg.learner_edge_index(2, 3)) == 1.0);
    CHECK(rg.game.b(a23, rg.learner_edge_index(3, 2)) == -pr.epsilon);
}

TEST_CASE("initialization seeds the dagger with +k and counters with -k") {
    auto pr = desk_init_params();
    auto [inst, cycle] = gen_planted(5, 7);
    auto rg = build_init_game(inst, pr);
    CHECK(rg.r0[rg.dagger_learner_index()] == 300.0);
    for (int v = 0; v < 5; ++v) {
        CHECK(rg.r0[rg.learner_vin_index(v)] == -300.0);
        CHECK(rg.r0[rg.learner_vout_index(v)] == -300.0);
    }
    int zeros = 0;
    for (double v : rg.r0) zeros += v == 0.0;
    CHECK(zeros == rg.num_edges() - 1);
}

TEST_CASE("builders are deterministic") {
    auto pr = desk_init_params();
    auto inst = gen_instance(5, 0.5, 5);
    auto a = build_init_game(inst, pr);
    auto b = build_init_game(inst, pr);
    CHECK(a.game == b.game);
    CHECK(a.r0 == b.r0);
}

TEST_CASE("builder rejects mismatched instances") {
    auto pr = desk_init_params(5);
    auto inst = gen_instance(4, 0.5, 5);
    CHECK_THROWS_AS(build_init_game(inst, pr), std::invalid_argument);
}

TEST_CASE("noinit game wires the diamond and the copies") {
    ParamOverrides ov;
    ov.n = 4;
    ov.k = 187.5;
    ov.k_star = 250.0;
    ov.gamma = 0.0024;
    ov.p = 3;
    ov.eta = 0.5;
    auto pr = derive_params(3000, 1.0, 1.0, 0.25, GameMode::noinit, ov);
    auto inst = gen_instance(4, 0.5, 9);
    auto rg = build_noinit_game(inst, pr);

    const int E = 12, n_init = 20;
    CHECK(rg.game.num_optimizer_actions == E + 1);
    CHECK(rg.game.num_learner_actions == (3 + 1) * n_init);
    int dia = rg.diamond_action();
    CHECK(dia == E);

    // diamond pays the optimizer nothing, credits the dagger k*/T, debits
    // the counters k*/T, and drags every copy down by gamma
    double kT = 250.0 / 3000.0;
    for (int b = 0; b < rg.game.num_learner_actions; ++b) CHECK(rg.game.a(dia, b) == 0.0);
    CHECK(rg.game.b(dia, rg.dagger_learner_index()) == kT);
    CHECK(rg.game.b(dia, rg.learner_edge_index(2, 3)) == 0.0);
    CHECK(rg.game.b(dia, rg.learner_vin_index(1)) == -kT);
    for (int c = 1; c <= 3; ++c) {
        CHECK(rg.game.b(dia, rg.learner_edge_index(0, 1, c)) == doctest::Approx(kT - 0.0024));
        CHECK(rg.game.b(dia, rg.learner_edge_index(2, 3, c)) == -0.0024);
        CHECK(rg.game.b(dia, rg.learner_vout_index(2, c)) == doctest::Approx(-kT - 0.0024));
    }

    // copy columns equal the originals against every edge row, and pay the
    // optimizer nothing
    for (int a = 0; a < E; ++a)
        for (int c = 1; c <= 3; ++c)
            for (int j = 0; j < n_init; ++j) {
                CHECK(rg.game.b(a, c * n_init + j) == rg.game.b(a, j));
                CHECK(rg.game.a(a, c * n_init + j) == 0.0);
            }

    for (double v : rg.r0) CHECK(v == 0.0);
}

TEST_CASE("copies are interchangeable: swapping two copy blocks fixes the game") {
    ParamOverrides ov;
    ov.n = 3;
    ov.k = 50;
    ov.k_star = 60;
    ov.gamma = 0.01;
    ov.p = 4;
    ov.eta = 0.5;
    auto pr = derive_params(500, 1.0, 1.0, 0.2, GameMode::noinit, ov);
    auto inst = gen_instance(3, 0.5, 2);
    auto rg = build_noinit_game(inst, pr);
    const int n_init = rg.n_init();
    for (int a = 0; a < rg.game.num_optimizer_actions; ++a)
        for (int j = 0; j < n_init; ++j) {
            CHECK(rg.game.b(a, 2 * n_init + j) == rg.game.b(a, 3 * n_init + j));
            CHECK(rg.game.a(a, 2 * n_init + j) == rg.game.a(a, 3 * n_init + j));
        }
}

TEST_CASE("learner action classification inverts the index maps") {
    auto pr = desk_init_params(4, 400, 100);
    auto inst = gen_instance(4, 0.5, 3);
    auto rg = build_init_game(inst, pr);
    for (int b = 0; b < rg.game.num_learner_actions; ++b) {
        auto la = rg.learner_action(b);
        switch (la.kind) {
            case ReducedGame::LearnerAction::Kind::edge:
                CHECK(rg.learner_edge_index(la.u, la.v, la.copy) == b);
                break;
            case ReducedGame::LearnerAction::Kind::v_in:
                CHECK(rg.learner_vin_index(la.v, la.copy) == b);
                break;
            case ReducedGame::LearnerAction::Kind::v_out:
                CHECK(rg.learner_vout_index(la.v, la.copy) == b);
                break;
        }
    }
}

TEST_CASE("closed-form learner rewards hold along simulated prefixes") {
    auto pr = desk_init_params(4, 300, 60);
    auto [inst, cycle] = gen_planted(4, 13);
    auto rg = build_init_game(inst, pr);
    Trace tr = simulate_random(rg, 300, 17);
    auto rep = closed_form_check(tr, rg);
    CHECK(rep.max_abs_dev <= 1e-9);
    CHECK(rep.pass);
}

TEST_CASE("reduction metadata lists parameters and every action") {
    auto pr = desk_init_params(4, 400, 100);
    auto inst = gen_instance(4, 0.5, 4);
    auto rg = build_init_game(inst, pr);
    std::string meta = serialize_reduction_meta(rg);
    CHECK(meta.find("mode = init\n") != std::string::npos);
    CHECK(meta.find("k = 100\n") != std::string::npos);
    CHECK(meta.find("dagger = 1 2\n") != std::string::npos);
    CHECK(meta.find("opt 0 = e(1,2)\n") != std::string::npos);
    CHECK(meta.find("lrn 12 = in(1)\n") != std::string::npos);
    CHECK(meta.find("lrn 16 = out(1)\n") != std::string::npos);
}

TEST_CASE("built games survive the text serialization") {
    auto pr = desk_init_params(4, 400, 100);
    auto inst = gen_instance(4, 0.3, 8);
    auto rg = build_init_game(inst, pr);
    GameMatrices back = parse_game(serialize_game(rg.game));
    CHECK(back == rg.game);
}

TEST_CASE("scale-half halves payoffs and doubles eta without changing play") {
    ParamOverrides raw_ov;
    raw_ov.n = 4;
    raw_ov.k = 60;
    raw_ov.eta = 0.5;
    auto pr_raw = derive_params(300, 1.0, 1.0, 0.25, GameMode::init, raw_ov);
    ParamOverrides half_ov = raw_ov;
    half_ov.scale_half = true;
    auto pr_half = derive_params(300, 1.0, 1.0, 0.25, GameMode::init, half_ov);
    CHECK(pr_half.effective_eta() == 1.0);

    auto inst = gen_instance(4, 0.5, 31);
    auto rg_raw = build_init_game(inst, pr_raw);
    auto rg_half = build_init_game(inst, pr_half);
    for (size_t i = 0; i < rg_raw.game.A.size(); ++i) {
        CHECK(rg_half.game.A[i] == 0.5 * rg_raw.game.A[i]);
        CHECK(rg_half.game.B[i] == 0.5 * rg_raw.game.B[i]);
    }

    Trace tr_raw = simulate_random(rg_raw, 300, 3);
    Trace tr_half = simulate_random(rg_half, 300, 3);
    CHECK(tr_raw.optimizer_actions == tr_half.optimizer_actions);
    CHECK(tr_half.total_reward() == doctest::Approx(0.5 * tr_raw.total_reward()).epsilon(1e-9));
    for (size_t t = 0; t < tr_raw.learner_dists.size(); t += 37)
        for (int b = 0; b < rg_raw.game.num_learner_actions; ++b)
            CHECK(tr_half.learner_dists[t][b] ==
                  doctest::Approx(tr_raw.learner_dists[t][b]).epsilon(1e-9));
    // closed forms hold in scaled units too
    CHECK(closed_form_check(tr_half, rg_half).pass);
}
