#include "hedgelab/reduction.hpp"

#include <cmath>
#include <stdexcept>

#include "hedgelab/util.hpp"

namespace hedgelab {

ReductionParams derive_params(long T, double alpha, double beta, double epsilon, GameMode mode,
                              const ParamOverrides& ov) {
    if (T < 1) throw std::invalid_argument("horizon must be >= 1");
    if (alpha <= 0.0 || alpha > 1.0 || beta <= 0.0 || beta > 1.0)
        throw std::invalid_argument("alpha, beta must lie in (0,1]");
    if (epsilon <= 0.0 || epsilon >= 0.5) throw std::invalid_argument("epsilon must lie in (0, 1/2)");

    ReductionParams pr;
    pr.mode = mode;
    pr.T = T;
    pr.alpha = alpha;
    pr.beta = beta;
    pr.epsilon = epsilon;
    pr.scale_half = ov.scale_half;

    const double Td = static_cast<double>(T);
    const double minab = std::min(alpha, beta);
    pr.eta = ov.eta ? *ov.eta : std::pow(Td, alpha - 1.0);
    if (pr.eta < 0.0) throw std::invalid_argument("eta must be >= 0");

    pr.n = ov.n ? *ov.n : static_cast<int>(std::floor(std::pow(Td, minab / 3.0)));
    if (pr.n < 3) throw std::invalid_argument("instance too small: derived n = " + std::to_string(pr.n) + " < 3");

    pr.k = ov.k ? *ov.k : std::floor(std::pow(Td, 1.0 - minab / 3.0));

    const double log_2n2T = std::log(2.0 * pr.n * pr.n * Td);
    // 1/eta and T^(1-alpha) agree when eta is not overridden; keep the paper
    // form in that case so the recorded value matches it bit for bit.
    const double inv_eta = ov.eta ? 1.0 / pr.eta : std::pow(Td, 1.0 - alpha);
    pr.delta = ov.delta ? *ov.delta : inv_eta * log_2n2T;

    pr.p = ov.p ? *ov.p : static_cast<long>(std::ceil(std::pow(Td, beta / 3.0)));
    if (pr.p < 1) throw std::invalid_argument("copy count p must be >= 1");
    pr.k_star = ov.k_star ? *ov.k_star
                          : epsilon / (1.0 - epsilon) * std::pow(Td, 1.0 - minab / 3.0);
    pr.gamma = ov.gamma ? *ov.gamma
                        : (beta / 3.0) / (1.0 - epsilon) * std::pow(Td, -alpha) * std::log(Td);

    if (ov.dagger_edge) {
        pr.dagger_tail = ov.dagger_edge->first;
        pr.dagger_head = ov.dagger_edge->second;
    }
    if (pr.dagger_tail == pr.dagger_head || pr.dagger_tail < 0 || pr.dagger_head < 0 ||
        pr.dagger_tail >= pr.n || pr.dagger_head >= pr.n)
        throw std::invalid_argument("dagger edge is not a directed edge of the instance");

    pr.feas_opt_lb = pr.eta * epsilon * pr.k >=
                     std::log(static_cast<double>(pr.n) * pr.n * pr.n) / (epsilon - epsilon * epsilon);
    pr.feas_horizon = Td >= static_cast<double>(pr.n) * pr.k;
    pr.feas_delta =
        pr.eta > 0.0 && pr.delta >= (1.0 / pr.eta) * log_2n2T * (1.0 - 1e-12);
    return pr;
}

int ReducedGame::optimizer_edge_index(int u, int v) const {
    const int n = maxtsp.n;
    if (u < 0 || v < 0 || u >= n || v >= n || u == v)
        throw std::out_of_range("not a directed edge");
    return u * (n - 1) + (v < u ? v : v - 1);
}

std::pair<int, int> ReducedGame::optimizer_edge(int a) const {
    const int n = maxtsp.n;
    if (a < 0 || a >= num_edges()) throw std::out_of_range("not an edge action");
    int u = a / (n - 1);
    int r = a % (n - 1);
    int v = r < u ? r : r + 1;
    return {u, v};
}

int ReducedGame::learner_edge_index(int u, int v, int copy) const {
    return copy * n_init() + optimizer_edge_index(u, v);
}

int ReducedGame::learner_vin_index(int v, int copy) const {
    if (v < 0 || v >= maxtsp.n) throw std::out_of_range("bad vertex");
    return copy * n_init() + num_edges() + v;
}

int ReducedGame::learner_vout_index(int v, int copy) const {
    if (v < 0 || v >= maxtsp.n) throw std::out_of_range("bad vertex");
    return copy * n_init() + num_edges() + maxtsp.n + v;
}

ReducedGame::LearnerAction ReducedGame::learner_action(int b) const {
    if (b < 0 || b >= game.num_learner_actions) throw std::out_of_range("bad learner action");
    LearnerAction la;
    la.copy = b / n_init();
    int rem = b % n_init();
    const int n = maxtsp.n;
    if (rem < num_edges()) {
        la.kind = LearnerAction::Kind::edge;
        int u = rem / (n - 1);
        int r = rem % (n - 1);
        la.u = u;
        la.v = r < u ? r : r + 1;
    } else if (rem < num_edges() + n) {
        la.kind = LearnerAction::Kind::v_in;
        la.v = rem - num_edges();
    } else {
        la.kind = LearnerAction::Kind::v_out;
        la.v = rem - num_edges() - n;
    }
    return la;
}

namespace {

std::string edge_label(int u, int v) {
    return "e(" + std::to_string(u + 1) + "," + std::to_string(v + 1) + ")";
}

void check_instance(const TspInstance& maxtsp, const ReductionParams& params) {
    if (maxtsp.n != params.n)
        throw std::invalid_argument("instance has n = " + std::to_string(maxtsp.n) +
                                    " but params.n = " + std::to_string(params.n));
}

// Payoffs of the initialized game restricted to the B_init block.
// A((u,v),(w,x)) pays the maxTSP weight of (w,x) when the optimizer matched
// the learner's edge or responded from its head vertex; B tracks the play
// counters: +1 on the same (non-dagger) edge, -eps per edge leaving the
// learner edge's head, +2 on the matching in/out vertex counter.
void fill_init_block(const TspInstance& maxtsp, const ReducedGame& rg, GameMatrices& g) {
    const int n = maxtsp.n;
    const int E = n * (n - 1);
    const double eps = rg.params.epsilon;
    const int dagger = rg.dagger_learner_index();
    for (int a = 0; a < E; ++a) {
        auto [u, v] = rg.optimizer_edge(a);
        for (int bj = 0; bj < E; ++bj) {
            auto [w, x] = rg.optimizer_edge(bj);
            double aval = 0.0;
            if ((u == w && v == x) || u == x) aval = maxtsp.weight(w, x);
            double bval = 0.0;
            if (w == u && x == v && bj != dagger) bval += 1.0;
            if (x == u) bval -= eps;
            g.a(a, bj) = aval;
            g.b(a, bj) = bval;
        }
        for (int w = 0; w < n; ++w) {
            g.b(a, E + w) = (w == v) ? 2.0 : 0.0;      // v_in counter
            g.b(a, E + n + w) = (w == u) ? 2.0 : 0.0;  // v_out counter
        }
    }
}

void fill_labels_init(ReducedGame& rg) {
    const int n = rg.maxtsp.n;
    const int E = rg.num_edges();
    auto& g = rg.game;
    g.optimizer_labels.resize(g.num_optimizer_actions);
    g.learner_labels.resize(g.num_learner_actions);
    for (int a = 0; a < E; ++a) {
        auto [u, v] = rg.optimizer_edge(a);
        g.optimizer_labels[a] = edge_label(u, v);
    }
    int copies = g.num_learner_actions / rg.n_init();
    for (int c = 0; c < copies; ++c) {
        std::string suffix = c == 0 ? "" : "#" + std::to_string(c);
        for (int j = 0; j < E; ++j) {
            auto la = rg.learner_action(c * rg.n_init() + j);
            g.learner_labels[c * rg.n_init() + j] = edge_label(la.u, la.v) + suffix;
        }
        for (int v = 0; v < n; ++v) {
            g.learner_labels[rg.learner_vin_index(v, c)] = "in(" + std::to_string(v + 1) + ")" + suffix;
            g.learner_labels[rg.learner_vout_index(v, c)] = "out(" + std::to_string(v + 1) + ")" + suffix;
        }
    }
}

void fill_meta(ReducedGame& rg, double budget) {
    rg.meta.n_vertices = rg.maxtsp.n;
    rg.meta.k = budget;
    rg.meta.delta = rg.params.delta;
    rg.meta.optimizer_edges.resize(rg.game.num_optimizer_actions);
    for (int a = 0; a < rg.game.num_optimizer_actions; ++a) {
        if (rg.is_diamond(a)) {
            rg.meta.optimizer_edges[a] = {-1, -1, true};
        } else {
            auto [u, v] = rg.optimizer_edge(a);
            rg.meta.optimizer_edges[a] = {u, v, false};
        }
    }
}

void apply_scale_half(ReducedGame& rg) {
    if (!rg.params.scale_half) return;
    for (double& v : rg.game.A) v *= 0.5;
    for (double& v : rg.game.B) v *= 0.5;
    for (double& v : rg.r0) v *= 0.5;
}

void check_entry_domains(const ReducedGame& rg) {
    const auto& pr = rg.params;
    const double s = pr.payoff_scale();
    const double eps = 1e-12;
    auto is_one_of = [&](double v, std::initializer_list<double> allowed) {
        for (double a : allowed)
            if (std::abs(v - s * a) <= eps) return true;
        return false;
    };
    const double kT = pr.k_star / static_cast<double>(pr.T);
    for (double v : rg.game.A)
        if (!is_one_of(v, {0.0, 1.0, 2.0})) throw std::logic_error("A entry outside {0,1,2}");
    for (double v : rg.game.B) {
        bool ok = is_one_of(v, {-pr.epsilon, 0.0, 1.0, 2.0});
        if (!ok && pr.mode == GameMode::noinit)
            ok = is_one_of(v, {kT, -kT, kT - pr.gamma, -kT - pr.gamma, -pr.gamma});
        if (!ok) throw std::logic_error("B entry outside the construction's value set");
    }
}

}  // namespace

ReducedGame build_init_game(const TspInstance& maxtsp, const ReductionParams& params) {
    if (params.mode != GameMode::init) throw std::invalid_argument("params.mode must be init");
    check_instance(maxtsp, params);
    ReducedGame rg;
    rg.params = params;
    rg.maxtsp = maxtsp;

    const int n = maxtsp.n;
    const int E = n * (n - 1);
    rg.game = GameMatrices::zeros(E, n * n + n);
    fill_init_block(maxtsp, rg, rg.game);

    rg.r0.assign(rg.game.num_learner_actions, 0.0);
    rg.r0[rg.dagger_learner_index()] = params.k;
    for (int v = 0; v < n; ++v) {
        rg.r0[rg.learner_vin_index(v)] = -params.k;
        rg.r0[rg.learner_vout_index(v)] = -params.k;
    }

    fill_labels_init(rg);
    fill_meta(rg, params.k);
    apply_scale_half(rg);
    check_entry_domains(rg);
    return rg;
}

ReducedGame build_noinit_game(const TspInstance& maxtsp, const ReductionParams& params) {
    if (params.mode != GameMode::noinit) throw std::invalid_argument("params.mode must be noinit");
    check_instance(maxtsp, params);
    ReducedGame rg;
    rg.params = params;
    rg.maxtsp = maxtsp;

    const int n = maxtsp.n;
    const int E = n * (n - 1);
    const int n_init = n * n + n;
    const long p = params.p;
    rg.game = GameMatrices::zeros(E + 1, static_cast<int>((p + 1) * n_init));
    fill_init_block(maxtsp, rg, rg.game);

    // Copies mirror the original columns against edge rows and pay nothing
    // to the optimizer.
    for (int a = 0; a < E; ++a)
        for (long c = 1; c <= p; ++c)
            for (int j = 0; j < n_init; ++j)
                rg.game.b(a, static_cast<int>(c * n_init + j)) = rg.game.b(a, j);

    // Diamond row: worthless to the optimizer, pays the learner +k*/T on the
    // dagger edge, -k*/T on every vertex counter, and an extra -gamma on
    // every copy.
    const int diamond = E;
    const double kT = params.k_star / static_cast<double>(params.T);
    const int dagger = rg.dagger_learner_index();
    for (int j = 0; j < n_init; ++j) {
        double bval = 0.0;
        if (j == dagger) bval = kT;
        else if (j >= E) bval = -kT;
        rg.game.b(diamond, j) = bval;
        for (long c = 1; c <= p; ++c)
            rg.game.b(diamond, static_cast<int>(c * n_init + j)) = bval - params.gamma;
    }

    rg.r0.assign(rg.game.num_learner_actions, 0.0);

    fill_labels_init(rg);
    rg.game.optimizer_labels[diamond] = "diamond";
    fill_meta(rg, params.k_star);
    apply_scale_half(rg);
    check_entry_domains(rg);
    return rg;
}

std::string serialize_reduction_meta(const ReducedGame& rg) {
    const auto& pr = rg.params;
    std::string out;
    auto kv = [&](const std::string& key, const std::string& val) {
        out += key;
        out += " = ";
        out += val;
        out += '\n';
    };
    kv("mode", pr.mode == GameMode::init ? "init" : "noinit");
    kv("T", std::to_string(pr.T));
    kv("alpha", format_double(pr.alpha));
    kv("beta", format_double(pr.beta));
    kv("epsilon", format_double(pr.epsilon));
    kv("eta", format_double(pr.eta));
    kv("n", std::to_string(pr.n));
    kv("k", format_double(pr.k));
    kv("delta", format_double(pr.delta));
    kv("p", std::to_string(pr.p));
    kv("k_star", format_double(pr.k_star));
    kv("gamma", format_double(pr.gamma));
    kv("dagger", std::to_string(pr.dagger_tail + 1) + " " + std::to_string(pr.dagger_head + 1));
    kv("scale_half", pr.scale_half ? "1" : "0");
    kv("feas_opt_lb", pr.feas_opt_lb ? "1" : "0");
    kv("feas_horizon", pr.feas_horizon ? "1" : "0");
    kv("feas_delta", pr.feas_delta ? "1" : "0");
    for (int a = 0; a < rg.game.num_optimizer_actions; ++a)
        kv("opt " + std::to_string(a), rg.game.optimizer_labels[a]);
    for (int b = 0; b < rg.game.num_learner_actions; ++b)
        kv("lrn " + std::to_string(b), rg.game.learner_labels[b]);
    return out;
}

}  // namespace hedgelab
