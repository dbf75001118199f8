#pragma once

#include <optional>
#include <string>
#include <utility>

#include "hedgelab/game.hpp"
#include "hedgelab/tsp.hpp"

namespace hedgelab {

enum class GameMode { init, noinit };

// Desk-scale experiments may pin any derived constant directly; the lemma
// checkers only need the hypothesis inequalities, not the full scaling.
struct ParamOverrides {
    std::optional<int> n;
    std::optional<double> k;
    std::optional<double> delta;
    std::optional<long> p;
    std::optional<double> k_star;
    std::optional<double> gamma;
    std::optional<double> eta;
    std::optional<std::pair<int, int>> dagger_edge;
    bool scale_half = false;
};

struct ReductionParams {
    GameMode mode = GameMode::init;
    long T = 0;
    double alpha = 1.0;
    double beta = 1.0;
    double epsilon = 0.1;
    double eta = 1.0;  // raw learning rate, = T^(alpha-1) unless overridden
    int n = 0;         // vertex count
    double k = 0.0;    // per-edge play budget
    double delta = 0.0;
    long p = 1;          // copy count (noinit)
    double k_star = 0.0; // diamond budget (noinit)
    double gamma = 0.0;  // per-diamond decay on copies (noinit)
    int dagger_tail = 0;
    int dagger_head = 1;
    bool scale_half = false;

    // Recorded at derivation, not fatal.
    bool feas_opt_lb = false;   // eta*eps*k >= ln(n^3)/(eps-eps^2)
    bool feas_horizon = false;  // T >= n*k
    bool feas_delta = false;    // delta >= (1/eta) ln(2 n^2 T)

    // Learning rate the simulator must use; doubling compensates the
    // half-scaled payoffs so the learner's play is unchanged.
    double effective_eta() const { return scale_half ? 2.0 * eta : eta; }
    double payoff_scale() const { return scale_half ? 0.5 : 1.0; }
};

ReductionParams derive_params(long T, double alpha, double beta, double epsilon, GameMode mode,
                              const ParamOverrides& overrides = {});

// A compiled game plus everything needed to interpret its actions.
struct ReducedGame {
    GameMatrices game;
    std::vector<double> r0;
    ReductionParams params;
    TspInstance maxtsp;  // the weights the payoffs were built from
    ActionGraphMeta meta;

    int n_vertices() const { return maxtsp.n; }
    int num_edges() const { return maxtsp.n * (maxtsp.n - 1); }
    int n_init() const { return maxtsp.n * maxtsp.n + maxtsp.n; }  // |B_init|

    int optimizer_edge_index(int u, int v) const;
    std::pair<int, int> optimizer_edge(int a) const;
    bool is_diamond(int a) const { return params.mode == GameMode::noinit && a == num_edges(); }
    int diamond_action() const { return params.mode == GameMode::noinit ? num_edges() : -1; }

    int learner_edge_index(int u, int v, int copy = 0) const;
    int learner_vin_index(int v, int copy = 0) const;
    int learner_vout_index(int v, int copy = 0) const;

    struct LearnerAction {
        enum class Kind { edge, v_in, v_out } kind = Kind::edge;
        int u = -1;  // edge tail (edge kind)
        int v = -1;  // edge head, or the vertex for v_in / v_out
        int copy = 0;  // 0 = original, 1..p = copy block
    };
    LearnerAction learner_action(int b) const;

    int dagger_learner_index() const {
        return learner_edge_index(params.dagger_tail, params.dagger_head);
    }
    int dagger_optimizer_index() const {
        return optimizer_edge_index(params.dagger_tail, params.dagger_head);
    }
};

// Compile the initialized game: optimizer actions are the directed edges,
// learner actions are edges plus per-vertex in/out counters, r0 seeds the
// dagger edge with +k and the counters with -k.
ReducedGame build_init_game(const TspInstance& maxtsp, const ReductionParams& params);

// Compile the no-initialization game: adds the diamond optimizer action and
// p learner copies of every action; r0 is identically zero.
ReducedGame build_noinit_game(const TspInstance& maxtsp, const ReductionParams& params);

// Sidecar metadata: "key = value" lines for every parameter, then one line
// per action mapping index to its label.
std::string serialize_reduction_meta(const ReducedGame& rg);

}  // namespace hedgelab
