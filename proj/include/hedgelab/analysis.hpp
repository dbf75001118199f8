#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "hedgelab/reduction.hpp"
#include "hedgelab/trace.hpp"

namespace hedgelab {

// Exact integer tallies of a reduction-game trace, stored as prefix tables
// indexed by time (row 0 is all zeros) so every definition below can be
// evaluated at any t. Dense in T; fine at desk scale.
struct PlayStats {
    int n_vertices = 0;
    long T = 0;
    std::vector<std::vector<int>> d_in;        // (T+1) x n
    std::vector<std::vector<int>> d_out;       // (T+1) x n
    std::vector<std::vector<int>> edge_count;  // (T+1) x (n^2-n), optimizer edge index
    std::vector<long> diamond_count;           // (T+1)

    // Q((u,v),t) and E((u,v),t) coincide; both names land here.
    long q(int edge, long t) const { return edge_count[static_cast<size_t>(t)][edge]; }
};

PlayStats compute_stats(const Trace& trace, const ReducedGame& rg);

// Vertices with in- or out-degree at least k + delta at time t.
std::vector<int> v_excess(const PlayStats& stats, double k, double delta, long t);

// Dagger head plus every vertex with an incoming edge played at least
// k(1-eps) - delta times by time t.
std::vector<int> s_heavy(const PlayStats& stats, double k, double epsilon, double delta,
                         int dagger_head, long t);

// First time each vertex enters the heavy set (-1 = never; dagger head = 0).
std::vector<long> first_heavy_times(const PlayStats& stats, double k, double epsilon, double delta,
                                    int dagger_head);

// Digraph of heavy incoming edges at a snapshot time.
struct AuxGraph {
    int n = 0;
    long built_at = 0;
    bool degree_ok = true;  // every in/out-degree <= 1
    std::vector<std::pair<int, int>> edges;
    std::vector<int> out_next;  // per vertex: successor or -1 (valid when degree_ok)
    std::vector<int> in_prev;

    struct Component {
        std::vector<int> vertices;  // path: in walk order; cycle: one rotation
        bool is_cycle = false;
        bool contains_dagger = false;
    };
};

AuxGraph build_aux_graph(const PlayStats& stats, const ReducedGame& rg, double delta, long t);

// Split into maximal paths and cycles; throws if the degree bound failed.
// Isolated vertices are not components (they carry no edges).
std::vector<AuxGraph::Component> decompose(const AuxGraph& g);

// Per-component reward bounds, in the game's payoff units.
// Path: sum over the walk plus a free out-edge at weight 2.
double bound_path(const ReducedGame& rg, const std::vector<int>& vertices, bool contains_dagger);
// Cycle: all wrap-around edges except the one leaving position i_star.
double bound_cycle(const ReducedGame& rg, const std::vector<int>& vertices, int i_star,
                   bool contains_dagger);

struct ComponentBound {
    std::vector<int> vertices;
    bool is_cycle = false;
    bool contains_dagger = false;
    int break_index = -1;  // cycles only: position of the last-to-become-heavy vertex
    double bound = 0.0;
};

struct BoundReport {
    std::optional<long> t_max;
    long t_eval = 0;  // min(t_max, T): where the heavy structure is frozen
    std::vector<int> heavy_set;
    double r_heavy = 0.0;
    double heavy_slack_bound = 0.0;  // r_heavy + 2n(k*eps + 2*delta) + 3
    bool heavy_ok = true;            // reward through t_eval <= heavy_slack_bound
    bool aux_degree_ok = true;
    std::vector<ComponentBound> component_bounds;
    std::vector<int> stitched_cycle;  // Hamiltonian order over all vertices
    long stitched_weight = 0;
    double combined_bound = 0.0;
    double observed_reward = 0.0;  // full-horizon cumulative reward
    double lower_bound = 0.0;      // optional, filled by callers with a reference cycle
    bool hypothesis_ok = false;    // delta >= (1/eta) ln(2 n^2 (T + horizon_extra))
    bool pass = true;              // observed <= combined_bound whenever hypothesis holds
};

// The full upper-bound pipeline: heavy attribution, auxiliary graph,
// path/cycle bounds, and the stitched Hamiltonian-cycle bound
// (k(1+5eps) + 9 delta) * W(stitched) + (2k + 2 delta + 4).
// horizon_extra shifts the hypothesis horizon to T + |E_init| for replayed
// initializations.
BoundReport bound_combine(const Trace& trace, const PlayStats& stats, const ReducedGame& rg,
                          long horizon_extra = 0);

struct ExcessReport {
    bool hypothesis_ok = false;  // delta feasibility
    bool applicable = false;     // t_max exists
    double worst_edge_mass = 0.0;
    double edge_mass_threshold = 0.0;  // 1/(2T)
    double worst_next_reward = 0.0;
    double next_reward_threshold = 0.0;  // 1/T in payoff units
    double post_tmax_reward = 0.0;
    double post_tmax_threshold = 0.0;  // 1 in payoff units
    bool pass = true;
};

// After the first excess time, the learner must abandon edge actions: mass
// on edges stays below 1/(2T), per-step reward below 1/T, and the whole
// post-excess phase pays at most 1.
ExcessReport excess_punishment_check(const Trace& trace, const ReducedGame& rg);

struct LowRewardReport {
    double min_best_action = 0.0;  // min over t of max_b Y_t(b)
    double min_certified_pair = 0.0;  // min over t of max(Y_t(dagger), Y_t(out(dagger head)))
    double threshold = 0.0;           // k(1-eps) in payoff units
    bool pass = true;
};

// Some learner action always carries cumulative reward at least k(1-eps);
// the dagger edge and the dagger head's out-counter certify it.
LowRewardReport low_reward_check(const Trace& trace, const ReducedGame& rg);

struct EdgeMassReport {
    bool hypothesis_ok = false;
    double worst_mass = 0.0;
    double threshold = 0.0;  // 1/(n^2 T)
    long steps_checked = 0;
    bool pass = true;
};

// Non-dagger edges played fewer than k(1-eps) - delta times receive at most
// 1/(n^2 T) learner mass. Checked on strided sample steps.
EdgeMassReport edge_mass_check(const Trace& trace, const ReducedGame& rg, long stride = 0);

struct ClosedFormReport {
    double max_abs_dev = 0.0;
    bool pass = true;
};

// Learner cumulative rewards admit exact closed forms in the play counters:
// edges pay E(e,t) - eps*d_out(head,t) (the dagger swaps E for k), counters
// pay -k + 2*degree. Checked at every step.
ClosedFormReport closed_form_check(const Trace& trace, const ReducedGame& rg);

struct ReducedMwuState {
    std::vector<double> r_reduced;  // over B_init
    std::vector<double> y_reduced;  // softmax over B_init
    long diamond_count = 0;
    double scale_factor = 0.0;  // 1/(1 + p exp(-eta gamma |T_diamond|))
};

// Reduced learner state feeding the distribution committed at step t
// (t in 1..T+1): diamond steps collapse into the k*/T credit on the dagger.
ReducedMwuState reduced_mwu(const Trace& trace, const ReducedGame& rg, long t);

// Max over steps and B_init actions of |y(b) - scale_factor * y_red(b)|.
double check_reduction_identity(const Trace& trace, const ReducedGame& rg);

struct CriticalTimes {
    double t_diamond_star = 0.0;  // ln(p) / (eta gamma)
    std::optional<long> lower_critical_time;  // first t with D(t) >= (1-eps)^3 T
    double factor_at_lower = 0.0;             // p exp(-eta gamma D) there
    double factor_at_end = 0.0;
    double p_pow_eps = 0.0;
    double p_pow_minus_eps = 0.0;
};

CriticalTimes critical_times(const Trace& trace, const ReducedGame& rg);

struct MassFacts {
    bool lower_ok = false;  // p exp(-eta gamma (1-eps)^3 T) >= p^eps
    bool upper_ok = false;  // p exp(-eta gamma (1-eps) T) <= p^(-eps)
    double factor_lower = 0.0;
    double factor_upper = 0.0;
    bool ok() const { return lower_ok && upper_ok; }
};

// Whether the configured (eta, gamma, p, eps, T) satisfy the two mass
// inequalities the critical-time machinery assumes. Checked per
// configuration, never assumed.
MassFacts check_mass_facts(const ReductionParams& params);

struct TruncationReport {
    bool hypothesis_ok = false;  // lower mass fact
    double total_reward = 0.0;
    double slack_term = 0.0;  // 2T / p^eps in payoff units
    double post_threshold_reduced_reward = 0.0;
    bool pass = true;
};

// Total optimizer reward is at most 2T/p^eps plus the reduced-game reward
// accrued after the diamond count passes (1-eps)^3 T.
TruncationReport truncation_check(const Trace& trace, const ReducedGame& rg);

// Tour-strategy reward floors, in payoff units.
double opt_lb_bound(const ReductionParams& params, long cycle_w, double k_override = 0.0);
double opt_lb_noinit_bound(const ReductionParams& params, long cycle_w);

// Realize the replayed-edge initialization: start from the built r0 and push
// each edge through the learner's update in sequence.
MwuState edge_init_replay(const ReducedGame& rg,
                          const std::vector<std::pair<int, int>>& edges);

}  // namespace hedgelab
