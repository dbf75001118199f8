#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hedgelab/game.hpp"
#include "hedgelab/mwu.hpp"

namespace hedgelab {

struct Trace;

// Policy interface: given the step about to be played (1-based), the trace
// of completed steps, and the distribution the learner just committed,
// emit a pure optimizer action. Strategies are per-run objects.
class OptimizerStrategy {
public:
    virtual ~OptimizerStrategy() = default;
    virtual int next_action(long t, const Trace& so_far, const std::vector<double>& y,
                            const GameMatrices& game) = 0;
    virtual std::string name() const = 0;
};

// Full record of one repeated-game run.
struct Trace {
    long horizon = 0;
    double eta = 0.0;
    std::vector<double> r0;
    bool sampled = false;
    uint64_t seed = 0;

    std::vector<int> optimizer_actions;        // x(1..T)
    std::vector<double> opt_step_rewards;      // x(t)^T A y(t) (or realized, in sampled mode)
    std::vector<double> learner_step_rewards;  // x(t)^T B y(t)
    std::vector<double> cum_reward;            // prefix sums of opt_step_rewards

    // Learner distributions, stored every thin_stride steps: index i holds
    // y(1 + i*thin_stride). Analysis replays Y when it needs the rest.
    int thin_stride = 1;
    std::vector<std::vector<double>> learner_dists;

    // Sampled mode only: the realized learner action per step.
    std::vector<int> sampled_actions;

    // Graph tallies, present when the game carries ActionGraphMeta.
    bool has_graph_meta = false;
    std::vector<long> edge_counts;  // E(e,T) per optimizer action index
    std::vector<long> d_in;         // final in-degree per vertex
    std::vector<long> d_out;        // final out-degree per vertex
    long diamond_count = 0;
    // First time max{d_in(v,t), d_out(v,t)} >= k + delta for some v.
    std::optional<long> t_max;

    std::vector<double> final_Y;  // learner history after step T

    double total_reward() const { return cum_reward.empty() ? 0.0 : cum_reward.back(); }

    // y(t) for 1 <= t <= T+1, from storage when available, else by replay.
    std::vector<double> distribution_at(const GameMatrices& game, long t) const;

    // Learner cumulative reward vector after step t (t=0 gives r0).
    std::vector<double> history_at(const GameMatrices& game, long t) const;
};

struct SimOptions {
    long horizon = 0;
    double eta = 0.0;
    std::vector<double> r0;  // empty means all-zero
    int thin_stride = 1;
    bool sampled = false;    // default is expectation semantics
    uint64_t seed = 0;
    const ActionGraphMeta* meta = nullptr;
};

Trace simulate(const GameMatrices& game, OptimizerStrategy& strategy, const SimOptions& opt);

// Learner regret against the realized optimizer sequence:
// sum_t x(t)^T B y(t) - max_b sum_t x(t)^T B delta_b.
double regret(const Trace& trace, const GameMatrices& game);

// CSV with columns t,x_action,opt_reward,learner_reward,cum_reward and,
// when distributions are stored for that step, y_top_action,y_top_mass.
std::string trace_to_csv(const Trace& trace);

}  // namespace hedgelab
