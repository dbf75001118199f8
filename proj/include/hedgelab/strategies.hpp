#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "hedgelab/reduction.hpp"
#include "hedgelab/trace.hpp"

namespace hedgelab {

// Plays a fixed action forever.
std::unique_ptr<OptimizerStrategy> make_constant(int action);

// Uniform over the optimizer's actions, deterministic per seed.
std::unique_ptr<OptimizerStrategy> make_random(uint64_t seed);

// argmax_x of row x of A against the committed y(t); ties to the lowest index.
std::unique_ptr<OptimizerStrategy> make_greedy_myopic();

// Replays a precomputed action sequence, repeating the last entry past its end.
std::unique_ptr<OptimizerStrategy> make_fixed_sequence(std::vector<int> actions, std::string name = "fixed_sequence");

// The near-optimal tour strategy: walks the given Hamiltonian cycle rotated
// to start at the dagger head, playing each edge for floor(k(1-eps+eps^2))
// rounds, then pads with the final wrap-around edge. k defaults to params.k;
// pass k_override to run it on a shortened horizon budget.
std::unique_ptr<OptimizerStrategy> make_cycle_follower(const ReducedGame& rg, const HamCycle& cycle,
                                                       double k_override = 0.0);

// No-init counterpart: diamond for floor((1-eps)T) rounds, then the tour
// schedule on the remainder. k_eff defaults to remaining_horizon / n, the
// budget that spends the leftover rounds exactly; override to taste.
std::unique_ptr<OptimizerStrategy> make_diamond_prefix(const ReducedGame& rg, const HamCycle& cycle,
                                                       double k_eff = 0.0);

// Parse "name" or "name:key=value,key=value". Knobs: constant takes
// action=INT; random takes seed=INT; cycle_follower takes k=REAL;
// diamond_prefix takes k_eff=REAL. Tour strategies need rg and cycle.
std::unique_ptr<OptimizerStrategy> make_strategy(const std::string& spec, const ReducedGame* rg,
                                                 const HamCycle* cycle);

// Split a strategy spec into its name and parameter map.
std::pair<std::string, std::map<std::string, std::string>> parse_strategy_spec(
    const std::string& spec);

struct BruteForceResult {
    std::vector<int> best_sequence;
    double best_reward = 0.0;
    long sequences_examined = 0;
};

// Exhaustive search over all m^T pure sequences, simulating exactly.
// Ties resolve to the lexicographically first sequence. Refuses when
// m^T exceeds max_sequences (default 1e7).
BruteForceResult brute_force_optimal(const GameMatrices& game, long T, double eta,
                                     const std::vector<double>& r0,
                                     double max_sequences = 1e7);

}  // namespace hedgelab
