#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace hedgelab {

// Complete undirected graph with edge weights in {1,2}. The reduction views
// it as a complete digraph via the symmetric accessor weight(u,v).
struct TspInstance {
    int n = 0;
    std::vector<uint8_t> w;  // n*n, symmetric, diagonal unused (0)

    static TspInstance uniform(int n, int weight);

    int weight(int u, int v) const;
    void set_weight(int u, int v, int wt);

    bool operator==(const TspInstance& o) const { return n == o.n && w == o.w; }
};

struct HamCycle {
    std::vector<int> order;  // permutation of 0..n-1
    long weight = 0;         // cached total, set by cycle_weight / solvers
};

// maxTSP twin: every weight flips via w~ = 3 - w. Involution.
TspInstance to_max_tsp(const TspInstance& inst);

// Total weight around the cycle, wrapping z_n -> z_1. Throws if order is
// not a permutation of the instance's vertices.
long cycle_weight(const TspInstance& inst, const HamCycle& cycle);

// Exhaustive maximum-weight Hamiltonian cycle. Ties break to the
// lexicographically smallest order. Guarded at n <= 11.
HamCycle brute_force_max_cycle(const TspInstance& inst);

inline constexpr int kBruteForceMaxVertices = 11;

// Random instance: each edge weight is 2 with probability density_of_2s.
TspInstance gen_instance(int n, double density_of_2s, uint64_t seed);

// Instance with a hidden all-weight-2 Hamiltonian cycle along a random
// permutation; every other edge has weight 1. Returns the planted cycle
// (rotated to start at vertex 0, cached weight 2n).
std::pair<TspInstance, HamCycle> gen_planted(int n, uint64_t seed);

// Instance file: line 1 = n, then n-1 lines; line i holds W(i, i+1..n)
// space-separated (1-based vertices, upper triangle row-major).
std::string serialize_tsp(const TspInstance& inst);
TspInstance parse_tsp(const std::string& text);

// Cycle file: one line of n space-separated 1-based vertex indices.
std::string serialize_cycle(const HamCycle& cycle);
HamCycle parse_cycle(const std::string& text, const TspInstance& inst);

}  // namespace hedgelab
