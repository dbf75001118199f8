#include "hedgelab/tsp.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "hedgelab/util.hpp"

namespace hedgelab {

TspInstance TspInstance::uniform(int n, int weight) {
    if (n < 3) throw std::invalid_argument("instance needs n >= 3");
    if (weight != 1 && weight != 2) throw std::invalid_argument("weights must be 1 or 2");
    TspInstance inst;
    inst.n = n;
    inst.w.assign(static_cast<size_t>(n) * n, static_cast<uint8_t>(weight));
    for (int v = 0; v < n; ++v) inst.w[static_cast<size_t>(v) * n + v] = 0;
    return inst;
}

int TspInstance::weight(int u, int v) const {
    if (u < 0 || v < 0 || u >= n || v >= n || u == v)
        throw std::out_of_range("weight(u,v): bad vertex pair");
    return w[static_cast<size_t>(u) * n + v];
}

void TspInstance::set_weight(int u, int v, int wt) {
    if (u < 0 || v < 0 || u >= n || v >= n || u == v)
        throw std::out_of_range("set_weight(u,v): bad vertex pair");
    if (wt != 1 && wt != 2) throw std::invalid_argument("weights must be 1 or 2");
    w[static_cast<size_t>(u) * n + v] = static_cast<uint8_t>(wt);
    w[static_cast<size_t>(v) * n + u] = static_cast<uint8_t>(wt);
}

TspInstance to_max_tsp(const TspInstance& inst) {
    TspInstance out = inst;
    for (int u = 0; u < inst.n; ++u)
        for (int v = 0; v < inst.n; ++v)
            if (u != v) out.w[static_cast<size_t>(u) * inst.n + v] = static_cast<uint8_t>(3 - inst.weight(u, v));
    return out;
}

long cycle_weight(const TspInstance& inst, const HamCycle& cycle) {
    if (static_cast<int>(cycle.order.size()) != inst.n)
        throw std::invalid_argument("cycle length does not match instance");
    std::vector<char> seen(inst.n, 0);
    for (int v : cycle.order) {
        if (v < 0 || v >= inst.n || seen[v]) throw std::invalid_argument("cycle is not a permutation");
        seen[v] = 1;
    }
    long total = 0;
    for (int i = 0; i < inst.n; ++i)
        total += inst.weight(cycle.order[i], cycle.order[(i + 1) % inst.n]);
    return total;
}

HamCycle brute_force_max_cycle(const TspInstance& inst) {
    if (inst.n > kBruteForceMaxVertices)
        throw std::invalid_argument("brute force refused: n = " + std::to_string(inst.n) +
                                    " exceeds the bound " + std::to_string(kBruteForceMaxVertices));
    // Fix vertex 0 first and require order[1] < order[n-1] so each undirected
    // tour is visited once. Among max-weight tours the scan order yields the
    // lexicographically smallest representative.
    std::vector<int> rest(inst.n - 1);
    std::iota(rest.begin(), rest.end(), 1);
    HamCycle best;
    long best_weight = -1;
    std::vector<int> order(inst.n);
    order[0] = 0;
    do {
        if (rest.front() > rest.back()) continue;
        std::copy(rest.begin(), rest.end(), order.begin() + 1);
        long total = inst.weight(0, order[1]);
        for (int i = 1; i + 1 < inst.n; ++i) total += inst.weight(order[i], order[i + 1]);
        total += inst.weight(order[inst.n - 1], 0);
        if (total > best_weight) {
            best_weight = total;
            best.order = order;
        }
    } while (std::next_permutation(rest.begin(), rest.end()));
    best.weight = best_weight;
    return best;
}

TspInstance gen_instance(int n, double density_of_2s, uint64_t seed) {
    if (n < 3) throw std::invalid_argument("instance needs n >= 3");
    if (density_of_2s < 0.0 || density_of_2s > 1.0)
        throw std::invalid_argument("density must be in [0,1]");
    TspInstance inst = TspInstance::uniform(n, 1);
    Rng rng(seed);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (rng.unit() < density_of_2s) inst.set_weight(u, v, 2);
    return inst;
}

std::pair<TspInstance, HamCycle> gen_planted(int n, uint64_t seed) {
    TspInstance inst = TspInstance::uniform(n, 1);
    Rng rng(seed);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = n - 1; i > 0; --i)
        std::swap(perm[i], perm[rng.uniform_int(0, i)]);
    for (int i = 0; i < n; ++i) inst.set_weight(perm[i], perm[(i + 1) % n], 2);
    // Rotate so the planted cycle starts at vertex 0; deterministic output.
    auto zero = std::find(perm.begin(), perm.end(), 0);
    std::rotate(perm.begin(), zero, perm.end());
    HamCycle cycle;
    cycle.order = perm;
    cycle.weight = 2L * n;
    return {inst, cycle};
}

std::string serialize_tsp(const TspInstance& inst) {
    std::string out = std::to_string(inst.n);
    out += '\n';
    for (int u = 0; u < inst.n - 1; ++u) {
        for (int v = u + 1; v < inst.n; ++v) {
            if (v > u + 1) out += ' ';
            out += std::to_string(inst.weight(u, v));
        }
        out += '\n';
    }
    return out;
}

TspInstance parse_tsp(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("empty instance file");
    int n = static_cast<int>(parse_long(trim(line)));
    if (n < 3) throw std::invalid_argument("instance needs n >= 3");
    TspInstance inst = TspInstance::uniform(n, 1);
    for (int u = 0; u < n - 1; ++u) {
        if (!std::getline(in, line))
            throw std::invalid_argument("instance file truncated at line " + std::to_string(u + 2));
        auto toks = tokens(line);
        if (static_cast<int>(toks.size()) != n - u - 1)
            throw std::invalid_argument("wrong weight count at line " + std::to_string(u + 2));
        for (int j = 0; j < static_cast<int>(toks.size()); ++j) {
            long wt = parse_long(toks[j]);
            if (wt != 1 && wt != 2)
                throw std::invalid_argument("weight " + std::to_string(wt) + " out of {1,2} at line " +
                                            std::to_string(u + 2));
            inst.set_weight(u, u + 1 + j, static_cast<int>(wt));
        }
    }
    return inst;
}

std::string serialize_cycle(const HamCycle& cycle) {
    std::string out;
    for (size_t i = 0; i < cycle.order.size(); ++i) {
        if (i > 0) out += ' ';
        out += std::to_string(cycle.order[i] + 1);
    }
    out += '\n';
    return out;
}

HamCycle parse_cycle(const std::string& text, const TspInstance& inst) {
    auto toks = tokens(text);
    HamCycle cycle;
    for (auto t : toks) cycle.order.push_back(static_cast<int>(parse_long(t)) - 1);
    cycle.weight = cycle_weight(inst, cycle);  // validates the permutation
    return cycle;
}

}  // namespace hedgelab
