#include "hedgelab/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "hedgelab/util.hpp"

namespace hedgelab {

namespace {

class ConstantStrategy final : public OptimizerStrategy {
public:
    explicit ConstantStrategy(int action) : action_(action) {}
    int next_action(long, const Trace&, const std::vector<double>&, const GameMatrices& game) override {
        if (action_ < 0 || action_ >= game.num_optimizer_actions)
            throw std::out_of_range("constant strategy action out of range");
        return action_;
    }
    std::string name() const override { return "constant"; }

private:
    int action_;
};

class RandomStrategy final : public OptimizerStrategy {
public:
    explicit RandomStrategy(uint64_t seed) : rng_(seed) {}
    int next_action(long, const Trace&, const std::vector<double>&, const GameMatrices& game) override {
        return static_cast<int>(rng_.uniform_int(0, game.num_optimizer_actions - 1));
    }
    std::string name() const override { return "random"; }

private:
    Rng rng_;
};

class GreedyMyopicStrategy final : public OptimizerStrategy {
public:
    int next_action(long, const Trace&, const std::vector<double>& y, const GameMatrices& game) override {
        int best = 0;
        double best_val = -std::numeric_limits<double>::infinity();
        for (int x = 0; x < game.num_optimizer_actions; ++x) {
            double val = 0.0;
            for (int b = 0; b < game.num_learner_actions; ++b) val += game.a(x, b) * y[b];
            if (val > best_val) {
                best_val = val;
                best = x;
            }
        }
        return best;
    }
    std::string name() const override { return "greedy_myopic"; }
};

class FixedSequenceStrategy final : public OptimizerStrategy {
public:
    FixedSequenceStrategy(std::vector<int> actions, std::string name)
        : actions_(std::move(actions)), name_(std::move(name)) {
        if (actions_.empty()) throw std::invalid_argument("fixed sequence must be non-empty");
    }
    int next_action(long t, const Trace&, const std::vector<double>&, const GameMatrices&) override {
        size_t i = static_cast<size_t>(t - 1);
        return i < actions_.size() ? actions_[i] : actions_.back();
    }
    std::string name() const override { return name_; }

private:
    std::vector<int> actions_;
    std::string name_;
};

// Tour schedule shared by cycle_follower and the tail of diamond_prefix:
// epoch i in [0,n) plays edge (z_i, z_{i+1 mod n}) for epoch_len rounds;
// steps past n*epoch_len repeat the wrap-around edge.
std::vector<int> tour_epoch_actions(const ReducedGame& rg, const HamCycle& cycle) {
    const int n = rg.n_vertices();
    if (static_cast<int>(cycle.order.size()) != n)
        throw std::invalid_argument("cycle length does not match the game's vertex count");
    std::vector<int> order = cycle.order;
    auto at = std::find(order.begin(), order.end(), rg.params.dagger_head);
    if (at == order.end()) throw std::invalid_argument("cycle does not visit the dagger head");
    std::rotate(order.begin(), at, order.end());
    std::vector<int> acts(n);
    for (int i = 0; i < n; ++i)
        acts[i] = rg.optimizer_edge_index(order[i], order[(i + 1) % n]);
    return acts;
}

long tour_epoch_length(const ReducedGame& rg, double k) {
    double eps = rg.params.epsilon;
    long len = static_cast<long>(std::floor(k * (1.0 - eps + eps * eps)));
    if (len < 1) throw std::invalid_argument("epoch length floor(k(1-eps+eps^2)) must be >= 1");
    return len;
}

class CycleFollowerStrategy final : public OptimizerStrategy {
public:
    CycleFollowerStrategy(const ReducedGame& rg, const HamCycle& cycle, double k)
        : epoch_actions_(tour_epoch_actions(rg, cycle)), epoch_len_(tour_epoch_length(rg, k)) {}

    int next_action(long t, const Trace&, const std::vector<double>&, const GameMatrices&) override {
        long epoch = (t - 1) / epoch_len_;
        if (epoch >= static_cast<long>(epoch_actions_.size())) return epoch_actions_.back();
        return epoch_actions_[static_cast<size_t>(epoch)];
    }
    std::string name() const override { return "cycle_follower"; }

private:
    std::vector<int> epoch_actions_;
    long epoch_len_;
};

class DiamondPrefixStrategy final : public OptimizerStrategy {
public:
    DiamondPrefixStrategy(const ReducedGame& rg, const HamCycle& cycle, double k_eff)
        : diamond_(rg.diamond_action()),
          prefix_(static_cast<long>(std::floor((1.0 - rg.params.epsilon) * rg.params.T))),
          epoch_actions_(tour_epoch_actions(rg, cycle)) {
        if (diamond_ < 0) throw std::invalid_argument("diamond_prefix requires a noinit game");
        long remaining = rg.params.T - prefix_;
        if (k_eff <= 0.0) k_eff = static_cast<double>(remaining) / rg.n_vertices();
        epoch_len_ = tour_epoch_length(rg, k_eff);
    }

    int next_action(long t, const Trace&, const std::vector<double>&, const GameMatrices&) override {
        if (t <= prefix_) return diamond_;
        long s = t - prefix_;  // 1-based step within the tour phase
        long epoch = (s - 1) / epoch_len_;
        if (epoch >= static_cast<long>(epoch_actions_.size())) return epoch_actions_.back();
        return epoch_actions_[static_cast<size_t>(epoch)];
    }
    std::string name() const override { return "diamond_prefix"; }

private:
    int diamond_;
    long prefix_;
    std::vector<int> epoch_actions_;
    long epoch_len_ = 1;
};

std::map<std::string, std::string, std::less<>> parse_kv(std::string_view s) {
    std::map<std::string, std::string, std::less<>> out;
    if (s.empty()) return out;
    for (auto part : split(s, ',')) {
        auto eq = part.find('=');
        if (eq == std::string_view::npos)
            throw std::invalid_argument("strategy parameter must be key=value: '" + std::string(part) + "'");
        out[std::string(trim(part.substr(0, eq)))] = std::string(trim(part.substr(eq + 1)));
    }
    return out;
}

}  // namespace

std::unique_ptr<OptimizerStrategy> make_constant(int action) {
    return std::make_unique<ConstantStrategy>(action);
}

std::unique_ptr<OptimizerStrategy> make_random(uint64_t seed) {
    return std::make_unique<RandomStrategy>(seed);
}

std::unique_ptr<OptimizerStrategy> make_greedy_myopic() {
    return std::make_unique<GreedyMyopicStrategy>();
}

std::unique_ptr<OptimizerStrategy> make_fixed_sequence(std::vector<int> actions, std::string name) {
    return std::make_unique<FixedSequenceStrategy>(std::move(actions), std::move(name));
}

std::unique_ptr<OptimizerStrategy> make_cycle_follower(const ReducedGame& rg, const HamCycle& cycle,
                                                       double k_override) {
    double k = k_override > 0.0 ? k_override : rg.params.k;
    return std::make_unique<CycleFollowerStrategy>(rg, cycle, k);
}

std::unique_ptr<OptimizerStrategy> make_diamond_prefix(const ReducedGame& rg, const HamCycle& cycle,
                                                       double k_eff) {
    return std::make_unique<DiamondPrefixStrategy>(rg, cycle, k_eff);
}

std::pair<std::string, std::map<std::string, std::string>> parse_strategy_spec(
    const std::string& spec) {
    std::string_view sv(spec);
    std::string name;
    std::map<std::string, std::string> kv;
    if (auto colon = sv.find(':'); colon != std::string_view::npos) {
        name = std::string(trim(sv.substr(0, colon)));
        for (auto& [k, v] : parse_kv(sv.substr(colon + 1))) kv[k] = v;
    } else {
        name = std::string(trim(sv));
    }
    return {name, kv};
}

std::unique_ptr<OptimizerStrategy> make_strategy(const std::string& spec, const ReducedGame* rg,
                                                 const HamCycle* cycle) {
    auto [name, kv] = parse_strategy_spec(spec);

    auto need_game = [&]() -> const ReducedGame& {
        if (!rg) throw std::invalid_argument("strategy '" + name + "' needs a reduction-built game");
        return *rg;
    };
    auto need_cycle = [&]() -> const HamCycle& {
        if (!cycle) throw std::invalid_argument("strategy '" + name + "' needs a reference cycle");
        return *cycle;
    };

    if (name == "constant") {
        auto it = kv.find("action");
        int a = it == kv.end() ? 0 : static_cast<int>(parse_long(it->second));
        return make_constant(a);
    }
    if (name == "random") {
        auto it = kv.find("seed");
        uint64_t seed = it == kv.end() ? 0 : static_cast<uint64_t>(parse_long(it->second));
        return make_random(seed);
    }
    if (name == "greedy" || name == "greedy_myopic") return make_greedy_myopic();
    if (name == "cycle_follower") {
        auto it = kv.find("k");
        double k = it == kv.end() ? 0.0 : parse_double(it->second);
        return make_cycle_follower(need_game(), need_cycle(), k);
    }
    if (name == "diamond_prefix") {
        auto it = kv.find("k_eff");
        double k_eff = it == kv.end() ? 0.0 : parse_double(it->second);
        return make_diamond_prefix(need_game(), need_cycle(), k_eff);
    }
    throw std::invalid_argument("unknown strategy '" + name + "'");
}

BruteForceResult brute_force_optimal(const GameMatrices& game, long T, double eta,
                                     const std::vector<double>& r0, double max_sequences) {
    game.validate();
    const int m = game.num_optimizer_actions;
    if (T < 0) throw std::invalid_argument("T must be >= 0");
    if (T > 0 && static_cast<double>(T) * std::log(static_cast<double>(m)) >
                     std::log(max_sequences) + 1e-9)
        throw std::invalid_argument("brute force refused: m^T exceeds the budget of " +
                                    format_double(max_sequences) + " sequences");

    std::vector<double> start = r0;
    if (start.empty()) start.assign(game.num_learner_actions, 0.0);

    BruteForceResult res;
    res.best_reward = -std::numeric_limits<double>::infinity();
    if (T == 0) {
        res.best_reward = 0.0;
        res.sequences_examined = 1;
        return res;
    }

    // One learner state per depth; the distribution at a depth is shared by
    // every branch taken from it.
    std::vector<MwuState> states(static_cast<size_t>(T) + 1);
    states[0] = MwuState::init(eta, start);
    std::vector<int> seq(static_cast<size_t>(T), 0);

    auto dfs = [&](auto&& self, long depth, double reward) -> void {
        if (depth == T) {
            res.sequences_examined += 1;
            if (reward > res.best_reward) {
                res.best_reward = reward;
                res.best_sequence = seq;
            }
            return;
        }
        std::vector<double> y = mwu_distribution(states[static_cast<size_t>(depth)]);
        for (int a = 0; a < m; ++a) {
            double step = 0.0;
            for (int b = 0; b < game.num_learner_actions; ++b) step += game.a(a, b) * y[b];
            seq[static_cast<size_t>(depth)] = a;
            auto& next = states[static_cast<size_t>(depth) + 1];
            next = states[static_cast<size_t>(depth)];
            for (int b = 0; b < game.num_learner_actions; ++b) next.Y[b] += game.b(a, b);
            next.t += 1;
            self(self, depth + 1, reward + step);
        }
    };
    dfs(dfs, 0, 0.0);
    return res;
}

}  // namespace hedgelab
