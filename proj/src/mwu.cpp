#include "hedgelab/mwu.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hedgelab {

std::vector<double> softmax_rewards(double eta, const std::vector<double>& rewards) {
    if (rewards.empty()) throw std::invalid_argument("empty reward vector");
    for (double v : rewards)
        if (!std::isfinite(v)) throw std::domain_error("non-finite cumulative reward");
    double hi = -std::numeric_limits<double>::infinity();
    for (double v : rewards) hi = std::max(hi, eta * v);
    std::vector<double> y(rewards.size());
    double total = 0.0;
    for (size_t b = 0; b < rewards.size(); ++b) {
        y[b] = std::exp(eta * rewards[b] - hi);
        total += y[b];
    }
    for (double& v : y) v /= total;
    return y;
}

std::vector<double> mwu_distribution(const MwuState& state) {
    return softmax_rewards(state.eta, state.Y);
}

StepOutcome mwu_step(const GameMatrices& game, MwuState& state, int x) {
    if (x < 0 || x >= game.num_optimizer_actions)
        throw std::out_of_range("optimizer action index out of range");
    if (static_cast<int>(state.Y.size()) != game.num_learner_actions)
        throw std::invalid_argument("state dimension does not match game");

    StepOutcome out;
    out.y = mwu_distribution(state);
    for (int b = 0; b < game.num_learner_actions; ++b) {
        out.optimizer_reward += game.a(x, b) * out.y[b];
        out.learner_reward += game.b(x, b) * out.y[b];
    }
    for (int b = 0; b < game.num_learner_actions; ++b) state.Y[b] += game.b(x, b);
    state.t += 1;
    return out;
}

}  // namespace hedgelab
