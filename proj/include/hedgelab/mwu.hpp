#pragma once

#include <vector>

#include "hedgelab/game.hpp"

namespace hedgelab {

// Hedge learner state. Y holds cumulative rewards per learner action,
// including the initialization r0, so the played distribution at step t+1
// is softmax(eta * Y) over the history through step t.
struct MwuState {
    double eta = 0.0;
    std::vector<double> Y;
    long t = 0;

    static MwuState init(double eta, std::vector<double> r0) {
        MwuState s;
        s.eta = eta;
        s.Y = std::move(r0);
        return s;
    }
};

// y(b) = exp(eta*Y(b)) / sum_b' exp(eta*Y(b')), evaluated in shifted
// log-space (subtract max) so any finite Y is safe from overflow.
std::vector<double> mwu_distribution(const MwuState& state);

// Same softmax over an arbitrary reward vector.
std::vector<double> softmax_rewards(double eta, const std::vector<double>& rewards);

struct StepOutcome {
    std::vector<double> y;   // distribution the learner committed this step
    double optimizer_reward = 0.0;  // row x of A dotted with y
    double learner_reward = 0.0;    // row x of B dotted with y
};

// One round: the learner commits y from the current history, then the
// history absorbs the optimizer's pure action x (Y += row x of B).
StepOutcome mwu_step(const GameMatrices& game, MwuState& state, int x);

}  // namespace hedgelab
