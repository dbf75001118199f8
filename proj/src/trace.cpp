#include "hedgelab/trace.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hedgelab/util.hpp"

namespace hedgelab {

std::vector<double> Trace::history_at(const GameMatrices& game, long t) const {
    if (t < 0 || t > horizon) throw std::out_of_range("history_at: t out of range");
    std::vector<double> Y = r0;
    if (Y.empty()) Y.assign(game.num_learner_actions, 0.0);
    for (long s = 0; s < t; ++s) {
        int x = optimizer_actions[static_cast<size_t>(s)];
        for (int b = 0; b < game.num_learner_actions; ++b) Y[b] += game.b(x, b);
    }
    return Y;
}

std::vector<double> Trace::distribution_at(const GameMatrices& game, long t) const {
    if (t < 1 || t > horizon + 1) throw std::out_of_range("distribution_at: t out of range");
    if (t <= horizon && (t - 1) % thin_stride == 0) {
        size_t idx = static_cast<size_t>((t - 1) / thin_stride);
        if (idx < learner_dists.size()) return learner_dists[idx];
    }
    return softmax_rewards(eta, history_at(game, t - 1));
}

Trace simulate(const GameMatrices& game, OptimizerStrategy& strategy, const SimOptions& opt) {
    game.validate();
    if (opt.horizon < 0) throw std::invalid_argument("horizon must be >= 0");
    if (opt.thin_stride < 1) throw std::invalid_argument("thin stride must be >= 1");
    const int n = game.num_learner_actions;
    const int m = game.num_optimizer_actions;

    std::vector<double> r0 = opt.r0;
    if (r0.empty()) r0.assign(n, 0.0);
    if (static_cast<int>(r0.size()) != n)
        throw std::invalid_argument("r0 length does not match learner action count");

    const ActionGraphMeta* meta = opt.meta;
    if (meta && static_cast<int>(meta->optimizer_edges.size()) != m)
        throw std::invalid_argument("graph metadata does not match optimizer action count");

    Trace tr;
    tr.horizon = opt.horizon;
    tr.eta = opt.eta;
    tr.r0 = r0;
    tr.sampled = opt.sampled;
    tr.seed = opt.seed;
    tr.thin_stride = opt.thin_stride;
    tr.optimizer_actions.reserve(opt.horizon);
    tr.opt_step_rewards.reserve(opt.horizon);
    tr.learner_step_rewards.reserve(opt.horizon);
    tr.cum_reward.reserve(opt.horizon);
    if (meta) {
        tr.has_graph_meta = true;
        tr.edge_counts.assign(m, 0);
        tr.d_in.assign(meta->n_vertices, 0);
        tr.d_out.assign(meta->n_vertices, 0);
    }

    MwuState state = MwuState::init(opt.eta, r0);
    Rng rng(opt.seed);
    double running = 0.0;

    for (long t = 1; t <= opt.horizon; ++t) {
        std::vector<double> y = mwu_distribution(state);
        int x = strategy.next_action(t, tr, y, game);
        if (x < 0 || x >= m)
            throw std::runtime_error("strategy '" + strategy.name() + "' emitted invalid action " +
                                     std::to_string(x) + " at step " + std::to_string(t));

        double opt_reward, lr_reward;
        if (opt.sampled) {
            // Draw the learner action by inverse CDF on the committed mixture.
            double u = rng.unit();
            int drawn = n - 1;
            double acc = 0.0;
            for (int b = 0; b < n; ++b) {
                acc += y[b];
                if (u < acc) {
                    drawn = b;
                    break;
                }
            }
            tr.sampled_actions.push_back(drawn);
            opt_reward = game.a(x, drawn);
            lr_reward = game.b(x, drawn);
        } else {
            opt_reward = 0.0;
            lr_reward = 0.0;
            for (int b = 0; b < n; ++b) {
                opt_reward += game.a(x, b) * y[b];
                lr_reward += game.b(x, b) * y[b];
            }
        }

        if ((t - 1) % opt.thin_stride == 0) tr.learner_dists.push_back(y);
        tr.optimizer_actions.push_back(x);
        tr.opt_step_rewards.push_back(opt_reward);
        tr.learner_step_rewards.push_back(lr_reward);
        running += opt_reward;
        tr.cum_reward.push_back(running);

        if (meta) {
            const auto& e = meta->optimizer_edges[static_cast<size_t>(x)];
            if (e.diamond) {
                tr.diamond_count += 1;
            } else {
                tr.edge_counts[static_cast<size_t>(x)] += 1;
                tr.d_out[static_cast<size_t>(e.tail)] += 1;
                tr.d_in[static_cast<size_t>(e.head)] += 1;
                if (!tr.t_max) {
                    double excess = meta->k + meta->delta;
                    if (static_cast<double>(tr.d_out[e.tail]) >= excess ||
                        static_cast<double>(tr.d_in[e.head]) >= excess)
                        tr.t_max = t;
                }
            }
        }

        for (int b = 0; b < n; ++b) state.Y[b] += game.b(x, b);
        state.t = t;
    }

    tr.final_Y = state.Y;
    return tr;
}

double regret(const Trace& trace, const GameMatrices& game) {
    double realized = 0.0;
    for (double v : trace.learner_step_rewards) realized += v;
    double best_fixed = -std::numeric_limits<double>::infinity();
    for (int b = 0; b < game.num_learner_actions; ++b) {
        double col = 0.0;
        for (int x : trace.optimizer_actions) col += game.b(x, b);
        best_fixed = std::max(best_fixed, col);
    }
    if (trace.optimizer_actions.empty()) best_fixed = 0.0;
    return realized - best_fixed;
}

std::string trace_to_csv(const Trace& trace) {
    std::string out = "t,x_action,opt_reward,learner_reward,cum_reward,y_top_action,y_top_mass\n";
    for (long t = 1; t <= static_cast<long>(trace.optimizer_actions.size()); ++t) {
        size_t i = static_cast<size_t>(t - 1);
        out += std::to_string(t);
        out += ',';
        out += std::to_string(trace.optimizer_actions[i]);
        out += ',';
        out += format_double(trace.opt_step_rewards[i]);
        out += ',';
        out += format_double(trace.learner_step_rewards[i]);
        out += ',';
        out += format_double(trace.cum_reward[i]);
        if ((t - 1) % trace.thin_stride == 0 &&
            static_cast<size_t>((t - 1) / trace.thin_stride) < trace.learner_dists.size()) {
            const auto& y = trace.learner_dists[static_cast<size_t>((t - 1) / trace.thin_stride)];
            size_t top = 0;
            for (size_t b = 1; b < y.size(); ++b)
                if (y[b] > y[top]) top = b;
            out += ',';
            out += std::to_string(top);
            out += ',';
            out += format_double(y[top]);
        } else {
            out += ",,";
        }
        out += '\n';
    }
    return out;
}

}  // namespace hedgelab
