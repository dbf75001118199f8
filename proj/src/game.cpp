#include "hedgelab/game.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "hedgelab/util.hpp"

namespace hedgelab {

GameMatrices GameMatrices::zeros(int m, int n) {
    if (m < 1 || n < 1) throw std::invalid_argument("game dimensions must be >= 1");
    GameMatrices g;
    g.num_optimizer_actions = m;
    g.num_learner_actions = n;
    g.A.assign(static_cast<size_t>(m) * n, 0.0);
    g.B.assign(static_cast<size_t>(m) * n, 0.0);
    return g;
}

void GameMatrices::validate() const {
    size_t want = static_cast<size_t>(num_optimizer_actions) * num_learner_actions;
    if (num_optimizer_actions < 1 || num_learner_actions < 1)
        throw std::invalid_argument("game dimensions must be >= 1");
    if (A.size() != want || B.size() != want)
        throw std::invalid_argument("payoff table size mismatch");
    for (double v : A)
        if (!std::isfinite(v)) throw std::invalid_argument("non-finite entry in A");
    for (double v : B)
        if (!std::isfinite(v)) throw std::invalid_argument("non-finite entry in B");
}

std::string serialize_game(const GameMatrices& g) {
    g.validate();
    std::string out;
    out.reserve(g.A.size() * 8 + g.B.size() * 8);
    out += std::to_string(g.num_optimizer_actions);
    out += ' ';
    out += std::to_string(g.num_learner_actions);
    out += '\n';
    auto emit = [&](const std::vector<double>& t) {
        for (int x = 0; x < g.num_optimizer_actions; ++x) {
            for (int b = 0; b < g.num_learner_actions; ++b) {
                if (b > 0) out += ' ';
                out += format_double(t[static_cast<size_t>(x) * g.num_learner_actions + b]);
            }
            out += '\n';
        }
    };
    emit(g.A);
    out += '\n';
    emit(g.B);
    return out;
}

GameMatrices parse_game(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("empty game file");
    auto dims = tokens(line);
    if (dims.size() != 2) throw std::invalid_argument("game file line 1 must be 'm n'");
    int m = static_cast<int>(parse_long(dims[0]));
    int n = static_cast<int>(parse_long(dims[1]));
    GameMatrices g = GameMatrices::zeros(m, n);

    auto read_table = [&](std::vector<double>& t, const char* which) {
        for (int x = 0; x < m; ++x) {
            if (!std::getline(in, line))
                throw std::invalid_argument(std::string("game file truncated in ") + which);
            auto toks = tokens(line);
            if (static_cast<int>(toks.size()) != n)
                throw std::invalid_argument(std::string("wrong entry count in ") + which +
                                            " row " + std::to_string(x + 1));
            for (int b = 0; b < n; ++b) t[static_cast<size_t>(x) * n + b] = parse_double(toks[b]);
        }
    };
    read_table(g.A, "A");
    if (!std::getline(in, line) || !trim(line).empty())
        throw std::invalid_argument("expected blank line between A and B");
    read_table(g.B, "B");
    g.validate();
    return g;
}

}  // namespace hedgelab
