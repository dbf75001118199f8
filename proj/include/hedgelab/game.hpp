#pragma once

#include <optional>
#include <string>
#include <vector>

namespace hedgelab {

// Normal-form game between an optimizer (row player, pure actions) and a
// learner (column player, mixed play). A(x,b) pays the optimizer, B(x,b)
// pays the learner. Row-major dense storage.
struct GameMatrices {
    int num_optimizer_actions = 0;
    int num_learner_actions = 0;
    std::vector<double> A;  // size m*n
    std::vector<double> B;  // size m*n

    // Optional symbolic names (filled by the reduction builder).
    std::vector<std::string> optimizer_labels;
    std::vector<std::string> learner_labels;

    double a(int x, int b) const { return A[static_cast<size_t>(x) * num_learner_actions + b]; }
    double b(int x, int b) const { return B[static_cast<size_t>(x) * num_learner_actions + b]; }
    double& a(int x, int b) { return A[static_cast<size_t>(x) * num_learner_actions + b]; }
    double& b(int x, int b) { return B[static_cast<size_t>(x) * num_learner_actions + b]; }

    static GameMatrices zeros(int m, int n);

    // All entries finite and dimensions consistent; throws otherwise.
    void validate() const;

    bool operator==(const GameMatrices& o) const {
        return num_optimizer_actions == o.num_optimizer_actions &&
               num_learner_actions == o.num_learner_actions && A == o.A && B == o.B;
    }
};

// Graph semantics for optimizer actions of a reduction-built game, consumed
// by the simulator to tally degrees and detect the first excess time online.
struct ActionGraphMeta {
    struct EdgeRef {
        int tail = -1;  // vertex the edge leaves
        int head = -1;  // vertex the edge enters
        bool diamond = false;
    };
    int n_vertices = 0;
    std::vector<EdgeRef> optimizer_edges;  // one per optimizer action
    double k = 0.0;
    double delta = 0.0;  // excess threshold is k + delta
};

// Text format: line 1 "m n", m lines of n A entries, one blank line,
// m lines of n B entries. Doubles in shortest round-trip form.
std::string serialize_game(const GameMatrices& g);
GameMatrices parse_game(const std::string& text);

}  // namespace hedgelab
