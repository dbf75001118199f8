#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hedgelab/analysis.hpp"
#include "hedgelab/config.hpp"
#include "hedgelab/strategies.hpp"

namespace hedgelab {

struct BuildResult {
    ReducedGame game;
    std::optional<HamCycle> cycle;  // reference max-weight cycle when known
};

ReductionParams params_from_config(const RunConfig& cfg);

// Resolve the instance (file, generator spec, or default planted), the
// reference cycle, and compile the game for the configured mode.
BuildResult build_from_config(const RunConfig& cfg);

Trace run_simulation(const RunConfig& cfg, const BuildResult& build);

struct CheckLine {
    std::string name;
    bool hypothesis_ok = false;
    double bound = 0.0;
    double observed = 0.0;
    bool pass = true;
};

struct VerifyResult {
    Trace trace;
    std::vector<CheckLine> lines;
    bool all_pass = true;
    std::string report_text;   // flat key = value dump
    std::string summary_text;  // one line per check
};

// Simulate under the config, then run every requested lemma check.
// Checks whose hypotheses fail are reported without asserting.
VerifyResult run_verify(const RunConfig& cfg, const BuildResult& build);

// Subcommand bodies; return process exit codes.
int cmd_gen_tsp(const RunConfig& cfg);
int cmd_build_game(const RunConfig& cfg);
int cmd_simulate(const RunConfig& cfg);
int cmd_verify(const RunConfig& cfg);
int cmd_brute_force(const RunConfig& cfg);
int cmd_sweep(const RunConfig& cfg);

}  // namespace hedgelab
