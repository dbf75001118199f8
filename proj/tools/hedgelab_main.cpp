// Batch experiment runner: generate instances, compile reduction games, run
// simulations and lemma verification, and emit plot-ready CSVs.

#include <CLI11.hpp>
#include <deque>
#include <iostream>

#include "hedgelab/runner.hpp"

namespace {

struct Flags {
    std::string config, mode, T, alpha, beta, epsilon, eta, n, k, delta, p, k_star, gamma,
        dagger, strategy, seed, out, thin, checks, tsp, gen, cycle, density, game, r0, workers;
    bool planted = false, sampled = false, scale_half = false, convert_maxtsp = false;
};

void add_common(CLI::App* cmd, Flags& f) {
    cmd->add_option("--config", f.config, "flat key = value config file");
    cmd->add_option("--mode", f.mode, "init | noinit");
    cmd->add_option("--T", f.T, "horizon");
    cmd->add_option("--alpha", f.alpha);
    cmd->add_option("--beta", f.beta);
    cmd->add_option("--epsilon", f.epsilon);
    cmd->add_option("--eta", f.eta, "learning-rate override");
    cmd->add_option("--n", f.n, "vertex-count override");
    cmd->add_option("--k", f.k, "budget override");
    cmd->add_option("--delta", f.delta);
    cmd->add_option("--p", f.p, "copy-count override");
    cmd->add_option("--k-star", f.k_star);
    cmd->add_option("--gamma", f.gamma);
    cmd->add_option("--dagger", f.dagger, "dagger edge as 'u v', 1-based");
    cmd->add_option("--strategy", f.strategy, "NAME[:k=v,...]");
    cmd->add_option("--seed", f.seed);
    cmd->add_option("--out", f.out, "output directory");
    cmd->add_option("--thin", f.thin, "distribution storage stride");
    cmd->add_option("--checks", f.checks, "comma list of checks, or all");
    cmd->add_option("--tsp", f.tsp, "instance file");
    cmd->add_option("--gen", f.gen, "generator spec, e.g. planted:seed=7");
    cmd->add_option("--cycle", f.cycle, "reference cycle file");
    cmd->add_option("--density", f.density, "weight-2 density for gen-tsp");
    cmd->add_option("--game", f.game, "raw game file (brute-force)");
    cmd->add_option("--r0", f.r0, "initialization file (brute-force)");
    cmd->add_option("--workers", f.workers, "sweep worker count");
    cmd->add_flag("--planted", f.planted, "gen-tsp: plant an all-2 cycle");
    cmd->add_flag("--sampled", f.sampled, "sample learner actions instead of expectations");
    cmd->add_flag("--scale-half", f.scale_half, "halve payoffs, double eta");
    cmd->add_flag("--convert-maxtsp", f.convert_maxtsp, "flip weights of the loaded instance");
}

hedgelab::RunConfig to_config(CLI::App* cmd, const Flags& f) {
    hedgelab::RunConfig cfg;
    if (cmd->count("--config")) cfg = hedgelab::load_config_file(f.config);
    auto ov = [&](const char* flag, const char* key, const std::string& v) {
        if (cmd->count(flag)) cfg.set(key, v);
    };
    ov("--mode", "mode", f.mode);
    ov("--T", "T", f.T);
    ov("--alpha", "alpha", f.alpha);
    ov("--beta", "beta", f.beta);
    ov("--epsilon", "epsilon", f.epsilon);
    ov("--eta", "eta", f.eta);
    ov("--n", "n", f.n);
    ov("--k", "k", f.k);
    ov("--delta", "delta", f.delta);
    ov("--p", "p", f.p);
    ov("--k-star", "k_star", f.k_star);
    ov("--gamma", "gamma", f.gamma);
    ov("--dagger", "dagger", f.dagger);
    ov("--strategy", "strategy", f.strategy);
    ov("--seed", "seed", f.seed);
    ov("--out", "out", f.out);
    ov("--thin", "thin", f.thin);
    ov("--checks", "checks", f.checks);
    ov("--tsp", "tsp", f.tsp);
    ov("--gen", "gen", f.gen);
    ov("--cycle", "cycle", f.cycle);
    ov("--density", "density", f.density);
    ov("--game", "game", f.game);
    ov("--r0", "r0", f.r0);
    ov("--workers", "workers", f.workers);
    if (cmd->count("--planted")) cfg.set("planted", "1");
    if (cmd->count("--sampled")) cfg.set("sampled", "1");
    if (cmd->count("--scale-half")) cfg.set("scale_half", "1");
    if (cmd->count("--convert-maxtsp")) cfg.set("convert_maxtsp", "1");
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hedgelab: optimizer-vs-Hedge repeated-game simulation lab"};
    app.require_subcommand(1);

    struct Sub {
        CLI::App* cmd;
        Flags flags;
        int (*run)(const hedgelab::RunConfig&);
    };
    std::deque<Sub> subs;  // options bind references into flags; keep them put
    auto add = [&](const char* name, const char* help, int (*run)(const hedgelab::RunConfig&)) {
        subs.push_back({app.add_subcommand(name, help), {}, run});
        add_common(subs.back().cmd, subs.back().flags);
    };
    add("gen-tsp", "generate a (1,2) instance file", hedgelab::cmd_gen_tsp);
    add("build-game", "compile an instance into a reduction game", hedgelab::cmd_build_game);
    add("simulate", "run one simulation and write trace + summary", hedgelab::cmd_simulate);
    add("verify", "simulate and run the lemma checks; exit 0 iff all pass", hedgelab::cmd_verify);
    add("brute-force", "exhaustive optimal sequence on a tiny game", hedgelab::cmd_brute_force);
    add("sweep", "grid of configs, aggregated CSV", hedgelab::cmd_sweep);

    CLI11_PARSE(app, argc, argv);

    for (auto& sub : subs) {
        if (!sub.cmd->parsed()) continue;
        try {
            return sub.run(to_config(sub.cmd, sub.flags));
        } catch (const std::exception& e) {
            std::cerr << app.get_name() << " " << sub.cmd->get_name() << ": " << e.what() << "\n";
            return 2;
        }
    }
    return 2;
}
