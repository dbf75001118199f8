#include "hedgelab/runner.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <set>
#include <thread>

#include "hedgelab/util.hpp"

namespace hedgelab {

namespace {

ParamOverrides overrides_from_config(const RunConfig& cfg) {
    ParamOverrides ov;
    if (cfg.has("n")) ov.n = static_cast<int>(cfg.get_long("n", 0));
    if (cfg.has("k")) ov.k = cfg.get_double("k", 0);
    if (cfg.has("delta")) ov.delta = cfg.get_double("delta", 0);
    if (cfg.has("p")) ov.p = cfg.get_long("p", 1);
    if (cfg.has("k_star")) ov.k_star = cfg.get_double("k_star", 0);
    if (cfg.has("gamma")) ov.gamma = cfg.get_double("gamma", 0);
    if (cfg.has("eta")) ov.eta = cfg.get_double("eta", 0);
    if (cfg.has("dagger") && cfg.get("dagger") != "wrap") {
        auto toks = tokens(cfg.get("dagger"));
        if (toks.size() != 2) throw std::invalid_argument("dagger must be 'u v' (1-based) or wrap");
        ov.dagger_edge = {static_cast<int>(parse_long(toks[0])) - 1,
                          static_cast<int>(parse_long(toks[1])) - 1};
    }
    ov.scale_half = cfg.get_bool("scale_half", false);
    return ov;
}

GameMode mode_from_config(const RunConfig& cfg) {
    std::string mode = cfg.get("mode", "init");
    if (mode == "init") return GameMode::init;
    if (mode == "noinit") return GameMode::noinit;
    throw std::invalid_argument("mode must be init or noinit, got '" + mode + "'");
}

void ensure_out_dir(const std::string& out) {
    if (out.empty()) throw std::invalid_argument("output directory (out=...) is required");
    std::filesystem::create_directories(out);
}

std::string join_path(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

double hedge_regret_bound(const ReducedGame& rg, long T) {
    double eta = rg.params.effective_eta();
    double max_b = 0.0;
    for (double v : rg.game.B) max_b = std::max(max_b, std::abs(v));
    return std::log(static_cast<double>(rg.game.num_learner_actions)) / eta +
           eta * static_cast<double>(T) * max_b * max_b;
}

std::string check_line_text(const CheckLine& c) {
    std::string s = "check=" + c.name;
    s += " hypothesis_ok=" + std::string(c.hypothesis_ok ? "1" : "0");
    s += " bound=" + format_double(c.bound);
    s += " observed=" + format_double(c.observed);
    s += " pass=" + std::string(c.pass ? "1" : "0");
    return s;
}

}  // namespace

ReductionParams params_from_config(const RunConfig& cfg) {
    long T = cfg.get_long("T", 0);
    if (T <= 0) throw std::invalid_argument("config needs T >= 1");
    return derive_params(T, cfg.get_double("alpha", 1.0), cfg.get_double("beta", 1.0),
                         cfg.get_double("epsilon", 0.25), mode_from_config(cfg),
                         overrides_from_config(cfg));
}

BuildResult build_from_config(const RunConfig& cfg) {
    ReductionParams params = params_from_config(cfg);

    TspInstance inst;
    std::optional<HamCycle> cycle;
    if (cfg.has("tsp")) {
        inst = parse_tsp(read_file(cfg.get("tsp")));
        if (cfg.get_bool("convert_maxtsp", false)) inst = to_max_tsp(inst);
    } else {
        auto [gen_name, gen_kv] = parse_strategy_spec(cfg.get("gen", "planted"));
        uint64_t seed = gen_kv.count("seed") ? static_cast<uint64_t>(parse_long(gen_kv["seed"]))
                                             : static_cast<uint64_t>(cfg.get_long("seed", 0));
        if (gen_name == "planted") {
            auto [pi, pc] = gen_planted(params.n, seed);
            inst = pi;
            cycle = pc;
        } else if (gen_name == "random") {
            double density =
                gen_kv.count("density") ? parse_double(gen_kv["density"]) : 0.5;
            inst = gen_instance(params.n, density, seed);
        } else {
            throw std::invalid_argument("unknown generator '" + gen_name + "'");
        }
    }
    if (inst.n != params.n)
        throw std::invalid_argument("instance n=" + std::to_string(inst.n) +
                                    " does not match params n=" + std::to_string(params.n));

    if (cfg.has("cycle")) cycle = parse_cycle(read_file(cfg.get("cycle")), inst);
    if (!cycle && inst.n <= 9) cycle = brute_force_max_cycle(inst);

    // dagger = wrap pins the dagger to the reference cycle's closing edge,
    // the configuration the tour strategy's reward floor is stated for.
    if (cfg.get("dagger") == "wrap") {
        if (!cycle) throw std::invalid_argument("dagger = wrap needs a reference cycle");
        RunConfig patched = cfg;
        patched.set("dagger", std::to_string(cycle->order.back() + 1) + " " +
                                  std::to_string(cycle->order.front() + 1));
        params = params_from_config(patched);
    }

    BuildResult out;
    out.cycle = cycle;
    out.game = params.mode == GameMode::init ? build_init_game(inst, params)
                                             : build_noinit_game(inst, params);
    return out;
}

Trace run_simulation(const RunConfig& cfg, const BuildResult& build) {
    std::string spec = cfg.get("strategy", "cycle_follower");
    auto [name, kv] = parse_strategy_spec(spec);
    if (name == "random" && !kv.count("seed"))
        spec += (spec.find(':') == std::string::npos ? ":" : ",") +
                std::string("seed=") + std::to_string(cfg.get_long("seed", 0));
    auto strategy =
        make_strategy(spec, &build.game, build.cycle ? &*build.cycle : nullptr);

    SimOptions opt;
    opt.horizon = build.game.params.T;
    opt.eta = build.game.params.effective_eta();
    opt.r0 = build.game.r0;
    opt.thin_stride = static_cast<int>(cfg.get_long("thin", 1));
    opt.sampled = cfg.get_bool("sampled", false);
    opt.seed = static_cast<uint64_t>(cfg.get_long("seed", 0));
    opt.meta = &build.game.meta;
    return simulate(build.game.game, *strategy, opt);
}

VerifyResult run_verify(const RunConfig& cfg, const BuildResult& build) {
    const ReducedGame& rg = build.game;
    const auto& pr = rg.params;
    const double scale = pr.payoff_scale();

    VerifyResult res;
    res.trace = run_simulation(cfg, build);
    const Trace& trace = res.trace;

    std::set<std::string> wanted;
    bool all_checks = true;
    if (cfg.get("checks", "all") != "all") {
        all_checks = false;
        for (auto part : split(cfg.get("checks"), ','))
            wanted.insert(std::string(trim(part)));
    }
    auto requested = [&](const std::string& name) {
        return all_checks || wanted.count(name) > 0;
    };

    auto [strat_name, strat_kv] = parse_strategy_spec(cfg.get("strategy", "cycle_follower"));

    std::string report;
    auto rep_kv = [&](const std::string& k, const std::string& v) {
        report += k + " = " + v + "\n";
    };
    rep_kv("mode", pr.mode == GameMode::init ? "init" : "noinit");
    rep_kv("T", std::to_string(pr.T));
    rep_kv("n", std::to_string(pr.n));
    rep_kv("eta", format_double(pr.eta));
    rep_kv("k", format_double(pr.k));
    rep_kv("delta", format_double(pr.delta));
    rep_kv("epsilon", format_double(pr.epsilon));
    rep_kv("strategy", cfg.get("strategy", "cycle_follower"));
    rep_kv("seed", std::to_string(cfg.get_long("seed", 0)));
    rep_kv("R", format_double(trace.total_reward()));
    rep_kv("regret", format_double(regret(trace, rg.game)));
    rep_kv("t_max", trace.t_max ? std::to_string(*trace.t_max) : "none");
    rep_kv("feas_opt_lb", pr.feas_opt_lb ? "1" : "0");
    rep_kv("feas_horizon", pr.feas_horizon ? "1" : "0");
    rep_kv("feas_delta", pr.feas_delta ? "1" : "0");

    auto add = [&](CheckLine line) {
        res.all_pass = res.all_pass && line.pass;
        res.lines.push_back(std::move(line));
    };

    if (pr.mode == GameMode::init) {
        PlayStats stats = compute_stats(trace, rg);

        if (requested("closed_forms")) {
            auto cf = closed_form_check(trace, rg);
            add({"closed_forms", true, 1e-9, cf.max_abs_dev, cf.pass});
        }
        if (requested("low_reward")) {
            auto lr = low_reward_check(trace, rg);
            add({"low_reward", true, lr.threshold, lr.min_best_action, lr.pass});
        }
        if (requested("edge_mass")) {
            auto em = edge_mass_check(trace, rg);
            add({"edge_mass", em.hypothesis_ok, em.threshold, em.worst_mass, em.pass});
        }
        if (requested("excess")) {
            auto ex = excess_punishment_check(trace, rg);
            bool hyp = ex.hypothesis_ok && ex.applicable;
            add({"excess_mass", hyp, ex.edge_mass_threshold, ex.worst_edge_mass, ex.pass});
            add({"excess_reward", hyp, ex.next_reward_threshold, ex.worst_next_reward, ex.pass});
            add({"excess_post", hyp, ex.post_tmax_threshold, ex.post_tmax_reward, ex.pass});
        }
        if (requested("combine") || requested("heavy") || requested("aux_degree")) {
            auto br = bound_combine(trace, stats, rg);
            double reward_at_eval =
                br.t_eval > 0 ? trace.cum_reward[static_cast<size_t>(br.t_eval - 1)] : 0.0;
            if (requested("heavy"))
                add({"heavy", br.hypothesis_ok, br.heavy_slack_bound, reward_at_eval,
                     !br.hypothesis_ok || br.heavy_ok});
            if (requested("aux_degree"))
                add({"aux_degree", pr.feas_delta && pr.k * (1.0 - pr.epsilon) > pr.delta, 1.0,
                     br.aux_degree_ok ? 1.0 : 2.0,
                     !(pr.feas_delta && pr.k * (1.0 - pr.epsilon) > pr.delta) ||
                         br.aux_degree_ok});
            if (requested("combine")) {
                add({"combine", br.hypothesis_ok, br.combined_bound, br.observed_reward, br.pass});
                rep_kv("upper_bound", format_double(br.combined_bound));
                rep_kv("stitched_weight", std::to_string(br.stitched_weight));
            }
        }
        if (requested("opt_lb") && build.cycle) {
            double k_played = strat_kv.count("k") ? parse_double(strat_kv["k"]) : pr.k;
            double lb = opt_lb_bound(pr, build.cycle->weight, k_played);
            bool hyp = strat_name == "cycle_follower" && pr.feas_opt_lb && pr.feas_horizon;
            add({"opt_lb", hyp, lb, trace.total_reward(),
                 !hyp || trace.total_reward() >= lb - 1e-9});
            rep_kv("lower_bound", format_double(lb));
        }
        if (requested("regret_bound") && pr.eta > 0.0) {
            double rb = hedge_regret_bound(rg, pr.T);
            double rv = regret(trace, rg.game);
            add({"regret_bound", true, rb, rv, rv <= rb + 1e-9});
        }
    } else {
        MassFacts mf = check_mass_facts(pr);
        if (requested("mass_facts")) {
            add({"mass_fact_lower", true, std::pow(static_cast<double>(pr.p), pr.epsilon),
                 mf.factor_lower, true});
            add({"mass_fact_upper", true, std::pow(static_cast<double>(pr.p), -pr.epsilon),
                 mf.factor_upper, true});
            rep_kv("mass_facts_ok", mf.ok() ? "1" : "0");
        }
        if (requested("identity")) {
            double dev = check_reduction_identity(trace, rg);
            add({"identity", true, 1e-9, dev, dev <= 1e-9});
        }
        if (requested("critical")) {
            auto ct = critical_times(trace, rg);
            add({"critical_time", true, ct.t_diamond_star,
                 ct.lower_critical_time ? static_cast<double>(*ct.lower_critical_time) : -1.0,
                 true});
            rep_kv("t_diamond_star", format_double(ct.t_diamond_star));
            rep_kv("lower_critical_time",
                   ct.lower_critical_time ? std::to_string(*ct.lower_critical_time) : "none");
        }
        if (requested("truncation")) {
            auto tc = truncation_check(trace, rg);
            add({"truncation", tc.hypothesis_ok,
                 tc.slack_term + tc.post_threshold_reduced_reward, tc.total_reward, tc.pass});
        }
        if (requested("opt_lb_noinit") && build.cycle) {
            long prefix = static_cast<long>(std::floor((1.0 - pr.epsilon) * pr.T));
            double k_eff = strat_kv.count("k_eff")
                               ? parse_double(strat_kv["k_eff"])
                               : static_cast<double>(pr.T - prefix) / pr.n;
            bool feas_embedded =
                pr.eta * pr.epsilon * k_eff >=
                std::log(static_cast<double>(pr.n) * pr.n * pr.n) /
                    (pr.epsilon - pr.epsilon * pr.epsilon);
            double lb = opt_lb_noinit_bound(pr, build.cycle->weight);
            bool hyp = strat_name == "diamond_prefix" && mf.ok() && feas_embedded;
            add({"opt_lb_noinit", hyp, lb, trace.total_reward(),
                 !hyp || trace.total_reward() >= lb - 1e-9});
            rep_kv("lower_bound", format_double(lb));
        }
    }

    (void)scale;
    for (const auto& line : res.lines) report += check_line_text(line) + "\n";
    res.report_text = std::move(report);
    for (const auto& line : res.lines) res.summary_text += check_line_text(line) + "\n";
    return res;
}

int cmd_gen_tsp(const RunConfig& cfg) {
    int n = static_cast<int>(cfg.get_long("n", 0));
    if (n < 3) {
        std::cerr << "gen-tsp: n must be >= 3\n";
        return 2;
    }
    uint64_t seed = static_cast<uint64_t>(cfg.get_long("seed", 0));
    ensure_out_dir(cfg.get("out"));
    if (cfg.get_bool("planted", false)) {
        auto [inst, cycle] = gen_planted(n, seed);
        write_file(join_path(cfg.get("out"), "instance.tsp"), serialize_tsp(inst));
        write_file(join_path(cfg.get("out"), "cycle.txt"), serialize_cycle(cycle));
        std::cout << "wrote instance.tsp and cycle.txt (planted weight " << cycle.weight << ")\n";
    } else {
        auto inst = gen_instance(n, cfg.get_double("density", 0.5), seed);
        write_file(join_path(cfg.get("out"), "instance.tsp"), serialize_tsp(inst));
        std::cout << "wrote instance.tsp\n";
    }
    return 0;
}

int cmd_build_game(const RunConfig& cfg) {
    BuildResult build = build_from_config(cfg);
    ensure_out_dir(cfg.get("out"));
    write_file(join_path(cfg.get("out"), "game.txt"), serialize_game(build.game.game));
    write_file(join_path(cfg.get("out"), "meta.txt"), serialize_reduction_meta(build.game));
    std::cout << "built " << build.game.game.num_optimizer_actions << " x "
              << build.game.game.num_learner_actions << " game\n";
    return 0;
}

int cmd_simulate(const RunConfig& cfg) {
    BuildResult build = build_from_config(cfg);
    VerifyResult res = run_verify(cfg, build);
    ensure_out_dir(cfg.get("out"));
    write_file(join_path(cfg.get("out"), "trace.csv"), trace_to_csv(res.trace));
    write_file(join_path(cfg.get("out"), "summary.txt"), res.report_text);
    std::cout << "R = " << format_double(res.trace.total_reward()) << "\n";
    std::cout << res.summary_text;
    return 0;
}

int cmd_verify(const RunConfig& cfg) {
    BuildResult build = build_from_config(cfg);
    if (build.game.params.mode == GameMode::noinit) {
        MassFacts mf = check_mass_facts(build.game.params);
        if (!mf.ok())
            std::cerr << "warning: critical-time mass facts fail for this configuration "
                         "(factor_lower="
                      << format_double(mf.factor_lower)
                      << ", factor_upper=" << format_double(mf.factor_upper)
                      << "); dependent checks run report-only\n";
    }
    VerifyResult res = run_verify(cfg, build);
    ensure_out_dir(cfg.get("out"));
    write_file(join_path(cfg.get("out"), "report.txt"), res.report_text);
    write_file(join_path(cfg.get("out"), "summary.txt"), res.summary_text);
    write_file(join_path(cfg.get("out"), "trace.csv"), trace_to_csv(res.trace));
    std::cout << res.summary_text;
    std::cout << (res.all_pass ? "all-pass\n" : "FAILURES above\n");
    return res.all_pass ? 0 : 1;
}

int cmd_brute_force(const RunConfig& cfg) {
    GameMatrices game;
    std::vector<double> r0;
    double eta;
    long T = cfg.get_long("T", 0);
    if (cfg.has("game")) {
        game = parse_game(read_file(cfg.get("game")));
        eta = cfg.get_double("eta", 1.0);
        if (cfg.has("r0")) {
            for (auto tok : tokens(read_file(cfg.get("r0")))) r0.push_back(parse_double(tok));
        }
    } else {
        BuildResult build = build_from_config(cfg);
        game = build.game.game;
        r0 = build.game.r0;
        eta = build.game.params.effective_eta();
        if (T == 0) T = build.game.params.T;
    }
    BruteForceResult res;
    try {
        res = brute_force_optimal(game, T, eta, r0);
    } catch (const std::invalid_argument& e) {
        std::cerr << "brute-force: " << e.what() << "\n";
        return 2;
    }
    ensure_out_dir(cfg.get("out"));
    std::string seq;
    for (size_t i = 0; i < res.best_sequence.size(); ++i) {
        if (i) seq += ' ';
        seq += std::to_string(res.best_sequence[i]);
    }
    seq += '\n';
    write_file(join_path(cfg.get("out"), "sequence.txt"), seq);
    std::cout << "best reward = " << format_double(res.best_reward) << " over "
              << res.sequences_examined << " sequences\n";
    return 0;
}

int cmd_sweep(const RunConfig& cfg) {
    static const char* kSweepKeys[] = {"T", "alpha", "beta", "epsilon", "eta", "k", "seed", "strategy"};
    std::vector<RunConfig> combos{cfg};
    for (const char* key : kSweepKeys) {
        if (!cfg.has(key)) continue;
        auto vals = split(cfg.get(key), ',');
        if (vals.size() <= 1) continue;
        std::vector<RunConfig> next;
        for (const auto& base : combos)
            for (auto v : vals) {
                RunConfig c = base;
                c.set(key, std::string(trim(v)));
                next.push_back(std::move(c));
            }
        combos = std::move(next);
    }

    struct Row {
        std::string key;
        std::string csv;
        bool pass = true;
        std::string error;
    };
    std::vector<Row> rows(combos.size());
    std::atomic<size_t> cursor{0};
    unsigned workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                                       static_cast<unsigned>(combos.size())));
    if (cfg.has("workers")) workers = static_cast<unsigned>(cfg.get_long("workers", 1));

    auto work = [&]() {
        for (;;) {
            size_t i = cursor.fetch_add(1);
            if (i >= combos.size()) return;
            RunConfig c = combos[i];
            c.kv.erase("out");
            Row& row = rows[i];
            row.key = c.canonical();
            try {
                BuildResult build = build_from_config(c);
                VerifyResult res = run_verify(c, build);
                const auto& pr = build.game.params;
                double upper = 0.0, lower = 0.0;
                for (const auto& line : res.lines) {
                    if (line.name == "combine") upper = line.bound;
                    if (line.name == "opt_lb" || line.name == "opt_lb_noinit") lower = line.bound;
                }
                row.pass = res.all_pass;
                row.csv = c.get("mode", "init") + "," + std::to_string(pr.T) + "," +
                          format_double(pr.eta) + "," + format_double(pr.epsilon) + "," +
                          format_double(pr.k) + "," + std::to_string(c.get_long("seed", 0)) + "," +
                          c.get("strategy", "cycle_follower") + "," +
                          format_double(res.trace.total_reward()) + "," + format_double(lower) +
                          "," + format_double(upper) + "," + (res.all_pass ? "1" : "0");
            } catch (const std::exception& e) {
                row.pass = false;
                row.error = e.what();
                row.csv = "";
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();

    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.key < b.key; });

    std::string csv = "mode,T,eta,epsilon,k,seed,strategy,R,lower_bound,upper_bound,all_pass\n";
    bool all_pass = true;
    for (const auto& row : rows) {
        if (!row.error.empty()) {
            std::cerr << "sweep run failed [" << row.key << "]: " << row.error << "\n";
            all_pass = false;
            continue;
        }
        csv += row.csv + "\n";
        all_pass = all_pass && row.pass;
    }
    ensure_out_dir(cfg.get("out"));
    write_file(join_path(cfg.get("out"), "sweep.csv"), csv);
    std::cout << "ran " << rows.size() << " configurations; "
              << (all_pass ? "all-pass" : "FAILURES present") << "\n";
    return all_pass ? 0 : 1;
}

}  // namespace hedgelab
