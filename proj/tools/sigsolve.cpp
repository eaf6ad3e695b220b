// Command-line front end: solve / strategies / beliefs / verify / simulate /
// welfare / benchmarks over a config file, with CSV and JSON outputs.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sigsolve/sigsolve.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace sigsolve;

namespace {

struct Options {
    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::int64_t draws = 0;
    int grid_n = 0;
    double tol_scale = 1.0;
    int threads = -1;
    double r1 = 0.0, r2 = 0.0;
    std::string q_grid = "0:1:0.05";
    double noise_sd = 0.0;
    std::vector<double> density_thetas;
};

std::string hash_hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

struct Run {
    Options opt;
    ParsedConfig pc;
    std::string command;
    std::string config_hash;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

    Run(const Options& o, const std::string& cmd) : opt(o), command(cmd) {
        pc = load_config(o.config_path);
        if (o.tol_scale != 1.0)
            pc.game.num = pc.game.num.scaled(o.tol_scale);
        if (o.grid_n > 0) {
            pc.game.num.reach_grid_n = std::max(o.grid_n, 16);
            pc.game.num.swing_grid_n = std::max(o.grid_n | 1, 17);
        }
        if (o.threads >= 0) pc.game.num.threads = o.threads;
        if (o.seed_set) pc.sim.seed = o.seed;
        if (o.draws > 0) pc.sim.draws = o.draws;
        // identity of the run: config text plus every knob that affects output
        std::ostringstream key;
        key << pc.raw_text << "|" << pc.game.num.root_tol << "|"
            << pc.game.num.quad_tol << "|" << pc.game.num.reach_grid_n << "|"
            << pc.game.num.swing_grid_n;
        config_hash = hash_hex(fnv1a_hash(key.str()));
        fs::create_directories(opt.out_dir);
    }

    fs::path out(const std::string& name) const {
        return fs::path(opt.out_dir) / name;
    }

    void write_manifest(const std::vector<std::string>& outputs) const {
        json m;
        m["command"] = command;
        m["config_path"] = opt.config_path;
        m["config_hash"] = config_hash;
        m["seed"] = pc.sim.seed;
        m["numerics"] = {{"root_tol", pc.game.num.root_tol},
                         {"quad_tol", pc.game.num.quad_tol},
                         {"reach_grid_n", pc.game.num.reach_grid_n},
                         {"swing_grid_n", pc.game.num.swing_grid_n},
                         {"threads", pc.game.num.threads}};
        m["outputs"] = outputs;
        m["wall_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - t0)
                           .count();
        std::ofstream f(out("manifest_" + command + ".json"));
        f << m.dump(2) << "\n";
    }
};

void write_swing_csv(const Run& run, const Solution& sol) {
    std::ofstream f(run.out("swing.csv"));
    f << "# manifest=" << run.config_hash << "\n";
    f << "r,s_of_r\n";
    const auto& xs = sol.swing.table().xs();
    const auto& ys = sol.swing.table().ys();
    f << std::setprecision(15);
    for (size_t i = 0; i < xs.size(); ++i) f << xs[i] << "," << ys[i] << "\n";
}

void write_cutoffs_json(const Run& run, const Solution& sol) {
    json j;
    j["manifest"] = run.config_hash;
    j["theta_1"] = sol.cutoffs.theta_1;
    j["theta_2"] = sol.cutoffs.theta_2;
    j["conflict_lo"] = sol.reaches.r2_low_0();
    j["conflict_hi"] = sol.reaches.r1_bar_0();
    j["tau_1"] = sol.cfg.tau_1;
    j["tau_2"] = sol.cfg.tau_2;
    std::ofstream f(run.out("cutoffs.json"));
    f << j.dump(2) << "\n";
}

void write_strategies_csv(const Run& run, const Solution& sol, int n = 201) {
    StrategyProfile pr = sol.profile();
    std::ofstream f(run.out("strategies.csv"));
    f << "# manifest=" << run.config_hash << "\n";
    f << "theta,alpha_1,alpha_2,s1_lo,s1_hi,s2_lo,s2_hi\n";
    f << std::setprecision(15);
    const GameConfig& cfg = sol.cfg;
    for (int i = 0; i < n; ++i) {
        double t = cfg.theta_min + (cfg.theta_max - cfg.theta_min) * i / double(n - 1);
        SupportInterval s1 = pr.support(1, t), s2 = pr.support(2, t);
        f << t << "," << pr.atom(1, t) << "," << pr.atom(2, t) << "," << s1.lo
          << "," << s1.hi << "," << s2.lo << "," << s2.hi << "\n";
    }
}

/// Reuse a previous solve's swing table when the config hash matches;
/// otherwise solve from scratch.
Solution obtain_solution(const Run& run, bool allow_reuse = true) {
    if (allow_reuse) {
        std::ifstream mf(run.out("manifest_solve.json"));
        if (mf) {
            try {
                json m = json::parse(mf);
                if (m.value("config_hash", "") == run.config_hash) {
                    std::ifstream sf(run.out("swing.csv"));
                    std::ifstream cf(run.out("cutoffs.json"));
                    if (sf && cf) {
                        std::string line;
                        std::getline(sf, line);  // manifest comment
                        std::getline(sf, line);  // header
                        std::vector<double> xs, ys;
                        while (std::getline(sf, line)) {
                            size_t c = line.find(',');
                            if (c == std::string::npos) continue;
                            xs.push_back(std::stod(line.substr(0, c)));
                            ys.push_back(std::stod(line.substr(c + 1)));
                        }
                        json cj = json::parse(cf);
                        Solution sol;
                        sol.cfg = run.pc.game;
                        sol.reaches = ReachTable::build(sol.cfg);
                        sol.swing = SwingFunction::from_table(std::move(xs),
                                                              std::move(ys));
                        sol.cutoffs.theta_1 = cj.at("theta_1");
                        sol.cutoffs.theta_2 = cj.at("theta_2");
                        return sol;
                    }
                }
            } catch (const std::exception&) {
                // fall through to a fresh solve
            }
        }
    }
    return solve_model(run.pc.game);
}

int cmd_solve(const Options& opt) {
    Run run(opt, "solve");
    Solution sol = solve_model(run.pc.game);
    write_swing_csv(run, sol);
    write_cutoffs_json(run, sol);
    write_strategies_csv(run, sol);
    run.write_manifest({"swing.csv", "cutoffs.json", "strategies.csv"});
    std::cout << "cutoffs: theta_1 = " << sol.cutoffs.theta_1
              << ", theta_2 = " << sol.cutoffs.theta_2 << "\n";
    return 0;
}

int cmd_strategies(const Options& opt) {
    Run run(opt, "strategies");
    Solution sol = obtain_solution(run);
    write_strategies_csv(run, sol);
    StrategyProfile pr = sol.profile();
    std::vector<std::string> outputs = {"strategies.csv"};
    for (double t : opt.density_thetas) {
        std::ostringstream name;
        name << "density_theta_" << t << ".csv";
        std::ofstream f(run.out(name.str()));
        f << "# manifest=" << run.config_hash << "\n";
        f << "r,psi_1,psi_2\n";
        f << std::setprecision(15);
        SupportInterval s1 = pr.support(1, t), s2 = pr.support(2, t);
        double lo = std::min(s1.lo, s2.lo), hi = std::max(s1.hi, s2.hi);
        for (int i = 0; i <= 200; ++i) {
            double r = lo + (hi - lo) * i / 200.0;
            f << r << "," << pr.density(1, r, t) << "," << pr.density(2, r, t)
              << "\n";
        }
        outputs.push_back(name.str());
    }
    run.write_manifest(outputs);
    return 0;
}

int cmd_beliefs(const Options& opt) {
    Run run(opt, "beliefs");
    Solution sol = obtain_solution(run);
    StrategyProfile pr = sol.profile();
    Posterior p = posterior(pr, opt.r1, opt.r2);
    json j;
    j["manifest"] = run.config_hash;
    j["r_1"] = opt.r1;
    j["r_2"] = opt.r2;
    j["support_lo"] = p.support_lo();
    j["support_hi"] = p.support_hi();
    j["u_dm"] = p.u_dm_expected;
    j["action"] = p.action == Action::Plus ? "plus" : "minus";
    j["on_path"] = p.on_path;
    j["double_deviation"] = p.double_deviation;
    json masses = json::array();
    for (const auto& m : p.masses)
        masses.push_back({{"theta", m.theta}, {"weight", m.weight}});
    j["masses"] = masses;
    j["cont_weight"] = p.cont_weight;
    json q;
    for (double qq : {0.05, 0.25, 0.5, 0.75, 0.95})
        q[std::to_string(qq)] = p.quantile(qq);
    j["quantiles"] = q;
    std::cout << j.dump(2) << "\n";
    run.write_manifest({});
    return 0;
}

int cmd_verify(const Options& opt) {
    Run run(opt, "verify");
    Solution sol = obtain_solution(run);
    StrategyProfile pr = sol.profile();
    VerifyGrids grids;
    if (opt.grid_n > 0) grids.report_n = opt.grid_n;
    VerificationReport rep = verify_direct_equilibrium(pr, grids);
    json j;
    j["manifest"] = run.config_hash;
    j["max_gain"] = rep.max_gain;
    j["max_spread"] = rep.max_spread;
    j["dm_violations"] = rep.dm_violations;
    j["dm_pairs_checked"] = rep.dm_pairs_checked;
    j["payoff_scale"] = rep.payoff_scale;
    j["pass"] = rep.pass();
    json states = json::array();
    for (const auto& sc : rep.states)
        states.push_back({{"theta", sc.theta},
                          {"spread_1", sc.spread_1},
                          {"spread_2", sc.spread_2},
                          {"gain_1", sc.gain_1},
                          {"gain_2", sc.gain_2}});
    j["states"] = states;
    std::ofstream f(run.out("verify.json"));
    f << j.dump(2) << "\n";
    run.write_manifest({"verify.json"});
    std::cout << "max deviation gain " << rep.max_gain << ", max spread "
              << rep.max_spread << ", DM violations " << rep.dm_violations
              << " -> " << (rep.pass() ? "pass" : "FAIL") << "\n";
    return rep.pass() ? 0 : 1;
}

int cmd_simulate(const Options& opt) {
    Run run(opt, "simulate");
    Solution sol = obtain_solution(run);
    StrategyProfile pr = sol.profile();
    SimulationStats st = run_sim(pr, run.pc.sim.draws, run.pc.sim.seed,
                                 run.pc.sim.bins);
    std::ofstream f(run.out("simulate.csv"));
    f << "# manifest=" << run.config_hash << " seed=" << run.pc.sim.seed
      << "\n";
    f << "theta_bin,n,p_reveal_mc,p_reveal_an,p_match_mc,p_match_an,p_plus,"
         "dm_welfare\n";
    f << std::setprecision(12);
    for (const auto& b : st.bins) {
        double mid = 0.5 * (b.theta_lo + b.theta_hi);
        Figure2Row an = figure2_point(pr, mid);
        f << mid << "," << b.n << "," << b.p_reveal() << "," << an.p_reveal
          << "," << b.p_match() << "," << an.p_match << "," << b.p_plus()
          << "," << (b.n ? b.welfare_sum / b.n : 0.0) << "\n";
    }
    run.write_manifest({"simulate.csv"});
    std::cout << "simulated " << st.n_draws << " draws, mean DM welfare "
              << st.dm_welfare << "\n";
    return 0;
}

int cmd_welfare(const Options& opt) {
    Run run(opt, "welfare");
    Solution sol = obtain_solution(run);
    StrategyProfile pr = sol.profile();
    WelfareReport w = welfare_report(pr);
    json j;
    j["manifest"] = run.config_hash;
    j["w_fi"] = w.full_info;
    j["w_de"] = w.equilibrium;
    j["w_bar"] = w.upper_bound;
    j["q_star"] = w.q_star;
    std::ofstream jf(run.out("welfare.json"));
    jf << j.dump(2) << "\n";

    double q0 = 0.0, q1 = 1.0, dq = 0.05;
    if (std::sscanf(opt.q_grid.c_str(), "%lf:%lf:%lf", &q0, &q1, &dq) != 3
        || dq <= 0.0)
        throw ConfigError("bad --q-grid, expected start:stop:step");
    std::ofstream f(run.out("welfare_frontier.csv"));
    f << "# manifest=" << run.config_hash << "\n";
    f << "q,noise_sd,w_inq,beats_adversarial\n";
    f << std::setprecision(12);
    for (double q = q0; q <= q1 + 1e-12; q += dq) {
        double v = w_inq(sol.cfg, std::min(q, 1.0), opt.noise_sd);
        f << std::min(q, 1.0) << "," << opt.noise_sd << "," << v << ","
          << (v >= w.upper_bound ? 1 : 0) << "\n";
    }
    run.write_manifest({"welfare.json", "welfare_frontier.csv"});
    std::cout << "w_fi = " << w.full_info << ", w_de = " << w.equilibrium
              << ", w_bar = " << w.upper_bound << ", q* = " << w.q_star << "\n";
    return 0;
}

int cmd_benchmarks(const Options& opt) {
    Run run(opt, "benchmarks");
    const GameConfig& cfg = run.pc.game;
    BenchmarkWelfares b = benchmark_welfares(cfg);
    json j;
    j["manifest"] = run.config_hash;
    j["w_full_info"] = b.w_full_info;
    j["w_aligned"] = b.w_aligned;
    j["w_verifiable"] = b.w_verifiable;
    j["w_babbling"] = b.w_babbling;
    j["w_partition"] = b.w_partition;

    std::cout << "welfare benchmarks:\n"
              << "  full information  " << b.w_full_info << "\n"
              << "  aligned senders   " << b.w_aligned << "\n"
              << "  verifiable        " << b.w_verifiable << "\n"
              << "  cheap talk babble " << b.w_babbling << "\n"
              << "  cheap talk cells  " << b.w_partition << "\n";

    ReachTable rt = ReachTable::build(cfg);
    try {
        PureProfile fre = build_fre_profile(cfg, rt);
        PureCheckResult own = check_equilibrium(fre, cfg);
        PureProfile fre_unprej = fre;
        fre_unprej.beliefs = PureBeliefPolicy::TrustSender2;
        PureCheckResult unprej = check_equilibrium(fre_unprej, cfg);
        double theta_p = rt.r1_bar_0() / 2.0;
        double predicted = cfg.k_1 * cfg.cost_1(rt.r1_bar_0(), theta_p);
        double at_half = pure_deviation_gain(fre_unprej, cfg, 1, theta_p, theta_p);
        j["fre"] = {{"pooled_report", rt.r1_bar_0()},
                    {"own_beliefs_max_gain", own.max_gain},
                    {"single_attribution_max_gain", unprej.max_gain},
                    {"gain_at_half_pool", at_half},
                    {"predicted_gain_at_half_pool", predicted}};
        std::cout << "fully revealing profile: own-belief max gain "
                  << own.max_gain << "; under single-sender attribution "
                  << unprej.max_gain << " (truthful deviation at "
                  << theta_p << " gains " << at_half << ", predicted "
                  << predicted << ")\n";
    } catch (const ConfigError& e) {
        j["fre"] = {{"error", e.what()}};
        std::cout << "fully revealing profile unavailable: " << e.what() << "\n";
    }
    PureCheckResult truthful =
        check_equilibrium(build_truthful_profile(), cfg);
    j["truthful_profile_max_gain"] = truthful.max_gain;
    j["truthful_profile_deviation"] = {{"sender", truthful.best.sender},
                                       {"theta", truthful.best.theta},
                                       {"report", truthful.best.report}};
    std::cout << "truthful profile: best deviation gain " << truthful.max_gain
              << " (sender " << truthful.best.sender << " at theta "
              << truthful.best.theta << ")\n";
    std::ofstream f(run.out("benchmarks.json"));
    f << j.dump(2) << "\n";
    run.write_manifest({"benchmarks.json"});
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-sender costly signaling: solver, verifier, simulator"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opt.config_path, "config file path")
            ->required();
        sub->add_option("--out", opt.out_dir, "output directory");
        sub->add_option("--seed", opt.seed, "random seed")
            ->each([&](const std::string&) { opt.seed_set = true; });
        sub->add_option("--draws", opt.draws, "Monte Carlo draw count");
        sub->add_option("--grid-n", opt.grid_n, "grid resolution override");
        sub->add_option("--tol-scale", opt.tol_scale,
                        "multiply numeric tolerances");
        sub->add_option("--threads", opt.threads, "worker threads (0 = all)");
    };

    auto* solve = app.add_subcommand("solve", "solve the equilibrium objects");
    add_common(solve);
    auto* strategies = app.add_subcommand("strategies", "dump strategy tables");
    add_common(strategies);
    strategies->add_option("--density-theta", opt.density_thetas,
                           "states at which to dump density slices");
    auto* beliefs = app.add_subcommand("beliefs", "posterior for a report pair");
    add_common(beliefs);
    beliefs->add_option("--r1", opt.r1, "sender 1 report")->required();
    beliefs->add_option("--r2", opt.r2, "sender 2 report")->required();
    auto* verify = app.add_subcommand("verify", "certify the equilibrium");
    add_common(verify);
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo play");
    add_common(simulate);
    auto* welfare = app.add_subcommand("welfare", "welfare comparison");
    add_common(welfare);
    welfare->add_option("--q-grid", opt.q_grid, "q frontier grid start:stop:step");
    welfare->add_option("--noise-sd", opt.noise_sd, "signal noise s.d.");
    auto* benchmarks = app.add_subcommand("benchmarks",
                                          "benchmark profiles and welfares");
    add_common(benchmarks);

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return cmd_solve(opt);
        if (strategies->parsed()) return cmd_strategies(opt);
        if (beliefs->parsed()) return cmd_beliefs(opt);
        if (verify->parsed()) return cmd_verify(opt);
        if (simulate->parsed()) return cmd_simulate(opt);
        if (welfare->parsed()) return cmd_welfare(opt);
        if (benchmarks->parsed()) return cmd_benchmarks(opt);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
