#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "aoilab/analytic.hpp"
#include "aoilab/bounds.hpp"
#include "aoilab/channel.hpp"
#include "aoilab/config.hpp"
#include "aoilab/csv.hpp"
#include "aoilab/errors.hpp"
#include "aoilab/mathutil.hpp"
#include "aoilab/optimize.hpp"
#include "aoilab/parallel.hpp"
#include "aoilab/simulate.hpp"
#include "aoilab/smdp.hpp"

namespace fs = std::filesystem;
using namespace aoilab;

namespace {

struct CommonOpts {
    std::string scenario_path;
    std::string out_dir;
    std::uint64_t seed = kDefaultSeed;
    bool force = false;
    bool gnuplot = false;
};

int worker_count() {
    const int hw = static_cast<int>(std::thread::hardware_concurrency());
    const int cap = env_thread_cap();
    int n = hw > 0 ? hw : 1;
    if (cap > 0 && n > cap) n = cap;
    return n;
}

// Manifest digest: tool version + subcommand + parsed-config digest + seed.
// Parallelism deliberately does not enter.
std::uint64_t manifest_digest(const RunConfig& cfg, const std::string& command, std::uint64_t seed) {
    std::ostringstream os;
    os << kToolVersion << "|" << command << "|" << std::hex << cfg.digest << "|" << seed;
    return fnv1a64(os.str());
}

fs::path prepare_out(const CommonOpts& opts) {
    const fs::path dir(opts.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory '" + dir.string() + "': " + ec.message());
    return dir;
}

void write_gnuplot(const CommonOpts& opts, const fs::path& dir, const std::string& script) {
    if (!opts.gnuplot) return;
    const fs::path path = dir / "plot.gp";
    if (!opts.force && fs::exists(path)) throw ConfigError("refusing to overwrite '" + path.string() + "' without --force");
    std::ofstream out(path, std::ios::binary);
    out << "# gnuplot script generated by " << kToolVersion << "\n" << script;
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

CurveSpec make_curve_spec(const RunConfig& cfg, CurveFamily family, std::uint64_t seed) {
    CurveSpec spec;
    spec.family = family;
    spec.scenario = cfg.scenario;
    spec.betas = cfg.solver.betas;
    spec.de.population = cfg.solver.de_population;
    spec.de.weight = cfg.solver.de_weight;
    spec.de.crossover = cfg.solver.de_crossover;
    spec.de.generations = cfg.solver.de_generations;
    spec.sim_horizon = cfg.solver.horizon;
    spec.sim_warmup = cfg.solver.warmup >= 0 ? cfg.solver.warmup : cfg.solver.horizon / 10;
    spec.seed = seed;
    spec.a_max = cfg.solver.a_max;
    spec.vi_tol = cfg.solver.tol;
    spec.vi_max_iter = cfg.solver.max_iter;
    spec.parallelism = worker_count();
    return spec;
}

int run_channel(const CommonOpts& opts) {
    const RunConfig cfg = parse_config_file(opts.scenario_path);
    const fs::path dir = prepare_out(opts);
    std::vector<CsvRow> rows;
    const auto& chan = cfg.scenario.channel;
    for (std::size_t i = 0; i < chan.actions().size(); ++i) {
        const double p = chan.powers()[i];
        rows.push_back({static_cast<long long>(chan.actions()[i]), p, p * chan.actions()[i]});
    }
    emit_csv(dir / "channel.csv", manifest_digest(cfg, "channel", opts.seed), {"tau", "power_mw", "energy_mw_slots"},
             rows, opts.force);
    write_gnuplot(opts, dir,
                  "set datafile separator ','\nset logscale y\nset xlabel 'tau [slots]'\nset ylabel 'P(tau) [mW]'\n"
                  "plot 'channel.csv' skip 2 using 1:2 with linespoints title 'P(tau)'\n");
    std::cout << "channel: wrote " << rows.size() << " rows to " << (dir / "channel.csv").string() << "\n";
    return 0;
}

int run_curve(const CommonOpts& opts, const std::string& family_name) {
    const RunConfig cfg = parse_config_file(opts.scenario_path);
    CurveFamily family;
    if (family_name == "ftt")
        family = CurveFamily::kFttSweep;
    else if (family_name == "threshold")
        family = CurveFamily::kThresholdDe;
    else if (family_name == "at")
        family = CurveFamily::kAtSweep;
    else if (family_name == "p")
        family = CurveFamily::kFttSweep;  // P model FTT sweep; model comes from the scenario
    else if (family_name == "npopt")
        family = CurveFamily::kNpOpt;
    else if (family_name == "popt")
        family = CurveFamily::kPOpt;
    else if (family_name == "smdp")
        family = CurveFamily::kSmdpFrontier;
    else
        throw ConfigError("curve: unknown family '" + family_name + "' (ftt|threshold|at|p|npopt|popt|smdp)");
    if (family_name == "p" && cfg.scenario.model != GenerationModel::kP)
        throw ConfigError("curve: --family p requires model = P in the scenario");

    const CurveSpec spec = make_curve_spec(cfg, family, opts.seed);
    const auto points = pareto_curve(spec);
    const fs::path dir = prepare_out(opts);
    const fs::path file = dir / ("curve_" + family_name + ".csv");

    std::vector<std::string> header;
    std::vector<CsvRow> rows;
    const auto betas = spec.betas.empty() ? default_beta_grid() : spec.betas;
    switch (family) {
        case CurveFamily::kFttSweep: {
            header = {"t_s", "avg_age", "avg_power", "provenance"};
            for (const auto& p : points)
                rows.push_back({static_cast<long long>(std::get<FttPolicy>(p.policy).t_s), p.avg_age, p.avg_power,
                                std::string(to_string(p.provenance))});
            break;
        }
        case CurveFamily::kThresholdDe: {
            header = {"beta", "h", "tau_a", "tau_b", "avg_age", "avg_power", "provenance"};
            for (std::size_t i = 0; i < points.size(); ++i) {
                const auto& p = points[i];
                int h = 0, ta = 0, tb = 0;
                if (const auto* thr = std::get_if<ThresholdPolicy>(&p.policy)) {
                    h = thr->h;
                    ta = thr->tau_a;
                    tb = thr->tau_b;
                } else {
                    tb = ta = std::get<FttPolicy>(p.policy).t_s;
                }
                rows.push_back({betas[i], static_cast<long long>(h), static_cast<long long>(ta),
                                static_cast<long long>(tb), p.avg_age, p.avg_power,
                                std::string(to_string(p.provenance))});
            }
            break;
        }
        case CurveFamily::kNpOpt:
        case CurveFamily::kPOpt: {
            header = {"beta", "t_s", "avg_age", "avg_power", "provenance"};
            for (std::size_t i = 0; i < points.size(); ++i)
                rows.push_back({betas[i], static_cast<long long>(std::get<FttPolicy>(points[i].policy).t_s),
                                points[i].avg_age, points[i].avg_power,
                                std::string(to_string(points[i].provenance))});
            break;
        }
        case CurveFamily::kAtSweep: {
            header = {"h_a", "t_s", "avg_age", "avg_power", "provenance"};
            for (const auto& p : points) {
                const auto& at = std::get<AtFixedPolicy>(p.policy);
                rows.push_back({static_cast<long long>(at.h_a), static_cast<long long>(at.t_s), p.avg_age, p.avg_power,
                                std::string(to_string(p.provenance))});
            }
            break;
        }
        case CurveFamily::kSmdpFrontier: {
            header = {"beta", "avg_age", "avg_power", "provenance"};
            for (std::size_t i = 0; i < points.size(); ++i)
                rows.push_back({betas[i], points[i].avg_age, points[i].avg_power,
                                std::string(to_string(points[i].provenance))});
            break;
        }
    }
    emit_csv(file, manifest_digest(cfg, "curve_" + family_name, opts.seed), header, rows, opts.force);
    // age and power are always the two columns before 'provenance'
    const int power_col = static_cast<int>(header.size()) - 1;
    const int age_col = power_col - 1;
    write_gnuplot(opts, dir,
                  "set datafile separator ','\nset xlabel 'average power [mW]'\nset ylabel 'average AoI [slots]'\n"
                  "plot 'curve_" + family_name + ".csv' skip 2 using " + std::to_string(power_col) + ":" +
                      std::to_string(age_col) + " with linespoints\n");
    std::cout << "curve " << family_name << ": wrote " << rows.size() << " points to " << file.string() << "\n";
    return 0;
}

int run_smdp(const CommonOpts& opts, std::vector<double> betas_flag) {
    const RunConfig cfg = parse_config_file(opts.scenario_path);
    std::vector<double> betas = !betas_flag.empty() ? betas_flag
                                : !cfg.solver.betas.empty() ? cfg.solver.betas
                                                            : default_beta_grid();
    const auto entries =
        sweep_beta(cfg.scenario, betas, cfg.solver.a_max, cfg.solver.tol, cfg.solver.max_iter, worker_count());
    const fs::path dir = prepare_out(opts);
    std::vector<CsvRow> rows;
    for (const auto& e : entries) {
        rows.push_back({e.beta, e.point.avg_age, e.point.avg_power, e.solution.gain,
                        static_cast<long long>(e.solution.iterations), e.solution.span,
                        std::string(to_string(e.point.provenance))});
    }
    emit_csv(dir / "smdp_frontier.csv", manifest_digest(cfg, "smdp", opts.seed),
             {"beta", "avg_age", "avg_power", "gain", "iterations", "span", "provenance"}, rows, opts.force);
    for (std::size_t i = 0; i < entries.size(); ++i) {
        std::vector<CsvRow> pol;
        const auto& policy = entries[i].solution.policy;
        for (std::size_t a = 0; a < policy.size(); ++a)
            pol.push_back({static_cast<long long>(a + 1), static_cast<long long>(policy[a])});
        std::ostringstream name;
        name << "smdp_policy_" << i << ".csv";
        emit_csv(dir / name.str(), manifest_digest(cfg, "smdp_policy_" + std::to_string(i), opts.seed),
                 {"age", "tau"}, pol, opts.force);
    }
    write_gnuplot(opts, dir,
                  "set datafile separator ','\nset xlabel 'average power [mW]'\nset ylabel 'average AoI [slots]'\n"
                  "plot 'smdp_frontier.csv' skip 2 using 3:2 with linespoints title 'SMDP frontier'\n");
    std::cout << "smdp: swept " << entries.size() << " beta values into " << dir.string() << "\n";
    for (const auto& e : entries)
        std::cout << "  beta=" << e.beta << " avg_age=" << e.point.avg_age << " avg_power=" << e.point.avg_power
                  << (e.solution.converged ? "" : "  [not converged]") << "\n";
    return 0;
}

int run_bounds(const CommonOpts& opts, int pc_grid_flag) {
    const RunConfig cfg = parse_config_file(opts.scenario_path);
    const int n = pc_grid_flag > 0 ? pc_grid_flag : cfg.solver.pc_grid;
    if (n < 2) throw ConfigError("bounds: need a power grid of at least 2 points");
    const Scenario& sc = cfg.scenario;
    const double lo = min_feasible_power(sc);
    const double hi = ftt_np(sc.tau_min(), sc).avg_power;
    std::vector<CsvRow> rows;
    for (int i = 0; i < n; ++i) {
        const double pc = lo + (hi - lo) * i / (n - 1);
        const auto al = analytical_lower_bound(sc, pc);
        const auto an = numerical_lower_bound(sc, pc, cfg.solver.stride, cfg.solver.prop3_statement_form);
        rows.push_back({pc, al.value, an.value, static_cast<long long>(an.support.size())});
    }
    const fs::path dir = prepare_out(opts);
    emit_csv(dir / "bounds.csv", manifest_digest(cfg, "bounds", opts.seed),
             {"p_c", "analytic_lb", "numerical_lb", "support_size"}, rows, opts.force);
    write_gnuplot(opts, dir,
                  "set datafile separator ','\nset xlabel 'power budget [mW]'\nset ylabel 'age lower bound [slots]'\n"
                  "plot 'bounds.csv' skip 2 using 1:2 with lines title 'A_l', 'bounds.csv' skip 2 using 1:3 with lines title 'A_n'\n");
    std::cout << "bounds: wrote " << rows.size() << " budget points to " << (dir / "bounds.csv").string() << "\n";
    return 0;
}

int run_sim(const CommonOpts& opts, std::vector<std::uint64_t> seeds, bool trace) {
    const RunConfig cfg = parse_config_file(opts.scenario_path);
    const PolicySpec policy = resolve_policy(cfg);
    if (seeds.empty()) seeds.push_back(opts.seed);
    std::vector<SimConfig> sims;
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        SimConfig sim;
        sim.scenario = cfg.scenario;
        sim.policy = policy;
        sim.horizon = cfg.solver.horizon;
        sim.warmup = cfg.solver.warmup;
        sim.seed = seeds[i];
        sim.stream = 0;
        sims.push_back(std::move(sim));
    }
    const auto estimates = simulate_batch(sims, worker_count());
    const fs::path dir = prepare_out(opts);
    std::vector<CsvRow> rows;
    for (std::size_t i = 0; i < sims.size(); ++i) {
        const auto& e = estimates[i];
        rows.push_back({std::string(policy_to_string(policy)), static_cast<long long>(seeds[i]),
                        static_cast<long long>(sims[i].horizon), e.avg_age, e.se_age, e.avg_power, e.se_power,
                        static_cast<long long>(e.receptions), static_cast<long long>(e.preemptions)});
    }
    emit_csv(dir / "sim.csv", manifest_digest(cfg, "sim", opts.seed),
             {"policy", "seed", "horizon", "avg_age", "se_age", "avg_power", "se_power", "receptions", "preemptions"},
             rows, opts.force);
    if (trace) {
        const fs::path tr = dir / "sim_trace.csv";
        if (!opts.force && fs::exists(tr)) throw ConfigError("refusing to overwrite '" + tr.string() + "' without --force");
        std::ofstream out(tr, std::ios::binary);
        simulate_trace(sims.front(), out);
        if (!out) throw std::runtime_error("write failed for '" + tr.string() + "'");
    }
    std::cout << "sim: " << sims.size() << " run(s), avg_age=" << estimates.front().avg_age
              << " avg_power=" << estimates.front().avg_power << " -> " << (dir / "sim.csv").string() << "\n";
    return 0;
}

int run_fading(const CommonOpts& opts, std::vector<int> coherence_flag, int l_max_flag) {
    const RunConfig cfg = parse_config_file(opts.scenario_path);
    const std::vector<int> ts = !coherence_flag.empty() ? coherence_flag : cfg.solver.coherence_times;
    std::vector<CsvRow> rows;
    for (int T : ts) {
        // reuse the scenario channel parameters; the sweep varies T only
        FadingParams params;
        params.K = cfg.channel_params.K;
        params.N = cfg.channel_params.N;
        params.epsilon = cfg.channel_params.epsilon;
        params.T = T;
        params.gain = cfg.gain;
        const int l_max = l_max_flag > 0 ? l_max_flag : std::max(1, cfg.scenario.tau_max() / T);
        for (int l = 1; l <= l_max; ++l) {
            const double p = fading_power(l, params);
            rows.push_back({static_cast<long long>(T), static_cast<long long>(l), static_cast<long long>(l * T), p});
        }
    }
    const fs::path dir = prepare_out(opts);
    emit_csv(dir / "fading.csv", manifest_digest(cfg, "fading", opts.seed), {"T", "L", "tau", "power_mw"}, rows,
             opts.force);
    write_gnuplot(opts, dir,
                  "set datafile separator ','\nset logscale y\nset xlabel 'tau [slots]'\nset ylabel 'P(tau) [mW]'\n"
                  "plot 'fading.csv' skip 2 using 3:($1==2?$4:1/0) title 'T=2', '' skip 2 using 3:($1==10?$4:1/0) title 'T=10'\n");
    std::cout << "fading: wrote " << rows.size() << " rows to " << (dir / "fading.csv").string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string(kToolVersion) +
                 " - average AoI vs transmit power tradeoffs for short-packet links\n"
                 "Scenario files are sectioned key=value text or JSON; see --print-defaults."};
    app.require_subcommand(0, 1);
    bool print_defaults = false;
    app.add_flag("--print-defaults", print_defaults, "print the documented default configuration and exit");

    CommonOpts opts;
    auto add_common = [&](CLI::App* sub, bool needs_out = true) {
        sub->add_option("--scenario", opts.scenario_path, "scenario config file (.ini/.json)")->required();
        if (needs_out) sub->add_option("--out", opts.out_dir, "output directory for CSV files")->required();
        sub->add_option("--seed", opts.seed, "RNG seed (default 1729, a fixed documented constant)");
        sub->add_flag("--force", opts.force, "overwrite existing output files");
        sub->add_flag("--gnuplot", opts.gnuplot, "also emit a gnuplot script plot.gp");
    };

    auto* channel = app.add_subcommand("channel", "emit the tau -> P(tau) table\n  CSV: tau,power_mw,energy_mw_slots");
    add_common(channel);

    auto* curve = app.add_subcommand(
        "curve",
        "tradeoff curves per policy family\n  CSV (ftt/p): t_s,avg_age,avg_power,provenance\n  CSV (threshold): "
        "beta,h,tau_a,tau_b,avg_age,avg_power,provenance\n  CSV (at): h_a,t_s,avg_age,avg_power,provenance\n  CSV "
        "(npopt/popt): beta,t_s,avg_age,avg_power,provenance\n  CSV (smdp): beta,avg_age,avg_power,provenance");
    std::string family = "ftt";
    curve->add_option("--family", family, "ftt|threshold|at|p|npopt|popt|smdp")->required();
    add_common(curve);

    auto* smdp = app.add_subcommand("smdp",
                                    "Lagrangian beta sweep with tabular policy dumps\n  CSV: "
                                    "beta,avg_age,avg_power,gain,iterations,span,provenance + smdp_policy_<k>.csv");
    std::vector<double> betas_flag;
    smdp->add_option("--beta,--betas", betas_flag, "beta values (overrides the config)");
    add_common(smdp);

    auto* bounds = app.add_subcommand("bounds",
                                      "numerical and analytical lower bounds over a power grid\n  CSV: "
                                      "p_c,analytic_lb,numerical_lb,support_size");
    int pc_grid = 0;
    bounds->add_option("--pc-grid", pc_grid, "number of power budget points (default from config)");
    add_common(bounds);

    auto* sim = app.add_subcommand("sim",
                                   "Monte Carlo simulation of the configured policy\n  CSV: "
                                   "policy,seed,horizon,avg_age,se_age,avg_power,se_power,receptions,preemptions");
    std::vector<std::uint64_t> seeds;
    sim->add_option("--seeds", seeds, "simulate one run per seed (default: the single --seed)");
    bool trace = false;
    sim->add_flag("--trace", trace, "dump a per-slot trace (large) to sim_trace.csv");
    add_common(sim);

    auto* fading = app.add_subcommand("fading",
                                      "block-fading P(tau) curves per coherence time\n  CSV: T,L,tau,power_mw");
    std::vector<int> coherence;
    fading->add_option("--T", coherence, "coherence times to sweep (default from config)");
    int l_max = 0;
    fading->add_option("--lmax", l_max, "largest number of coherence blocks per codeword");
    add_common(fading);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (print_defaults) {
            std::cout << default_config_text();
            return 0;
        }
        if (channel->parsed()) return run_channel(opts);
        if (curve->parsed()) return run_curve(opts, family);
        if (smdp->parsed()) return run_smdp(opts, betas_flag);
        if (bounds->parsed()) return run_bounds(opts, pc_grid);
        if (sim->parsed()) return run_sim(opts, seeds, trace);
        if (fading->parsed()) return run_fading(opts, coherence, l_max);
        std::cout << app.help();
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
