#include "aoilab/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "aoilab/analytic.hpp"
#include "aoilab/errors.hpp"
#include "aoilab/rng.hpp"
#include "aoilab/smdp.hpp"

namespace aoilab {

namespace {

constexpr double kPenalty = 1e18;

std::vector<double> coerce(const DeConfig& cfg, const std::vector<double>& x) {
    std::vector<double> y = x;
    if (!cfg.integer_mask.empty())
        for (std::size_t d = 0; d < y.size(); ++d)
            if (cfg.integer_mask[d]) y[d] = std::round(y[d]);
    return y;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed ^ (0x9E3779B97F4A7C15ull * (salt + 1));
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace

const char* to_string(CurveFamily family) {
    switch (family) {
        case CurveFamily::kFttSweep: return "ftt";
        case CurveFamily::kThresholdDe: return "threshold";
        case CurveFamily::kNpOpt: return "npopt";
        case CurveFamily::kPOpt: return "popt";
        case CurveFamily::kAtSweep: return "at";
        case CurveFamily::kSmdpFrontier: return "smdp";
    }
    return "?";
}

DeResult differential_evolution(const std::function<double(const std::vector<double>&)>& objective,
                                const DeConfig& cfg) {
    const std::size_t dim = cfg.bounds.size();
    if (dim == 0) throw std::invalid_argument("differential_evolution: empty bounds");
    if (cfg.population < 4) throw std::invalid_argument("differential_evolution: population must be >= 4");
    if (!(cfg.weight > 0.0 && cfg.weight < 2.0)) throw std::invalid_argument("differential_evolution: F in (0,2)");
    if (!(cfg.crossover >= 0.0 && cfg.crossover <= 1.0))
        throw std::invalid_argument("differential_evolution: CR in [0,1]");
    if (!cfg.integer_mask.empty() && cfg.integer_mask.size() != dim)
        throw std::invalid_argument("differential_evolution: integer mask size mismatch");
    for (const auto& [lo, hi] : cfg.bounds)
        if (!(lo <= hi)) throw std::invalid_argument("differential_evolution: malformed box");

    PhiloxRng rng(cfg.seed, /*stream=*/0x0de0de);
    auto eval = [&](const std::vector<double>& x) {
        const double v = objective(coerce(cfg, x));
        return std::isfinite(v) ? v : kPenalty;
    };

    const int np = cfg.population;
    std::vector<std::vector<double>> pop(np, std::vector<double>(dim));
    std::vector<double> fitness(np);
    for (int i = 0; i < np; ++i) {
        for (std::size_t d = 0; d < dim; ++d) {
            const auto& [lo, hi] = cfg.bounds[d];
            pop[i][d] = lo + rng.next_double() * (hi - lo);
        }
        fitness[i] = eval(pop[i]);
    }

    DeResult result;
    result.history.reserve(cfg.generations);
    std::vector<double> trial(dim);
    for (int gen = 0; gen < cfg.generations; ++gen) {
        for (int i = 0; i < np; ++i) {
            int r1, r2, r3;
            do r1 = static_cast<int>(rng.next_below(np)); while (r1 == i);
            do r2 = static_cast<int>(rng.next_below(np)); while (r2 == i || r2 == r1);
            do r3 = static_cast<int>(rng.next_below(np)); while (r3 == i || r3 == r1 || r3 == r2);
            const std::size_t jrand = rng.next_below(dim);
            for (std::size_t d = 0; d < dim; ++d) {
                if (d == jrand || rng.next_double() < cfg.crossover) {
                    const auto& [lo, hi] = cfg.bounds[d];
                    trial[d] = std::clamp(pop[r1][d] + cfg.weight * (pop[r2][d] - pop[r3][d]), lo, hi);
                } else {
                    trial[d] = pop[i][d];
                }
            }
            const double f = eval(trial);
            if (f <= fitness[i]) {
                pop[i] = trial;
                fitness[i] = f;
            }
        }
        result.history.push_back(*std::min_element(fitness.begin(), fitness.end()));
    }
    const int best = static_cast<int>(std::min_element(fitness.begin(), fitness.end()) - fitness.begin());
    result.best = coerce(cfg, pop[best]);
    result.value = fitness[best];
    return result;
}

std::vector<double> default_beta_grid() {
    std::vector<double> betas{0.0};
    for (int k = -1; k <= 6; ++k) betas.push_back(std::pow(10.0, k));
    return betas;
}

std::vector<TradeoffPoint> pareto_filter(std::vector<TradeoffPoint> points) {
    std::stable_sort(points.begin(), points.end(), [](const TradeoffPoint& a, const TradeoffPoint& b) {
        if (a.avg_power != b.avg_power) return a.avg_power < b.avg_power;
        return a.avg_age < b.avg_age;
    });
    std::vector<TradeoffPoint> kept;
    double best_age = std::numeric_limits<double>::infinity();
    for (auto& p : points) {
        if (p.avg_age < best_age) {
            best_age = p.avg_age;
            kept.push_back(std::move(p));
        }
    }
    return kept;
}

namespace {

std::vector<TradeoffPoint> ftt_sweep(const CurveSpec& spec) {
    const auto& grid = spec.t_s_grid.empty() ? spec.scenario.channel.actions() : spec.t_s_grid;
    std::vector<TradeoffPoint> points;
    points.reserve(grid.size());
    for (int t : grid) {
        switch (spec.scenario.model) {
            case GenerationModel::kNP: points.push_back(ftt_np(t, spec.scenario)); break;
            case GenerationModel::kP: points.push_back(ftt_preemptive(t, spec.scenario)); break;
            case GenerationModel::kAT:
                throw ConfigError("pareto_curve: the AT model uses the 'at' family, not the FTT sweep");
        }
    }
    return points;
}

std::vector<TradeoffPoint> threshold_de_curve(const CurveSpec& spec) {
    if (spec.scenario.model != GenerationModel::kNP)
        throw ConfigError("pareto_curve: the threshold family requires the NP model");
    const auto betas = spec.betas.empty() ? default_beta_grid() : spec.betas;
    const int tmin = spec.scenario.tau_min();
    const int tmax = spec.scenario.tau_max();
    const int h_cap = default_a_max(spec.scenario);

    std::vector<SimConfig> sims;
    sims.reserve(betas.size());
    for (std::size_t bi = 0; bi < betas.size(); ++bi) {
        const double beta = betas[bi];
        DeConfig de = spec.de;
        de.bounds = {{0.0, static_cast<double>(h_cap)},
                     {static_cast<double>(tmin), static_cast<double>(tmax)},
                     {static_cast<double>(tmin), static_cast<double>(tmax)}};
        de.integer_mask = {true, true, true};
        de.seed = mix_seed(spec.seed, bi);
        auto objective = [&](const std::vector<double>& x) {
            const int h = static_cast<int>(x[0]);
            const int tau_a = static_cast<int>(x[1]);
            const int tau_b = static_cast<int>(x[2]);
            if (tau_a < tau_b) return kPenalty * (1.0 + tau_b - tau_a);
            const auto pt = threshold_errorfree(h, tau_a, tau_b, spec.scenario);
            return pt.avg_age + beta * pt.avg_power;
        };
        const DeResult best = differential_evolution(objective, de);
        const int h = static_cast<int>(best.best[0]);
        const int tau_a = static_cast<int>(best.best[1]);
        const int tau_b = static_cast<int>(best.best[2]);
        SimConfig sim;
        sim.scenario = spec.scenario;
        sim.policy = tau_a > tau_b ? PolicySpec(ThresholdPolicy{h, tau_a, tau_b}) : PolicySpec(FttPolicy{tau_b});
        sim.horizon = spec.sim_horizon;
        sim.warmup = spec.sim_warmup;
        sim.seed = spec.seed;
        sim.stream = bi + 1;
        sims.push_back(std::move(sim));
    }
    const auto estimates = simulate_batch(sims, spec.parallelism);
    std::vector<TradeoffPoint> points;
    points.reserve(sims.size());
    for (std::size_t i = 0; i < sims.size(); ++i) {
        TradeoffPoint pt;
        pt.avg_age = estimates[i].avg_age;
        pt.avg_power = estimates[i].avg_power;
        pt.provenance = Provenance::kSimulated;
        pt.policy = sims[i].policy;
        pt.scenario_digest = spec.scenario.digest();
        points.push_back(std::move(pt));
    }
    return points;
}

std::vector<TradeoffPoint> joint_rate_curve(const CurveSpec& spec, bool preemptive) {
    const auto betas = spec.betas.empty() ? default_beta_grid() : spec.betas;
    const int tmin = spec.scenario.tau_min();
    const int tmax = spec.scenario.tau_max();
    std::vector<TradeoffPoint> points;
    points.reserve(betas.size());
    for (std::size_t bi = 0; bi < betas.size(); ++bi) {
        const double beta = betas[bi];
        DeConfig de = spec.de;
        de.bounds = {{1e-4, 0.999}, {static_cast<double>(tmin), static_cast<double>(tmax)}};
        de.integer_mask = {false, true};
        de.seed = mix_seed(spec.seed, 0x70000 + bi);
        auto objective = [&](const std::vector<double>& x) {
            const Scenario sc = spec.scenario.with_lambda(x[0]);
            const int t = static_cast<int>(x[1]);
            try {
                const auto pt = preemptive ? ftt_preemptive(t, sc) : ftt_np(t, sc);
                return pt.avg_age + beta * pt.avg_power;
            } catch (const std::domain_error&) {
                return kPenalty;
            }
        };
        const DeResult best = differential_evolution(objective, de);
        const Scenario sc = spec.scenario.with_lambda(best.best[0]);
        const int t = static_cast<int>(best.best[1]);
        points.push_back(preemptive ? ftt_preemptive(t, sc) : ftt_np(t, sc));
    }
    return points;
}

std::vector<TradeoffPoint> at_sweep(const CurveSpec& spec) {
    if (spec.scenario.model != GenerationModel::kAT)
        throw ConfigError("pareto_curve: the 'at' family requires the AT model");
    const auto& ts = spec.t_s_grid.empty() ? spec.scenario.channel.actions() : spec.t_s_grid;
    std::vector<int> has = spec.h_a_grid;
    if (has.empty()) {
        const int hi = 10 * spec.scenario.tau_max();
        const int step = std::max(1, (hi - spec.scenario.tau_min()) / 400);
        for (int h = spec.scenario.tau_min(); h <= hi; h += step) has.push_back(h);
    }
    std::vector<TradeoffPoint> points;
    points.reserve(ts.size() * has.size());
    for (int t : ts)
        for (int h : has) points.push_back(ftt_age_threshold(h, t, spec.scenario));
    return pareto_filter(std::move(points));
}

std::vector<TradeoffPoint> smdp_frontier(const CurveSpec& spec) {
    const auto betas = spec.betas.empty() ? default_beta_grid() : spec.betas;
    const auto entries = sweep_beta(spec.scenario, betas, spec.a_max, spec.vi_tol, spec.vi_max_iter, spec.parallelism);
    std::vector<TradeoffPoint> points;
    points.reserve(entries.size());
    for (const auto& e : entries) points.push_back(e.point);
    return points;
}

}  // namespace

std::vector<TradeoffPoint> pareto_curve(const CurveSpec& spec) {
    switch (spec.family) {
        case CurveFamily::kFttSweep: return ftt_sweep(spec);
        case CurveFamily::kThresholdDe: return threshold_de_curve(spec);
        case CurveFamily::kNpOpt: return joint_rate_curve(spec, false);
        case CurveFamily::kPOpt: return joint_rate_curve(spec, true);
        case CurveFamily::kAtSweep: return at_sweep(spec);
        case CurveFamily::kSmdpFrontier: return smdp_frontier(spec);
    }
    throw std::logic_error("pareto_curve: unknown family");
}

}  // namespace aoilab
