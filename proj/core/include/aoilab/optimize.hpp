#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "aoilab/scenario.hpp"
#include "aoilab/simulate.hpp"

namespace aoilab {

struct DeConfig {
    int population = 30;
    double weight = 0.7;     // F, differential weight
    double crossover = 0.9;  // CR
    int generations = 300;
    std::uint64_t seed = kDefaultSeed;
    std::vector<std::pair<double, double>> bounds;  // per-parameter box
    std::vector<bool> integer_mask;                 // empty means all continuous
};

struct DeResult {
    std::vector<double> best;  // integer-coerced where masked
    double value = 0.0;
    std::vector<double> history;  // best objective per generation
};

// rand/1/bin differential evolution. Candidates are evaluated after rounding
// the masked coordinates; non-finite objective values are discarded via a
// large penalty. Deterministic given (seed, config).
DeResult differential_evolution(const std::function<double(const std::vector<double>&)>& objective,
                                const DeConfig& config);

enum class CurveFamily { kFttSweep, kThresholdDe, kNpOpt, kPOpt, kAtSweep, kSmdpFrontier };

const char* to_string(CurveFamily family);

struct CurveSpec {
    CurveFamily family = CurveFamily::kFttSweep;
    Scenario scenario;
    std::vector<double> betas;   // ThresholdDe / NpOpt / POpt / SmdpFrontier; empty -> default grid
    std::vector<int> t_s_grid;   // FttSweep / AtSweep; empty -> full action set
    std::vector<int> h_a_grid;   // AtSweep; empty -> default grid
    DeConfig de;
    long long sim_horizon = 1'000'000;  // ThresholdDe step 2
    long long sim_warmup = 100'000;
    std::uint64_t seed = kDefaultSeed;
    int a_max = -1;      // SmdpFrontier; -1 -> default
    double vi_tol = 1e-8;
    int vi_max_iter = 100000;
    int parallelism = 1;
};

// Default Lagrange-weight grid: {0} followed by decades from 1e-1 to 1e6.
std::vector<double> default_beta_grid();

// Tradeoff curve per family. FTT/AT families evaluate closed forms; the
// threshold family runs the two-step procedure (error-free analytic
// optimization, then a with-errors simulation of the found parameters);
// NP-OPT/P-OPT jointly optimize (lambda, t_s) per beta; the SMDP family
// delegates to sweep_beta. Only the AT sweep is Pareto-filtered.
std::vector<TradeoffPoint> pareto_curve(const CurveSpec& spec);

// Points not dominated in (age, power), sorted by increasing power. Exact
// duplicates collapse to one representative.
std::vector<TradeoffPoint> pareto_filter(std::vector<TradeoffPoint> points);

}  // namespace aoilab
