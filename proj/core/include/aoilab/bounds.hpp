#pragma once

#include <tuple>
#include <vector>

#include "aoilab/scenario.hpp"

namespace aoilab {

enum class BoundMethod { kCharnesCooper, kAnalytic, kCap };

struct BoundResult {
    double value = 0.0;  // slots
    BoundMethod method = BoundMethod::kCharnesCooper;
    // optimal support of the pair distribution: (tau_prev, tau_cur, mass)
    std::vector<std::tuple<int, int, double>> support;
    double tau_star = 0.0;  // continuous minimizer, analytic bound only
};

struct LfpProblem {
    std::vector<int> actions;  // strided grid, always containing tau_min and tau_max
    std::vector<double> powers;
    double mean_gap = 0.0;
    double power_budget = 0.0;
    bool statement_numerator = false;  // alternative objective form for comparison
    double numerator(int tau_prev, int tau_cur) const;
};

// Grid setup shared by the solver and the test oracle.
LfpProblem make_lfp(const Scenario& scenario, double power_budget, int stride = 1, bool statement_numerator = false);

// Minimum average power over stationary policies (FTT at tau_max attains it).
double min_feasible_power(const Scenario& scenario);

// Linear-fractional lower bound on the optimal average age at the given power
// budget, solved exactly via the Charnes-Cooper transform and a dense simplex.
// Throws InfeasibleError (naming the minimum feasible power) when the budget
// is below it.
BoundResult numerical_lower_bound(const Scenario& scenario, double power_budget, int stride = 1,
                                  bool statement_numerator = false);

// Closed-form lower bound with the integer constraint on tau relaxed; the
// channel table is extended to real tau by monotone cubic interpolation.
BoundResult analytical_lower_bound(const Scenario& scenario, double power_budget);

enum class CapRegime { kLowPower, kHighPower };

// Upper bounds on the stationary probability of using each non-extreme
// transmission duration for policies within delta of the relevant power
// endpoint. Caps are clipped to 1; the extreme action itself is excluded.
std::vector<std::pair<int, double>> stationary_probability_caps(const Scenario& scenario, double delta,
                                                                CapRegime regime);

}  // namespace aoilab
