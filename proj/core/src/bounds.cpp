#include "aoilab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "aoilab/errors.hpp"
#include "aoilab/mathutil.hpp"
#include "aoilab/simplex.hpp"

namespace aoilab {

double LfpProblem::numerator(int tau_prev, int tau_cur) const {
    const double g = mean_gap;
    const double head = statement_numerator ? tau_prev * (g + tau_cur) : tau_cur * (g + tau_prev);
    return head + 0.5 * (g + tau_cur) * (g + tau_cur - 1.0);
}

LfpProblem make_lfp(const Scenario& scenario, double power_budget, int stride, bool statement_numerator) {
    if (stride < 1) throw std::invalid_argument("make_lfp: stride must be >= 1");
    LfpProblem p;
    const auto& actions = scenario.channel.actions();
    for (std::size_t i = 0; i < actions.size(); i += stride) {
        p.actions.push_back(actions[i]);
        p.powers.push_back(scenario.channel.powers()[i]);
    }
    if (p.actions.back() != actions.back()) {
        p.actions.push_back(actions.back());
        p.powers.push_back(scenario.channel.powers().back());
    }
    p.mean_gap = scenario.mean_gap();
    p.power_budget = power_budget;
    p.statement_numerator = statement_numerator;
    return p;
}

double min_feasible_power(const Scenario& scenario) {
    const int tmax = scenario.tau_max();
    return scenario.channel.power(tmax) * tmax / (tmax + scenario.mean_gap());
}

BoundResult numerical_lower_bound(const Scenario& scenario, double power_budget, int stride,
                                  bool statement_numerator) {
    const double pmin = min_feasible_power(scenario);
    if (power_budget < pmin * (1.0 - 1e-12)) {
        std::ostringstream msg;
        msg << "numerical_lower_bound: power budget " << power_budget
            << " mW is infeasible; the minimum feasible average power is " << pmin << " mW";
        throw InfeasibleError(msg.str());
    }
    const LfpProblem lfp = make_lfp(scenario, power_budget, stride, statement_numerator);
    const int n = static_cast<int>(lfp.actions.size());
    const int nv = n * n + 1;  // y(tau, tau') plus the Charnes-Cooper scale t
    const double g = lfp.mean_gap;

    SimplexProblem sp;
    sp.objective.assign(nv, 0.0);
    sp.rows.assign(3, std::vector<double>(nv, 0.0));
    sp.rhs = {0.0, 1.0, 0.0};
    sp.relations = {'<', '=', '='};
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const int col = i * n + j;
            sp.objective[col] = lfp.numerator(lfp.actions[i], lfp.actions[j]);
            sp.rows[0][col] = (lfp.powers[j] - power_budget) * lfp.actions[j];  // power constraint
            sp.rows[1][col] = lfp.actions[j];                                   // denominator = 1
            sp.rows[2][col] = 1.0;                                              // mass = t
        }
    }
    sp.rows[0][nv - 1] = -power_budget * g;
    sp.rows[1][nv - 1] = g;
    sp.rows[2][nv - 1] = -1.0;

    const SimplexResult lp = solve_simplex(sp);
    if (lp.status == SimplexStatus::kInfeasible) {
        std::ostringstream msg;
        msg << "numerical_lower_bound: LP infeasible at budget " << power_budget
            << " mW (minimum feasible average power " << pmin << " mW)";
        throw InfeasibleError(msg.str());
    }
    if (lp.status != SimplexStatus::kOptimal) throw std::runtime_error("numerical_lower_bound: LP unbounded");

    BoundResult result;
    result.method = BoundMethod::kCharnesCooper;
    result.value = lp.value;  // objective already equals the fractional value (denominator scaled to 1)
    const double t = lp.solution[nv - 1];
    if (t <= 0.0) throw std::runtime_error("numerical_lower_bound: degenerate Charnes-Cooper scale");
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double mass = lp.solution[i * n + j] / t;
            if (mass > 1e-10) result.support.emplace_back(lfp.actions[i], lfp.actions[j], mass);
        }
    return result;
}

BoundResult analytical_lower_bound(const Scenario& scenario, double power_budget) {
    const double pmin = min_feasible_power(scenario);
    if (power_budget < pmin * (1.0 - 1e-12)) {
        std::ostringstream msg;
        msg << "analytical_lower_bound: power budget " << power_budget
            << " mW is infeasible; the minimum feasible average power is " << pmin << " mW";
        throw InfeasibleError(msg.str());
    }
    const double lam = scenario.lambda;
    const double g = scenario.mean_gap();
    const int tmin = scenario.tau_min();
    const int tmax = scenario.tau_max();
    std::vector<double> xs(scenario.channel.actions().begin(), scenario.channel.actions().end());
    const MonotoneCubic ptable(xs, scenario.channel.powers());
    // smallest real tau in [tau_min, tau_max] with lam tau P(tau)/(1-lam+lam tau) <= budget;
    // the constraint function is decreasing in tau.
    auto avg_power = [&](double tau) { return lam * tau * ptable(tau) / (1.0 - lam + lam * tau); };
    double tau_star;
    if (avg_power(tmin) <= power_budget) {
        tau_star = tmin;
    } else {
        double lo = tmin, hi = tmax;
        for (int i = 0; i < 200 && (hi - lo) > 1e-12 * tmax; ++i) {
            const double mid = 0.5 * (lo + hi);
            if (avg_power(mid) <= power_budget)
                hi = mid;
            else
                lo = mid;
        }
        tau_star = hi;
    }
    const double cl = 2.0 * tau_star * g + tau_star * tmin + 0.5 * tau_star * (tau_star - 1.0) + g * g;
    BoundResult result;
    result.method = BoundMethod::kAnalytic;
    result.value = cl / (tmax + g);
    result.tau_star = tau_star;
    return result;
}

std::vector<std::pair<int, double>> stationary_probability_caps(const Scenario& scenario, double delta,
                                                                CapRegime regime) {
    if (!(delta > 0.0)) throw std::invalid_argument("stationary_probability_caps: delta must be positive");
    const auto& actions = scenario.channel.actions();
    const auto& powers = scenario.channel.powers();
    const double g = scenario.mean_gap();
    std::vector<std::pair<int, double>> caps;
    caps.reserve(actions.size() - 1);
    if (regime == CapRegime::kLowPower) {
        const double anchor = powers.back() * actions.back();
        const double scale = delta * (actions.back() + g);
        for (std::size_t i = 0; i + 1 < actions.size(); ++i) {
            const double denom = powers[i] * actions[i] - anchor;
            caps.emplace_back(actions[i], std::min(1.0, scale / denom));
        }
    } else {
        const double anchor = powers.front() * actions.front();
        const double scale = delta * (actions.front() + g);
        for (std::size_t i = 1; i < actions.size(); ++i) {
            const double denom = anchor - powers[i] * actions[i];
            caps.emplace_back(actions[i], std::min(1.0, scale / denom));
        }
    }
    return caps;
}

}  // namespace aoilab
