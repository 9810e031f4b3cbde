#include "aoilab/smdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "aoilab/parallel.hpp"

namespace aoilab {

double SmdpModel::age_cost(int age, int tau) const {
    const double g = mean_gap();
    return static_cast<double>(age) * tau + 0.5 * static_cast<double>(tau) * (tau - 1) + tau * g + g * g +
           scenario.epsilon * age * g;
}

double SmdpModel::cost(int age, int tau) const {
    return age_cost(age, tau) + beta * scenario.channel.power(tau) * tau;
}

std::vector<double> SmdpModel::kernel_row(int age, int tau) const {
    const double lam = scenario.lambda;
    const double q = 1.0 - lam;
    const double eps = scenario.epsilon;
    std::vector<double> row(a_max, 0.0);
    // success branch: geometric from tau; error branch: geometric from age+tau
    double ps = lam * (1.0 - eps);
    for (int a = tau; a < a_max; ++a) {
        row[a - 1] += ps;
        ps *= q;
    }
    row[a_max - 1] += (1.0 - eps) * std::pow(q, static_cast<double>(a_max - tau));
    const int err_start = age + tau;
    if (err_start >= a_max) {
        row[a_max - 1] += eps;
    } else {
        double pe = lam * eps;
        for (int a = err_start; a < a_max; ++a) {
            row[a - 1] += pe;
            pe *= q;
        }
        row[a_max - 1] += eps * std::pow(q, static_cast<double>(a_max - err_start));
    }
    return row;
}

int default_a_max(const Scenario& scenario) {
    return scenario.tau_max() + static_cast<int>(std::ceil(20.0 / scenario.lambda));
}

SmdpModel build_model(const Scenario& scenario, double beta, int a_max) {
    if (beta < 0.0) throw std::invalid_argument("build_model: beta must be >= 0");
    if (a_max < scenario.tau_max() + 1)
        throw std::invalid_argument("build_model: a_max must be at least tau_max + 1");
    SmdpModel model;
    model.scenario = scenario;
    model.beta = beta;
    model.a_max = a_max;
    model.actions = scenario.channel.actions();
    model.action_power = scenario.channel.powers();
    return model;
}

SmdpSolution value_iteration(const SmdpModel& model, double tol, int max_iter) {
    const int n = model.a_max;
    const int na = static_cast<int>(model.actions.size());
    const double lam = model.scenario.lambda;
    const double q = 1.0 - lam;
    const double eps = model.scenario.epsilon;
    const double g = model.mean_gap();
    const double eta = 0.5 * (model.scenario.tau_min() + g);

    // c(a,tau)/tt(tau) = a * slope[j] + offset[j] with tt = tau + g
    std::vector<double> slope(na), offset(na), eta_tt(na), keep(na), succ_w(na);
    for (int j = 0; j < na; ++j) {
        const int tau = model.actions[j];
        const double tt = tau + g;
        slope[j] = (tau + eps * g) / tt;
        offset[j] = (0.5 * static_cast<double>(tau) * (tau - 1) + tau * g + g * g +
                     model.beta * model.action_power[j] * tau) /
                    tt;
        eta_tt[j] = eta / tt;
        keep[j] = 1.0 - eta / tt;
        succ_w[j] = eta_tt[j] * (1.0 - eps);
    }

    std::vector<double> value(n, 0.0), next(n, 0.0), s(n + 1, 0.0), succ_term(na);
    std::vector<int> policy(n, model.actions[0]);
    SmdpSolution sol;
    sol.a_max = n;
    double lower = 0.0, upper = 0.0, span = std::numeric_limits<double>::infinity();
    int it = 0;
    while (it < max_iter) {
        ++it;
        // s[x] = sum_{a'>=x} (geometric from x, tail lumped) value; 1-indexed ages
        s[n] = value[n - 1];
        for (int x = n - 1; x >= 1; --x) s[x] = lam * value[x - 1] + q * s[x + 1];
        for (int j = 0; j < na; ++j) succ_term[j] = offset[j] + succ_w[j] * s[model.actions[j]];
        for (int a = 1; a <= n; ++a) {
            const double va = value[a - 1];
            double best = std::numeric_limits<double>::infinity();
            int best_j = 0;
            for (int j = 0; j < na; ++j) {
                const int err_start = std::min(a + model.actions[j], n);
                const double w =
                    a * slope[j] + succ_term[j] + eta_tt[j] * eps * s[err_start] + keep[j] * va;
                if (w < best) {
                    best = w;
                    best_j = j;
                }
            }
            next[a - 1] = best;
            policy[a - 1] = model.actions[best_j];
        }
        lower = std::numeric_limits<double>::infinity();
        upper = -std::numeric_limits<double>::infinity();
        for (int a = 0; a < n; ++a) {
            const double d = next[a] - value[a];
            lower = std::min(lower, d);
            upper = std::max(upper, d);
        }
        span = upper - lower;
        const double ref = next[0];
        for (int a = 0; a < n; ++a) value[a] = next[a] - ref;
        if (span < tol) break;
    }
    sol.policy = std::move(policy);
    sol.value = std::move(value);
    sol.gain_lower = lower;
    sol.gain_upper = upper;
    sol.gain = 0.5 * (lower + upper);
    sol.iterations = it;
    sol.span = span;
    sol.converged = span < tol;
    return sol;
}

PolicyEvaluation evaluate_tabular(const SmdpModel& model, const std::vector<int>& policy) {
    const int n = model.a_max;
    if (static_cast<int>(policy.size()) != n)
        throw std::invalid_argument("evaluate_tabular: policy must cover ages 1..a_max");
    for (int tau : policy)
        if (!model.scenario.channel.has_action(tau))
            throw std::invalid_argument("evaluate_tabular: policy action outside action set");
    const double lam = model.scenario.lambda;
    const double q = 1.0 - lam;
    const double eps = model.scenario.epsilon;

    std::vector<int> start_succ(n), start_err(n);
    for (int a = 1; a <= n; ++a) {
        start_succ[a - 1] = policy[a - 1];
        start_err[a - 1] = std::min(a + policy[a - 1], n);
    }
    std::vector<double> mu(n, 1.0 / n), src(n + 1), nxt(n);
    double residual = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 200000 && residual > 1e-12; ++it) {
        std::fill(src.begin(), src.end(), 0.0);
        for (int a = 0; a < n; ++a) {
            src[start_succ[a]] += (1.0 - eps) * mu[a];
            src[start_err[a]] += eps * mu[a];
        }
        // src indexed by starting age (1..n); forward geometric accumulation
        double acc = 0.0;
        for (int x = 1; x <= n; ++x) {
            acc = src[x] + q * acc;
            nxt[x - 1] = lam * acc;
        }
        nxt[n - 1] = acc;  // tail lump keeps full remaining mass at a_max
        residual = 0.0;
        for (int a = 0; a < n; ++a) residual += std::fabs(nxt[a] - mu[a]);
        mu.swap(nxt);
    }
    if (residual > 1e-12) throw std::runtime_error("evaluate_tabular: stationary distribution did not converge");

    PolicyEvaluation ev;
    ev.age_distribution = mu;
    ev.action_distribution.assign(model.actions.size(), 0.0);
    double num_age = 0.0, num_pow = 0.0, den = 0.0;
    for (int a = 1; a <= n; ++a) {
        const int tau = policy[a - 1];
        const double w = mu[a - 1];
        num_age += w * model.age_cost(a, tau);
        num_pow += w * model.scenario.channel.power(tau) * tau;
        den += w * model.epoch_length(tau);
        const auto it = std::lower_bound(model.actions.begin(), model.actions.end(), tau);
        ev.action_distribution[static_cast<std::size_t>(it - model.actions.begin())] += w;
    }
    ev.avg_age = num_age / den;
    ev.avg_power = num_pow / den;
    ev.gain = ev.avg_age + model.beta * ev.avg_power;
    ev.point.avg_age = ev.avg_age;
    ev.point.avg_power = ev.avg_power;
    ev.point.provenance = Provenance::kSmdp;
    ev.point.policy = TabularPolicy{policy};
    ev.point.scenario_digest = model.scenario.digest();
    return ev;
}

std::vector<BetaSweepEntry> sweep_beta(const Scenario& scenario, const std::vector<double>& betas, int a_max,
                                       double tol, int max_iter, int parallelism) {
    const int n = a_max > 0 ? a_max : default_a_max(scenario);
    std::vector<BetaSweepEntry> entries(betas.size());
    parallel_for(betas.size(), parallelism, [&](std::size_t i) {
        const SmdpModel model = build_model(scenario, betas[i], n);
        BetaSweepEntry e;
        e.beta = betas[i];
        e.solution = value_iteration(model, tol, max_iter);
        e.evaluation = evaluate_tabular(model, e.solution.policy);
        e.point = e.evaluation.point;
        entries[i] = std::move(e);
    });
    return entries;
}

}  // namespace aoilab
