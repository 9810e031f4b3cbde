#pragma once

#include <vector>

#include "aoilab/scenario.hpp"

namespace aoilab {

// Truncated average-cost SMDP over decision-epoch ages 1..a_max. Ages past
// a_max are lumped onto a_max; rows then sum to one exactly.
struct SmdpModel {
    Scenario scenario;
    double beta = 0.0;
    int a_max = 0;

    std::vector<int> actions;
    std::vector<double> action_power;

    double mean_gap() const { return scenario.mean_gap(); }
    double epoch_length(int tau) const { return tau + scenario.mean_gap(); }
    // age part of the single-stage cost (cumulative age over one epoch)
    double age_cost(int age, int tau) const;
    // full single-stage cost including beta * P(tau) * tau
    double cost(int age, int tau) const;
    // transition row as a dense pmf over ages 1..a_max (index 0 -> age 1)
    std::vector<double> kernel_row(int age, int tau) const;
};

// a_max default: tau_max + ceil(20/lambda); the lumped geometric tail mass per
// row is below (1-lambda)^(20/lambda) ~ e^-20.
int default_a_max(const Scenario& scenario);

SmdpModel build_model(const Scenario& scenario, double beta, int a_max);

struct SmdpSolution {
    std::vector<int> policy;  // index 0 -> age 1
    double gain = 0.0;        // average cost per slot
    double gain_lower = 0.0;  // one-step difference bounds at termination
    double gain_upper = 0.0;
    std::vector<double> value;  // relative value function
    int iterations = 0;
    double span = 0.0;
    bool converged = false;
    int a_max = 0;
};

// Value iteration after the standard data transformation to a unit-slot chain
// (normalization constant 0.5 * min epoch length). Greedy ties break toward
// the smallest tau. Non-convergence is reported, not fatal.
SmdpSolution value_iteration(const SmdpModel& model, double tol = 1e-8, int max_iter = 100000);

struct PolicyEvaluation {
    double avg_age = 0.0;
    double avg_power = 0.0;
    double gain = 0.0;  // avg_age + beta * avg_power
    std::vector<double> age_distribution;     // stationary over ages 1..a_max
    std::vector<double> action_distribution;  // stationary over model.actions
    TradeoffPoint point;
};

// Stationary distribution of the policy-induced chain (power iteration to a
// 1e-12 L1 residual) and the Markov-renewal-reward split of the gain into
// (avg_age, avg_power).
PolicyEvaluation evaluate_tabular(const SmdpModel& model, const std::vector<int>& policy);

struct BetaSweepEntry {
    double beta = 0.0;
    SmdpSolution solution;
    PolicyEvaluation evaluation;
    TradeoffPoint point;
};

// One solved frontier point per beta. Betas are solved independently; worker
// count is min(parallelism, AOI_LAB_THREADS when set).
std::vector<BetaSweepEntry> sweep_beta(const Scenario& scenario, const std::vector<double>& betas, int a_max = -1,
                                       double tol = 1e-8, int max_iter = 100000, int parallelism = 1);

}  // namespace aoilab
