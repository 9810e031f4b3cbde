#pragma once

#include <cmath>
#include <vector>

#include "aoilab/channel.hpp"
#include "aoilab/scenario.hpp"

namespace aoilab::test {

// The baseline scenario used throughout: K=8 bits, N=10 mW, tau in [24,138].
// The channel table needs a proper target error probability, so epsilon = 0
// (error-free dynamics) keeps the 0.01 table, matching the ERRFREE convention.
inline Scenario np_scenario(double lambda = 0.1, double epsilon = 0.01) {
    const double table_eps = epsilon > 0.0 && epsilon < 0.5 ? epsilon : 0.01;
    AwgnParams params{8, 10.0, table_eps, 0.0};
    return make_scenario(lambda, epsilon, GenerationModel::kNP,
                         ChannelModel::normal_approx(params, 24, 138));
}

inline Scenario with_model(Scenario s, GenerationModel model) {
    s.model = model;
    return s;
}

// Synthetic convex table 1/tau-style, handy when exact P values are wanted.
inline ChannelModel toy_channel(int tau_min, int tau_max, double scale = 240.0) {
    std::vector<int> actions;
    std::vector<double> powers;
    for (int t = tau_min; t <= tau_max; ++t) {
        actions.push_back(t);
        powers.push_back(scale / t);
    }
    return ChannelModel::from_table(actions, powers);
}

inline bool close(double a, double b, double rel, double abs = 0.0) {
    return std::fabs(a - b) <= std::max(abs, rel * std::max(std::fabs(a), std::fabs(b)));
}

}  // namespace aoilab::test
