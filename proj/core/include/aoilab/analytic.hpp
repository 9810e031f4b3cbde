#pragma once

#include "aoilab/scenario.hpp"

namespace aoilab {

// Closed-form average AoI / average power for a fixed-transmission-time policy
// under the non-preemptive generation model, with per-transmission error
// probability scenario.epsilon.
TradeoffPoint ftt_np(int t_s, const Scenario& scenario);

// Same with the error probability forced to zero (the channel table is kept).
TradeoffPoint ftt_errorfree(int t_s, const Scenario& scenario);

// Two-state embedded-chain evaluation of a threshold policy in the error-free
// system. tau_a == tau_b collapses to ftt_errorfree (documented behavior).
TradeoffPoint threshold_errorfree(int h, int tau_a, int tau_b, const Scenario& scenario);

// Preemptive generation model: new packets preempt and discard an ongoing
// transmission. Throws std::domain_error when lambda = 1 and t_s >= 2 (the
// success probability vanishes and the average age diverges).
TradeoffPoint ftt_preemptive(int t_s, const Scenario& scenario);

// Age-threshold generation model with threshold h_a; any h_a < t_s behaves
// exactly as h_a = t_s.
TradeoffPoint ftt_age_threshold(int h_a, int t_s, const Scenario& scenario);

// Conditional moments of the geometric gap G~ on {0,1,2,...}; exposed for the
// test suite's independent cross-checks.
struct GeometricGapMoments {
    double mean;
    double second_moment;
};
GeometricGapMoments gap_moments_above(double lambda, int k);     // given G~ > k
GeometricGapMoments gap_moments_at_most(double lambda, int k);   // given G~ <= k, k >= 0

}  // namespace aoilab
