#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "aoilab/channel.hpp"

namespace aoilab {

enum class GenerationModel { kNP, kP, kAT };

const char* to_string(GenerationModel model);

// Full system parameterization. The action set {tau_min..tau_max} lives in the
// channel table; epsilon here drives the dynamics (the channel table keeps the
// epsilon it was built with, which is what the error-free approximation needs).
struct Scenario {
    double lambda = 0.1;       // packet generation probability per slot, (0,1]; unused for AT
    double epsilon = 0.01;     // per-transmission error probability, [0,1)
    GenerationModel model = GenerationModel::kNP;
    ChannelModel channel;

    int tau_min() const { return channel.tau_min(); }
    int tau_max() const { return channel.tau_max(); }
    // E[G~] for the geometric generation gap on {0,1,2,...}
    double mean_gap() const { return (1.0 - lambda) / lambda; }

    Scenario with_epsilon(double eps) const;
    Scenario with_lambda(double lam) const;
    std::uint64_t digest() const;
};

Scenario make_scenario(double lambda, double epsilon, GenerationModel model, ChannelModel channel);

struct FttPolicy {
    int t_s;
};
struct ThresholdPolicy {
    int h;      // age threshold at decision epochs
    int tau_a;  // used while age <= h
    int tau_b;  // used while age > h
};
struct RandomizedPolicy {
    std::vector<int> taus;
    std::vector<double> pmf;
};
struct TabularPolicy {
    std::vector<int> tau_by_age;  // index 0 -> age 1; ages past the end clamp to back()
};
struct AtFixedPolicy {
    int h_a;  // generation threshold of the AT model
    int t_s;
};

using PolicySpec = std::variant<FttPolicy, ThresholdPolicy, RandomizedPolicy, TabularPolicy, AtFixedPolicy>;

// Throws std::invalid_argument on violated policy invariants (actions outside
// the scenario action set, tau_a <= tau_b, pmf not summing to 1, ...).
void validate_policy(const PolicySpec& policy, const Scenario& scenario);

std::string policy_to_string(const PolicySpec& policy);

enum class Provenance { kAnalytic, kSmdp, kSimulated, kBound };

const char* to_string(Provenance provenance);

struct TradeoffPoint {
    double avg_age = 0.0;    // slots
    double avg_power = 0.0;  // mW
    Provenance provenance = Provenance::kAnalytic;
    PolicySpec policy = FttPolicy{1};
    std::uint64_t scenario_digest = 0;
};

}  // namespace aoilab
