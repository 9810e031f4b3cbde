#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aoilab/scenario.hpp"

namespace aoilab {

inline constexpr const char* kToolVersion = "aoilab 1.0.0";

struct PolicyParams {
    std::string kind = "ftt";  // ftt | threshold | randomized | at | tabular
    int t_s = -1;              // -1 -> tau_min
    int h = 0;
    int tau_a = -1;  // -1 -> tau_max
    int tau_b = -1;  // -1 -> tau_min
    int h_a = -1;    // -1 -> t_s
};

struct SolverParams {
    int a_max = -1;  // -1 -> default truncation
    double tol = 1e-8;
    int max_iter = 100000;
    std::vector<double> betas;  // empty -> default grid
    int pc_grid = 20;
    int stride = 1;
    bool prop3_statement_form = false;
    long long horizon = 1'000'000;
    long long warmup = -1;  // -1 -> 10% of horizon
    int de_population = 30;
    double de_weight = 0.7;
    double de_crossover = 0.9;
    int de_generations = 300;
    std::vector<int> coherence_times = {2, 10, 50};  // fading subcommand sweep
};

struct RunConfig {
    Scenario scenario;
    PolicyParams policy;
    SolverParams solver;
    AwgnParams channel_params;  // K/N/epsilon/W as parsed, for param re-use
    int coherence_time = 1;     // T as parsed (block_fading variant)
    GainModel gain = GainModel::kRayleigh;
    std::uint64_t digest = 0;  // stable hash of the parsed (effective) config
};

// Parses a sectioned key/value config ([channel] / [traffic] / [policy] /
// [solver]; keys may also appear unsectioned) or a JSON document with the same
// schema. Unknown keys are hard errors naming the key and line; the required
// keys are K, N, epsilon, lambda, tau_min, tau_max and model.
RunConfig parse_config_text(const std::string& text, const std::string& origin = "<config>");
RunConfig parse_config_file(const std::string& path);

Scenario load_scenario(const std::string& path);

// Policy resolved against the scenario (defaults filled in).
PolicySpec resolve_policy(const RunConfig& config);

// The full default configuration, as written by --print-defaults.
std::string default_config_text();

}  // namespace aoilab
