#pragma once

#include <cstdint>
#include <iosfwd>

#include "aoilab/scenario.hpp"

namespace aoilab {

// Documented fixed default for every seeded entry point (not entropy).
inline constexpr std::uint64_t kDefaultSeed = 1729;

struct SimConfig {
    Scenario scenario;
    PolicySpec policy = FttPolicy{1};
    long long horizon = 1'000'000;  // slots simulated
    long long warmup = -1;          // slots discarded; -1 means horizon/10
    std::uint64_t seed = kDefaultSeed;
    std::uint64_t stream = 0;       // sub-stream for batches sharing a seed
    long long age_guard = 1'000'000'000;  // abort threshold for divergent age
};

struct SimEstimate {
    double avg_age = 0.0;
    double avg_power = 0.0;
    double se_age = 0.0;    // batch-means standard errors, 30 batches
    double se_power = 0.0;
    long long receptions = 0;   // successful deliveries
    long long preemptions = 0;  // P model only
};

// Slot-level Monte Carlo run. Bernoulli(epsilon) error per transmission,
// instantaneous error-free feedback at transmission end. (seed, config) ->
// bitwise identical estimates.
SimEstimate simulate(const SimConfig& config);

// Independent runs, executed with up to `parallelism` workers (capped by
// AOI_LAB_THREADS). Output is bitwise independent of the schedule.
std::vector<SimEstimate> simulate_batch(const std::vector<SimConfig>& configs, int parallelism = 1);

struct CycleStats {
    double mean_length = 0.0;
    double second_moment_length = 0.0;
    double mean_energy = 0.0;  // mW * slots per cycle
    double se_length = 0.0;
    double se_energy = 0.0;
    long long cycles = 0;
};

// Empirical renewal-cycle statistics; cycles are delimited by age drops.
// Throws when fewer than 100 cycles complete.
CycleStats renewal_census(const SimConfig& config);

// Per-slot trace: "t,age,power,event" records after comment headers.
void simulate_trace(const SimConfig& config, std::ostream& out);

}  // namespace aoilab
