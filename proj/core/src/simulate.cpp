#include "aoilab/simulate.hpp"

#include <cassert>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "aoilab/parallel.hpp"
#include "aoilab/rng.hpp"

namespace aoilab {

namespace {

constexpr int kBatches = 30;

struct PolicyDriver {
    const PolicySpec* spec;
    const ChannelModel* channel;
    int decide(long long age, PhiloxRng& rng) const {
        return std::visit(
            [&](const auto& p) -> int {
                using T = std::decay_t<decltype(p)>;
                if constexpr (std::is_same_v<T, FttPolicy>) {
                    return p.t_s;
                } else if constexpr (std::is_same_v<T, ThresholdPolicy>) {
                    return age <= p.h ? p.tau_a : p.tau_b;
                } else if constexpr (std::is_same_v<T, RandomizedPolicy>) {
                    double u = rng.next_double();
                    for (std::size_t i = 0; i < p.pmf.size(); ++i) {
                        u -= p.pmf[i];
                        if (u < 0.0) return p.taus[i];
                    }
                    return p.taus.back();
                } else if constexpr (std::is_same_v<T, TabularPolicy>) {
                    const auto idx = static_cast<std::size_t>(std::min<long long>(age, static_cast<long long>(p.tau_by_age.size())));
                    return p.tau_by_age[idx - 1];
                } else {
                    return p.t_s;  // AtFixedPolicy
                }
            },
            *spec);
    }
};

long long at_threshold(const PolicySpec& policy) {
    if (const auto* at = std::get_if<AtFixedPolicy>(&policy)) return at->h_a;
    throw std::invalid_argument("simulate: the AT generation model requires an AtFixedPolicy");
}

long long initial_age(const SimConfig& cfg) {
    if (cfg.scenario.model == GenerationModel::kAT) return std::get<AtFixedPolicy>(cfg.policy).t_s;
    return cfg.scenario.tau_min();
}

struct SlotRecord {
    long long t;
    long long age;
    double power;
    const char* event;
};

// Core slot loop shared by simulate / renewal_census / simulate_trace.
template <typename SlotFn, typename DropFn>
void run_slots(const SimConfig& cfg, SlotFn&& on_slot, DropFn&& on_drop) {
    const Scenario& sc = cfg.scenario;
    if (sc.epsilon >= 1.0) throw std::invalid_argument("simulate: requires epsilon < 1");
    if (cfg.horizon <= 0) throw std::invalid_argument("simulate: horizon must be positive");
    const long long warmup = cfg.warmup >= 0 ? cfg.warmup : cfg.horizon / 10;
    if (warmup >= cfg.horizon) throw std::invalid_argument("simulate: need horizon > warmup >= 0");
    validate_policy(cfg.policy, sc);
    if (sc.model == GenerationModel::kAT) {
        (void)at_threshold(cfg.policy);
    } else if (std::holds_alternative<AtFixedPolicy>(cfg.policy)) {
        throw std::invalid_argument("simulate: AtFixedPolicy requires the AT generation model");
    }

    PhiloxRng rng(cfg.seed, cfg.stream);
    PolicyDriver driver{&cfg.policy, &sc.channel};
    const long long h_a = sc.model == GenerationModel::kAT ? at_threshold(cfg.policy) : 0;

    long long age = initial_age(cfg);
    bool transmitting = false;
    int remaining = 0;
    int cur_tau = 0;
    double cur_power = 0.0;
    long long gen_slot = 0;

#ifndef NDEBUG
    long long prev_age = age - 1;
    double slot_energy = 0.0, tx_energy = 0.0;
    long long tx_started = 0;
#endif

    for (long long t = 0; t < cfg.horizon; ++t) {
        const char* event = "";
        // transmission completes at the start of this slot
        if (transmitting && remaining == 0) {
            transmitting = false;
#ifndef NDEBUG
            tx_energy += cur_power * static_cast<double>(t - tx_started);
#endif
            if (!rng.bernoulli(sc.epsilon)) {
                assert(t - gen_slot == cur_tau);
                age = t - gen_slot;  // elapsed since the delivered packet's generation
                event = "drop";
                on_drop(t);
            } else {
                event = "err";
            }
        }
        // packet generation at the start of this slot
        bool generate = false;
        switch (sc.model) {
            case GenerationModel::kNP:
                generate = !transmitting && rng.bernoulli(sc.lambda);
                break;
            case GenerationModel::kP:
                generate = rng.bernoulli(sc.lambda);
                break;
            case GenerationModel::kAT:
                generate = !transmitting && age >= h_a;
                break;
        }
        if (generate) {
            if (transmitting) {
#ifndef NDEBUG
                tx_energy += cur_power * static_cast<double>(t - tx_started);
#endif
                event = "preempt";
                on_drop(-1);  // count a preemption; never ends a cycle
            } else if (event[0] == '\0') {
                event = "gen";
            }
            cur_tau = driver.decide(age, rng);
            cur_power = sc.channel.power(cur_tau);
            remaining = cur_tau;
            transmitting = true;
            gen_slot = t;
#ifndef NDEBUG
            tx_started = t;
#endif
        }
        const double power = transmitting ? cur_power : 0.0;
#ifndef NDEBUG
        assert(age == prev_age + 1 || (event[0] == 'd' && age == cur_tau));
        prev_age = age;
        slot_energy += power;
#endif
        on_slot(SlotRecord{t, age, power, event}, warmup);
        ++age;
        if (transmitting) --remaining;
        if (age > cfg.age_guard) {
            std::ostringstream msg;
            msg << "simulate: age exceeded the divergence guard (" << cfg.age_guard << ") at slot " << t
                << "; lambda=" << sc.lambda << " epsilon=" << sc.epsilon << " policy=" << policy_to_string(cfg.policy);
            throw std::runtime_error(msg.str());
        }
    }
#ifndef NDEBUG
    if (transmitting) tx_energy += cur_power * static_cast<double>(cfg.horizon - tx_started);
    assert(std::fabs(slot_energy - tx_energy) <= 1e-6 * std::max(1.0, tx_energy));
#endif
}

}  // namespace

SimEstimate simulate(const SimConfig& cfg) {
    const long long warmup_slots = cfg.warmup >= 0 ? cfg.warmup : cfg.horizon / 10;
    const long long span = cfg.horizon - warmup_slots;
    const long long batch_len = span >= kBatches ? span / kBatches : span;
    const int nbatch = span >= kBatches ? kBatches : 1;

    std::vector<double> batch_age(nbatch, 0.0), batch_pow(nbatch, 0.0), batch_n(nbatch, 0.0);
    SimEstimate est;
    run_slots(
        cfg,
        [&](const SlotRecord& rec, long long warmup) {
            if (rec.t < warmup) return;
            int b = static_cast<int>((rec.t - warmup) / batch_len);
            if (b >= nbatch) b = nbatch - 1;  // remainder folds into the last batch
            batch_age[b] += static_cast<double>(rec.age);
            batch_pow[b] += rec.power;
            batch_n[b] += 1.0;
        },
        [&](long long t) {
            // whole-run event counters; t < 0 marks a preemption
            if (t < 0)
                ++est.preemptions;
            else
                ++est.receptions;
        });
    double sum_age = 0.0, sum_pow = 0.0, n = 0.0;
    for (int b = 0; b < nbatch; ++b) {
        sum_age += batch_age[b];
        sum_pow += batch_pow[b];
        n += batch_n[b];
    }
    est.avg_age = sum_age / n;
    est.avg_power = sum_pow / n;
    if (nbatch > 1) {
        double va = 0.0, vp = 0.0;
        for (int b = 0; b < nbatch; ++b) {
            const double ma = batch_age[b] / batch_n[b];
            const double mp = batch_pow[b] / batch_n[b];
            va += (ma - est.avg_age) * (ma - est.avg_age);
            vp += (mp - est.avg_power) * (mp - est.avg_power);
        }
        va /= (nbatch - 1);
        vp /= (nbatch - 1);
        est.se_age = std::sqrt(va / nbatch);
        est.se_power = std::sqrt(vp / nbatch);
    }
    return est;
}

std::vector<SimEstimate> simulate_batch(const std::vector<SimConfig>& configs, int parallelism) {
    std::vector<SimEstimate> out(configs.size());
    parallel_for(configs.size(), parallelism, [&](std::size_t i) { out[i] = simulate(configs[i]); });
    return out;
}

CycleStats renewal_census(const SimConfig& cfg) {
    std::vector<double> lengths, energies;
    long long last_drop = -1;
    double cycle_energy = 0.0;
    run_slots(
        cfg,
        [&](const SlotRecord& rec, long long) { cycle_energy += rec.power; },
        [&](long long t) {
            if (t < 0) return;  // preemption marker
            if (last_drop >= 0) {
                lengths.push_back(static_cast<double>(t - last_drop));
                energies.push_back(cycle_energy);
            }
            last_drop = t;
            cycle_energy = 0.0;
        });
    const long long n = static_cast<long long>(lengths.size());
    if (n < 100) {
        std::ostringstream msg;
        msg << "renewal_census: only " << n << " completed cycles (need >= 100); extend the horizon";
        throw std::runtime_error(msg.str());
    }
    CycleStats stats;
    stats.cycles = n;
    double s1 = 0.0, s2 = 0.0, se = 0.0;
    for (long long i = 0; i < n; ++i) {
        s1 += lengths[i];
        s2 += lengths[i] * lengths[i];
        se += energies[i];
    }
    stats.mean_length = s1 / n;
    stats.second_moment_length = s2 / n;
    stats.mean_energy = se / n;
    double vl = 0.0, ve = 0.0;
    for (long long i = 0; i < n; ++i) {
        vl += (lengths[i] - stats.mean_length) * (lengths[i] - stats.mean_length);
        ve += (energies[i] - stats.mean_energy) * (energies[i] - stats.mean_energy);
    }
    stats.se_length = std::sqrt(vl / (n - 1) / n);
    stats.se_energy = std::sqrt(ve / (n - 1) / n);
    return stats;
}

void simulate_trace(const SimConfig& cfg, std::ostream& out) {
    out << "# aoilab trace\n";
    out << "# policy=" << policy_to_string(cfg.policy) << " model=" << to_string(cfg.scenario.model)
        << " seed=" << cfg.seed << " stream=" << cfg.stream << "\n";
    out << "# initial age = " << initial_age(cfg)
        << (cfg.scenario.model == GenerationModel::kAT ? " (AT model starts as if a packet was just delivered)" : "")
        << "\n";
    out << "t,age,power,event\n";
    run_slots(
        cfg,
        [&](const SlotRecord& rec, long long) {
            out << rec.t << ',' << rec.age << ',' << rec.power << ',' << rec.event << '\n';
        },
        [](long long) {});
}

}  // namespace aoilab
