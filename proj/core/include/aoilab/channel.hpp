#pragma once

#include <cstdint>
#include <vector>

namespace aoilab {

struct AwgnParams {
    int K = 8;              // packet length, bits
    double N = 1.0;         // noise power, mW
    double epsilon = 0.01;  // target codeword error probability
    double W = 0.0;         // bandwidth in Hz, Shannon variant only
};

enum class GainModel { kRayleigh, kUnitGain };

struct FadingParams {
    int K = 8;
    double N = 1.0;
    double epsilon = 0.01;
    int T = 1;  // coherence time, slots; codewords span L blocks, tau = L*T
    GainModel gain = GainModel::kRayleigh;
};

struct CapacityDispersion {
    double capacity;    // bits per channel use
    double dispersion;  // bits^2 per channel use
};

// AWGN capacity and dispersion at the given SNR.
CapacityDispersion awgn_capacity_dispersion(double snr);

// Normal-approximation blocklength needed to carry K bits at power P. Ceiled.
std::int64_t blocklength_for_power(double power, const AwgnParams& params);

// Smallest power (relative tolerance 1e-10) with blocklength_for_power <= tau.
// Throws InfeasibleError when tau is below the blocklength achievable at the
// top of the SNR bracket.
double power_for_blocklength(int tau, const AwgnParams& params);

// Shannon-capacity power: P = N (2^{K/(W tau)} - 1).
double shannon_power(int tau, const AwgnParams& params);

// Block-fading power for a codeword spanning `blocks` coherence intervals
// (tau = blocks * T). Receiver-CSI dispersion expansion, expectations over the
// fading gain by 64-node Gauss-Laguerre quadrature.
double fading_power(int blocks, const FadingParams& params);

// Codeword error probability of a tau-slot transmission at the given SNR
// (K in bits; converted to nats internally).
double error_probability(int tau, double snr, int K);

enum class ChannelVariant { kNormalApprox, kShannon, kBlockFading };

// Immutable tau -> P(tau) table over the action set. Construction validates
// P > 0, P(tau) non-increasing and tau*P(tau) non-increasing.
class ChannelModel {
  public:
    // inert single-action placeholder; real tables come from the factories
    ChannelModel() : variant_(ChannelVariant::kNormalApprox), actions_{1}, powers_{1.0} {}

    static ChannelModel normal_approx(const AwgnParams& params, int tau_min, int tau_max);
    static ChannelModel shannon(const AwgnParams& params, int tau_min, int tau_max);
    static ChannelModel block_fading(const FadingParams& params, int l_min, int l_max);
    // Direct table, mostly for tests and synthetic scenarios.
    static ChannelModel from_table(std::vector<int> actions, std::vector<double> powers,
                                   ChannelVariant variant = ChannelVariant::kNormalApprox);

    ChannelVariant variant() const { return variant_; }
    const std::vector<int>& actions() const { return actions_; }
    const std::vector<double>& powers() const { return powers_; }
    int tau_min() const { return actions_.front(); }
    int tau_max() const { return actions_.back(); }
    bool has_action(int tau) const;
    double power(int tau) const;  // throws std::invalid_argument if tau is not an action

    std::uint64_t digest() const;

  private:
    ChannelModel(ChannelVariant variant, std::vector<int> actions, std::vector<double> powers);

    ChannelVariant variant_;
    std::vector<int> actions_;
    std::vector<double> powers_;
};

}  // namespace aoilab
