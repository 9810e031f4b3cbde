#include "aoilab/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "aoilab/errors.hpp"
#include "aoilab/mathutil.hpp"

namespace aoilab {

namespace {

constexpr double kSnrLo = 1e-9;
constexpr double kSnrHi = 1e9;
constexpr int kBisectIters = 200;
constexpr double kBisectRelTol = 1e-10;

void check_awgn(const AwgnParams& p, bool need_bandwidth = false) {
    if (p.K < 1) throw std::invalid_argument("AwgnParams: K must be a positive integer");
    if (!(p.N > 0.0)) throw std::invalid_argument("AwgnParams: noise power must be positive");
    if (!(p.epsilon > 0.0 && p.epsilon < 1.0)) throw std::invalid_argument("AwgnParams: epsilon must lie in (0,1)");
    if (need_bandwidth && !(p.W > 0.0)) throw std::invalid_argument("AwgnParams: bandwidth must be positive");
}

// Pre-ceiling blocklength expression, decreasing in snr.
double blocklength_real(double snr, const AwgnParams& p) {
    const auto [c, v] = awgn_capacity_dispersion(snr);
    const double q = q_inverse(p.epsilon);
    return p.K / c + v * q * q / (2.0 * c * c) + (std::sqrt(v) * q / c) * std::sqrt(4.0 * c * p.K + v * q * q);
}

// Log-domain bisection for the smallest snr with ok(snr) true; ok must be
// monotone (false below, true above).
template <typename Pred>
double smallest_snr(Pred ok, const char* what) {
    if (!ok(kSnrHi)) {
        std::ostringstream msg;
        msg << what << ": infeasible at SNR bracket ceiling " << kSnrHi;
        throw InfeasibleError(msg.str());
    }
    if (ok(kSnrLo)) return kSnrLo;
    double lo = std::log(kSnrLo), hi = std::log(kSnrHi);
    for (int i = 0; i < kBisectIters && (hi - lo) > kBisectRelTol; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (ok(std::exp(mid)))
            hi = mid;
        else
            lo = mid;
    }
    return std::exp(hi);
}

}  // namespace

CapacityDispersion awgn_capacity_dispersion(double snr) {
    if (!(snr > 0.0)) throw std::invalid_argument("awgn_capacity_dispersion: snr must be positive");
    const double log2e = std::numbers::log2e;
    const double c = 0.5 * std::log2(1.0 + snr);
    const double r = 1.0 + snr;
    const double v = (log2e * log2e / 2.0) * (1.0 - 1.0 / (r * r));
    return {c, v};
}

std::int64_t blocklength_for_power(double power, const AwgnParams& params) {
    check_awgn(params);
    if (!(power > 0.0)) throw std::invalid_argument("blocklength_for_power: power must be positive");
    const double tau = blocklength_real(power / params.N, params);
    return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(tau)));
}

double power_for_blocklength(int tau, const AwgnParams& params) {
    check_awgn(params);
    if (tau < 1) throw std::invalid_argument("power_for_blocklength: tau must be >= 1");
    const double snr =
        smallest_snr([&](double g) { return blocklength_real(g, params) <= tau; }, "power_for_blocklength");
    return snr * params.N;
}

double shannon_power(int tau, const AwgnParams& params) {
    check_awgn(params, /*need_bandwidth=*/true);
    if (tau < 1) throw std::invalid_argument("shannon_power: tau must be >= 1");
    return params.N * (std::exp2(static_cast<double>(params.K) / (params.W * tau)) - 1.0);
}

double fading_power(int blocks, const FadingParams& params) {
    if (blocks < 1) throw std::invalid_argument("fading_power: blocks must be >= 1");
    if (params.T < 1) throw std::invalid_argument("fading_power: coherence time must be >= 1");
    if (params.K < 1) throw std::invalid_argument("fading_power: K must be a positive integer");
    if (!(params.N > 0.0)) throw std::invalid_argument("fading_power: noise power must be positive");
    if (!(params.epsilon > 0.0 && params.epsilon < 1.0))
        throw std::invalid_argument("fading_power: epsilon must lie in (0,1)");

    static const QuadratureRule rule = gauss_laguerre(64);
    const double tau = static_cast<double>(blocks) * params.T;
    const double k_nats = params.K * std::numbers::ln2;
    const double q = q_inverse(params.epsilon);

    auto achievable = [&](double snr) {
        double c, var, einv;
        if (params.gain == GainModel::kUnitGain) {
            c = std::log1p(snr);
            var = 0.0;
            einv = 1.0 / (1.0 + snr);
        } else {
            double m1 = 0.0, m2 = 0.0, mi = 0.0;
            for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                const double l = std::log1p(snr * rule.nodes[i]);
                m1 += rule.weights[i] * l;
                m2 += rule.weights[i] * l * l;
                mi += rule.weights[i] / (1.0 + snr * rule.nodes[i]);
            }
            c = m1;
            var = std::max(0.0, m2 - m1 * m1);
            einv = mi;
        }
        const double v = params.T * var + 1.0 - einv * einv;
        return tau * c - std::sqrt(tau * v) * q >= k_nats;
    };
    const double snr = smallest_snr(achievable, "fading_power");
    return snr * params.N;
}

double error_probability(int tau, double snr, int K) {
    if (tau < 1) throw std::invalid_argument("error_probability: tau must be >= 1");
    if (!(snr > 0.0)) throw std::invalid_argument("error_probability: snr must be positive");
    const double k_nats = K * std::numbers::ln2;
    const double r = 1.0 + snr;
    const double arg = std::sqrt(static_cast<double>(tau)) * (std::log1p(snr) - k_nats / tau) /
                       std::sqrt(1.0 - 1.0 / (r * r));
    return q_function(arg);
}

ChannelModel::ChannelModel(ChannelVariant variant, std::vector<int> actions, std::vector<double> powers)
    : variant_(variant), actions_(std::move(actions)), powers_(std::move(powers)) {
    if (actions_.empty() || actions_.size() != powers_.size())
        throw std::invalid_argument("ChannelModel: action/power tables must be non-empty and matched");
    for (std::size_t i = 0; i < actions_.size(); ++i) {
        if (actions_[i] < 1) throw std::invalid_argument("ChannelModel: actions must be >= 1 slot");
        if (i > 0 && actions_[i] <= actions_[i - 1])
            throw std::invalid_argument("ChannelModel: actions must be strictly increasing");
        if (!(powers_[i] > 0.0)) throw std::invalid_argument("ChannelModel: P(tau) must be positive");
        if (i > 0) {
            if (powers_[i] > powers_[i - 1] * (1.0 + 1e-12))
                throw std::invalid_argument("ChannelModel: P(tau) must be non-increasing");
            if (actions_[i] * powers_[i] > actions_[i - 1] * powers_[i - 1] * (1.0 + 1e-12))
                throw std::invalid_argument("ChannelModel: tau*P(tau) must be non-increasing");
        }
    }
}

ChannelModel ChannelModel::normal_approx(const AwgnParams& params, int tau_min, int tau_max) {
    check_awgn(params);
    if (tau_min < 1 || tau_min > tau_max) throw std::invalid_argument("ChannelModel: need 1 <= tau_min <= tau_max");
    std::vector<int> actions;
    std::vector<double> powers;
    for (int t = tau_min; t <= tau_max; ++t) {
        actions.push_back(t);
        powers.push_back(power_for_blocklength(t, params));
    }
    return ChannelModel(ChannelVariant::kNormalApprox, std::move(actions), std::move(powers));
}

ChannelModel ChannelModel::shannon(const AwgnParams& params, int tau_min, int tau_max) {
    check_awgn(params, /*need_bandwidth=*/true);
    if (tau_min < 1 || tau_min > tau_max) throw std::invalid_argument("ChannelModel: need 1 <= tau_min <= tau_max");
    std::vector<int> actions;
    std::vector<double> powers;
    for (int t = tau_min; t <= tau_max; ++t) {
        actions.push_back(t);
        powers.push_back(shannon_power(t, params));
    }
    return ChannelModel(ChannelVariant::kShannon, std::move(actions), std::move(powers));
}

ChannelModel ChannelModel::block_fading(const FadingParams& params, int l_min, int l_max) {
    if (l_min < 1 || l_min > l_max) throw std::invalid_argument("ChannelModel: need 1 <= l_min <= l_max");
    std::vector<int> actions;
    std::vector<double> powers;
    for (int l = l_min; l <= l_max; ++l) {
        actions.push_back(l * params.T);
        powers.push_back(fading_power(l, params));
    }
    return ChannelModel(ChannelVariant::kBlockFading, std::move(actions), std::move(powers));
}

ChannelModel ChannelModel::from_table(std::vector<int> actions, std::vector<double> powers, ChannelVariant variant) {
    return ChannelModel(variant, std::move(actions), std::move(powers));
}

bool ChannelModel::has_action(int tau) const {
    return std::binary_search(actions_.begin(), actions_.end(), tau);
}

double ChannelModel::power(int tau) const {
    const auto it = std::lower_bound(actions_.begin(), actions_.end(), tau);
    if (it == actions_.end() || *it != tau) {
        std::ostringstream msg;
        msg << "ChannelModel: tau=" << tau << " is not in the action set [" << tau_min() << ", " << tau_max() << "]";
        throw std::invalid_argument(msg.str());
    }
    return powers_[static_cast<std::size_t>(it - actions_.begin())];
}

std::uint64_t ChannelModel::digest() const {
    std::ostringstream os;
    os << static_cast<int>(variant_);
    char buf[32];
    for (std::size_t i = 0; i < actions_.size(); ++i) {
        std::snprintf(buf, sizeof buf, "|%d:%.17g", actions_[i], powers_[i]);
        os << buf;
    }
    return fnv1a64(os.str());
}

}  // namespace aoilab
