#include "aoilab/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "aoilab/mathutil.hpp"

namespace aoilab {

const char* to_string(GenerationModel model) {
    switch (model) {
        case GenerationModel::kNP: return "NP";
        case GenerationModel::kP: return "P";
        case GenerationModel::kAT: return "AT";
    }
    return "?";
}

const char* to_string(Provenance provenance) {
    switch (provenance) {
        case Provenance::kAnalytic: return "analytic";
        case Provenance::kSmdp: return "smdp";
        case Provenance::kSimulated: return "simulated";
        case Provenance::kBound: return "bound";
    }
    return "?";
}

Scenario make_scenario(double lambda, double epsilon, GenerationModel model, ChannelModel channel) {
    if (model != GenerationModel::kAT && !(lambda > 0.0 && lambda <= 1.0))
        throw std::invalid_argument("Scenario: lambda must lie in (0,1]");
    if (!(epsilon >= 0.0 && epsilon < 1.0)) throw std::invalid_argument("Scenario: epsilon must lie in [0,1)");
    Scenario s;
    s.lambda = lambda;
    s.epsilon = epsilon;
    s.model = model;
    s.channel = std::move(channel);
    return s;
}

Scenario Scenario::with_epsilon(double eps) const {
    Scenario s = *this;
    if (!(eps >= 0.0 && eps < 1.0)) throw std::invalid_argument("Scenario: epsilon must lie in [0,1)");
    s.epsilon = eps;
    return s;
}

Scenario Scenario::with_lambda(double lam) const {
    Scenario s = *this;
    if (!(lam > 0.0 && lam <= 1.0)) throw std::invalid_argument("Scenario: lambda must lie in (0,1]");
    s.lambda = lam;
    return s;
}

std::uint64_t Scenario::digest() const {
    char buf[128];
    std::snprintf(buf, sizeof buf, "lambda=%.17g|epsilon=%.17g|model=%s|channel=%016llx", lambda, epsilon,
                  to_string(model), static_cast<unsigned long long>(channel.digest()));
    return fnv1a64(buf);
}

void validate_policy(const PolicySpec& policy, const Scenario& scenario) {
    const auto& chan = scenario.channel;
    auto need_action = [&](int tau, const char* what) {
        if (!chan.has_action(tau)) {
            std::ostringstream msg;
            msg << what << "=" << tau << " is not in the scenario action set";
            throw std::invalid_argument(msg.str());
        }
    };
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, FttPolicy>) {
                need_action(p.t_s, "t_s");
            } else if constexpr (std::is_same_v<T, ThresholdPolicy>) {
                need_action(p.tau_a, "tau_a");
                need_action(p.tau_b, "tau_b");
                if (p.tau_a <= p.tau_b) throw std::invalid_argument("ThresholdPolicy: requires tau_a > tau_b");
                if (p.h < 0) throw std::invalid_argument("ThresholdPolicy: h must be >= 0");
            } else if constexpr (std::is_same_v<T, RandomizedPolicy>) {
                if (p.taus.empty() || p.taus.size() != p.pmf.size())
                    throw std::invalid_argument("RandomizedPolicy: taus/pmf must be non-empty and matched");
                double sum = 0.0;
                for (std::size_t i = 0; i < p.taus.size(); ++i) {
                    need_action(p.taus[i], "tau");
                    if (p.pmf[i] < 0.0) throw std::invalid_argument("RandomizedPolicy: pmf entries must be >= 0");
                    sum += p.pmf[i];
                }
                if (std::fabs(sum - 1.0) > 1e-12) throw std::invalid_argument("RandomizedPolicy: pmf must sum to 1");
            } else if constexpr (std::is_same_v<T, TabularPolicy>) {
                if (p.tau_by_age.empty()) throw std::invalid_argument("TabularPolicy: empty table");
                for (int tau : p.tau_by_age) need_action(tau, "tau");
            } else if constexpr (std::is_same_v<T, AtFixedPolicy>) {
                need_action(p.t_s, "t_s");
                if (p.h_a < 0) throw std::invalid_argument("AtFixedPolicy: h_a must be >= 0");
            }
        },
        policy);
}

std::string policy_to_string(const PolicySpec& policy) {
    std::ostringstream os;
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, FttPolicy>) {
                os << "ftt(" << p.t_s << ")";
            } else if constexpr (std::is_same_v<T, ThresholdPolicy>) {
                os << "threshold(h=" << p.h << ",tau_a=" << p.tau_a << ",tau_b=" << p.tau_b << ")";
            } else if constexpr (std::is_same_v<T, RandomizedPolicy>) {
                os << "randomized(" << p.taus.size() << " atoms)";
            } else if constexpr (std::is_same_v<T, TabularPolicy>) {
                os << "tabular(" << p.tau_by_age.size() << " states)";
            } else if constexpr (std::is_same_v<T, AtFixedPolicy>) {
                os << "at(h_a=" << p.h_a << ",t_s=" << p.t_s << ")";
            }
        },
        policy);
    return os.str();
}

}  // namespace aoilab
