#include "aoilab/analytic.hpp"

#include <cmath>
#include <stdexcept>

namespace aoilab {

namespace {

TradeoffPoint make_point(double age, double power, const PolicySpec& policy, const Scenario& scenario) {
    TradeoffPoint pt;
    pt.avg_age = age;
    pt.avg_power = power;
    pt.provenance = Provenance::kAnalytic;
    pt.policy = policy;
    pt.scenario_digest = scenario.digest();
    return pt;
}

// Cumulative age over a span of length (gap + tau_next) starting at age tau_now,
// with the gap moments supplied (possibly conditional).
double cycle_age(int tau_now, int tau_next, const GeometricGapMoments& m) {
    return tau_now * (m.mean + tau_next) +
           0.5 * (m.second_moment + (2.0 * tau_next - 1.0) * m.mean + static_cast<double>(tau_next) * tau_next - tau_next);
}

}  // namespace

GeometricGapMoments gap_moments_above(double lambda, int k) {
    const double g1 = (1.0 - lambda) / lambda;
    const double g2 = (1.0 - lambda) * (2.0 - lambda) / (lambda * lambda);
    if (k < 0) return {g1, g2};
    // memorylessness: (G~ - (k+1) | G~ > k) ~ G~
    const double shift = k + 1.0;
    return {shift + g1, shift * shift + 2.0 * shift * g1 + g2};
}

GeometricGapMoments gap_moments_at_most(double lambda, int k) {
    if (k < 0) throw std::invalid_argument("gap_moments_at_most: event {G~ <= k} empty for k < 0");
    const double q = 1.0 - lambda;
    const double g1 = q / lambda;
    const double g2 = q * (2.0 - lambda) / (lambda * lambda);
    const double tail = std::pow(q, k + 1.0);
    if (tail >= 1.0) throw std::invalid_argument("gap_moments_at_most: event has probability zero (lambda = 0?)");
    const auto above = gap_moments_above(lambda, k);
    return {(g1 - tail * above.mean) / (1.0 - tail), (g2 - tail * above.second_moment) / (1.0 - tail)};
}

TradeoffPoint ftt_np(int t_s, const Scenario& scenario) {
    if (!scenario.channel.has_action(t_s)) throw std::invalid_argument("ftt_np: t_s not in action set");
    if (!(scenario.lambda > 0.0 && scenario.lambda <= 1.0)) throw std::invalid_argument("ftt_np: lambda in (0,1]");
    const double eps = scenario.epsilon;
    if (eps >= 1.0) throw std::domain_error("ftt_np: epsilon = 1 diverges");
    const double lam = scenario.lambda;
    const double gap = scenario.mean_gap();
    const double m = gap + t_s;
    const double er = m / (1.0 - eps);
    const double er2 = (1.0 - lam) / ((1.0 - eps) * lam * lam) + (1.0 + eps) / ((1.0 - eps) * (1.0 - eps)) * m * m;
    const double age = t_s + er2 / (2.0 * er) - 0.5;
    const double power = scenario.channel.power(t_s) * t_s * lam / (1.0 - lam + lam * t_s);
    return make_point(age, power, FttPolicy{t_s}, scenario);
}

TradeoffPoint ftt_errorfree(int t_s, const Scenario& scenario) { return ftt_np(t_s, scenario.with_epsilon(0.0)); }

TradeoffPoint threshold_errorfree(int h, int tau_a, int tau_b, const Scenario& scenario) {
    const auto& chan = scenario.channel;
    if (!chan.has_action(tau_a) || !chan.has_action(tau_b))
        throw std::invalid_argument("threshold_errorfree: tau_a/tau_b not in action set");
    if (tau_a < tau_b) throw std::invalid_argument("threshold_errorfree: requires tau_a >= tau_b");
    if (h < 0) throw std::invalid_argument("threshold_errorfree: h must be >= 0");
    if (tau_a == tau_b) {
        auto pt = ftt_errorfree(tau_b, scenario);
        pt.policy = ThresholdPolicy{h, tau_a, tau_b};
        return pt;
    }
    const double lam = scenario.lambda;
    const double q = 1.0 - lam;
    const int kb = h - tau_b;
    const int ka = h - tau_a;
    // EMC on the post-transmission age {tau_a, tau_b}:
    //   emc_alpha: tau_b -> tau_a (age stayed at or below h), emc_beta: tau_a -> tau_b
    const double emc_alpha = kb < 0 ? 0.0 : 1.0 - std::pow(q, kb + 1.0);
    const double emc_beta = ka < 0 ? 1.0 : std::pow(q, ka + 1.0);
    const double pi_a = emc_alpha / (emc_alpha + emc_beta);
    const double pi_b = emc_beta / (emc_alpha + emc_beta);

    const double pa = chan.power(tau_a);
    const double pb = chan.power(tau_b);

    double age_b = 0.0, len_b = 0.0, pow_b = 0.0;
    if (emc_alpha > 0.0) {
        const auto m = gap_moments_at_most(lam, kb);
        age_b += emc_alpha * cycle_age(tau_b, tau_a, m);
        len_b += emc_alpha * (m.mean + tau_a);
        pow_b += emc_alpha * tau_a * pa;
    }
    if (emc_alpha < 1.0) {
        const auto m = gap_moments_above(lam, kb);
        age_b += (1.0 - emc_alpha) * cycle_age(tau_b, tau_b, m);
        len_b += (1.0 - emc_alpha) * (m.mean + tau_b);
        pow_b += (1.0 - emc_alpha) * tau_b * pb;
    }
    double age_a = 0.0, len_a = 0.0, pow_a = 0.0;
    if (emc_beta > 0.0) {
        const auto m = gap_moments_above(lam, ka);
        age_a += emc_beta * cycle_age(tau_a, tau_b, m);
        len_a += emc_beta * (m.mean + tau_b);
        pow_a += emc_beta * tau_b * pb;
    }
    if (emc_beta < 1.0) {
        const auto m = gap_moments_at_most(lam, ka);
        age_a += (1.0 - emc_beta) * cycle_age(tau_a, tau_a, m);
        len_a += (1.0 - emc_beta) * (m.mean + tau_a);
        pow_a += (1.0 - emc_beta) * tau_a * pa;
    }
    const double denom = pi_b * len_b + pi_a * len_a;
    const double age = (pi_b * age_b + pi_a * age_a) / denom;
    const double power = (pi_b * pow_b + pi_a * pow_a) / denom;
    return make_point(age, power, ThresholdPolicy{h, tau_a, tau_b}, scenario);
}

TradeoffPoint ftt_preemptive(int t_s, const Scenario& scenario) {
    if (!scenario.channel.has_action(t_s)) throw std::invalid_argument("ftt_preemptive: t_s not in action set");
    const double lam = scenario.lambda;
    const double eps = scenario.epsilon;
    if (!(lam > 0.0 && lam <= 1.0)) throw std::invalid_argument("ftt_preemptive: lambda in (0,1]");
    if (eps >= 1.0) throw std::domain_error("ftt_preemptive: epsilon = 1 diverges");
    const double preempt_alpha = (1.0 - eps) * std::pow(1.0 - lam, t_s - 1.0);
    if (preempt_alpha <= 0.0)
        throw std::domain_error("ftt_preemptive: success probability is zero (lambda = 1 with t_s >= 2); age diverges");
    const double age = 1.0 / (preempt_alpha * lam);
    const double power = scenario.channel.power(t_s) * (1.0 - std::pow(1.0 - lam, static_cast<double>(t_s)));
    return make_point(age, power, FttPolicy{t_s}, scenario);
}

TradeoffPoint ftt_age_threshold(int h_a, int t_s, const Scenario& scenario) {
    if (!scenario.channel.has_action(t_s)) throw std::invalid_argument("ftt_age_threshold: t_s not in action set");
    if (h_a < 0) throw std::invalid_argument("ftt_age_threshold: h_a must be >= 0");
    const double eps = scenario.epsilon;
    if (eps >= 1.0) throw std::domain_error("ftt_age_threshold: epsilon = 1 diverges");
    const double d = std::max(h_a, t_s) - static_cast<double>(t_s);
    const double ome = 1.0 - eps;
    const double denom = 2.0 * ome * (d * ome + t_s);
    const double age =
        t_s + (d * d * ome * ome + static_cast<double>(t_s) * t_s * (1.0 + eps) + 2.0 * d * t_s * ome) / denom - 0.5;
    const double power = scenario.channel.power(t_s) * t_s / (d * ome + t_s);
    return make_point(age, power, AtFixedPolicy{h_a, t_s}, scenario);
}

}  // namespace aoilab
