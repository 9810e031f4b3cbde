#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "aoilab/analytic.hpp"
#include "test_support.hpp"

using namespace aoilab;
using test::np_scenario;
using test::toy_channel;

namespace {

// Independent series-summation oracle for the threshold evaluator: walk the
// two-state chain explicitly, summing over the geometric gap until the tail
// is negligible. No closed forms shared with the implementation.
struct ThresholdOracle {
    double age, power;
};
ThresholdOracle threshold_by_series(int h, int tau_a, int tau_b, const Scenario& sc) {
    const double lam = sc.lambda;
    const double q = 1.0 - lam;
    const double pa = sc.channel.power(tau_a), pb = sc.channel.power(tau_b);
    // state 0 = age dropped to tau_b, state 1 = age dropped to tau_a
    double num_age[2] = {0, 0}, num_pow[2] = {0, 0}, len[2] = {0, 0}, to_a[2] = {0, 0};
    const int start_age[2] = {tau_b, tau_a};
    for (int s = 0; s < 2; ++s) {
        double pg = lam;  // P(G~ = g)
        for (int g = 0; g < 20000; ++g) {
            const int age_at_decision = start_age[s] + g;
            const int tau = age_at_decision <= h ? tau_a : tau_b;
            const int span = g + tau;
            const double cum = start_age[s] * static_cast<double>(span) + 0.5 * span * (span - 1.0);
            num_age[s] += pg * cum;
            num_pow[s] += pg * tau * (tau == tau_a ? pa : pb);
            len[s] += pg * span;
            if (tau == tau_a) to_a[s] += pg;
            pg *= q;
            if (pg < 1e-18) break;
        }
    }
    // stationary split of the two-state chain
    const double alpha = to_a[0];        // b -> a
    const double beta = 1.0 - to_a[1];   // a -> b
    const double pi_a = alpha / (alpha + beta);
    const double pi_b = beta / (alpha + beta);
    const double den = pi_b * len[0] + pi_a * len[1];
    return {(pi_b * num_age[0] + pi_a * num_age[1]) / den, (pi_b * num_pow[0] + pi_a * num_pow[1]) / den};
}

// Same for the geometric conditional moments. The cutoff scales with the tail
// mass so that deep-tail conditionals are still summed accurately.
void check_gap_moments(double lam, int k) {
    const double q = 1.0 - lam;
    double m1a = 0, m2a = 0, pa = 0, m1b = 0, m2b = 0, pb = 0;
    double pg = lam;
    const double tail_mass = k < 0 ? 1.0 : std::pow(q, k + 1.0);
    const double cutoff = 1e-16 * tail_mass;
    for (int g = 0; g < 400000; ++g) {
        if (g <= k) {
            m1b += pg * g;
            m2b += pg * static_cast<double>(g) * g;
            pb += pg;
        } else {
            m1a += pg * g;
            m2a += pg * static_cast<double>(g) * g;
            pa += pg;
        }
        pg *= q;
        if (pg < cutoff && g > k) break;
    }
    const auto above = gap_moments_above(lam, k);
    CHECK(above.mean == doctest::Approx(m1a / pa).epsilon(1e-10));
    CHECK(above.second_moment == doctest::Approx(m2a / pa).epsilon(1e-10));
    if (k >= 0) {
        const auto below = gap_moments_at_most(lam, k);
        CHECK(below.mean == doctest::Approx(m1b / pb).epsilon(1e-9));
        CHECK(below.second_moment == doctest::Approx(m2b / pb).epsilon(1e-9));
    }
}

}  // namespace

TEST_CASE("geometric gap moments vs series oracle") {
    for (double lam : {0.05, 0.1, 0.5, 0.9}) {
        for (int k : {-3, 0, 1, 7, 40}) check_gap_moments(lam, k);
    }
}

TEST_CASE("ftt_np") {
    SUBCASE("error-free, lambda = 1 degenerates to (3t-1)/2") {
        Scenario sc = make_scenario(1.0, 0.0, GenerationModel::kNP, toy_channel(1, 200));
        for (int t : {1, 24, 137}) {
            const auto pt = ftt_np(t, sc);
            CHECK(pt.avg_age == doctest::Approx((3.0 * t - 1) / 2).epsilon(1e-14));
            CHECK(pt.avg_power == doctest::Approx(sc.channel.power(t)).epsilon(1e-14));
        }
    }
    SUBCASE("average power formula with P(24) = 10") {
        Scenario sc = make_scenario(0.1, 0.01, GenerationModel::kNP, toy_channel(24, 138));
        CHECK(ftt_np(24, sc).avg_power == doctest::Approx(10.0 * 24 * 0.1 / 3.3).epsilon(1e-14));
    }
    SUBCASE("monotone sweep: age up, power down") {
        const Scenario sc = np_scenario();
        double prev_age = -1.0, prev_pow = 1e9;
        for (int t = 24; t <= 138; ++t) {
            const auto pt = ftt_np(t, sc);
            CHECK(pt.avg_age > prev_age);
            CHECK(pt.avg_power < prev_pow);
            prev_age = pt.avg_age;
            prev_pow = pt.avg_power;
        }
    }
    SUBCASE("error gap has the closed form eps/(1-eps) * (E[G]+t)") {
        const Scenario sc = np_scenario(0.1, 0.0);
        for (double eps : {0.01, 0.2, 0.6}) {
            for (int t : {24, 60, 138}) {
                const double gap = ftt_np(t, sc.with_epsilon(eps)).avg_age - ftt_np(t, sc).avg_age;
                const double expected = eps / (1.0 - eps) * (sc.mean_gap() + t);
                CHECK(gap == doctest::Approx(expected).epsilon(1e-9));
            }
        }
    }
    SUBCASE("ftt_errorfree is ftt_np at eps = 0, exactly") {
        const Scenario sc = np_scenario(0.1, 0.2);
        for (int t : {24, 100}) {
            CHECK(ftt_errorfree(t, sc).avg_age == ftt_np(t, sc.with_epsilon(0.0)).avg_age);
            CHECK(ftt_errorfree(t, sc).avg_power == ftt_np(t, sc.with_epsilon(0.0)).avg_power);
        }
    }
}

TEST_CASE("threshold_errorfree") {
    const Scenario sc = np_scenario();
    SUBCASE("h below tau_b collapses to FTT(tau_b)") {
        const auto pt = threshold_errorfree(10, 100, 30, sc);
        const auto ftt = ftt_errorfree(30, sc);
        CHECK(pt.avg_age == doctest::Approx(ftt.avg_age).epsilon(1e-12));
        CHECK(pt.avg_power == doctest::Approx(ftt.avg_power).epsilon(1e-12));
    }
    SUBCASE("huge h absorbs into FTT(tau_a)") {
        const auto pt = threshold_errorfree(1000000, 100, 30, sc);
        const auto ftt = ftt_errorfree(100, sc);
        CHECK(pt.avg_age == doctest::Approx(ftt.avg_age).epsilon(1e-9));
        CHECK(pt.avg_power == doctest::Approx(ftt.avg_power).epsilon(1e-9));
    }
    SUBCASE("tau_a == tau_b collapses to FTT, to 1e-12") {
        const auto pt = threshold_errorfree(30, 60, 60, sc);
        const auto ftt = ftt_errorfree(60, sc);
        CHECK(pt.avg_age == doctest::Approx(ftt.avg_age).epsilon(1e-12));
        CHECK(pt.avg_power == doctest::Approx(ftt.avg_power).epsilon(1e-12));
    }
    SUBCASE("matches the independent series oracle") {
        for (auto [h, ta, tb] : {std::tuple{60, 100, 30}, {120, 138, 24}, {40, 80, 40}, {26, 70, 25}}) {
            for (double lam : {0.05, 0.1, 0.5}) {
                const Scenario s = np_scenario(lam, 0.01);
                const auto got = threshold_errorfree(h, ta, tb, s);
                const auto want = threshold_by_series(h, ta, tb, s);
                CHECK(got.avg_age == doctest::Approx(want.age).epsilon(1e-9));
                CHECK(got.avg_power == doctest::Approx(want.power).epsilon(1e-9));
            }
        }
    }
    SUBCASE("power stays inside the FTT bracket") {
        const double lo = ftt_np(138, sc).avg_power;
        const double hi = ftt_np(24, sc).avg_power;
        for (int h : {0, 30, 60, 120, 500}) {
            const auto pt = threshold_errorfree(h, 120, 40, sc);
            CHECK(pt.avg_power >= lo - 1e-12);
            CHECK(pt.avg_power <= hi + 1e-12);
        }
    }
}

TEST_CASE("ftt_preemptive") {
    Scenario sc = make_scenario(0.3, 0.0, GenerationModel::kP, toy_channel(1, 200));
    SUBCASE("t_s = 1 cannot be preempted") {
        const auto pt = ftt_preemptive(1, sc);
        CHECK(pt.avg_age == doctest::Approx(1.0 / 0.3).epsilon(1e-12));
        CHECK(pt.avg_power == doctest::Approx(sc.channel.power(1) * 0.3).epsilon(1e-12));
    }
    SUBCASE("lambda = 1 with t_s >= 2 diverges") {
        CHECK_THROWS_AS(ftt_preemptive(2, sc.with_lambda(1.0)), std::domain_error);
    }
    SUBCASE("age strictly increasing in eps") {
        const Scenario base = test::with_model(np_scenario(0.01, 0.0), GenerationModel::kP);
        double prev = 0.0;
        for (double eps : {0.0, 0.05, 0.1, 0.3, 0.6}) {
            const double age = ftt_preemptive(24, base.with_epsilon(eps)).avg_age;
            CHECK(age > prev);
            prev = age;
        }
    }
}

TEST_CASE("ftt_age_threshold") {
    const Scenario sc = test::with_model(np_scenario(1.0, 0.0), GenerationModel::kAT);
    SUBCASE("zero-wait collapse at h_a = t_s, eps = 0") {
        const auto pt = ftt_age_threshold(24, 24, sc);
        CHECK(pt.avg_age == doctest::Approx((3.0 * 24 - 1) / 2).epsilon(1e-13));
        CHECK(pt.avg_power == doctest::Approx(sc.channel.power(24)).epsilon(1e-13));
    }
    SUBCASE("h_a below t_s behaves exactly as h_a = t_s") {
        const Scenario s = sc.with_epsilon(0.2);
        const auto low = ftt_age_threshold(3, 24, s);
        const auto eq = ftt_age_threshold(24, 24, s);
        CHECK(low.avg_age == eq.avg_age);
        CHECK(low.avg_power == eq.avg_power);
    }
    SUBCASE("power decreasing in h_a") {
        double prev = 1e18;
        for (int h : {24, 50, 100, 400, 2000}) {
            const double p = ftt_age_threshold(h, 24, sc).avg_power;
            CHECK(p < prev);
            prev = p;
        }
    }
}
