#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "aoilab/analytic.hpp"
#include "aoilab/optimize.hpp"
#include "aoilab/rng.hpp"
#include "test_support.hpp"

using namespace aoilab;
using test::np_scenario;
using test::with_model;

TEST_CASE("differential evolution on the sphere") {
    DeConfig cfg;
    cfg.bounds = {{-5.0, 5.0}, {-5.0, 5.0}, {-5.0, 5.0}};
    cfg.generations = 200;
    const auto r = differential_evolution(
        [](const std::vector<double>& x) { return x[0] * x[0] + x[1] * x[1] + x[2] * x[2]; }, cfg);
    CHECK(r.value < 1e-3);
    SUBCASE("history is monotone non-increasing") {
        for (std::size_t g = 1; g < r.history.size(); ++g) CHECK(r.history[g] <= r.history[g - 1] + 1e-15);
    }
    SUBCASE("same seed, same answer") {
        const auto r2 = differential_evolution(
            [](const std::vector<double>& x) { return x[0] * x[0] + x[1] * x[1] + x[2] * x[2]; }, cfg);
        CHECK(r.value == r2.value);
        CHECK(r.best == r2.best);
    }
}

TEST_CASE("DE with integer coercion finds the exhaustive FTT minimum") {
    const Scenario sc = np_scenario();
    const double beta = 10.0;
    double best_exhaustive = std::numeric_limits<double>::infinity();
    for (int t = 24; t <= 138; ++t) {
        const auto pt = ftt_np(t, sc);
        best_exhaustive = std::min(best_exhaustive, pt.avg_age + beta * pt.avg_power);
    }
    DeConfig cfg;
    cfg.bounds = {{24.0, 138.0}};
    cfg.integer_mask = {true};
    const auto r = differential_evolution(
        [&](const std::vector<double>& x) {
            const auto pt = ftt_np(static_cast<int>(x[0]), sc);
            return pt.avg_age + beta * pt.avg_power;
        },
        cfg);
    CHECK(r.value == doctest::Approx(best_exhaustive).epsilon(1e-12));
}

TEST_CASE("threshold DE beats the best FTT at the same weight") {
    const Scenario sc = np_scenario();
    const double beta = 50.0;
    double best_ftt = std::numeric_limits<double>::infinity();
    for (int t = 24; t <= 138; ++t) {
        const auto pt = ftt_errorfree(t, sc);
        best_ftt = std::min(best_ftt, pt.avg_age + beta * pt.avg_power);
    }
    DeConfig cfg;
    cfg.bounds = {{0.0, 500.0}, {24.0, 138.0}, {24.0, 138.0}};
    cfg.integer_mask = {true, true, true};
    const auto r = differential_evolution(
        [&](const std::vector<double>& x) {
            const int ta = static_cast<int>(x[1]), tb = static_cast<int>(x[2]);
            if (ta < tb) return 1e18;
            const auto pt = threshold_errorfree(static_cast<int>(x[0]), ta, tb, sc);
            return pt.avg_age + beta * pt.avg_power;
        },
        cfg);
    CHECK(r.value <= best_ftt + 1e-9);
}

TEST_CASE("non-finite objective values are discarded") {
    DeConfig cfg;
    cfg.bounds = {{-2.0, 2.0}};
    cfg.generations = 60;
    const auto r = differential_evolution(
        [](const std::vector<double>& x) {
            if (x[0] < 0.0) return std::numeric_limits<double>::quiet_NaN();
            return (x[0] - 1.0) * (x[0] - 1.0);
        },
        cfg);
    CHECK(std::isfinite(r.value));
    CHECK(r.value < 1e-3);
}

TEST_CASE("pareto filter") {
    auto mk = [](double age, double power) {
        TradeoffPoint p;
        p.avg_age = age;
        p.avg_power = power;
        return p;
    };
    SUBCASE("single point survives") { CHECK(pareto_filter({mk(3, 1)}).size() == 1); }
    SUBCASE("equal power keeps the lower age") {
        const auto out = pareto_filter({mk(5, 1), mk(3, 1)});
        REQUIRE(out.size() == 1);
        CHECK(out[0].avg_age == 3);
    }
    SUBCASE("random points vs quadratic brute force") {
        PhiloxRng rng(123);
        std::vector<TradeoffPoint> pts;
        for (int i = 0; i < 100; ++i) pts.push_back(mk(1.0 + 9.0 * rng.next_double(), 1.0 + 9.0 * rng.next_double()));
        const auto out = pareto_filter(pts);
        // brute force: dominated iff some other point is <= in both and < in one
        // (exact ties keep a single representative)
        std::vector<TradeoffPoint> want;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            bool dominated = false;
            for (std::size_t j = 0; j < pts.size() && !dominated; ++j) {
                if (j == i) continue;
                const bool le = pts[j].avg_age <= pts[i].avg_age && pts[j].avg_power <= pts[i].avg_power;
                const bool lt = pts[j].avg_age < pts[i].avg_age || pts[j].avg_power < pts[i].avg_power;
                dominated = le && (lt || j < i);
            }
            if (!dominated) want.push_back(pts[i]);
        }
        REQUIRE(out.size() == want.size());
        std::sort(want.begin(), want.end(),
                  [](const TradeoffPoint& a, const TradeoffPoint& b) { return a.avg_power < b.avg_power; });
        for (std::size_t i = 0; i < out.size(); ++i) {
            CHECK(out[i].avg_age == want[i].avg_age);
            CHECK(out[i].avg_power == want[i].avg_power);
        }
        for (std::size_t i = 1; i < out.size(); ++i) {
            CHECK(out[i].avg_power > out[i - 1].avg_power);
            CHECK(out[i].avg_age < out[i - 1].avg_age);
        }
    }
}

TEST_CASE("curve families") {
    SUBCASE("FTT sweep hits both endpoints") {
        CurveSpec spec;
        spec.scenario = np_scenario();
        spec.family = CurveFamily::kFttSweep;
        const auto pts = pareto_curve(spec);
        REQUIRE(pts.size() == 115);
        CHECK(pts.front().avg_age == ftt_np(24, spec.scenario).avg_age);
        CHECK(pts.back().avg_age == ftt_np(138, spec.scenario).avg_age);
    }
    SUBCASE("AT sweep dominates the fixed-rate NP sweep at matched power") {
        const Scenario np = np_scenario(0.01, 0.01);
        CurveSpec at_spec;
        at_spec.scenario = with_model(np, GenerationModel::kAT);
        at_spec.family = CurveFamily::kAtSweep;
        for (int t = 24; t <= 138; t += 2) at_spec.t_s_grid.push_back(t);
        for (int h = 24; h <= 1500; h += 2) at_spec.h_a_grid.push_back(h);
        const auto at_pts = pareto_curve(at_spec);
        for (int t = 24; t <= 138; t += 6) {
            const auto ref = ftt_np(t, np);
            double best = std::numeric_limits<double>::infinity();
            for (const auto& p : at_pts)
                if (p.avg_power <= ref.avg_power * (1 + 1e-12)) best = std::min(best, p.avg_age);
            CHECK(best <= ref.avg_age * 1.005);
        }
    }
    SUBCASE("NP-OPT lies at or below the fixed-lambda curve at matched power") {
        CurveSpec spec;
        spec.scenario = np_scenario();
        spec.family = CurveFamily::kNpOpt;
        spec.betas = {0.5, 5.0, 50.0};
        spec.de.generations = 120;
        const auto opt = pareto_curve(spec);
        for (const auto& p : opt) {
            // best fixed-lambda FTT age within the same power budget
            double best = std::numeric_limits<double>::infinity();
            for (int t = 24; t <= 138; ++t) {
                const auto f = ftt_np(t, spec.scenario);
                if (f.avg_power <= p.avg_power * (1 + 1e-9)) best = std::min(best, f.avg_age);
            }
            CHECK(p.avg_age <= best + 1e-9);
        }
    }
    SUBCASE("threshold two-step curve simulates the optimized parameters deterministically") {
        CurveSpec spec;
        spec.scenario = np_scenario();
        spec.family = CurveFamily::kThresholdDe;
        spec.betas = {1.0, 30.0};
        spec.de.generations = 120;
        spec.sim_horizon = 400000;
        spec.sim_warmup = 40000;
        const auto a = pareto_curve(spec);
        const auto b = pareto_curve(spec);
        REQUIRE(a.size() == 2);
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].provenance == Provenance::kSimulated);
            CHECK(a[i].avg_age == b[i].avg_age);
            CHECK(a[i].avg_power == b[i].avg_power);
        }
    }
    SUBCASE("every family is non-increasing after the pareto filter") {
        CurveSpec spec;
        spec.scenario = np_scenario();
        spec.family = CurveFamily::kFttSweep;
        const auto filtered = pareto_filter(pareto_curve(spec));
        for (std::size_t i = 1; i < filtered.size(); ++i) {
            CHECK(filtered[i].avg_power > filtered[i - 1].avg_power);
            CHECK(filtered[i].avg_age < filtered[i - 1].avg_age);
        }
    }
}
