#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "corrbench/gronwall.hpp"
#include "oracle_values.hpp"

using namespace corrbench;

TEST_CASE("horizon formula") {
    // generic point: both branches evaluated explicitly
    const double k = 2.0, p0 = 0.3, dp0 = -0.6;
    const double damped = 1.0 / (4.0 * std::sqrt(k * std::log(2.0 * std::exp(1.0) / p0)));
    const double slope = p0 / (4.0 * std::abs(dp0));
    CHECK(lemma_horizon(k, p0, dp0) == doctest::Approx(std::min(damped, slope)).epsilon(1e-14));
    // flat start: only the damped branch binds, log(2e / 0.5) = log(4e)
    CHECK(lemma_horizon(1.0, 0.5, 0.0) ==
          doctest::Approx(1.0 / (4.0 * std::sqrt(std::log(4.0 * std::exp(1.0)))))
              .epsilon(1e-12));
    // steep start: the slope branch binds
    CHECK(lemma_horizon(1e-12, 0.4, -40.0) == doctest::Approx(0.4 / 160.0).epsilon(1e-12));
}

TEST_CASE("integrator matches the k -> 0 closed form") {
    // with K = 0 the equation is p'' = -p', so p = p0 + dp0 (1 - e^{-t})
    const DecayTrajectory traj = integrate_extremal(1e-14, 0.8, -0.1, 1e-3, 1.0);
    REQUIRE_FALSE(traj.clipped);
    for (std::size_t i = 0; i < traj.t.size(); i += 100) {
        const double want = 0.8 - 0.1 * (1.0 - std::exp(-traj.t[i]));
        CHECK(traj.p[i] == doctest::Approx(want).epsilon(1e-10));
        CHECK(traj.dp[i] == doctest::Approx(-0.1 * std::exp(-traj.t[i])).epsilon(1e-8));
    }
}

TEST_CASE("initial curvature of the extremal solution") {
    // p''(0) = -dp0 - K p0 log(e/p0); the centered stencil sits at t = dt,
    // so it sees the curvature there, an O(dt) shift from t = 0
    const DecayTrajectory traj = integrate_extremal(1.0, 0.5, 0.0, 1e-4, 0.01);
    REQUIRE(traj.p.size() >= 3);
    const double dd = (traj.p[2] - 2.0 * traj.p[1] + traj.p[0]) / (traj.dt * traj.dt);
    CHECK(dd == doctest::Approx(oracle::kDecayPddAtZero).epsilon(2e-4));
    const double at_stencil =
        -traj.dp[1] - 1.0 * traj.p[1] * std::log(std::exp(1.0) / traj.p[1]);
    CHECK(dd == doctest::Approx(at_stencil).epsilon(1e-7));
}

TEST_CASE("hypothesis holds on extremal solutions and rejects cheats") {
    const DecayTrajectory traj = integrate_extremal(10.0, 0.5, -0.5, 1e-3, 0.5);
    const HypothesisReport rep = check_hypothesis(traj);
    CHECK(rep.satisfied);
    CHECK(rep.worst_residual >= -1e-6);

    // pulling the curve down makes p'' undershoot the required drift
    DecayTrajectory bent = traj;
    for (std::size_t i = 1; i + 1 < bent.p.size(); ++i) {
        const double t = bent.t[i];
        bent.p[i] -= 0.05 * t * t;
    }
    const HypothesisReport bad = check_hypothesis(bent);
    CHECK_FALSE(bad.satisfied);
    CHECK(bad.worst_residual < -1e-6);
}

TEST_CASE("no-halving conclusion on the pinned grid") {
    for (double k : {0.1, 1.0, 10.0, std::exp(8.0)}) {
        for (double p0 : {0.9, 0.5, 0.1, 0.01}) {
            for (double mult : {0.0, -1.0, -10.0}) {
                const double dp0 = mult * p0;
                const double horizon = lemma_horizon(k, p0, dp0);
                const DecayTrajectory traj =
                    integrate_extremal(k, p0, dp0, 1e-4, 2.0 * horizon);
                const ConclusionReport rep = verify_conclusion(traj);
                CAPTURE(k);
                CAPTURE(p0);
                CAPTURE(dp0);
                CHECK(rep.hypothesis_ok);
                CHECK_FALSE(rep.violated);
                CHECK(rep.horizon == doctest::Approx(horizon).epsilon(1e-14));
                CHECK(rep.worst_margin >= -1e-8);
                if (std::isfinite(rep.crossing_time)) {
                    CHECK(rep.crossing_ratio > 1.0);
                    CHECK(rep.crossing_time > horizon);
                }
            }
        }
    }
}

TEST_CASE("sin^2 perturbations keep initial data") {
    const DecayTrajectory base = integrate_extremal(1.0, 0.5, 0.0, 1e-3, 0.4);
    const DecayTrajectory bumped = perturb_trajectory(base, 0.02, 3.0);
    CHECK(bumped.perturbed);
    CHECK(bumped.p0() == base.p0());
    CHECK(bumped.dp0() == doctest::Approx(base.dp0()).scale(1.0).epsilon(1e-12));
    const std::size_t mid = base.p.size() / 2;
    const double t = base.t[mid];
    const double want = base.p[mid] + 0.02 * std::sin(3.0 * t) * std::sin(3.0 * t);
    CHECK(bumped.p[mid] == doctest::Approx(want).epsilon(1e-12));

    // a bump this rough breaks the drift inequality: rejected, not asserted
    const ConclusionReport rough = verify_conclusion(bumped);
    CHECK_FALSE(rough.hypothesis_ok);
    CHECK_FALSE(rough.violated);

    // a gentle one stays inside the tolerance and keeps the conclusion
    const ConclusionReport gentle = verify_conclusion(perturb_trajectory(base, 1e-7, 1.0));
    CHECK(gentle.hypothesis_ok);
    CHECK_FALSE(gentle.violated);
}

TEST_CASE("step-halving error ratio pins fourth order") {
    const double r = richardson_ratio(1.0, 0.5, -0.25, 0.02, 0.4);
    CHECK(r >= 12.0);
    CHECK(r <= 20.0);
}

TEST_CASE("sweep is clean, deterministic, worker-invariant") {
    const GronwallSweep a = run_gronwall_sweep(100, 100, 1e-3, 21, 2);
    CHECK(a.cases == 100);
    CHECK(a.perturbations == 100);
    CHECK(a.violations == 0);
    CHECK(a.bundles.empty());
    CHECK(a.max_hypothesis_residual <= 1e-6);
    CHECK(a.min_crossing_ratio > 1.0);

    const GronwallSweep b = run_gronwall_sweep(100, 100, 1e-3, 21, 4);
    CHECK(b.worst_margin == a.worst_margin);
    CHECK(b.min_crossing_ratio == a.min_crossing_ratio);
    CHECK(b.rejected == a.rejected);
    CHECK(b.clipped == a.clipped);

    const GronwallSweep again = run_gronwall_sweep(100, 100, 1e-3, 21, 2);
    CHECK(again.worst_margin == a.worst_margin);
    CHECK(again.max_hypothesis_residual == a.max_hypothesis_residual);
}

TEST_CASE("trajectory csv layout") {
    const DecayTrajectory traj = integrate_extremal(1.0, 0.5, 0.0, 0.1, 0.3);
    std::ostringstream out;
    write_trajectory_csv(out, traj);
    std::istringstream in(out.str());
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "t,p,dp");
    std::size_t rows = 0;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == traj.t.size());
}
