#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace corrbench {

// Solution samples of p'' = -p' - K p log(e/p) (or a perturbation of one) on
// a uniform grid. Integration stops early if p falls to the 1e-12 clip or
// leaves the finite range; such trajectories are flagged and excluded from
// assertions.
struct DecayTrajectory {
    double k = 0.0;
    double dt = 0.0;
    std::vector<double> t;
    std::vector<double> p;
    std::vector<double> dp;
    bool clipped = false;
    bool perturbed = false;

    double p0() const { return p.empty() ? 0.0 : p.front(); }
    double dp0() const { return dp.empty() ? 0.0 : dp.front(); }
};

// Classical fourth-order integration of the extremal equality ODE.
DecayTrajectory integrate_extremal(double k, double p0, double dp0, double dt,
                                   double horizon);

// The guaranteed no-halving window: min(1/(4 sqrt(K log(2e/p0))), p0/(4|p'0|)).
double lemma_horizon(double k, double p0, double dp0);

// Discrete check that p'' >= -p' - K p log(e/p) at interior grid points,
// second derivatives by central differences. The residual is relative to
// max(1, |rhs|); trajectories failing the 1e-6 tolerance are rejected rather
// than counted as counterexamples.
struct HypothesisReport {
    bool satisfied = false;
    double worst_residual = 0.0;  // most negative relative residual seen
};

HypothesisReport check_hypothesis(const DecayTrajectory& traj);

struct ConclusionReport {
    bool hypothesis_ok = false;
    double hypothesis_residual = 0.0;
    double horizon = 0.0;
    bool clipped = false;
    bool violated = false;
    double worst_margin = 0.0;    // min of p - p0/2 over the horizon
    double crossing_time = 0.0;   // first time p dips below p0/2; inf if never
    double crossing_ratio = 0.0;  // crossing_time / horizon

    nlohmann::json to_json() const;
};

// Hypothesis precheck followed by the halving bound p >= p0/2 - 1e-8 on
// [0, horizon]. The trajectory should extend past the horizon so the crossing
// ratio is informative.
ConclusionReport verify_conclusion(const DecayTrajectory& traj);

// Adds amplitude * sin^2(omega t); the increment vanishes to first order at
// t = 0, so the lemma horizon of the base trajectory is unchanged.
DecayTrajectory perturb_trajectory(const DecayTrajectory& base, double amplitude,
                                   double omega);

// max|p_dt - p_dt/2| / max|p_dt/2 - p_dt/4| on the shared grid; close to 16
// for a fourth-order scheme at moderate steps.
double richardson_ratio(double k, double p0, double dp0, double dt, double horizon);

struct GronwallSweep {
    int cases = 0;
    int perturbations = 0;
    int violations = 0;
    int rejected = 0;  // hypothesis precheck failures (mostly rough perturbations)
    int clipped = 0;
    double worst_margin = 0.0;
    double max_hypothesis_residual = 0.0;  // extremal trajectories only
    double min_crossing_ratio = 0.0;
    double wall_seconds = 0.0;
    std::vector<nlohmann::json> bundles;

    nlohmann::json to_json() const;
};

// Pinned grid K in {0.1, 1, 10, e^8} x p0 in {0.9, 0.5, 0.1, 0.01} x
// dp0 in {0, -p0, -10 p0}, padded with random tuples up to `cases`, plus
// `perturbations` randomized sin^2 perturbations of in-grid solutions.
GronwallSweep run_gronwall_sweep(int cases, int perturbations, double dt,
                                 std::uint64_t seed, int workers = 1);

void write_trajectory_csv(std::ostream& out, const DecayTrajectory& traj);

}  // namespace corrbench
