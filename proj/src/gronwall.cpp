#include "corrbench/gronwall.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "corrbench/parallel.hpp"
#include "corrbench/rng.hpp"

namespace corrbench {

namespace {

constexpr double kClip = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

double decay_rhs(double k, double p, double q) {
    return -q - k * p * std::log(std::exp(1.0) / p);
}

}  // namespace

DecayTrajectory integrate_extremal(double k, double p0, double dp0, double dt,
                                   double horizon) {
    if (!(k >= 0.0)) throw std::invalid_argument("integrate_extremal: K must be >= 0");
    if (!(p0 > 0.0 && p0 < 1.0))
        throw std::invalid_argument("integrate_extremal: p0 must lie in (0,1)");
    if (!(dt > 0.0)) throw std::invalid_argument("integrate_extremal: dt must be positive");
    const double steps_needed = horizon / dt;
    if (!(steps_needed >= 0.0) || steps_needed > 2e7)
        throw std::invalid_argument("integrate_extremal: grid too fine for the horizon");
    const std::size_t steps = static_cast<std::size_t>(std::ceil(steps_needed - 1e-9));

    DecayTrajectory traj;
    traj.k = k;
    traj.dt = dt;
    traj.t.reserve(steps + 1);
    traj.p.reserve(steps + 1);
    traj.dp.reserve(steps + 1);
    double p = p0, q = dp0;
    traj.t.push_back(0.0);
    traj.p.push_back(p);
    traj.dp.push_back(q);
    for (std::size_t s = 0; s < steps; ++s) {
        const double k1p = q, k1q = decay_rhs(k, p, q);
        const double k2p = q + 0.5 * dt * k1q,
                     k2q = decay_rhs(k, p + 0.5 * dt * k1p, q + 0.5 * dt * k1q);
        const double k3p = q + 0.5 * dt * k2q,
                     k3q = decay_rhs(k, p + 0.5 * dt * k2p, q + 0.5 * dt * k2q);
        const double k4p = q + dt * k3q,
                     k4q = decay_rhs(k, p + dt * k3p, q + dt * k3q);
        p += dt / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        q += dt / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
        if (!(p > kClip) || !std::isfinite(p) || !std::isfinite(q)) {
            traj.clipped = true;
            break;
        }
        traj.t.push_back(dt * static_cast<double>(s + 1));
        traj.p.push_back(p);
        traj.dp.push_back(q);
    }
    return traj;
}

double lemma_horizon(double k, double p0, double dp0) {
    double h = kInf;
    if (k > 0.0) h = 1.0 / (4.0 * std::sqrt(k * std::log(2.0 * std::exp(1.0) / p0)));
    if (dp0 != 0.0) h = std::min(h, p0 / (4.0 * std::abs(dp0)));
    return h;
}

HypothesisReport check_hypothesis(const DecayTrajectory& traj) {
    HypothesisReport rep;
    rep.satisfied = true;
    rep.worst_residual = 0.0;
    const double h = traj.dt;
    for (std::size_t j = 1; j + 1 < traj.p.size(); ++j) {
        const double d2 = (traj.p[j + 1] - 2.0 * traj.p[j] + traj.p[j - 1]) / (h * h);
        const double d1 = (traj.p[j + 1] - traj.p[j - 1]) / (2.0 * h);
        const double rhs = decay_rhs(traj.k, traj.p[j], d1);
        const double rel = (d2 - rhs) / std::max(1.0, std::abs(rhs));
        rep.worst_residual = std::min(rep.worst_residual, rel);
    }
    rep.satisfied = rep.worst_residual >= -1e-6;
    return rep;
}

ConclusionReport verify_conclusion(const DecayTrajectory& traj) {
    if (traj.p.empty()) throw std::invalid_argument("verify_conclusion: empty trajectory");
    ConclusionReport rep;
    rep.clipped = traj.clipped;
    const double p0 = traj.p0();
    rep.horizon = lemma_horizon(traj.k, p0, traj.dp0());
    const HypothesisReport hyp = check_hypothesis(traj);
    rep.hypothesis_ok = hyp.satisfied;
    rep.hypothesis_residual = hyp.worst_residual;
    rep.worst_margin = kInf;
    rep.crossing_time = kInf;
    rep.crossing_ratio = kInf;
    if (!rep.hypothesis_ok) return rep;

    const double half = p0 / 2.0;
    for (std::size_t j = 0; j < traj.p.size(); ++j) {
        if (traj.t[j] <= rep.horizon + 1e-12)
            rep.worst_margin = std::min(rep.worst_margin, traj.p[j] - half);
        if (traj.p[j] < half && rep.crossing_time == kInf) {
            if (j == 0) {
                rep.crossing_time = 0.0;
            } else {
                const double frac = (traj.p[j - 1] - half) / (traj.p[j - 1] - traj.p[j]);
                rep.crossing_time = traj.t[j - 1] + frac * traj.dt;
            }
        }
    }
    if (!traj.clipped) rep.violated = rep.worst_margin < -1e-8;
    if (rep.horizon > 0.0 && rep.crossing_time < kInf)
        rep.crossing_ratio = rep.crossing_time / rep.horizon;
    return rep;
}

DecayTrajectory perturb_trajectory(const DecayTrajectory& base, double amplitude,
                                   double omega) {
    DecayTrajectory out = base;
    out.perturbed = true;
    for (std::size_t j = 0; j < out.p.size(); ++j) {
        const double s = std::sin(omega * out.t[j]);
        out.p[j] += amplitude * s * s;
        out.dp[j] += amplitude * omega * std::sin(2.0 * omega * out.t[j]);
    }
    return out;
}

double richardson_ratio(double k, double p0, double dp0, double dt, double horizon) {
    const DecayTrajectory a = integrate_extremal(k, p0, dp0, dt, horizon);
    const DecayTrajectory b = integrate_extremal(k, p0, dp0, dt / 2.0, horizon);
    const DecayTrajectory c = integrate_extremal(k, p0, dp0, dt / 4.0, horizon);
    double coarse = 0.0, fine = 0.0;
    for (std::size_t j = 0; j < a.p.size(); ++j) {
        if (2 * j >= b.p.size() || 4 * j >= c.p.size()) break;
        coarse = std::max(coarse, std::abs(a.p[j] - b.p[2 * j]));
        fine = std::max(fine, std::abs(b.p[2 * j] - c.p[4 * j]));
    }
    if (!(fine > 0.0)) throw std::runtime_error("richardson_ratio: refinement error vanished");
    return coarse / fine;
}

nlohmann::json ConclusionReport::to_json() const {
    nlohmann::json j;
    j["hypothesis_ok"] = hypothesis_ok;
    j["hypothesis_residual"] = hypothesis_residual;
    j["horizon"] = horizon;
    j["clipped"] = clipped;
    j["violated"] = violated;
    j["worst_margin"] = worst_margin;
    j["crossing_time"] = std::isfinite(crossing_time) ? crossing_time : -1.0;
    j["crossing_ratio"] = std::isfinite(crossing_ratio) ? crossing_ratio : -1.0;
    return j;
}

nlohmann::json GronwallSweep::to_json() const {
    nlohmann::json j;
    j["cases"] = cases;
    j["perturbations"] = perturbations;
    j["violations"] = violations;
    j["rejected"] = rejected;
    j["clipped"] = clipped;
    j["worst_margin"] = worst_margin;
    j["max_hypothesis_residual"] = max_hypothesis_residual;
    j["min_crossing_ratio"] = std::isfinite(min_crossing_ratio) ? min_crossing_ratio : -1.0;
    j["bundles"] = bundles;
    return j;
}

namespace {

struct SweepCase {
    double k = 0.0, p0 = 0.0, dp0 = 0.0;
    double omega = 0.0;  // 0: extremal; else perturbation frequency
};

struct SweepOutcome {
    bool asserted = false;
    bool violated = false;
    bool rejected = false;
    bool clipped = false;
    bool extremal = false;
    double margin = kInf;
    double residual = 0.0;
    double crossing_ratio = kInf;
    nlohmann::json bundle;
};

SweepCase random_case(Rng& rng) {
    SweepCase cs;
    cs.k = std::exp(-std::log(10.0) + (8.0 + std::log(10.0)) * rng.next_double());
    cs.p0 = std::exp(std::log(0.01) + (std::log(0.9) - std::log(0.01)) * rng.next_double());
    switch (rng.next_below(3)) {
        case 0: cs.dp0 = 0.0; break;
        case 1: cs.dp0 = -cs.p0; break;
        default:
            cs.dp0 = -cs.p0 * std::exp(std::log(0.1) + std::log(100.0) * rng.next_double());
    }
    return cs;
}

SweepOutcome run_sweep_case(const SweepCase& cs, double dt) {
    const double horizon = lemma_horizon(cs.k, cs.p0, cs.dp0);
    const double span = std::isfinite(horizon) ? 3.0 * horizon : 1.0;
    DecayTrajectory traj = integrate_extremal(cs.k, cs.p0, cs.dp0, dt, span);
    if (cs.omega > 0.0) traj = perturb_trajectory(traj, 0.01 * cs.p0, cs.omega);

    SweepOutcome out;
    out.extremal = cs.omega == 0.0;
    const ConclusionReport rep = verify_conclusion(traj);
    out.clipped = rep.clipped;
    out.residual = rep.hypothesis_residual;
    if (!rep.hypothesis_ok) {
        out.rejected = true;
        return out;
    }
    if (rep.clipped) return out;  // truncated: excluded from assertions
    out.asserted = true;
    out.margin = rep.worst_margin;
    out.crossing_ratio = rep.crossing_ratio;
    out.violated = rep.violated;
    if (out.violated) {
        out.bundle["k"] = cs.k;
        out.bundle["p0"] = cs.p0;
        out.bundle["dp0"] = cs.dp0;
        out.bundle["omega"] = cs.omega;
        out.bundle["dt"] = dt;
        out.bundle["report"] = rep.to_json();
    }
    return out;
}

}  // namespace

GronwallSweep run_gronwall_sweep(int cases, int perturbations, double dt,
                                 std::uint64_t seed, int workers) {
    const auto t0 = std::chrono::steady_clock::now();
    const double k_grid[] = {0.1, 1.0, 10.0, std::exp(8.0)};
    const double p0_grid[] = {0.9, 0.5, 0.1, 0.01};
    std::vector<SweepCase> plan;
    for (double k : k_grid)
        for (double p0 : p0_grid)
            for (int m : {0, 1, 2}) {
                SweepCase cs;
                cs.k = k;
                cs.p0 = p0;
                cs.dp0 = m == 0 ? 0.0 : (m == 1 ? -p0 : -10.0 * p0);
                plan.push_back(cs);
            }
    for (int c = static_cast<int>(plan.size()); c < cases; ++c) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(c)));
        plan.push_back(random_case(rng));
    }
    const std::size_t extremal_count = plan.size();
    for (int c = 0; c < perturbations; ++c) {
        Rng rng(derive_seed(seed, 1000000u + static_cast<std::uint64_t>(c)));
        SweepCase cs = plan[rng.next_below(extremal_count)];
        cs.omega = std::exp(std::log(0.05) + std::log(400.0) * rng.next_double());
        plan.push_back(cs);
    }

    std::vector<SweepOutcome> outcomes(plan.size());
    run_blocks(plan.size(), workers,
               [&](std::size_t c) { outcomes[c] = run_sweep_case(plan[c], dt); });

    GronwallSweep res;
    res.cases = static_cast<int>(extremal_count);
    res.perturbations = perturbations;
    res.worst_margin = kInf;
    res.min_crossing_ratio = kInf;
    for (const auto& o : outcomes) {
        if (o.rejected) {
            ++res.rejected;
            continue;
        }
        if (o.clipped) {
            ++res.clipped;
            continue;
        }
        if (o.extremal)
            res.max_hypothesis_residual =
                std::max(res.max_hypothesis_residual, std::abs(o.residual));
        res.worst_margin = std::min(res.worst_margin, o.margin);
        res.min_crossing_ratio = std::min(res.min_crossing_ratio, o.crossing_ratio);
        if (o.violated) {
            ++res.violations;
            if (res.bundles.size() < 16) res.bundles.push_back(o.bundle);
        }
    }
    if (!std::isfinite(res.worst_margin)) res.worst_margin = 0.0;
    res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

void write_trajectory_csv(std::ostream& out, const DecayTrajectory& traj) {
    out << "t,p,dp\n";
    char line[96];
    for (std::size_t j = 0; j < traj.p.size(); ++j) {
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", traj.t[j], traj.p[j],
                      traj.dp[j]);
        out << line;
    }
}

}  // namespace corrbench
