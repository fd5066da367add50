#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "corrbench/functional.hpp"

namespace corrbench {

struct TimeGrid {
    std::vector<double> times;

    // "start:stop:step", or a single number for a one-point grid.
    static TimeGrid parse(const std::string& spec);
    static TimeGrid uniform(double start, double stop, double step);

    std::size_t size() const { return times.size(); }
    double step() const;  // spacing; throws unless the grid is uniform
};

enum class MomentMethod { Auto, Closed, Quadrature };

// M_t(z) = e^{kt/2} E_x[ F(e^{-t/2} x + z) H_k(x) ], so that
// E_z[ M_t ] recovers the k-th moment tensor of F for every t.
// Closed forms exist for unsmoothed sign compositions and half-spaces
// (k <= 3); Auto uses them for k <= 2 and quadrature for k = 3.
SymTensor conditional_moment(const GaussianFunctional& f, int k, const std::vector<double>& z,
                             double t, MomentMethod method = MomentMethod::Auto, int order = 16);

struct Stat {
    double mean = 0.0, se = 0.0;
};

// Interpolating-path draws: Z_t has independent increments with
// Var(Z_t) = 1 - e^{-t} per coordinate. Tensor-valued conditional moments
// enter through the scalars tracked per (path, time): the two k=0 values
// and the k=1, k=2 pair contractions.
struct PathSample {
    TimeGrid grid;
    std::size_t paths = 0;
    int n = 0;
    std::uint64_t seed = 0;
    std::vector<double> z;           // [path][time][coord]
    std::vector<double> m0_f, m0_g;  // [path][time]
    std::vector<double> s1, s2;      // [path][time]

    double z_at(std::size_t path, std::size_t time, int coord) const {
        return z[(path * grid.size() + time) * static_cast<std::size_t>(n) +
                 static_cast<std::size_t>(coord)];
    }
    double at(const std::vector<double>& v, std::size_t path, std::size_t time) const {
        return v[path * grid.size() + time];
    }
};

PathSample sample_paths(const GaussianFunctional& f, const GaussianFunctional& g,
                        const TimeGrid& grid, std::size_t paths, std::uint64_t seed);

// 0 = pass, 1 = fail, 2 = inconclusive (allowance too wide to decide).
struct CheckLine {
    std::string name;
    int status = 0;
    double value = 0.0;
    double allowance = 0.0;
    std::string detail;
};

struct ProcessSuite {
    TimeGrid grid;
    std::size_t paths = 0;
    std::uint64_t seed = 0;
    int workers = 1;
    double mean_f = 0.0, mean_g = 0.0;
    double cor_limit = 0.0;
    bool has_cor_limit = false;

    // p_k(t) = E[ <M_t^F, M_t^G> ]; per-time Monte Carlo statistics.
    std::vector<Stat> p0, p1, p2;
    std::vector<Stat> m0f, m0g;            // martingale diagnostics
    std::vector<Stat> chain0, chain1;      // centered-difference residuals (interior times)
    std::vector<Stat> cov_step;            // covariance increments between adjacent times
    std::vector<Stat> integral_resid;      // trapezoid-vs-direct residuals
    std::vector<double> cov;               // p0 - E[F] E[G]

    std::vector<CheckLine> checks;
    int fails = 0, inconclusive = 0;
    double wall_seconds = 0.0;
};

// Shared-path run computing all moment curves and consistency checks:
// martingale flatness of the k=0 moments, the derivative chain
// d/dt p_k = e^{-t} p_{k+1} for k = 0, 1, covariance monotonicity, the
// covariance limit bound, and the integral identity
// Cov(t) = integral of e^{-s} p_1(s) ds. Pre: f, g unsmoothed sign
// compositions or half-spaces of equal dimension.
ProcessSuite run_process_suite(const GaussianFunctional& f, const GaussianFunctional& g,
                               const TimeGrid& grid, std::size_t paths, std::uint64_t seed,
                               int workers = 1);

struct MomentCurve {
    int k = 0;
    TimeGrid grid;
    std::vector<Stat> value;
    std::size_t paths = 0;
    std::uint64_t seed = 0;
};

MomentCurve estimate_pk(const GaussianFunctional& f, const GaussianFunctional& g, int k,
                        const TimeGrid& grid, std::size_t paths, std::uint64_t seed,
                        int workers = 1);

// Columns t,k,estimate,se for k = 0,1,2.
void write_moment_csv(const ProcessSuite& suite, std::ostream& out);

}  // namespace corrbench
