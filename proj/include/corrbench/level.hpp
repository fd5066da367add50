#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "corrbench/density.hpp"
#include "corrbench/functional.hpp"

namespace corrbench {

// Nonnegative vector field R^dim -> R_+^components, piecewise constant on the
// axis-aligned box partition induced by per-axis cut points. Cells are indexed
// in mixed radix, axis 0 fastest; `values[cell]` holds the k components.
struct VectorField {
    int dim = 0;
    int components = 0;
    std::vector<std::vector<double>> cuts;
    std::vector<std::vector<double>> values;

    std::size_t cell_count() const;
    std::size_t cell_of(const std::vector<double>& x) const;
    double component_at(const std::vector<double>& x, int i) const;
    void validate() const;

    static VectorField constant(int dim, std::vector<double> value);

    nlohmann::json to_json() const;
    static VectorField from_json(const nlohmann::json& j);
};

// Gaussian moments of a vector field: per-component mass, the centered
// second-moment matrices A_i = E[v_i(x)(x x^T - I)], and E|v|^2.
struct FieldMoments {
    std::vector<double> integral;
    std::vector<std::vector<std::vector<double>>> a;
    double square_mass = 0.0;
};

FieldMoments field_moments_closed(const VectorField& f);
FieldMoments field_moments_quadrature(const VectorField& f, int order = 12);

// Outcome of a single two-sided check. `margin` is lhs - rhs; a check fails
// only when the margin dips below -tolerance, where the tolerance is
// max(1e-7, 1e-6 * scale) and scale = max(|lhs|, |rhs|, 1e-3).
struct MarginReport {
    std::string kind;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
    double scale = 1.0;
    double tolerance = 0.0;
    bool violated = false;
    bool skipped = false;

    nlohmann::json to_json() const;
};

double margin_tolerance(double lhs, double rhs);

// Trace-versus-entropy check: Tr(H_X H_Y) >= -20 (KL(X) + KL(Y)).
MarginReport check_lvl21(const Density& x, const Density& y);

// Quadratic transport cost between two one-dimensional laws, computed through
// the monotone (quantile) coupling.
double w2_1d(const Density& x, const Density& y, int order = 24);

// One-dimensional transport-entropy check: W2(X, gamma)^2 <= 2 KL(X).
MarginReport check_transport_1d(const Density& x);

// Vector-field trace inequality:
//   sum_i Tr(A_i B_i) >= -20 eps log(E|v|^2 E|u|^2 / eps^2),
// with eps = <E v, E u>; both sides vanish when eps = 0. Moments are taken by
// quadrature; the closed route is exposed above for cross-checks.
MarginReport check_geomineq(const VectorField& v, const VectorField& u, int order = 12);

// First-versus-third Hermite level check for monotone functionals:
//   <Q3 F, Q3 G> >= -e^8 <Q1 F, Q1 G> log(e sqrt(Var F Var G) / <Q1 F, Q1 G>).
// Pairs with <Q1 F, Q1 G> <= 1e-10 are skipped (reported, not asserted).
MarginReport check_level13(const GaussianFunctional& f, const GaussianFunctional& g,
                           int quad_order = 16);

enum class LevelSuite { Lvl21, Transport, Geom, Level13 };

LevelSuite parse_level_suite(const std::string& name);
std::string level_suite_name(LevelSuite suite);

struct LevelSuiteResult {
    std::string suite;
    std::uint64_t seed = 0;
    int cases = 0;
    int violations = 0;
    int skipped = 0;
    double worst_margin = 0.0;
    double max_upper_ratio = 0.0;         // max Tr(H_X H_Y) / (KL_X KL_Y) seen
    double max_tolerated_constant = 0.0;  // largest constant the family allows
    double wall_seconds = 0.0;
    std::vector<nlohmann::json> bundles;  // reproduction data for violations

    nlohmann::json to_json() const;
};

// Runs `cases` randomized checks of the given family. Case c is generated from
// derive_seed(seed, c), so results are independent of the worker count.
LevelSuiteResult run_level_suite(LevelSuite suite, int cases, std::uint64_t seed,
                                 int workers = 1);

}  // namespace corrbench
