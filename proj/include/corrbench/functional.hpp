#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "corrbench/boolean.hpp"
#include "corrbench/hermite.hpp"
#include "corrbench/quadrature.hpp"

namespace corrbench {

// Indicator of the open half-space <theta, x> > a, with |theta| = 1.
struct HalfSpaceData {
    std::vector<double> theta;
    double a = 0.0;
};

// f composed with the coordinatewise sign map; `centered` lifts the range
// from {0,1} to {-1,+1} (value 2f - 1). `coef` caches the +-1-basis
// expansion over subset masks.
struct SignData {
    BooleanFunction fn;
    bool centered = true;
    std::vector<double> coef;
};

// Finite Hermite expansion: sum over terms of coeff * prod_j He_{m_j}(x_j).
// Terms are keyed by the per-coordinate degree vector, kept sorted.
struct HermiteData {
    std::vector<std::pair<std::vector<int>, double>> terms;
};

// A square-integrable functional on Gaussian space, optionally smoothed by
// the Ornstein-Uhlenbeck semigroup for time ou_time(). Smoothing composes
// additively and exactly: semigroup(s) of semigroup(t) equals
// semigroup(s + t), so a functional stores its base shape plus one time.
class GaussianFunctional {
public:
    static GaussianFunctional half_space(std::vector<double> theta, double a);
    static GaussianFunctional sign_composed(BooleanFunction f, bool centered = true);
    static GaussianFunctional hermite_series(
        int n, const std::map<std::vector<int>, double>& coeffs);

    static GaussianFunctional from_json(const nlohmann::json& j);
    // Accepts a functional JSON file, or the prefix form "sign:<path>" which
    // wraps a Boolean-function file as a centered sign composition.
    static GaussianFunctional load(const std::string& spec);
    nlohmann::json to_json() const;

    int dim() const { return n_; }
    double ou_time() const { return ou_t_; }
    bool smoothed() const { return ou_t_ > 0.0; }

    const HalfSpaceData* half_space_part() const { return std::get_if<HalfSpaceData>(&part_); }
    const SignData* sign_part() const { return std::get_if<SignData>(&part_); }
    const HermiteData* hermite_part() const { return std::get_if<HermiteData>(&part_); }

    double eval(const std::vector<double>& x) const;

    std::string describe() const;

private:
    GaussianFunctional() = default;
    std::variant<HalfSpaceData, SignData, HermiteData> part_;
    int n_ = 0;
    double ou_t_ = 0.0;

    friend GaussianFunctional ou_apply(const GaussianFunctional&, double);
};

// Extra smoothing time t >= 0; merges with any smoothing already present.
GaussianFunctional ou_apply(const GaussianFunctional& f, double t);

// E[sign(x + mu) He_m(x)] under the 1-D Gaussian; the per-coordinate factor
// behind every moment of a sign composition.
double sign_hermite_factor(int m, double mu);

// k-th Gaussian moment tensor E[F(x) H_k(x)], entries E[F prod He_{m_j}(x_j)]
// by tuple multiplicity; closed form. Smoothing enters as the factor
// exp(-k * ou_time / 2) on the base tensor (the kernel contracts x by
// exp(-t/2), so degree-k content decays at half the time constant).
SymTensor moment(const GaussianFunctional& f, int k);

// Same quantity by tensor quadrature (independent route; resolves the
// discontinuities of unsmoothed indicators with exact panel breaks).
SymTensor moment_quadrature(const GaussianFunctional& f, int k, int order = 16);

double mean_value(const GaussianFunctional& f);      // = moment(f, 0)
double variance_value(const GaussianFunctional& f);  // closed where available, else quadrature

// Cor(F,G) = E[FG] - E[F]E[G] under the standard Gaussian. Supported pairs:
// two sign compositions (exact when unsmoothed, quadrature otherwise), two
// half-spaces (reduces to a 1-D integral), sign/Hermite mixtures, and
// half-spaces with axis-aligned normals in mixtures.
double correlation_gamma(const GaussianFunctional& f, const GaussianFunctional& g,
                         int order = 16);

// Comparison of the Boolean quantities of (f, g) with the Gaussian
// quantities of their centered sign lifts: the correlation identity
// Cor_boolean = Cor_gauss / 4, first moments against sqrt(2/pi) * inf_std,
// and mixed second moments against V / pi.
struct BridgeReport {
    int n = 0;
    Rational cor_boolean;
    Rational cor_gauss;      // exact, from the shared truth tables
    double cor_gauss_quad = 0.0;
    double dev_cor_exact = 0.0;  // |4 cor_boolean - cor_gauss|
    double dev_cor_quad = 0.0;   // |4 cor_boolean - cor_gauss_quad|
    double dev_m1 = 0.0;         // worst coordinate, quadrature moment vs scaled influence
    double dev_m1_closed = 0.0;  // same with the closed-form moment
    double dev_m2 = 0.0;         // worst entry, quadrature moment vs V/pi (diagonal vs 0)
    double dev_m2_closed = 0.0;
};

BridgeReport bridge_report(const BooleanFunction& f, const BooleanFunction& g,
                           int quad_order = 12);

// bridge_report over every ordered pair of monotone functions on n bits,
// reduced to the worst deviation per check.  Moment deviations are computed
// once per function rather than once per pair.
struct BridgeSweep {
    int n = 0;
    int quad_order = 0;
    std::int64_t functions = 0;
    std::int64_t pairs = 0;
    double dev_cor_exact = 0.0;
    double dev_cor_quad = 0.0;
    double dev_m1 = 0.0;
    double dev_m1_closed = 0.0;
    double dev_m2 = 0.0;
    double dev_m2_closed = 0.0;

    double worst() const {
        double w = dev_cor_exact;
        for (double d : {dev_cor_quad, dev_m1, dev_m1_closed, dev_m2, dev_m2_closed})
            w = std::max(w, d);
        return w;
    }
};

BridgeSweep bridge_sweep(int n, int quad_order = 12, int workers = 1);

}  // namespace corrbench
