#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace corrbench {

// An absolutely continuous distribution on R^d (d <= 3) used by the
// inequality checkers. Two shapes:
//  - mixture of full-covariance Gaussians;
//  - product-form reweighting of the standard Gaussian, one strictly
//    positive piecewise-polynomial factor per axis (constant tails).
// Atomic distributions are excluded by construction: relative entropy to
// the Gaussian must be finite.
class Density {
public:
    struct MixtureComponent {
        double weight = 1.0;
        std::vector<double> mean;
        std::vector<std::vector<double>> cov;
    };

    // One axis factor: breaks b_1 < ... < b_m split R into m+1 segments;
    // polys[s] holds the coefficients (constant term first) on segment s.
    // The two unbounded segments must be constants.
    struct AxisFactor {
        std::vector<double> breaks;
        std::vector<std::vector<double>> polys;
    };

    static Density gaussian_mixture(std::vector<MixtureComponent> components);
    static Density standard_gaussian(int d);
    static Density reweighted_product(std::vector<AxisFactor> axes);

    int dim() const { return d_; }

    // dP/dgamma at x.
    double density_ratio(const std::vector<double>& x) const;

    std::vector<double> mean() const;
    std::vector<std::vector<double>> second_moment() const;  // E[x x^T], exact

    // Relative entropy to the standard Gaussian; closed form for a single
    // Gaussian component, quadrature otherwise.
    double kl() const;
    double kl_quadrature(int order) const;
    std::optional<double> kl_closed() const;

    // d = 1 only.
    double cdf(double x) const;
    double quantile(double u) const;

    // Abscissas where the density (hence the quantile derivative) may jump;
    // empty for mixtures. Used to place quadrature panel cuts.
    std::vector<double> quantile_kinks() const;

    nlohmann::json to_json() const;

private:
    struct Mixture {
        std::vector<MixtureComponent> comps;
        // Cholesky factors, inverses, log-dets cached per component.
        std::vector<std::vector<double>> chol;     // row-major d*d lower
        std::vector<std::vector<double>> inv;      // row-major d*d
        std::vector<double> logdet;
    };
    struct Product {
        std::vector<AxisFactor> axes;
        std::vector<double> norm;  // per-axis integral of the factor against gamma
    };

    Density() = default;
    std::variant<Mixture, Product> part_;
    int d_ = 0;
};

// E[x x^T] - I.
std::vector<std::vector<double>> h_matrix(const Density& density);

// Exact incomplete Gaussian moment: integral of x^k phi(x) over [a, b]
// (a, b may be +-infinity).
double incomplete_moment(int k, double a, double b);

}  // namespace corrbench
