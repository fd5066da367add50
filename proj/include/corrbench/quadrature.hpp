#pragma once

#include <cmath>
#include <functional>
#include <vector>

namespace corrbench {

inline double norm_pdf(double x) {
    return 0.39894228040143267793994605993438 * std::exp(-0.5 * x * x);
}
inline double norm_cdf(double x) {
    return 0.5 * std::erfc(-x * 0.70710678118654752440084436210485);
}
// Inverse of norm_cdf (Acklam-style rational approximation + one Halley step).
double norm_quantile(double p);

struct Quadrature1D {
    std::vector<double> nodes, weights;
    std::size_t size() const { return nodes.size(); }
};

// Weight = standard Gaussian density (integrates f against d-gamma exactly
// for polynomials of degree <= 2*order - 1).
Quadrature1D gauss_hermite(int order);

// Weight 1 on [-1, 1].
Quadrature1D gauss_legendre(int order);

Quadrature1D mapped_to(const Quadrature1D& unit, double a, double b);

// Piecewise Gauss-Legendre on [-span, span] with the Gaussian density folded
// into the weights and with mandatory panel boundaries at `breaks` (clamped
// to the span). Integrates x -> f(x) against gamma; exact breaks make
// indicator-type discontinuities invisible to the rule.
Quadrature1D gaussian_panels(std::vector<double> breaks, int order, double span = 8.5);

// Tensor-product grid; axis i uses axes[i]. An optional orthonormal basis
// maps grid coordinates y to evaluation points x = B y (used to align a
// half-space discontinuity with the first axis).
struct TensorGrid {
    std::vector<Quadrature1D> axes;
    std::vector<std::vector<double>> basis;  // basis[j] = column j, empty = identity

    int dim() const { return static_cast<int>(axes.size()); }
    std::size_t size() const {
        std::size_t s = 1;
        for (const auto& a : axes) s *= a.size();
        return s;
    }

    // visit(x, w) over all nodes; x has dim() coordinates.
    void for_each(const std::function<void(const std::vector<double>&, double)>& visit) const;

    double integrate(const std::function<double(const std::vector<double>&)>& f) const;
};

TensorGrid gh_grid(int n, int order);  // plain Gauss-Hermite tensor grid

}  // namespace corrbench
