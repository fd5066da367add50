#include "corrbench/quadrature.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <stdexcept>

namespace corrbench {

double norm_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("norm_quantile: p outside (0,1)");
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (p < plow) {
        double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        double q = p - 0.5, r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        double q = std::sqrt(-2.0 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    // One Halley refinement pushes the error to ~1e-15.
    double e = norm_cdf(x) - p;
    double u = e / norm_pdf(x);
    x -= u / (1.0 + 0.5 * x * u);
    return x;
}

namespace {

Quadrature1D golub_welsch(const std::vector<double>& diag, const std::vector<double>& offdiag,
                          double mu0) {
    const int m = static_cast<int>(diag.size());
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) j(i, i) = diag[static_cast<std::size_t>(i)];
    for (int i = 0; i + 1 < m; ++i) {
        j(i, i + 1) = offdiag[static_cast<std::size_t>(i)];
        j(i + 1, i) = offdiag[static_cast<std::size_t>(i)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
    Quadrature1D rule;
    rule.nodes.resize(static_cast<std::size_t>(m));
    rule.weights.resize(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        rule.nodes[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
        const double v0 = es.eigenvectors()(0, i);
        rule.weights[static_cast<std::size_t>(i)] = mu0 * v0 * v0;
    }
    return rule;
}

}  // namespace

Quadrature1D gauss_hermite(int order) {
    if (order < 1 || order > 200) throw std::invalid_argument("gauss_hermite: bad order");
    std::vector<double> diag(static_cast<std::size_t>(order), 0.0);
    std::vector<double> off;
    for (int k = 1; k < order; ++k) off.push_back(std::sqrt(static_cast<double>(k)));
    return golub_welsch(diag, off, 1.0);
}

Quadrature1D gauss_legendre(int order) {
    if (order < 1 || order > 200) throw std::invalid_argument("gauss_legendre: bad order");
    std::vector<double> diag(static_cast<std::size_t>(order), 0.0);
    std::vector<double> off;
    for (int k = 1; k < order; ++k)
        off.push_back(k / std::sqrt(4.0 * k * k - 1.0));
    return golub_welsch(diag, off, 2.0);
}

Quadrature1D mapped_to(const Quadrature1D& unit, double a, double b) {
    Quadrature1D out;
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    out.nodes.reserve(unit.size());
    out.weights.reserve(unit.size());
    for (std::size_t i = 0; i < unit.size(); ++i) {
        out.nodes.push_back(mid + half * unit.nodes[i]);
        out.weights.push_back(half * unit.weights[i]);
    }
    return out;
}

Quadrature1D gaussian_panels(std::vector<double> breaks, int order, double span) {
    std::vector<double> cuts{-span, span};
    for (double b : breaks)
        if (b > -span && b < span) cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    const Quadrature1D unit = gauss_legendre(order);
    Quadrature1D out;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        // Long panels are subdivided so the polynomial rule keeps resolving
        // the Gaussian density.
        const double width = cuts[i + 1] - cuts[i];
        const int pieces = std::max(1, static_cast<int>(std::ceil(width / 3.0)));
        for (int p = 0; p < pieces; ++p) {
            const double a = cuts[i] + width * p / pieces;
            const double b = cuts[i] + width * (p + 1) / pieces;
            Quadrature1D seg = mapped_to(unit, a, b);
            for (std::size_t q = 0; q < seg.size(); ++q) {
                out.nodes.push_back(seg.nodes[q]);
                out.weights.push_back(seg.weights[q] * norm_pdf(seg.nodes[q]));
            }
        }
    }
    return out;
}

void TensorGrid::for_each(
    const std::function<void(const std::vector<double>&, double)>& visit) const {
    const int n = dim();
    std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
    std::vector<double> y(static_cast<std::size_t>(n), 0.0);
    std::vector<double> x(static_cast<std::size_t>(n), 0.0);
    const bool rotated = !basis.empty();
    while (true) {
        double w = 1.0;
        for (int i = 0; i < n; ++i) {
            const auto& ax = axes[static_cast<std::size_t>(i)];
            y[static_cast<std::size_t>(i)] = ax.nodes[idx[static_cast<std::size_t>(i)]];
            w *= ax.weights[idx[static_cast<std::size_t>(i)]];
        }
        if (rotated) {
            for (int r = 0; r < n; ++r) {
                double s = 0.0;
                for (int c = 0; c < n; ++c)
                    s += basis[static_cast<std::size_t>(c)][static_cast<std::size_t>(r)] *
                         y[static_cast<std::size_t>(c)];
                x[static_cast<std::size_t>(r)] = s;
            }
            visit(x, w);
        } else {
            visit(y, w);
        }
        int pos = 0;
        while (pos < n) {
            if (++idx[static_cast<std::size_t>(pos)] < axes[static_cast<std::size_t>(pos)].size())
                break;
            idx[static_cast<std::size_t>(pos)] = 0;
            ++pos;
        }
        if (pos == n) break;
    }
}

double TensorGrid::integrate(const std::function<double(const std::vector<double>&)>& f) const {
    double acc = 0.0;
    for_each([&](const std::vector<double>& x, double w) { acc += w * f(x); });
    return acc;
}

TensorGrid gh_grid(int n, int order) {
    TensorGrid g;
    g.axes.assign(static_cast<std::size_t>(n), gauss_hermite(order));
    return g;
}

}  // namespace corrbench
