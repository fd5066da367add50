#include "corrbench/density.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "corrbench/quadrature.hpp"

namespace corrbench {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double boundary_term(double x, int power) {
    if (std::isinf(x)) return 0.0;
    double p = 1.0;
    for (int i = 0; i < power; ++i) p *= x;
    return p * norm_pdf(x);
}

double poly_eval(const std::vector<double>& c, double x) {
    double v = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) v = v * x + c[i];
    return v;
}

}  // namespace

double incomplete_moment(int k, double a, double b) {
    if (k < 0) throw std::invalid_argument("incomplete_moment: negative power");
    if (!(a <= b)) throw std::invalid_argument("incomplete_moment: empty interval");
    const double cdf_a = std::isinf(a) ? (a < 0 ? 0.0 : 1.0) : norm_cdf(a);
    const double cdf_b = std::isinf(b) ? (b < 0 ? 0.0 : 1.0) : norm_cdf(b);
    double prev = cdf_b - cdf_a;                            // I_0
    if (k == 0) return prev;
    double cur = boundary_term(a, 0) - boundary_term(b, 0);  // I_1
    for (int m = 2; m <= k; ++m) {
        const double next =
            (m - 1) * prev + boundary_term(a, m - 1) - boundary_term(b, m - 1);
        prev = cur;
        cur = next;
    }
    return cur;
}

Density Density::gaussian_mixture(std::vector<MixtureComponent> components) {
    if (components.empty()) throw std::invalid_argument("mixture: no components");
    const int d = static_cast<int>(components.front().mean.size());
    if (d < 1 || d > 3) throw std::invalid_argument("mixture: dimension must be in [1,3]");
    double total = 0.0;
    for (const auto& c : components) {
        if (!(c.weight > 0.0)) throw std::invalid_argument("mixture: weights must be positive");
        if (static_cast<int>(c.mean.size()) != d ||
            static_cast<int>(c.cov.size()) != d)
            throw std::invalid_argument("mixture: component shape mismatch");
        for (const auto& row : c.cov)
            if (static_cast<int>(row.size()) != d)
                throw std::invalid_argument("mixture: covariance shape mismatch");
        total += c.weight;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw std::invalid_argument("mixture: weights must sum to 1");

    Mixture mix;
    mix.comps = std::move(components);
    for (auto& c : mix.comps) {
        c.weight /= total;
        // Cholesky, lower triangular.
        std::vector<double> l(static_cast<std::size_t>(d) * d, 0.0);
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j <= i; ++j) {
                double s = c.cov[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
                if (std::abs(s - c.cov[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]) >
                    1e-12)
                    throw std::invalid_argument("mixture: covariance not symmetric");
                for (int m = 0; m < j; ++m)
                    s -= l[static_cast<std::size_t>(i * d + m)] *
                         l[static_cast<std::size_t>(j * d + m)];
                if (i == j) {
                    if (!(s > 1e-12))
                        throw std::invalid_argument("mixture: covariance not positive definite");
                    l[static_cast<std::size_t>(i * d + j)] = std::sqrt(s);
                } else {
                    l[static_cast<std::size_t>(i * d + j)] =
                        s / l[static_cast<std::size_t>(j * d + j)];
                }
            }
        }
        double ld = 0.0;
        for (int i = 0; i < d; ++i) ld += 2.0 * std::log(l[static_cast<std::size_t>(i * d + i)]);
        // Inverse from the factorization.
        std::vector<double> inv(static_cast<std::size_t>(d) * d, 0.0);
        for (int col = 0; col < d; ++col) {
            std::vector<double> e(static_cast<std::size_t>(d), 0.0);
            e[static_cast<std::size_t>(col)] = 1.0;
            // forward solve L y = e
            for (int i = 0; i < d; ++i) {
                double s = e[static_cast<std::size_t>(i)];
                for (int j = 0; j < i; ++j)
                    s -= l[static_cast<std::size_t>(i * d + j)] * e[static_cast<std::size_t>(j)];
                e[static_cast<std::size_t>(i)] = s / l[static_cast<std::size_t>(i * d + i)];
            }
            // back solve L^T x = y
            for (int i = d - 1; i >= 0; --i) {
                double s = e[static_cast<std::size_t>(i)];
                for (int j = i + 1; j < d; ++j)
                    s -= l[static_cast<std::size_t>(j * d + i)] * e[static_cast<std::size_t>(j)];
                e[static_cast<std::size_t>(i)] = s / l[static_cast<std::size_t>(i * d + i)];
            }
            for (int i = 0; i < d; ++i) inv[static_cast<std::size_t>(i * d + col)] = e[static_cast<std::size_t>(i)];
        }
        mix.chol.push_back(std::move(l));
        mix.inv.push_back(std::move(inv));
        mix.logdet.push_back(ld);
    }
    Density out;
    out.d_ = d;
    out.part_ = std::move(mix);
    return out;
}

Density Density::standard_gaussian(int d) {
    MixtureComponent c;
    c.weight = 1.0;
    c.mean.assign(static_cast<std::size_t>(d), 0.0);
    c.cov.assign(static_cast<std::size_t>(d), std::vector<double>(static_cast<std::size_t>(d), 0.0));
    for (int i = 0; i < d; ++i) c.cov[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1.0;
    return gaussian_mixture({c});
}

Density Density::reweighted_product(std::vector<AxisFactor> axes) {
    const int d = static_cast<int>(axes.size());
    if (d < 1 || d > 3) throw std::invalid_argument("product density: dimension must be in [1,3]");
    Product prod;
    for (const auto& ax : axes) {
        if (ax.polys.size() != ax.breaks.size() + 1)
            throw std::invalid_argument("product density: need one polynomial per segment");
        for (std::size_t i = 1; i < ax.breaks.size(); ++i)
            if (!(ax.breaks[i] > ax.breaks[i - 1]))
                throw std::invalid_argument("product density: breaks must increase");
        if (ax.polys.front().size() != 1 || ax.polys.back().size() != 1)
            throw std::invalid_argument("product density: unbounded tails must be constant");
        for (const auto& p : ax.polys) {
            if (p.empty() || p.size() > 7)
                throw std::invalid_argument("product density: polynomial degree out of range");
        }
        // Positivity, sampled on each segment.
        for (std::size_t s = 0; s < ax.polys.size(); ++s) {
            const double lo = s == 0 ? (ax.breaks.empty() ? -4.0 : ax.breaks.front() - 2.0)
                                     : ax.breaks[s - 1];
            const double hi = s == ax.polys.size() - 1
                                  ? (ax.breaks.empty() ? 4.0 : ax.breaks.back() + 2.0)
                                  : ax.breaks[s];
            for (int q = 0; q <= 32; ++q) {
                const double x = lo + (hi - lo) * q / 32.0;
                if (!(poly_eval(ax.polys[s], x) > 1e-12))
                    throw std::invalid_argument("product density: factor not strictly positive");
            }
        }
        double z = 0.0;
        for (std::size_t s = 0; s < ax.polys.size(); ++s) {
            const double lo = s == 0 ? -kInf : ax.breaks[s - 1];
            const double hi = s + 1 == ax.polys.size() ? kInf : ax.breaks[s];
            for (std::size_t i = 0; i < ax.polys[s].size(); ++i)
                z += ax.polys[s][i] * incomplete_moment(static_cast<int>(i), lo, hi);
        }
        if (!(z > 1e-12)) throw std::invalid_argument("product density: vanishing normalization");
        prod.norm.push_back(z);
    }
    prod.axes = std::move(axes);
    Density out;
    out.d_ = d;
    out.part_ = std::move(prod);
    return out;
}

namespace {

double axis_factor_at(const Density::AxisFactor& ax, double x) {
    std::size_t s = 0;
    while (s < ax.breaks.size() && x > ax.breaks[s]) ++s;
    return poly_eval(ax.polys[s], x);
}

// Per-axis integral of x^k times the factor against gamma, over (-inf, cap].
double axis_partial_moment(const Density::AxisFactor& ax, int k, double cap) {
    double acc = 0.0;
    for (std::size_t s = 0; s < ax.polys.size(); ++s) {
        const double lo = s == 0 ? -kInf : ax.breaks[s - 1];
        const double hi = s + 1 == ax.polys.size() ? kInf : ax.breaks[s];
        if (lo >= cap) break;
        const double top = std::min(hi, cap);
        for (std::size_t i = 0; i < ax.polys[s].size(); ++i)
            acc += ax.polys[s][i] * incomplete_moment(static_cast<int>(i) + k, lo, top);
    }
    return acc;
}

double mixture_log_ratio(const Density::MixtureComponent* comps,
                         const std::vector<std::vector<double>>& inv,
                         const std::vector<double>& logdet, std::size_t count,
                         const std::vector<double>& x) {
    const int d = static_cast<int>(x.size());
    double best = -kInf;
    std::vector<double> logs(count);
    for (std::size_t c = 0; c < count; ++c) {
        double q = 0.0;
        for (int i = 0; i < d; ++i) {
            double s = 0.0;
            for (int j = 0; j < d; ++j)
                s += inv[c][static_cast<std::size_t>(i * d + j)] *
                     (x[static_cast<std::size_t>(j)] - comps[c].mean[static_cast<std::size_t>(j)]);
            q += (x[static_cast<std::size_t>(i)] - comps[c].mean[static_cast<std::size_t>(i)]) * s;
        }
        logs[c] = std::log(comps[c].weight) - 0.5 * q - 0.5 * logdet[c];
        best = std::max(best, logs[c]);
    }
    double acc = 0.0;
    for (std::size_t c = 0; c < count; ++c) acc += std::exp(logs[c] - best);
    double norm2 = 0.0;
    for (double xi : x) norm2 += xi * xi;
    return best + std::log(acc) + 0.5 * norm2;
}

}  // namespace

double Density::density_ratio(const std::vector<double>& x) const {
    if (static_cast<int>(x.size()) != d_)
        throw std::invalid_argument("density_ratio: point dimension mismatch");
    if (const auto* mix = std::get_if<Mixture>(&part_)) {
        return std::exp(mixture_log_ratio(mix->comps.data(), mix->inv, mix->logdet,
                                          mix->comps.size(), x));
    }
    const auto& prod = std::get<Product>(part_);
    double r = 1.0;
    for (int j = 0; j < d_; ++j)
        r *= axis_factor_at(prod.axes[static_cast<std::size_t>(j)],
                            x[static_cast<std::size_t>(j)]) /
             prod.norm[static_cast<std::size_t>(j)];
    return r;
}

std::vector<double> Density::mean() const {
    std::vector<double> m(static_cast<std::size_t>(d_), 0.0);
    if (const auto* mix = std::get_if<Mixture>(&part_)) {
        for (const auto& c : mix->comps)
            for (int i = 0; i < d_; ++i)
                m[static_cast<std::size_t>(i)] += c.weight * c.mean[static_cast<std::size_t>(i)];
        return m;
    }
    const auto& prod = std::get<Product>(part_);
    for (int j = 0; j < d_; ++j)
        m[static_cast<std::size_t>(j)] =
            axis_partial_moment(prod.axes[static_cast<std::size_t>(j)], 1, kInf) /
            prod.norm[static_cast<std::size_t>(j)];
    return m;
}

std::vector<std::vector<double>> Density::second_moment() const {
    std::vector<std::vector<double>> s(
        static_cast<std::size_t>(d_), std::vector<double>(static_cast<std::size_t>(d_), 0.0));
    if (const auto* mix = std::get_if<Mixture>(&part_)) {
        for (const auto& c : mix->comps)
            for (int i = 0; i < d_; ++i)
                for (int j = 0; j < d_; ++j)
                    s[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] +=
                        c.weight * (c.cov[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] +
                                    c.mean[static_cast<std::size_t>(i)] *
                                        c.mean[static_cast<std::size_t>(j)]);
        return s;
    }
    const auto& prod = std::get<Product>(part_);
    const std::vector<double> m = mean();
    for (int i = 0; i < d_; ++i) {
        for (int j = 0; j < d_; ++j) {
            if (i == j)
                s[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                    axis_partial_moment(prod.axes[static_cast<std::size_t>(i)], 2, kInf) /
                    prod.norm[static_cast<std::size_t>(i)];
            else
                s[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                    m[static_cast<std::size_t>(i)] * m[static_cast<std::size_t>(j)];
        }
    }
    return s;
}

std::optional<double> Density::kl_closed() const {
    const auto* mix = std::get_if<Mixture>(&part_);
    if (!mix || mix->comps.size() != 1) return std::nullopt;
    const auto& c = mix->comps.front();
    double tr = 0.0, mu2 = 0.0;
    for (int i = 0; i < d_; ++i) {
        tr += c.cov[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
        mu2 += c.mean[static_cast<std::size_t>(i)] * c.mean[static_cast<std::size_t>(i)];
    }
    return 0.5 * (tr - d_ - mix->logdet.front() + mu2);
}

double Density::kl_quadrature(int order) const {
    if (const auto* mix = std::get_if<Mixture>(&part_)) {
        // KL = sum_c w_c E_{N_c}[ log dP/dgamma ], each expectation on a
        // grid adapted to that component.
        const Quadrature1D gh = gauss_hermite(order);
        double kl = 0.0;
        std::vector<double> x(static_cast<std::size_t>(d_));
        std::vector<std::size_t> idx(static_cast<std::size_t>(d_), 0);
        for (std::size_t c = 0; c < mix->comps.size(); ++c) {
            const auto& comp = mix->comps[c];
            double acc = 0.0;
            std::fill(idx.begin(), idx.end(), 0);
            while (true) {
                double w = 1.0;
                for (int i = 0; i < d_; ++i) {
                    x[static_cast<std::size_t>(i)] = comp.mean[static_cast<std::size_t>(i)];
                    w *= gh.weights[idx[static_cast<std::size_t>(i)]];
                }
                for (int i = 0; i < d_; ++i) {
                    const double y = gh.nodes[idx[static_cast<std::size_t>(i)]];
                    for (int r = i; r < d_; ++r)
                        x[static_cast<std::size_t>(r)] +=
                            mix->chol[c][static_cast<std::size_t>(r * d_ + i)] * y;
                }
                acc += w * mixture_log_ratio(mix->comps.data(), mix->inv, mix->logdet,
                                             mix->comps.size(), x);
                int pos = 0;
                while (pos < d_) {
                    if (++idx[static_cast<std::size_t>(pos)] < gh.size()) break;
                    idx[static_cast<std::size_t>(pos)] = 0;
                    ++pos;
                }
                if (pos == d_) break;
            }
            kl += comp.weight * acc;
        }
        return kl;
    }
    // Product form: KL adds across axes.
    const auto& prod = std::get<Product>(part_);
    double kl = 0.0;
    for (int j = 0; j < d_; ++j) {
        const auto& ax = prod.axes[static_cast<std::size_t>(j)];
        const double z = prod.norm[static_cast<std::size_t>(j)];
        const Quadrature1D rule = gaussian_panels(ax.breaks, order);
        double acc = 0.0;
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const double rho = axis_factor_at(ax, rule.nodes[q]) / z;
            acc += rule.weights[q] * rho * std::log(rho);
        }
        kl += acc;
    }
    return kl;
}

double Density::kl() const {
    if (auto closed = kl_closed()) return *closed;
    if (std::holds_alternative<Mixture>(part_)) return kl_quadrature(d_ == 3 ? 10 : 14);
    return kl_quadrature(24);
}

double Density::cdf(double x) const {
    if (d_ != 1) throw std::logic_error("cdf: only available in one dimension");
    if (const auto* mix = std::get_if<Mixture>(&part_)) {
        double acc = 0.0;
        for (std::size_t c = 0; c < mix->comps.size(); ++c) {
            const double sigma = mix->chol[c][0];
            acc += mix->comps[c].weight * norm_cdf((x - mix->comps[c].mean[0]) / sigma);
        }
        return acc;
    }
    const auto& prod = std::get<Product>(part_);
    return axis_partial_moment(prod.axes[0], 0, x) / prod.norm[0];
}

double Density::quantile(double u) const {
    if (d_ != 1) throw std::logic_error("quantile: only available in one dimension");
    if (!(u > 0.0 && u < 1.0)) throw std::domain_error("quantile: u outside (0,1)");
    double lo = -45.0, hi = 45.0;
    // Bisection to a small bracket, then Newton with the density.
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (cdf(mid) < u)
            lo = mid;
        else
            hi = mid;
    }
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 8; ++it) {
        const double err = cdf(x) - u;
        const double dens = density_ratio({x}) * norm_pdf(x);
        if (!(dens > 0.0)) break;
        double step = err / dens;
        step = std::clamp(step, lo - x, hi - x);
        x -= step;
        if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(x))) break;
    }
    return x;
}

std::vector<double> Density::quantile_kinks() const {
    const auto* prod = std::get_if<Product>(&part_);
    if (!prod || d_ != 1) return {};
    return prod->axes.front().breaks;
}

nlohmann::json Density::to_json() const {
    nlohmann::json j;
    if (const auto* mix = std::get_if<Mixture>(&part_)) {
        j["variant"] = "mixture";
        nlohmann::json comps = nlohmann::json::array();
        for (const auto& c : mix->comps) {
            nlohmann::json jc;
            jc["weight"] = c.weight;
            jc["mean"] = c.mean;
            jc["cov"] = c.cov;
            comps.push_back(jc);
        }
        j["components"] = comps;
    } else {
        const auto& prod = std::get<Product>(part_);
        j["variant"] = "product";
        nlohmann::json axes = nlohmann::json::array();
        for (const auto& ax : prod.axes) {
            nlohmann::json ja;
            ja["breaks"] = ax.breaks;
            ja["polys"] = ax.polys;
            axes.push_back(ja);
        }
        j["axes"] = axes;
    }
    return j;
}

std::vector<std::vector<double>> h_matrix(const Density& density) {
    auto h = density.second_moment();
    for (std::size_t i = 0; i < h.size(); ++i) h[i][i] -= 1.0;
    return h;
}

}  // namespace corrbench
