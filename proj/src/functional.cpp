#include "corrbench/functional.hpp"

#include <nlohmann/json.hpp>

#include "corrbench/enumeration.hpp"
#include "corrbench/parallel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace corrbench {

namespace {

constexpr double kSqrt2OverPi = 0.79788456080286535587989211986876;

double sigma_ou(double t) { return std::sqrt(-std::expm1(-t)); }

double factorial(int m) {
    double f = 1.0;
    for (int k = 2; k <= m; ++k) f *= k;
    return f;
}

std::vector<double> sign_basis_coefficients(const BooleanFunction& fn, bool centered) {
    const SpectralSummary s = spectral_summary(fn);
    const double scale = 1.0 / static_cast<double>(std::int64_t(1) << fn.n());
    std::vector<double> coef(fn.size());
    for (std::uint32_t m = 0; m < fn.size(); ++m)
        coef[m] = static_cast<double>(s.fourier_num[m]) * scale;
    if (centered) {
        for (double& c : coef) c *= 2.0;
        coef[0] -= 1.0;
    }
    return coef;
}

std::vector<double> normalized(std::vector<double> v) {
    double norm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
    if (!(norm > 0.0)) throw std::invalid_argument("half-space normal must be nonzero");
    for (double& c : v) c /= norm;
    return v;
}

// Orthonormal basis whose first column is `first` (already unit).
std::vector<std::vector<double>> basis_with_first(const std::vector<double>& first) {
    const std::size_t n = first.size();
    std::vector<std::vector<double>> cols{first};
    for (std::size_t e = 0; e < n && cols.size() < n; ++e) {
        std::vector<double> v(n, 0.0);
        v[e] = 1.0;
        for (const auto& c : cols) {
            const double d = std::inner_product(c.begin(), c.end(), v.begin(), 0.0);
            for (std::size_t i = 0; i < n; ++i) v[i] -= d * c[i];
        }
        const double norm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
        if (norm > 1e-8) {
            for (double& c : v) c /= norm;
            cols.push_back(std::move(v));
        }
    }
    if (cols.size() != n) throw std::logic_error("basis completion failed");
    return cols;
}

int check_match(const GaussianFunctional& f, const GaussianFunctional& g) {
    if (f.dim() != g.dim())
        throw std::invalid_argument("functional pair: dimension mismatch");
    return f.dim();
}

bool axis_aligned(const std::vector<double>& theta, int& axis, double& sign) {
    axis = -1;
    for (std::size_t i = 0; i < theta.size(); ++i) {
        if (std::abs(theta[i]) > 1e-12) {
            if (axis >= 0) return false;
            axis = static_cast<int>(i);
            sign = theta[i] > 0 ? 1.0 : -1.0;
        }
    }
    return axis >= 0;
}

}  // namespace

double sign_hermite_factor(int m, double mu) {
    if (m == 0) return 2.0 * norm_cdf(mu) - 1.0;
    return 2.0 * norm_pdf(mu) * hermite_he(m - 1, -mu);
}

GaussianFunctional GaussianFunctional::half_space(std::vector<double> theta, double a) {
    GaussianFunctional f;
    f.n_ = static_cast<int>(theta.size());
    if (f.n_ < 1) throw std::invalid_argument("half-space: empty normal");
    f.part_ = HalfSpaceData{normalized(std::move(theta)), a};
    return f;
}

GaussianFunctional GaussianFunctional::sign_composed(BooleanFunction fn, bool centered) {
    GaussianFunctional f;
    f.n_ = fn.n();
    auto coef = sign_basis_coefficients(fn, centered);
    f.part_ = SignData{std::move(fn), centered, std::move(coef)};
    return f;
}

GaussianFunctional GaussianFunctional::hermite_series(
    int n, const std::map<std::vector<int>, double>& coeffs) {
    if (n < 1 || n > 16) throw std::invalid_argument("hermite series: dimension out of range");
    GaussianFunctional f;
    f.n_ = n;
    HermiteData data;
    for (const auto& [degrees, c] : coeffs) {
        if (static_cast<int>(degrees.size()) != n)
            throw std::invalid_argument("hermite series: degree vector arity mismatch");
        for (int d : degrees)
            if (d < 0 || d > 8)
                throw std::invalid_argument("hermite series: degree out of range [0,8]");
        if (!std::isfinite(c)) throw std::invalid_argument("hermite series: non-finite coefficient");
        if (c != 0.0) data.terms.emplace_back(degrees, c);
    }
    f.part_ = std::move(data);
    return f;
}

GaussianFunctional ou_apply(const GaussianFunctional& f, double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("ou_apply: time must be >= 0");
    GaussianFunctional out = f;
    out.ou_t_ += t;
    return out;
}

double GaussianFunctional::eval(const std::vector<double>& x) const {
    if (static_cast<int>(x.size()) != n_)
        throw std::invalid_argument("eval: point dimension mismatch");
    if (const auto* h = std::get_if<HalfSpaceData>(&part_)) {
        const double u = std::inner_product(h->theta.begin(), h->theta.end(), x.begin(), 0.0);
        if (ou_t_ == 0.0) return u > h->a ? 1.0 : 0.0;
        return norm_cdf((std::exp(-0.5 * ou_t_) * u - h->a) / sigma_ou(ou_t_));
    }
    if (const auto* s = std::get_if<SignData>(&part_)) {
        if (ou_t_ == 0.0) {
            std::uint32_t idx = 0;
            for (int i = 0; i < n_; ++i)
                if (x[static_cast<std::size_t>(i)] >= 0.0) idx |= 1u << i;
            const int b = s->fn.bit(idx);
            return s->centered ? 2.0 * b - 1.0 : static_cast<double>(b);
        }
        const double lam = std::exp(-0.5 * ou_t_) / sigma_ou(ou_t_);
        std::vector<double> base(static_cast<std::size_t>(n_));
        for (int i = 0; i < n_; ++i)
            base[static_cast<std::size_t>(i)] = 2.0 * norm_cdf(lam * x[static_cast<std::size_t>(i)]) - 1.0;
        // prod[m] over masks by peeling the lowest set bit.
        const std::uint32_t sz = 1u << n_;
        std::vector<double> prod(sz);
        prod[0] = 1.0;
        for (std::uint32_t m = 1; m < sz; ++m)
            prod[m] = prod[m & (m - 1)] * base[static_cast<std::size_t>(std::countr_zero(m))];
        double acc = 0.0;
        for (std::uint32_t m = 0; m < sz; ++m) acc += s->coef[m] * prod[m];
        return acc;
    }
    const auto& h = std::get<HermiteData>(part_);
    double acc = 0.0;
    for (const auto& [deg, c] : h.terms) {
        double term = c;
        int total = 0;
        for (int j = 0; j < n_; ++j) {
            total += deg[static_cast<std::size_t>(j)];
            term *= hermite_he(deg[static_cast<std::size_t>(j)], x[static_cast<std::size_t>(j)]);
        }
        acc += term * std::exp(-0.5 * total * ou_t_);
    }
    return acc;
}

SymTensor moment(const GaussianFunctional& f, int k) {
    if (k < 0 || k > 3) throw std::invalid_argument("moment: order must be in [0,3]");
    const int n = f.dim();
    SymTensor out(n, k);
    if (const auto* h = f.half_space_part()) {
        if (k == 0) {
            out.scalar() = norm_cdf(-h->a);
        } else {
            out = SymTensor::rank_one(h->theta, k, norm_pdf(h->a) * hermite_he(k - 1, h->a));
        }
    } else if (const auto* s = f.sign_part()) {
        if (k == 0) {
            out.scalar() = s->coef[0];
        } else {
            std::vector<int> idx(static_cast<std::size_t>(k), 0);
            std::vector<int> mult(static_cast<std::size_t>(n), 0);
            out.for_each_index(idx, [&](const std::vector<int>& tuple, std::size_t flat) {
                std::fill(mult.begin(), mult.end(), 0);
                for (int i : tuple) ++mult[static_cast<std::size_t>(i)];
                std::uint32_t supp = 0;
                double factors = 1.0;
                for (int j = 0; j < n; ++j) {
                    const int m = mult[static_cast<std::size_t>(j)];
                    if (m > 0) {
                        supp |= 1u << j;
                        factors *= sign_hermite_factor(m, 0.0);
                    }
                }
                out.data()[flat] = s->coef[supp] * factors;
            });
        }
    } else {
        const auto& h = *f.hermite_part();
        if (k == 0) {
            for (const auto& [deg, c] : h.terms)
                if (std::all_of(deg.begin(), deg.end(), [](int d) { return d == 0; }))
                    out.scalar() = c;
        } else {
            std::vector<int> idx(static_cast<std::size_t>(k), 0);
            std::vector<int> mult(static_cast<std::size_t>(n), 0);
            out.for_each_index(idx, [&](const std::vector<int>& tuple, std::size_t flat) {
                std::fill(mult.begin(), mult.end(), 0);
                for (int i : tuple) ++mult[static_cast<std::size_t>(i)];
                for (const auto& [deg, c] : h.terms) {
                    if (std::equal(deg.begin(), deg.end(), mult.begin())) {
                        double v = c;
                        for (int m : mult) v *= factorial(m);
                        out.data()[flat] = v;
                        break;
                    }
                }
            });
        }
    }
    if (f.ou_time() > 0.0 && k > 0) out.scale(std::exp(-0.5 * k * f.ou_time()));
    return out;
}

SymTensor moment_quadrature(const GaussianFunctional& f, int k, int order) {
    if (k < 0 || k > 3) throw std::invalid_argument("moment_quadrature: order must be in [0,3]");
    const int n = f.dim();
    TensorGrid grid;
    if (const auto* h = f.half_space_part()) {
        grid.basis = basis_with_first(h->theta);
        grid.axes.push_back(gaussian_panels({h->a}, order));
        for (int i = 1; i < n; ++i) grid.axes.push_back(gauss_hermite(order));
    } else if (f.sign_part()) {
        grid.axes.assign(static_cast<std::size_t>(n), gaussian_panels({0.0}, order));
    } else {
        grid = gh_grid(n, order);
    }
    SymTensor acc(n, k);
    grid.for_each([&](const std::vector<double>& x, double w) { acc.add_hermite(x, w * f.eval(x)); });
    return acc;
}

double mean_value(const GaussianFunctional& f) { return moment(f, 0).scalar(); }

double variance_value(const GaussianFunctional& f) {
    if (const auto* h = f.hermite_part()) {
        double var = 0.0;
        for (const auto& [deg, c] : h->terms) {
            const int total = std::accumulate(deg.begin(), deg.end(), 0);
            if (total == 0) continue;
            double v = c * c * std::exp(-total * f.ou_time());
            for (int m : deg) v *= factorial(m);
            var += v;
        }
        return var;
    }
    if (!f.smoothed()) {
        if (const auto* h = f.half_space_part()) {
            const double p = norm_cdf(-h->a);
            return p * (1.0 - p);
        }
        const auto* s = f.sign_part();
        const double m = static_cast<double>(s->fn.ones_count()) / s->fn.size();
        return s->centered ? 1.0 - (2.0 * m - 1.0) * (2.0 * m - 1.0) : m * (1.0 - m);
    }
    return correlation_gamma(f, f);
}

namespace {

// E[FG] for two (possibly smoothed) half-spaces, reduced to one dimension
// along the first normal.
double half_space_product_mean(const HalfSpaceData& hf, double tf, const HalfSpaceData& hg,
                               double tg, int order) {
    double rho = std::inner_product(hf.theta.begin(), hf.theta.end(), hg.theta.begin(), 0.0);
    rho = std::clamp(rho, -1.0, 1.0);
    const double perp = std::sqrt(std::max(0.0, 1.0 - rho * rho));
    std::vector<double> breaks;
    if (tf == 0.0) breaks.push_back(hf.a);
    const bool g_degenerate = tg == 0.0 && perp < 1e-12;
    if (g_degenerate) breaks.push_back(rho * hg.a);
    const Quadrature1D rule = gaussian_panels(breaks, order);

    const double ef = tf > 0.0 ? std::exp(-0.5 * tf) : 1.0;
    const double sf = tf > 0.0 ? sigma_ou(tf) : 0.0;
    const double eg = tg > 0.0 ? std::exp(-0.5 * tg) : 1.0;
    const double sg = tg > 0.0 ? sigma_ou(tg) : 0.0;

    double acc = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const double w = rule.nodes[i];
        double vf;
        if (tf == 0.0)
            vf = w > hf.a ? 1.0 : 0.0;
        else
            vf = norm_cdf((ef * w - hf.a) / sf);
        if (vf == 0.0) continue;
        double vg;
        if (tg == 0.0) {
            if (perp < 1e-12)
                vg = rho * w > hg.a ? 1.0 : 0.0;
            else
                vg = norm_cdf((rho * w - hg.a) / perp);
        } else {
            const double alpha = eg * perp / sg;
            const double beta = (eg * rho * w - hg.a) / sg;
            vg = norm_cdf(beta / std::sqrt(1.0 + alpha * alpha));
        }
        acc += rule.weights[i] * vf * vg;
    }
    return acc;
}

}  // namespace

double correlation_gamma(const GaussianFunctional& f, const GaussianFunctional& g, int order) {
    const int n = check_match(f, g);

    const auto* sf = f.sign_part();
    const auto* sg = g.sign_part();
    if (sf && sg && !f.smoothed() && !g.smoothed()) {
        const double scale = (sf->centered ? 2.0 : 1.0) * (sg->centered ? 2.0 : 1.0);
        return scale * to_double(correlation(sf->fn, sg->fn));
    }

    const auto* hf = f.half_space_part();
    const auto* hg = g.half_space_part();
    if (hf && hg) {
        const double prod =
            half_space_product_mean(*hf, f.ou_time(), *hg, g.ou_time(), std::max(order, 24));
        return prod - mean_value(f) * mean_value(g);
    }

    if (n > 3)
        throw std::invalid_argument("correlation_gamma: quadrature route needs dimension <= 3");
    std::vector<std::vector<double>> breaks(static_cast<std::size_t>(n), {0.0});
    for (const GaussianFunctional* fn : {&f, &g}) {
        const auto* h = fn->half_space_part();
        if (!h || fn->smoothed()) continue;
        int axis = 0;
        double sgn = 1.0;
        if (!axis_aligned(h->theta, axis, sgn))
            throw std::invalid_argument(
                "correlation_gamma: half-space in a mixed pair must be axis-aligned");
        breaks[static_cast<std::size_t>(axis)].push_back(sgn * h->a);
    }
    TensorGrid grid;
    for (int i = 0; i < n; ++i)
        grid.axes.push_back(gaussian_panels(breaks[static_cast<std::size_t>(i)], order));
    double prod = 0.0;
    grid.for_each([&](const std::vector<double>& x, double w) { prod += w * f.eval(x) * g.eval(x); });
    return prod - mean_value(f) * mean_value(g);
}

namespace {

// Worst deviation of the lifted first/second moments from their closed-form
// targets, each route (exact vs quadrature) tracked separately.  Computed
// once per function so that whole-family sweeps stay linear, not quadratic,
// in the quadrature work.
struct MomentDevs {
    double m1_closed = 0.0;
    double m1 = 0.0;
    double m2_closed = 0.0;
    double m2 = 0.0;
};

MomentDevs moment_devs(const BooleanFunction& fn, const GaussianFunctional& lifted, int quad_order) {
    constexpr double inv_pi = 0.31830988618379067153776752674503;
    MomentDevs out;
    const int n = fn.n();
    const SpectralSummary s = spectral_summary(fn);
    const SymTensor m1c = moment(lifted, 1);
    const SymTensor m1q = moment_quadrature(lifted, 1, quad_order);
    for (int i = 0; i < n; ++i) {
        const double target = kSqrt2OverPi * to_double(s.inf_std[static_cast<std::size_t>(i)]);
        out.m1_closed =
            std::max(out.m1_closed, std::abs(m1c.data()[static_cast<std::size_t>(i)] - target));
        out.m1 = std::max(out.m1, std::abs(m1q.data()[static_cast<std::size_t>(i)] - target));
    }
    const SymTensor m2c = moment(lifted, 2);
    const SymTensor m2q = moment_quadrature(lifted, 2, quad_order);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double target =
                i == j ? 0.0
                       : inv_pi *
                             to_double(s.V[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
            const std::size_t flat =
                static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j);
            out.m2_closed = std::max(out.m2_closed, std::abs(m2c.data()[flat] - target));
            out.m2 = std::max(out.m2, std::abs(m2q.data()[flat] - target));
        }
    }
    return out;
}

// Both correlation routes for a lifted pair plus their deviations from the
// exact rational value.
void pair_cor(const BooleanFunction& fb, const BooleanFunction& gb, const GaussianFunctional& F,
              const GaussianFunctional& G, int quad_order, BridgeReport& rep) {
    rep.cor_boolean = correlation(fb, gb);

    const std::int64_t sz = std::int64_t(1) << fb.n();
    const std::int64_t of = fb.ones_count(), og = gb.ones_count();
    const std::int64_t ps = product_sum(fb, gb);
    const Rational mean_prod(sz - 2 * of - 2 * og + 4 * ps, sz);
    const Rational mf(2 * of - sz, sz), mg(2 * og - sz, sz);
    rep.cor_gauss = mean_prod - mf * mg;
    rep.dev_cor_exact = std::abs(to_double(Rational(4) * rep.cor_boolean - rep.cor_gauss));

    rep.cor_gauss_quad = correlation_gamma(F, G, quad_order);
    rep.dev_cor_quad = std::abs(4.0 * to_double(rep.cor_boolean) - rep.cor_gauss_quad);
}

}  // namespace

BridgeReport bridge_report(const BooleanFunction& fb, const BooleanFunction& gb, int quad_order) {
    if (fb.n() != gb.n()) throw std::invalid_argument("bridge_report: dimension mismatch");
    BridgeReport rep;
    rep.n = fb.n();

    const auto F = GaussianFunctional::sign_composed(fb, true);
    const auto G = GaussianFunctional::sign_composed(gb, true);
    pair_cor(fb, gb, F, G, quad_order, rep);

    for (const auto& [fn, lifted] : {std::pair{&fb, &F}, std::pair{&gb, &G}}) {
        const MomentDevs d = moment_devs(*fn, *lifted, quad_order);
        rep.dev_m1_closed = std::max(rep.dev_m1_closed, d.m1_closed);
        rep.dev_m1 = std::max(rep.dev_m1, d.m1);
        rep.dev_m2_closed = std::max(rep.dev_m2_closed, d.m2_closed);
        rep.dev_m2 = std::max(rep.dev_m2, d.m2);
    }
    return rep;
}

BridgeSweep bridge_sweep(int n, int quad_order, int workers) {
    BridgeSweep sweep;
    sweep.n = n;
    sweep.quad_order = quad_order;
    std::vector<BooleanFunction> fam;
    enumerate_monotone(n, [&](const BooleanFunction& f) {
        fam.push_back(f);
        return true;
    });
    sweep.functions = static_cast<std::int64_t>(fam.size());
    sweep.pairs = sweep.functions * sweep.functions;

    std::vector<GaussianFunctional> lifted;
    lifted.reserve(fam.size());
    for (const auto& f : fam) lifted.push_back(GaussianFunctional::sign_composed(f, true));

    // Moment deviations depend on one function only; doing them ahead of the
    // pair loop keeps the quadrature cost O(#functions).
    for (std::size_t i = 0; i < fam.size(); ++i) {
        const MomentDevs d = moment_devs(fam[i], lifted[i], quad_order);
        sweep.dev_m1_closed = std::max(sweep.dev_m1_closed, d.m1_closed);
        sweep.dev_m1 = std::max(sweep.dev_m1, d.m1);
        sweep.dev_m2_closed = std::max(sweep.dev_m2_closed, d.m2_closed);
        sweep.dev_m2 = std::max(sweep.dev_m2, d.m2);
    }

    struct PairAcc {
        double dev_exact = 0.0;
        double dev_quad = 0.0;
    };
    const std::int64_t pair_block = 64;
    const std::size_t nblocks =
        static_cast<std::size_t>((sweep.pairs + pair_block - 1) / pair_block);
    std::vector<PairAcc> blocks(nblocks);
    run_blocks(nblocks, workers, [&](std::size_t bidx) {
        PairAcc& a = blocks[bidx];
        const std::int64_t p0 = static_cast<std::int64_t>(bidx) * pair_block;
        const std::int64_t p1 = std::min(sweep.pairs, p0 + pair_block);
        for (std::int64_t p = p0; p < p1; ++p) {
            const auto fi = static_cast<std::size_t>(p / sweep.functions);
            const auto gi = static_cast<std::size_t>(p % sweep.functions);
            BridgeReport rep;
            rep.n = n;
            pair_cor(fam[fi], fam[gi], lifted[fi], lifted[gi], quad_order, rep);
            a.dev_exact = std::max(a.dev_exact, rep.dev_cor_exact);
            a.dev_quad = std::max(a.dev_quad, rep.dev_cor_quad);
        }
    });
    for (const PairAcc& a : blocks) {
        sweep.dev_cor_exact = std::max(sweep.dev_cor_exact, a.dev_exact);
        sweep.dev_cor_quad = std::max(sweep.dev_cor_quad, a.dev_quad);
    }
    return sweep;
}

GaussianFunctional GaussianFunctional::from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("variant") || !j["variant"].is_string())
        throw std::runtime_error("functional file: missing string field 'variant'");
    const std::string variant = j["variant"].get<std::string>();
    GaussianFunctional out;
    if (variant == "halfspace") {
        if (!j.contains("theta") || !j["theta"].is_array())
            throw std::runtime_error("functional file: missing array field 'theta'");
        if (!j.contains("a") || !j["a"].is_number())
            throw std::runtime_error("functional file: missing numeric field 'a'");
        std::vector<double> theta;
        for (const auto& c : j["theta"]) {
            if (!c.is_number()) throw std::runtime_error("functional file: non-numeric 'theta' entry");
            theta.push_back(c.get<double>());
        }
        out = half_space(std::move(theta), j["a"].get<double>());
    } else if (variant == "sign") {
        if (!j.contains("boolean"))
            throw std::runtime_error("functional file: missing object field 'boolean'");
        bool centered = true;
        if (j.contains("centered")) {
            if (!j["centered"].is_boolean())
                throw std::runtime_error("functional file: field 'centered' must be boolean");
            centered = j["centered"].get<bool>();
        }
        out = sign_composed(BooleanFunction::from_json(j["boolean"]), centered);
    } else if (variant == "hermite") {
        if (!j.contains("n") || !j["n"].is_number_integer())
            throw std::runtime_error("functional file: missing integer field 'n'");
        if (!j.contains("coeffs") || !j["coeffs"].is_object())
            throw std::runtime_error("functional file: missing object field 'coeffs'");
        const int n = j["n"].get<int>();
        std::map<std::vector<int>, double> coeffs;
        for (const auto& [key, value] : j["coeffs"].items()) {
            std::vector<int> deg;
            std::stringstream ss(key);
            std::string piece;
            while (std::getline(ss, piece, ','))
                deg.push_back(std::stoi(piece));
            if (!value.is_number())
                throw std::runtime_error("functional file: non-numeric coefficient for '" + key + "'");
            coeffs[deg] = value.get<double>();
        }
        out = hermite_series(n, coeffs);
    } else {
        throw std::runtime_error("functional file: unknown variant '" + variant + "'");
    }
    if (j.contains("ou_time")) {
        if (!j["ou_time"].is_number())
            throw std::runtime_error("functional file: field 'ou_time' must be numeric");
        out = ou_apply(out, j["ou_time"].get<double>());
    }
    return out;
}

GaussianFunctional GaussianFunctional::load(const std::string& spec) {
    if (spec.rfind("sign:", 0) == 0)
        return sign_composed(BooleanFunction::load(spec.substr(5)), true);
    std::ifstream in(spec);
    if (!in) throw std::runtime_error("functional file '" + spec + "': cannot open");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error("functional file '" + spec + "': " + e.what());
    }
    return from_json(j);
}

nlohmann::json GaussianFunctional::to_json() const {
    nlohmann::json j;
    if (const auto* h = half_space_part()) {
        j["variant"] = "halfspace";
        j["theta"] = h->theta;
        j["a"] = h->a;
    } else if (const auto* s = sign_part()) {
        j["variant"] = "sign";
        j["boolean"] = s->fn.to_json();
        j["centered"] = s->centered;
    } else {
        const auto* h2 = hermite_part();
        j["variant"] = "hermite";
        j["n"] = n_;
        nlohmann::json coeffs = nlohmann::json::object();
        for (const auto& [deg, c] : h2->terms) {
            std::string key;
            for (std::size_t i = 0; i < deg.size(); ++i) {
                if (i) key += ',';
                key += std::to_string(deg[i]);
            }
            coeffs[key] = c;
        }
        j["coeffs"] = coeffs;
    }
    if (ou_t_ > 0.0) j["ou_time"] = ou_t_;
    return j;
}

std::string GaussianFunctional::describe() const {
    std::string base;
    if (const auto* h = half_space_part()) {
        base = "halfspace(n=" + std::to_string(n_) + ", a=" + std::to_string(h->a) + ")";
    } else if (const auto* s = sign_part()) {
        base = "sign(n=" + std::to_string(n_) + ", hex=" + s->fn.to_hex() +
               (s->centered ? ", centered)" : ")");
    } else {
        base = "hermite(n=" + std::to_string(n_) + ", " +
               std::to_string(hermite_part()->terms.size()) + " terms)";
    }
    if (ou_t_ > 0.0) base += " smoothed t=" + std::to_string(ou_t_);
    return base;
}

}  // namespace corrbench
