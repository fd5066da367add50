#include "corrbench/level.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "corrbench/enumeration.hpp"
#include "corrbench/hermite.hpp"
#include "corrbench/parallel.hpp"
#include "corrbench/quadrature.hpp"
#include "corrbench/rng.hpp"

namespace corrbench {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTraceConstant = 20.0;
const double kLevelConstant = std::exp(8.0);

}  // namespace

std::size_t VectorField::cell_count() const {
    std::size_t n = 1;
    for (const auto& c : cuts) n *= c.size() + 1;
    return n;
}

std::size_t VectorField::cell_of(const std::vector<double>& x) const {
    std::size_t cell = 0, stride = 1;
    for (int j = 0; j < dim; ++j) {
        const auto& c = cuts[static_cast<std::size_t>(j)];
        const std::size_t s = static_cast<std::size_t>(
            std::upper_bound(c.begin(), c.end(), x[static_cast<std::size_t>(j)]) - c.begin());
        cell += s * stride;
        stride *= c.size() + 1;
    }
    return cell;
}

double VectorField::component_at(const std::vector<double>& x, int i) const {
    return values[cell_of(x)][static_cast<std::size_t>(i)];
}

void VectorField::validate() const {
    if (dim < 1 || dim > 3) throw std::invalid_argument("vector field: dim must be in [1,3]");
    if (components < 1 || components > 3)
        throw std::invalid_argument("vector field: components must be in [1,3]");
    if (static_cast<int>(cuts.size()) != dim)
        throw std::invalid_argument("vector field: one cut list per axis required");
    for (const auto& c : cuts)
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (!std::isfinite(c[i])) throw std::invalid_argument("vector field: cut not finite");
            if (i > 0 && !(c[i] > c[i - 1]))
                throw std::invalid_argument("vector field: cuts must increase");
        }
    if (values.size() != cell_count())
        throw std::invalid_argument("vector field: one value list per cell required");
    for (const auto& v : values) {
        if (static_cast<int>(v.size()) != components)
            throw std::invalid_argument("vector field: cell value arity mismatch");
        for (double e : v)
            if (!(e >= 0.0) || !std::isfinite(e))
                throw std::invalid_argument("vector field: negative component");
    }
}

VectorField VectorField::constant(int dim, std::vector<double> value) {
    VectorField f;
    f.dim = dim;
    f.components = static_cast<int>(value.size());
    f.cuts.assign(static_cast<std::size_t>(dim), {});
    f.values.push_back(std::move(value));
    f.validate();
    return f;
}

nlohmann::json VectorField::to_json() const {
    nlohmann::json j;
    j["dim"] = dim;
    j["components"] = components;
    j["cuts"] = cuts;
    j["values"] = values;
    return j;
}

VectorField VectorField::from_json(const nlohmann::json& j) {
    VectorField f;
    if (!j.contains("dim") || !j["dim"].is_number_integer())
        throw std::invalid_argument("vector field file: missing integer field 'dim'");
    if (!j.contains("components") || !j["components"].is_number_integer())
        throw std::invalid_argument("vector field file: missing integer field 'components'");
    if (!j.contains("cuts") || !j["cuts"].is_array())
        throw std::invalid_argument("vector field file: missing array field 'cuts'");
    if (!j.contains("values") || !j["values"].is_array())
        throw std::invalid_argument("vector field file: missing array field 'values'");
    f.dim = j["dim"].get<int>();
    f.components = j["components"].get<int>();
    f.cuts = j["cuts"].get<std::vector<std::vector<double>>>();
    f.values = j["values"].get<std::vector<std::vector<double>>>();
    f.validate();
    return f;
}

FieldMoments field_moments_closed(const VectorField& f) {
    f.validate();
    const int n = f.dim, k = f.components;
    // Per-axis, per-segment Gaussian moments of orders 0..2.
    std::vector<std::vector<std::array<double, 3>>> seg(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        const auto& c = f.cuts[static_cast<std::size_t>(j)];
        for (std::size_t s = 0; s <= c.size(); ++s) {
            const double lo = s == 0 ? -kInf : c[s - 1];
            const double hi = s == c.size() ? kInf : c[s];
            seg[static_cast<std::size_t>(j)].push_back({incomplete_moment(0, lo, hi),
                                                        incomplete_moment(1, lo, hi),
                                                        incomplete_moment(2, lo, hi)});
        }
    }
    FieldMoments out;
    out.integral.assign(static_cast<std::size_t>(k), 0.0);
    out.a.assign(static_cast<std::size_t>(k),
                 std::vector<std::vector<double>>(static_cast<std::size_t>(n),
                                                  std::vector<double>(static_cast<std::size_t>(n), 0.0)));
    std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
    for (std::size_t cell = 0; cell < f.cell_count(); ++cell) {
        double mass = 1.0;
        for (int j = 0; j < n; ++j) mass *= seg[static_cast<std::size_t>(j)][idx[static_cast<std::size_t>(j)]][0];
        // Moment matrix entries restricted to the cell.
        std::vector<std::vector<double>> m(static_cast<std::size_t>(n),
                                           std::vector<double>(static_cast<std::size_t>(n), 0.0));
        for (int r = 0; r < n; ++r) {
            for (int s = 0; s < n; ++s) {
                double v = 1.0;
                for (int j = 0; j < n; ++j) {
                    const auto& sj = seg[static_cast<std::size_t>(j)][idx[static_cast<std::size_t>(j)]];
                    int order = (j == r) + (j == s);
                    v *= sj[static_cast<std::size_t>(order)];
                }
                m[static_cast<std::size_t>(r)][static_cast<std::size_t>(s)] = v;
            }
        }
        double sq = 0.0;
        for (int i = 0; i < k; ++i) {
            const double c = f.values[cell][static_cast<std::size_t>(i)];
            sq += c * c;
            if (c == 0.0) continue;
            out.integral[static_cast<std::size_t>(i)] += c * mass;
            for (int r = 0; r < n; ++r)
                for (int s = 0; s < n; ++s)
                    out.a[static_cast<std::size_t>(i)][static_cast<std::size_t>(r)][static_cast<std::size_t>(s)] +=
                        c * (m[static_cast<std::size_t>(r)][static_cast<std::size_t>(s)] - (r == s ? mass : 0.0));
        }
        out.square_mass += sq * mass;
        int pos = 0;
        while (pos < n) {
            auto& ij = idx[static_cast<std::size_t>(pos)];
            if (++ij <= f.cuts[static_cast<std::size_t>(pos)].size()) break;
            ij = 0;
            ++pos;
        }
        if (pos == n && cell + 1 < f.cell_count())
            throw std::logic_error("field moments: cell walk out of sync");
    }
    return out;
}

FieldMoments field_moments_quadrature(const VectorField& f, int order) {
    f.validate();
    const int n = f.dim, k = f.components;
    std::vector<Quadrature1D> rules;
    std::vector<std::vector<std::size_t>> segs;  // segment index of each node
    rules.reserve(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        const auto& c = f.cuts[static_cast<std::size_t>(j)];
        rules.push_back(gaussian_panels(c, order));
        std::vector<std::size_t> s(rules.back().size());
        for (std::size_t q = 0; q < s.size(); ++q)
            s[q] = static_cast<std::size_t>(
                std::upper_bound(c.begin(), c.end(), rules.back().nodes[q]) - c.begin());
        segs.push_back(std::move(s));
    }
    std::vector<std::size_t> stride(static_cast<std::size_t>(n), 1);
    for (int j = 1; j < n; ++j)
        stride[static_cast<std::size_t>(j)] =
            stride[static_cast<std::size_t>(j - 1)] * (f.cuts[static_cast<std::size_t>(j - 1)].size() + 1);

    FieldMoments out;
    out.integral.assign(static_cast<std::size_t>(k), 0.0);
    out.a.assign(static_cast<std::size_t>(k),
                 std::vector<std::vector<double>>(static_cast<std::size_t>(n),
                                                  std::vector<double>(static_cast<std::size_t>(n), 0.0)));
    std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
    std::vector<double> x(static_cast<std::size_t>(n));
    for (;;) {
        double w = 1.0;
        std::size_t cell = 0;
        for (int j = 0; j < n; ++j) {
            const std::size_t q = idx[static_cast<std::size_t>(j)];
            w *= rules[static_cast<std::size_t>(j)].weights[q];
            x[static_cast<std::size_t>(j)] = rules[static_cast<std::size_t>(j)].nodes[q];
            cell += segs[static_cast<std::size_t>(j)][q] * stride[static_cast<std::size_t>(j)];
        }
        const auto& val = f.values[cell];
        double sq = 0.0;
        for (int i = 0; i < k; ++i) {
            const double c = val[static_cast<std::size_t>(i)];
            sq += c * c;
            if (c == 0.0) continue;
            out.integral[static_cast<std::size_t>(i)] += w * c;
            auto& ai = out.a[static_cast<std::size_t>(i)];
            for (int r = 0; r < n; ++r)
                for (int s = 0; s < n; ++s)
                    ai[static_cast<std::size_t>(r)][static_cast<std::size_t>(s)] +=
                        w * c * (x[static_cast<std::size_t>(r)] * x[static_cast<std::size_t>(s)] - (r == s ? 1.0 : 0.0));
        }
        out.square_mass += w * sq;
        int pos = 0;
        while (pos < n) {
            auto& ij = idx[static_cast<std::size_t>(pos)];
            if (++ij < rules[static_cast<std::size_t>(pos)].size()) break;
            ij = 0;
            ++pos;
        }
        if (pos == n) break;
    }
    return out;
}

double margin_tolerance(double lhs, double rhs) {
    const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-3});
    return std::max(1e-7, 1e-6 * scale);
}

namespace {

MarginReport make_report(std::string kind, double lhs, double rhs) {
    MarginReport r;
    r.kind = std::move(kind);
    r.lhs = lhs;
    r.rhs = rhs;
    r.margin = lhs - rhs;
    r.scale = std::max({std::abs(lhs), std::abs(rhs), 1e-3});
    r.tolerance = margin_tolerance(lhs, rhs);
    r.violated = r.margin < -r.tolerance;
    return r;
}

double trace_product(const std::vector<std::vector<double>>& a,
                     const std::vector<std::vector<double>>& b) {
    double t = 0.0;
    for (std::size_t r = 0; r < a.size(); ++r)
        for (std::size_t s = 0; s < a.size(); ++s) t += a[r][s] * b[s][r];
    return t;
}

}  // namespace

nlohmann::json MarginReport::to_json() const {
    nlohmann::json j;
    j["kind"] = kind;
    j["lhs"] = lhs;
    j["rhs"] = rhs;
    j["margin"] = margin;
    j["scale"] = scale;
    j["tolerance"] = tolerance;
    j["violated"] = violated;
    j["skipped"] = skipped;
    return j;
}

MarginReport check_lvl21(const Density& x, const Density& y) {
    if (x.dim() != y.dim())
        throw std::invalid_argument("check_lvl21: dimensions must match");
    const double lhs = trace_product(h_matrix(x), h_matrix(y));
    const double rhs = -kTraceConstant * (x.kl() + y.kl());
    return make_report("lvl21", lhs, rhs);
}

double w2_1d(const Density& x, const Density& y, int order) {
    if (x.dim() != 1 || y.dim() != 1)
        throw std::invalid_argument("w2_1d: one-dimensional laws required");
    // Monotone coupling: integrate (Q_X - Q_Y)^2 over u = Phi(z). Panel cuts
    // where either quantile has a kink (density jumps at product-form breaks).
    std::vector<double> cuts;
    for (const Density* d : {&x, &y}) {
        for (double b : d->quantile_kinks()) {
            const double u = d->cdf(b);
            if (u > 1e-16 && u < 1.0 - 1e-16) cuts.push_back(norm_quantile(u));
        }
    }
    const Quadrature1D rule = gaussian_panels(cuts, order);
    // Phi rounds to 1.0 beyond ~8.2; clamping costs O(1e-16) in the integral.
    const double u_max = std::nextafter(1.0, 0.0);
    double acc = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
        const double u = std::clamp(norm_cdf(rule.nodes[q]), 1e-300, u_max);
        const double d = x.quantile(u) - y.quantile(u);
        acc += rule.weights[q] * d * d;
    }
    return acc;
}

MarginReport check_transport_1d(const Density& x) {
    const double w2sq = w2_1d(x, Density::standard_gaussian(1));
    const double lhs = 2.0 * x.kl();
    MarginReport r = make_report("transport", lhs, w2sq);
    return r;
}

MarginReport check_geomineq(const VectorField& v, const VectorField& u, int order) {
    if (v.dim != u.dim || v.components != u.components)
        throw std::invalid_argument("check_geomineq: field shapes must match");
    const FieldMoments mv = field_moments_quadrature(v, order);
    const FieldMoments mu = field_moments_quadrature(u, order);
    double eps = 0.0;
    for (int i = 0; i < v.components; ++i)
        eps += mv.integral[static_cast<std::size_t>(i)] * mu.integral[static_cast<std::size_t>(i)];
    double lhs = 0.0;
    for (int i = 0; i < v.components; ++i)
        lhs += trace_product(mv.a[static_cast<std::size_t>(i)], mu.a[static_cast<std::size_t>(i)]);
    double rhs = 0.0;
    if (eps > 0.0)
        rhs = -kTraceConstant * eps * std::log(mv.square_mass * mu.square_mass / (eps * eps));
    return make_report("geom", lhs, rhs);
}

MarginReport check_level13(const GaussianFunctional& f, const GaussianFunctional& g,
                           int quad_order) {
    auto level = [&](const GaussianFunctional& h, int k) {
        if (h.sign_part()) return moment_quadrature(h, k, quad_order);
        return moment(h, k);
    };
    const double ip1 = level(f, 1).dot(level(g, 1));
    if (ip1 <= 1e-10) {
        MarginReport r = make_report("level13", 0.0, 0.0);
        r.skipped = true;
        return r;
    }
    const double lhs = level(f, 3).dot(level(g, 3));
    const double var_f = variance_value(f);
    const double var_g = variance_value(g);
    const double rhs =
        -kLevelConstant * ip1 * std::log(std::exp(1.0) * std::sqrt(var_f * var_g) / ip1);
    return make_report("level13", lhs, rhs);
}

LevelSuite parse_level_suite(const std::string& name) {
    if (name == "lvl21") return LevelSuite::Lvl21;
    if (name == "transport") return LevelSuite::Transport;
    if (name == "geom") return LevelSuite::Geom;
    if (name == "level13") return LevelSuite::Level13;
    throw std::invalid_argument("unknown suite '" + name +
                                "' (expected lvl21|transport|geom|level13)");
}

std::string level_suite_name(LevelSuite suite) {
    switch (suite) {
        case LevelSuite::Lvl21: return "lvl21";
        case LevelSuite::Transport: return "transport";
        case LevelSuite::Geom: return "geom";
        case LevelSuite::Level13: return "level13";
    }
    return "?";
}

namespace {

Density random_mixture(Rng& rng, int d) {
    const int comps = 1 + static_cast<int>(rng.next_below(3));
    std::vector<Density::MixtureComponent> cs;
    double total = 0.0;
    for (int c = 0; c < comps; ++c) {
        Density::MixtureComponent mc;
        mc.weight = 0.2 + rng.next_double();
        total += mc.weight;
        for (int i = 0; i < d; ++i) mc.mean.push_back(-1.2 + 2.4 * rng.next_double());
        std::vector<std::vector<double>> root(static_cast<std::size_t>(d),
                                              std::vector<double>(static_cast<std::size_t>(d)));
        for (auto& row : root)
            for (auto& e : row) e = -0.5 + rng.next_double();
        mc.cov.assign(static_cast<std::size_t>(d),
                      std::vector<double>(static_cast<std::size_t>(d), 0.0));
        for (int r = 0; r < d; ++r) {
            for (int s = 0; s < d; ++s) {
                double e = 0.0;
                for (int m = 0; m < d; ++m)
                    e += root[static_cast<std::size_t>(r)][static_cast<std::size_t>(m)] *
                         root[static_cast<std::size_t>(s)][static_cast<std::size_t>(m)];
                mc.cov[static_cast<std::size_t>(r)][static_cast<std::size_t>(s)] = e;
            }
            mc.cov[static_cast<std::size_t>(r)][static_cast<std::size_t>(r)] +=
                0.35 + 0.9 * rng.next_double();
        }
        cs.push_back(std::move(mc));
    }
    for (auto& c : cs) c.weight /= total;
    return Density::gaussian_mixture(std::move(cs));
}

Density::AxisFactor random_axis_factor(Rng& rng) {
    Density::AxisFactor ax;
    const int cuts = 1 + static_cast<int>(rng.next_below(3));
    for (int i = 0; i < cuts; ++i) {
        const double slot = -1.8 + 3.6 * (i + 0.1 + 0.8 * rng.next_double()) / cuts;
        ax.breaks.push_back(slot);
    }
    for (int s = 0; s <= cuts; ++s) {
        const bool tail = s == 0 || s == cuts;
        const double alpha = 0.2 + 1.8 * rng.next_double();
        if (tail || rng.next_below(2) == 0) {
            ax.polys.push_back({alpha});
        } else {
            // alpha ((x - m)^2 + c), positive everywhere.
            const double m = -1.5 + 3.0 * rng.next_double();
            const double c = 0.1 + 0.9 * rng.next_double();
            ax.polys.push_back({alpha * (m * m + c), -2.0 * alpha * m, alpha});
        }
    }
    return ax;
}

Density random_density_1d(Rng& rng, bool product_form) {
    if (product_form) return Density::reweighted_product({random_axis_factor(rng)});
    return random_mixture(rng, 1);
}

VectorField random_field(Rng& rng, int n, int k) {
    VectorField f;
    f.dim = n;
    f.components = k;
    for (int j = 0; j < n; ++j) {
        const int cuts = static_cast<int>(rng.next_below(3));
        std::vector<double> c;
        for (int i = 0; i < cuts; ++i)
            c.push_back(-1.5 + 3.0 * (i + 0.1 + 0.8 * rng.next_double()) / cuts);
        f.cuts.push_back(std::move(c));
    }
    for (std::size_t cell = 0; cell < f.cell_count(); ++cell) {
        std::vector<double> v;
        for (int i = 0; i < k; ++i)
            v.push_back(rng.next_double() < 0.15 ? 0.0 : 1.5 * rng.next_double());
        f.values.push_back(std::move(v));
    }
    return f;
}

std::vector<double> random_direction(Rng& rng, int n) {
    std::vector<double> t(static_cast<std::size_t>(n));
    double norm = 0.0;
    for (auto& e : t) {
        e = 0.05 + rng.next_double();
        norm += e * e;
    }
    norm = std::sqrt(norm);
    for (auto& e : t) e /= norm;
    return t;
}

struct CaseOutcome {
    MarginReport report;
    double upper_ratio = 0.0;
    double tolerated = 0.0;
    nlohmann::json inputs;
};

CaseOutcome run_lvl21_case(std::uint64_t case_seed, int index) {
    Rng rng(case_seed);
    const int d = 1 + index % 3;
    const bool product_x = d == 1 && index % 5 == 0;
    const Density x = product_x ? random_density_1d(rng, true) : random_mixture(rng, d);
    const Density y = random_mixture(rng, d);
    CaseOutcome out;
    out.report = check_lvl21(x, y);
    const double klx = x.kl(), kly = y.kl();
    if (klx * kly > 1e-12)
        out.upper_ratio = out.report.lhs / (klx * kly);
    if (out.report.lhs < 0.0 && klx + kly > 1e-12)
        out.tolerated = -out.report.lhs / (klx + kly);
    out.inputs["x"] = x.to_json();
    out.inputs["y"] = y.to_json();
    return out;
}

CaseOutcome run_transport_case(std::uint64_t case_seed, int index) {
    Rng rng(case_seed);
    const Density x = random_density_1d(rng, index % 2 == 1);
    CaseOutcome out;
    out.report = check_transport_1d(x);
    const double kl = x.kl();
    if (kl > 1e-12) out.tolerated = out.report.rhs / kl;  // rhs holds W2^2
    out.inputs["x"] = x.to_json();
    return out;
}

CaseOutcome run_geom_case(std::uint64_t case_seed, int index) {
    Rng rng(case_seed);
    const int n = 1 + index % 3;
    const int k = 1 + (index / 3) % 3;
    VectorField v = random_field(rng, n, k);
    VectorField u = random_field(rng, n, k);
    if (k > 1 && index % 7 == 3) {
        // Single-component support: the check degenerates to a scalar trace bound.
        const std::size_t keep = rng.next_below(static_cast<std::uint64_t>(k));
        for (auto* f : {&v, &u})
            for (auto& cell : f->values)
                for (std::size_t i = 0; i < cell.size(); ++i)
                    if (i != keep) cell[i] = 0.0;
    }
    CaseOutcome out;
    out.report = check_geomineq(v, u);
    if (out.report.lhs < 0.0 && out.report.rhs < -1e-12)
        out.tolerated = kTraceConstant * out.report.lhs / out.report.rhs;
    out.inputs["v"] = v.to_json();
    out.inputs["u"] = u.to_json();
    return out;
}

GaussianFunctional random_half_space(Rng& rng, int n) {
    return GaussianFunctional::half_space(random_direction(rng, n),
                                          -1.5 + 3.0 * rng.next_double());
}

GaussianFunctional random_sign_functional(Rng& rng, int n) {
    const BooleanFunction f = random_monotone(n, rng.next_u64(), 50 * (1ll << n));
    return GaussianFunctional::sign_composed(f, true);
}

CaseOutcome run_level13_case(std::uint64_t case_seed, int index) {
    CaseOutcome out;
    if (index < 90) {
        // Deterministic half-space grid: a, b in {-1, 0, 1}, overlap in {0.1..1.0}.
        const int ai = index % 3, bi = (index / 3) % 3, ri = index / 9;
        const double a = ai - 1.0, b = bi - 1.0;
        const double rho = 0.1 * (ri + 1);
        const GaussianFunctional f = GaussianFunctional::half_space({1.0, 0.0}, a);
        const GaussianFunctional g =
            GaussianFunctional::half_space({rho, std::sqrt(std::max(0.0, 1.0 - rho * rho))}, b);
        out.report = check_level13(f, g);
        out.inputs["f"] = f.to_json();
        out.inputs["g"] = g.to_json();
    } else {
        Rng rng(case_seed);
        const int n = 1 + static_cast<int>(rng.next_below(3));
        const int kind = index % 3;
        const GaussianFunctional f =
            kind == 1 ? random_sign_functional(rng, n) : random_half_space(rng, n);
        const GaussianFunctional g =
            kind == 0 ? random_half_space(rng, n) : random_sign_functional(rng, n);
        out.report = check_level13(f, g);
        out.inputs["f"] = f.to_json();
        out.inputs["g"] = g.to_json();
    }
    if (!out.report.skipped && out.report.lhs < 0.0 && out.report.rhs < -1e-12)
        out.tolerated = kLevelConstant * out.report.lhs / out.report.rhs;
    return out;
}

}  // namespace

nlohmann::json LevelSuiteResult::to_json() const {
    nlohmann::json j;
    j["suite"] = suite;
    j["seed"] = seed;
    j["cases"] = cases;
    j["violations"] = violations;
    j["skipped"] = skipped;
    j["worst_margin"] = worst_margin;
    j["max_upper_ratio"] = max_upper_ratio;
    j["max_tolerated_constant"] = max_tolerated_constant;
    j["bundles"] = bundles;
    return j;
}

LevelSuiteResult run_level_suite(LevelSuite suite, int cases, std::uint64_t seed,
                                 int workers) {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<CaseOutcome> outcomes(static_cast<std::size_t>(std::max(0, cases)));
    run_blocks(outcomes.size(), workers, [&](std::size_t c) {
        const std::uint64_t cs = derive_seed(seed, c);
        const int index = static_cast<int>(c);
        switch (suite) {
            case LevelSuite::Lvl21: outcomes[c] = run_lvl21_case(cs, index); break;
            case LevelSuite::Transport: outcomes[c] = run_transport_case(cs, index); break;
            case LevelSuite::Geom: outcomes[c] = run_geom_case(cs, index); break;
            case LevelSuite::Level13: outcomes[c] = run_level13_case(cs, index); break;
        }
    });

    LevelSuiteResult res;
    res.suite = level_suite_name(suite);
    res.seed = seed;
    res.cases = cases;
    res.worst_margin = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < outcomes.size(); ++c) {
        const auto& o = outcomes[c];
        if (o.report.skipped) {
            ++res.skipped;
            continue;
        }
        res.worst_margin = std::min(res.worst_margin, o.report.margin);
        res.max_upper_ratio = std::max(res.max_upper_ratio, o.upper_ratio);
        res.max_tolerated_constant = std::max(res.max_tolerated_constant, o.tolerated);
        if (o.report.violated) {
            ++res.violations;
            if (res.bundles.size() < 16) {
                nlohmann::json b;
                b["case"] = c;
                b["case_seed"] = derive_seed(seed, c);
                b["report"] = o.report.to_json();
                b["inputs"] = o.inputs;
                res.bundles.push_back(std::move(b));
            }
        }
    }
    if (!std::isfinite(res.worst_margin)) res.worst_margin = 0.0;
    res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

}  // namespace corrbench
