#include "corrbench/process.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "corrbench/parallel.hpp"
#include "corrbench/rng.hpp"

namespace corrbench {

namespace {

constexpr std::size_t kPathBlock = 4096;

}  // namespace

TimeGrid TimeGrid::parse(const std::string& spec) {
    const auto c1 = spec.find(':');
    if (c1 == std::string::npos) {
        TimeGrid g;
        g.times.push_back(std::stod(spec));
        if (!(g.times[0] >= 0.0)) throw std::invalid_argument("time grid: negative time");
        return g;
    }
    const auto c2 = spec.find(':', c1 + 1);
    if (c2 == std::string::npos)
        throw std::invalid_argument("time grid: expected start:stop:step");
    return uniform(std::stod(spec.substr(0, c1)), std::stod(spec.substr(c1 + 1, c2 - c1 - 1)),
                   std::stod(spec.substr(c2 + 1)));
}

TimeGrid TimeGrid::uniform(double start, double stop, double step) {
    if (!(start >= 0.0) || !(stop >= start) || !(step > 0.0))
        throw std::invalid_argument("time grid: need 0 <= start <= stop and step > 0");
    const auto count = static_cast<std::size_t>(std::llround((stop - start) / step));
    if (std::abs(start + static_cast<double>(count) * step - stop) > 1e-9)
        throw std::invalid_argument("time grid: step does not divide the range");
    if (count > 100000) throw std::invalid_argument("time grid: too many points");
    TimeGrid g;
    for (std::size_t i = 0; i <= count; ++i)
        g.times.push_back(start + static_cast<double>(i) * step);
    return g;
}

double TimeGrid::step() const {
    if (times.size() < 2) throw std::logic_error("time grid: step undefined for < 2 points");
    const double h = times[1] - times[0];
    for (std::size_t i = 1; i + 1 < times.size(); ++i)
        if (std::abs(times[i + 1] - times[i] - h) > 1e-9)
            throw std::logic_error("time grid: non-uniform spacing");
    return h;
}

namespace {

// Raw conditional moment tensors at (z, t), without the e^{kt/2} prefactors.
struct MomentWork {
    bool is_sign = false;
    int n = 0;
    const std::vector<double>* coef = nullptr;  // sign
    std::vector<double> theta;                  // half-space
    double a = 0.0;

    std::vector<double> b0, b1, b2, prods, acc1;
    double m0 = 0.0;
    std::vector<double> m1;
    std::vector<double> m2;  // row-major n*n

    void bind(const GaussianFunctional& f) {
        n = f.dim();
        if (const auto* s = f.sign_part()) {
            is_sign = true;
            coef = &s->coef;
            const std::size_t sz = std::size_t(1) << n;
            b0.resize(static_cast<std::size_t>(n));
            b1.resize(static_cast<std::size_t>(n));
            b2.resize(static_cast<std::size_t>(n));
            prods.resize(sz);
            acc1.resize(static_cast<std::size_t>(n));
        } else if (const auto* h = f.half_space_part()) {
            is_sign = false;
            theta = h->theta;
            a = h->a;
        } else {
            throw std::invalid_argument("path sampling: functional must be a sign composition "
                                        "or a half-space");
        }
        if (f.smoothed())
            throw std::invalid_argument("path sampling: functional must be unsmoothed");
        m1.assign(static_cast<std::size_t>(n), 0.0);
        m2.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
    }

    void eval(const double* z, double et2) {
        if (!is_sign) {
            double dot = 0.0;
            for (int i = 0; i < n; ++i) dot += theta[static_cast<std::size_t>(i)] * z[i];
            const double alpha = (a - dot) * et2;
            const double pf = norm_pdf(alpha);
            m0 = norm_cdf(-alpha);
            for (int i = 0; i < n; ++i) {
                const double ti = theta[static_cast<std::size_t>(i)];
                m1[static_cast<std::size_t>(i)] = pf * ti;
                for (int j = 0; j < n; ++j)
                    m2[static_cast<std::size_t>(i * n + j)] =
                        pf * alpha * ti * theta[static_cast<std::size_t>(j)];
            }
            return;
        }
        const std::uint32_t sz = 1u << n;
        for (int i = 0; i < n; ++i) {
            const double mu = z[i] * et2;
            const double pdf2 = 2.0 * norm_pdf(mu);
            b0[static_cast<std::size_t>(i)] = 2.0 * norm_cdf(mu) - 1.0;
            b1[static_cast<std::size_t>(i)] = pdf2;
            b2[static_cast<std::size_t>(i)] = -pdf2 * mu;
        }
        prods[0] = 1.0;
        for (std::uint32_t m = 1; m < sz; ++m)
            prods[m] = prods[m & (m - 1)] * b0[static_cast<std::size_t>(std::countr_zero(m))];
        const auto& c = *coef;
        double m0v = 0.0;
        for (std::uint32_t m = 0; m < sz; ++m) m0v += c[m] * prods[m];
        m0 = m0v;
        for (int i = 0; i < n; ++i) {
            const std::uint32_t bit = 1u << i;
            double s = 0.0;
            for (std::uint32_t m = bit; m < sz; ++m)
                if (m & bit) s += c[m] * prods[m ^ bit];
            acc1[static_cast<std::size_t>(i)] = s;
            m1[static_cast<std::size_t>(i)] = b1[static_cast<std::size_t>(i)] * s;
            m2[static_cast<std::size_t>(i * n + i)] = b2[static_cast<std::size_t>(i)] * s;
        }
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                const std::uint32_t bits = (1u << i) | (1u << j);
                double s = 0.0;
                for (std::uint32_t m = bits; m < sz; ++m)
                    if ((m & bits) == bits) s += c[m] * prods[m ^ bits];
                const double v =
                    b1[static_cast<std::size_t>(i)] * b1[static_cast<std::size_t>(j)] * s;
                m2[static_cast<std::size_t>(i * n + j)] = v;
                m2[static_cast<std::size_t>(j * n + i)] = v;
            }
        }
    }
};

struct SuiteLayout {
    std::size_t T = 0;
    // Stat families, each one slot per time: S0,S1,S2,M0F,M0G,CH0,CH1,COVD,IRES.
    static constexpr int kFamilies = 9;
    std::size_t slots() const { return static_cast<std::size_t>(kFamilies) * T; }
    std::size_t at(int family, std::size_t j) const {
        return static_cast<std::size_t>(family) * T + j;
    }
};

struct BlockAcc {
    std::vector<double> sum, sumsq;
    void init(std::size_t slots) {
        sum.assign(slots, 0.0);
        sumsq.assign(slots, 0.0);
    }
    void add(std::size_t slot, double v) {
        sum[slot] += v;
        sumsq[slot] += v * v;
    }
};

struct EngineResult {
    std::vector<double> sum, sumsq;
    std::size_t paths = 0;
};

EngineResult run_engine(const GaussianFunctional& f, const GaussianFunctional& g,
                        const TimeGrid& grid, std::size_t paths, std::uint64_t seed, int workers,
                        PathSample* store) {
    if (f.dim() != g.dim()) throw std::invalid_argument("path sampling: dimension mismatch");
    if (paths == 0) throw std::invalid_argument("path sampling: need at least one path");
    const std::size_t T = grid.size();
    const int n = f.dim();

    const SuiteLayout lay{T};
    double h = T >= 2 ? grid.step() : 0.0;

    std::vector<double> et2(T), em(T), sqinc(T);
    double prev = 1.0;
    for (std::size_t j = 0; j < T; ++j) {
        et2[j] = std::exp(0.5 * grid.times[j]);
        em[j] = std::exp(-grid.times[j]);
        sqinc[j] = std::sqrt(std::max(0.0, prev - em[j]));
        prev = em[j];
    }

    if (store) {
        const std::size_t doubles =
            paths * T * (static_cast<std::size_t>(n) + 4);
        if (doubles > (std::size_t(1) << 26))
            throw std::invalid_argument("path sampling: sample too large to store");
        store->grid = grid;
        store->paths = paths;
        store->n = n;
        store->seed = seed;
        store->z.assign(paths * T * static_cast<std::size_t>(n), 0.0);
        store->m0_f.assign(paths * T, 0.0);
        store->m0_g.assign(paths * T, 0.0);
        store->s1.assign(paths * T, 0.0);
        store->s2.assign(paths * T, 0.0);
    }

    const std::size_t nblocks = (paths + kPathBlock - 1) / kPathBlock;
    std::vector<BlockAcc> blocks(nblocks);

    run_blocks(nblocks, workers, [&](std::size_t b) {
        BlockAcc& acc = blocks[b];
        acc.init(lay.slots());
        MomentWork wf, wg;
        wf.bind(f);
        wg.bind(g);
        Rng rng(derive_seed(seed, b));
        std::vector<double> z(static_cast<std::size_t>(n));
        std::vector<double> s0v(T), s1v(T), s2v(T), m0fv(T), m0gv(T);

        const std::size_t lo = b * kPathBlock;
        const std::size_t hi = std::min(paths, lo + kPathBlock);
        for (std::size_t p = lo; p < hi; ++p) {
            std::fill(z.begin(), z.end(), 0.0);
            for (std::size_t j = 0; j < T; ++j) {
                if (sqinc[j] > 0.0)
                    for (int i = 0; i < n; ++i)
                        z[static_cast<std::size_t>(i)] += sqinc[j] * rng.next_normal();
                wf.eval(z.data(), et2[j]);
                wg.eval(z.data(), et2[j]);
                double d1 = 0.0, d2 = 0.0;
                for (int i = 0; i < n; ++i)
                    d1 += wf.m1[static_cast<std::size_t>(i)] * wg.m1[static_cast<std::size_t>(i)];
                for (int i = 0; i < n * n; ++i)
                    d2 += wf.m2[static_cast<std::size_t>(i)] * wg.m2[static_cast<std::size_t>(i)];
                const double e1 = et2[j] * et2[j];
                m0fv[j] = wf.m0;
                m0gv[j] = wg.m0;
                s0v[j] = wf.m0 * wg.m0;
                s1v[j] = e1 * d1;
                s2v[j] = e1 * e1 * d2;
                if (store) {
                    for (int i = 0; i < n; ++i)
                        store->z[(p * T + j) * static_cast<std::size_t>(n) +
                                 static_cast<std::size_t>(i)] = z[static_cast<std::size_t>(i)];
                    store->m0_f[p * T + j] = wf.m0;
                    store->m0_g[p * T + j] = wg.m0;
                    store->s1[p * T + j] = s1v[j];
                    store->s2[p * T + j] = s2v[j];
                }
            }
            for (std::size_t j = 0; j < T; ++j) {
                acc.add(lay.at(0, j), s0v[j]);
                acc.add(lay.at(1, j), s1v[j]);
                acc.add(lay.at(2, j), s2v[j]);
                acc.add(lay.at(3, j), m0fv[j]);
                acc.add(lay.at(4, j), m0gv[j]);
            }
            if (T >= 3) {
                for (std::size_t j = 1; j + 1 < T; ++j) {
                    acc.add(lay.at(5, j),
                            (s0v[j + 1] - s0v[j - 1]) / (2.0 * h) - em[j] * s1v[j]);
                    acc.add(lay.at(6, j),
                            (s1v[j + 1] - s1v[j - 1]) / (2.0 * h) - em[j] * s2v[j]);
                }
            }
            for (std::size_t j = 0; j + 1 < T; ++j) acc.add(lay.at(7, j), s0v[j + 1] - s0v[j]);
            double trap = 0.0;
            acc.add(lay.at(8, 0), 0.0);
            for (std::size_t j = 1; j < T; ++j) {
                trap += 0.5 * h * (em[j - 1] * s1v[j - 1] + em[j] * s1v[j]);
                acc.add(lay.at(8, j), trap - s0v[j] + s0v[0]);
            }
        }
    });

    EngineResult out;
    out.paths = paths;
    out.sum.assign(lay.slots(), 0.0);
    out.sumsq.assign(lay.slots(), 0.0);
    for (const BlockAcc& b : blocks) {
        for (std::size_t i = 0; i < lay.slots(); ++i) {
            out.sum[i] += b.sum[i];
            out.sumsq[i] += b.sumsq[i];
        }
    }
    return out;
}

std::vector<Stat> family_stats(const EngineResult& r, const SuiteLayout& lay, int family) {
    std::vector<Stat> out(lay.T);
    const double nn = static_cast<double>(r.paths);
    for (std::size_t j = 0; j < lay.T; ++j) {
        const std::size_t s = lay.at(family, j);
        const double mean = r.sum[s] / nn;
        double var = 0.0;
        if (r.paths > 1) var = std::max(0.0, (r.sumsq[s] - nn * mean * mean) / (nn - 1.0));
        out[j] = {mean, std::sqrt(var / nn)};
    }
    return out;
}

// Largest |second difference| / h^2 over a curve; crude bound on its second
// derivative, used for finite-difference bias allowances.
double curvature_bound(const std::vector<double>& y, double h) {
    double worst = 0.0;
    for (std::size_t j = 1; j + 1 < y.size(); ++j)
        worst = std::max(worst, std::abs(y[j + 1] - 2.0 * y[j] + y[j - 1]) / (h * h));
    return worst;
}

}  // namespace

SymTensor conditional_moment(const GaussianFunctional& f, int k, const std::vector<double>& z,
                             double t, MomentMethod method, int order) {
    if (k < 0 || k > 3) throw std::invalid_argument("conditional_moment: order must be in [0,3]");
    if (static_cast<int>(z.size()) != f.dim())
        throw std::invalid_argument("conditional_moment: point dimension mismatch");
    if (!(t >= 0.0)) throw std::invalid_argument("conditional_moment: time must be >= 0");
    const int n = f.dim();
    const double et2 = std::exp(0.5 * t);
    const bool closed_available =
        !f.smoothed() && (f.sign_part() != nullptr || f.half_space_part() != nullptr);
    const bool use_closed = method == MomentMethod::Closed ||
                            (method == MomentMethod::Auto && k <= 2 && closed_available);
    if (use_closed) {
        if (!closed_available)
            throw std::invalid_argument(
                "conditional_moment: no closed form for this functional");
        const double pref = std::pow(et2, k);
        if (const auto* h = f.half_space_part()) {
            double dot = 0.0;
            for (int i = 0; i < n; ++i)
                dot += h->theta[static_cast<std::size_t>(i)] * z[static_cast<std::size_t>(i)];
            const double alpha = (h->a - dot) * et2;
            if (k == 0) {
                SymTensor out(n, 0);
                out.scalar() = norm_cdf(-alpha);
                return out;
            }
            return SymTensor::rank_one(h->theta, k,
                                       pref * norm_pdf(alpha) * hermite_he(k - 1, alpha));
        }
        const auto* s = f.sign_part();
        const std::uint32_t sz = 1u << n;
        std::vector<double> mu(static_cast<std::size_t>(n)), base(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            mu[static_cast<std::size_t>(i)] = z[static_cast<std::size_t>(i)] * et2;
            base[static_cast<std::size_t>(i)] = sign_hermite_factor(0, mu[static_cast<std::size_t>(i)]);
        }
        SymTensor out(n, k);
        std::vector<int> idx(static_cast<std::size_t>(k), 0);
        std::vector<int> mult(static_cast<std::size_t>(n), 0);
        out.for_each_index(idx, [&](const std::vector<int>& tuple, std::size_t flat) {
            std::fill(mult.begin(), mult.end(), 0);
            for (int i : tuple) ++mult[static_cast<std::size_t>(i)];
            std::uint32_t supp = 0;
            double fac = pref;
            for (int j = 0; j < n; ++j) {
                const int m = mult[static_cast<std::size_t>(j)];
                if (m > 0) {
                    supp |= 1u << j;
                    fac *= sign_hermite_factor(m, mu[static_cast<std::size_t>(j)]);
                }
            }
            double total = 0.0;
            for (std::uint32_t m = supp; m < sz; ++m) {
                if ((m & supp) != supp) continue;
                double term = s->coef[m];
                std::uint32_t rest = m ^ supp;
                while (rest) {
                    term *= base[static_cast<std::size_t>(std::countr_zero(rest))];
                    rest &= rest - 1;
                }
                total += term;
            }
            out.data()[flat] = fac * total;
        });
        return out;
    }

    // Quadrature route: integrate F(e^{-t/2} x + z) H_k(x) with panel breaks
    // moved to where the shifted argument crosses the discontinuities.
    TensorGrid grid;
    if (const auto* h = f.half_space_part()) {
        double dot = 0.0;
        for (int i = 0; i < n; ++i)
            dot += h->theta[static_cast<std::size_t>(i)] * z[static_cast<std::size_t>(i)];
        const double alpha = (h->a - dot) * et2;
        // First axis along theta, break where the shifted boundary sits.
        grid.axes.push_back(gaussian_panels({alpha}, order));
        for (int i = 1; i < n; ++i) grid.axes.push_back(gauss_hermite(order));
        std::vector<std::vector<double>> cols{h->theta};
        for (int e = 0; e < n && static_cast<int>(cols.size()) < n; ++e) {
            std::vector<double> v(static_cast<std::size_t>(n), 0.0);
            v[static_cast<std::size_t>(e)] = 1.0;
            for (const auto& c : cols) {
                double d = 0.0;
                for (int i = 0; i < n; ++i)
                    d += c[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)];
                for (int i = 0; i < n; ++i)
                    v[static_cast<std::size_t>(i)] -= d * c[static_cast<std::size_t>(i)];
            }
            double norm = 0.0;
            for (double c : v) norm += c * c;
            norm = std::sqrt(norm);
            if (norm > 1e-8) {
                for (double& c : v) c /= norm;
                cols.push_back(std::move(v));
            }
        }
        grid.basis = std::move(cols);
    } else if (f.sign_part()) {
        for (int i = 0; i < n; ++i)
            grid.axes.push_back(
                gaussian_panels({-z[static_cast<std::size_t>(i)] * et2}, order));
    } else {
        grid = gh_grid(n, order);
    }
    const double pref = std::pow(et2, k);
    const double es = std::exp(-0.5 * t);
    SymTensor acc(n, k);
    std::vector<double> y(static_cast<std::size_t>(n));
    grid.for_each([&](const std::vector<double>& x, double w) {
        for (int i = 0; i < n; ++i)
            y[static_cast<std::size_t>(i)] =
                es * x[static_cast<std::size_t>(i)] + z[static_cast<std::size_t>(i)];
        acc.add_scaled(SymTensor::hermite_tensor(k, x), w * f.eval(y));
    });
    acc.scale(pref);
    return acc;
}

PathSample sample_paths(const GaussianFunctional& f, const GaussianFunctional& g,
                        const TimeGrid& grid, std::size_t paths, std::uint64_t seed) {
    PathSample sample;
    run_engine(f, g, grid, paths, seed, 1, &sample);
    return sample;
}

ProcessSuite run_process_suite(const GaussianFunctional& f, const GaussianFunctional& g,
                               const TimeGrid& grid, std::size_t paths, std::uint64_t seed,
                               int workers) {
    const auto t0 = std::chrono::steady_clock::now();
    ProcessSuite suite;
    suite.grid = grid;
    suite.paths = paths;
    suite.seed = seed;
    suite.workers = workers;
    suite.mean_f = mean_value(f);
    suite.mean_g = mean_value(g);
    try {
        suite.cor_limit = correlation_gamma(f, g);
        suite.has_cor_limit = true;
    } catch (const std::invalid_argument&) {
        suite.has_cor_limit = false;
    }

    const EngineResult r = run_engine(f, g, grid, paths, seed, workers, nullptr);
    const SuiteLayout lay{grid.size()};
    suite.p0 = family_stats(r, lay, 0);
    suite.p1 = family_stats(r, lay, 1);
    suite.p2 = family_stats(r, lay, 2);
    suite.m0f = family_stats(r, lay, 3);
    suite.m0g = family_stats(r, lay, 4);
    suite.chain0 = family_stats(r, lay, 5);
    suite.chain1 = family_stats(r, lay, 6);
    suite.cov_step = family_stats(r, lay, 7);
    suite.integral_resid = family_stats(r, lay, 8);

    const std::size_t T = grid.size();
    suite.cov.resize(T);
    for (std::size_t j = 0; j < T; ++j)
        suite.cov[j] = suite.p0[j].mean - suite.mean_f * suite.mean_g;

    const double floor_abs = 1e-9;
    auto push = [&](CheckLine line) {
        if (line.status == 1) ++suite.fails;
        if (line.status == 2) ++suite.inconclusive;
        suite.checks.push_back(std::move(line));
    };

    // Martingale flatness of the k = 0 conditional moments.
    for (const auto& [name, stats, target] :
         {std::tuple{"martingale_f", &suite.m0f, suite.mean_f},
          std::tuple{"martingale_g", &suite.m0g, suite.mean_g}}) {
        CheckLine line{name, 0, 0.0, 0.0, ""};
        double worst_excess = -1.0;
        for (std::size_t j = 0; j < T; ++j) {
            const double dev = std::abs((*stats)[j].mean - target);
            const double allow = 3.0 * (*stats)[j].se + floor_abs;
            if (dev - allow > worst_excess) {
                worst_excess = dev - allow;
                line.value = dev;
                line.allowance = allow;
                line.detail = "t=" + std::to_string(grid.times[j]);
            }
        }
        if (worst_excess > 0.0) {
            const double scale = std::max(0.05, std::abs(target));
            line.status = line.allowance > 0.25 * scale ? 2 : 1;
        }
        push(std::move(line));
    }

    // Centered-difference derivative chain, k = 0 and 1.
    if (T >= 3) {
        const double h = grid.step();
        for (const auto& [name, resid, next] :
             {std::tuple{"chain_k0", &suite.chain0, &suite.p1},
              std::tuple{"chain_k1", &suite.chain1, &suite.p2}}) {
            std::vector<double> gcurve(T);
            for (std::size_t j = 0; j < T; ++j)
                gcurve[j] = std::exp(-grid.times[j]) * (*next)[j].mean;
            const double bias =
                (h * h / 6.0) * std::max(1.5 * curvature_bound(gcurve, h), 0.5);
            double scale = 0.0;
            for (double v : gcurve) scale = std::max(scale, std::abs(v));
            scale = std::max(scale, 1e-6);
            CheckLine line{name, 0, 0.0, 0.0, ""};
            double worst_excess = -1.0;
            for (std::size_t j = 1; j + 1 < T; ++j) {
                const double dev = std::abs((*resid)[j].mean);
                const double allow = 3.0 * (*resid)[j].se + bias + floor_abs;
                if (dev - allow > worst_excess) {
                    worst_excess = dev - allow;
                    line.value = dev;
                    line.allowance = allow;
                    line.detail = "t=" + std::to_string(grid.times[j]);
                }
            }
            if (worst_excess > 0.0) line.status = line.allowance > 0.25 * scale ? 2 : 1;
            push(std::move(line));
        }
    }

    // Covariance increases along the grid.
    if (T >= 2) {
        CheckLine line{"cov_monotone", 0, 0.0, 0.0, ""};
        double worst_excess = -1.0;
        for (std::size_t j = 0; j + 1 < T; ++j) {
            const double drop = -suite.cov_step[j].mean;
            const double allow = 3.0 * suite.cov_step[j].se + floor_abs;
            if (drop - allow > worst_excess) {
                worst_excess = drop - allow;
                line.value = suite.cov_step[j].mean;
                line.allowance = allow;
                line.detail = "t=" + std::to_string(grid.times[j]);
            }
        }
        if (worst_excess > 0.0) {
            const double scale = std::max(std::abs(suite.has_cor_limit ? suite.cor_limit : 0.0),
                                          0.01);
            line.status = line.allowance > 0.25 * scale ? 2 : 1;
        }
        push(std::move(line));
    }

    // Covariance never exceeds its long-time limit.
    if (suite.has_cor_limit) {
        CheckLine line{"cov_bounded", 0, 0.0, 0.0, ""};
        double worst_excess = -1.0;
        for (std::size_t j = 0; j < T; ++j) {
            const double over = suite.cov[j] - suite.cor_limit;
            const double allow = 3.0 * suite.p0[j].se + floor_abs;
            if (over - allow > worst_excess) {
                worst_excess = over - allow;
                line.value = suite.cov[j];
                line.allowance = allow;
                line.detail = "t=" + std::to_string(grid.times[j]);
            }
        }
        if (worst_excess > 0.0) {
            const double scale = std::max(std::abs(suite.cor_limit), 0.01);
            line.status = line.allowance > 0.25 * scale ? 2 : 1;
        }
        push(std::move(line));
    }

    // Trapezoid of e^{-s} p_1 reproduces the covariance growth.
    if (T >= 2) {
        const double h = grid.step();
        std::vector<double> gcurve(T);
        for (std::size_t j = 0; j < T; ++j)
            gcurve[j] = std::exp(-grid.times[j]) * suite.p1[j].mean;
        const double b2 = std::max(1.5 * curvature_bound(gcurve, h), 0.5);
        double scale = std::abs(suite.cov.back());
        scale = std::max(scale, 1e-6);
        CheckLine line{"integral_identity", 0, 0.0, 0.0, ""};
        double worst_excess = -1.0;
        for (std::size_t j = 1; j < T; ++j) {
            const double dev = std::abs(suite.integral_resid[j].mean);
            const double allow = 3.0 * suite.integral_resid[j].se +
                                 (h * h / 12.0) * b2 * grid.times[j] + floor_abs;
            if (dev - allow > worst_excess) {
                worst_excess = dev - allow;
                line.value = dev;
                line.allowance = allow;
                line.detail = "t=" + std::to_string(grid.times[j]);
            }
        }
        if (worst_excess > 0.0) line.status = line.allowance > 0.25 * scale ? 2 : 1;
        push(std::move(line));
    }

    suite.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return suite;
}

MomentCurve estimate_pk(const GaussianFunctional& f, const GaussianFunctional& g, int k,
                        const TimeGrid& grid, std::size_t paths, std::uint64_t seed, int workers) {
    if (k < 0 || k > 2) throw std::invalid_argument("estimate_pk: k must be in [0,2]");
    const EngineResult r = run_engine(f, g, grid, paths, seed, workers, nullptr);
    const SuiteLayout lay{grid.size()};
    MomentCurve curve;
    curve.k = k;
    curve.grid = grid;
    curve.paths = paths;
    curve.seed = seed;
    curve.value = family_stats(r, lay, k);
    return curve;
}

void write_moment_csv(const ProcessSuite& suite, std::ostream& out) {
    out << "t,k,estimate,se\n";
    char buf[128];
    for (int k = 0; k < 3; ++k) {
        const std::vector<Stat>& v = k == 0 ? suite.p0 : k == 1 ? suite.p1 : suite.p2;
        for (std::size_t j = 0; j < suite.grid.size(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g,%d,%.17g,%.17g\n", suite.grid.times[j], k,
                          v[j].mean, v[j].se);
            out << buf;
        }
    }
}

}  // namespace corrbench
