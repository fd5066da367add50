#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <vector>

#include <nlohmann/json.hpp>

#include "corrbench/enumeration.hpp"
#include "corrbench/functional.hpp"
#include "corrbench/quadrature.hpp"
#include "corrbench/rng.hpp"
#include "oracle_values.hpp"

using namespace corrbench;

namespace {

double integrate(const Quadrature1D& rule, const std::function<double(double)>& f) {
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) acc += rule.weights[i] * f(rule.nodes[i]);
    return acc;
}

double double_factorial_odd(int m) {  // (2m-1)!!
    double v = 1.0;
    for (int k = 2 * m - 1; k > 1; k -= 2) v *= k;
    return v;
}

const BooleanFunction kAnd2 = BooleanFunction::from_bits(2, {0, 0, 0, 1});
const BooleanFunction kMaj3 = BooleanFunction::from_bits(3, {0, 0, 0, 1, 0, 1, 1, 1});

}  // namespace

TEST_CASE("gauss-hermite moments") {
    for (int order : {4, 8, 16}) {
        const Quadrature1D rule = gauss_hermite(order);
        CHECK(integrate(rule, [](double) { return 1.0; }) == doctest::Approx(1.0).epsilon(1e-14));
        for (int m = 1; 2 * m <= 2 * order - 1; ++m) {
            // node values grow like x^(2m), so allow rounding at that scale
            const double fluff = double_factorial_odd(m);
            const double got = integrate(rule, [&](double x) { return std::pow(x, 2 * m); });
            CHECK(got == doctest::Approx(fluff).epsilon(1e-9));
            CHECK(integrate(rule, [&](double x) { return std::pow(x, 2 * m - 1); }) ==
                  doctest::Approx(0.0).scale(fluff).epsilon(1e-9));
        }
    }
}

TEST_CASE("gauss-legendre moments") {
    const Quadrature1D rule = gauss_legendre(8);
    for (int k = 0; k <= 15; ++k) {
        const double want = (k % 2 == 0) ? 2.0 / (k + 1) : 0.0;
        CHECK(integrate(rule, [&](double x) { return std::pow(x, k); }) ==
              doctest::Approx(want).scale(1.0).epsilon(1e-13));
    }
    const Quadrature1D shifted = mapped_to(gauss_legendre(8), 1.0, 3.0);
    CHECK(integrate(shifted, [](double x) { return x; }) == doctest::Approx(4.0).epsilon(1e-13));
}

TEST_CASE("gaussian panels resolve indicator breaks exactly") {
    for (double a : {-1.3, 0.0, 0.7, 2.5}) {
        const Quadrature1D rule = gaussian_panels({a}, 12);
        const double mass = integrate(rule, [&](double x) { return x > a ? 1.0 : 0.0; });
        CHECK(mass == doctest::Approx(norm_cdf(-a)).epsilon(1e-13));
    }
    const Quadrature1D rule = gaussian_panels({}, 12);
    CHECK(integrate(rule, [](double) { return 1.0; }) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(integrate(rule, [](double x) { return x * x; }) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(integrate(rule, [](double x) { return std::abs(x * x * x); }) ==
          doctest::Approx(oracle::kAbsMoment3).epsilon(1e-12));
}

TEST_CASE("normal quantile") {
    CHECK(norm_quantile(0.5) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
    for (double p : {1e-6, 0.01, 0.3, 0.5, 0.9, 0.999, 1 - 1e-9}) {
        CHECK(norm_cdf(norm_quantile(p)) == doctest::Approx(p).epsilon(1e-12));
    }
    for (double x : {-4.0, -1.0, 0.3, 2.0}) {
        CHECK(norm_quantile(norm_cdf(x)) == doctest::Approx(x).epsilon(1e-12));
    }
    CHECK_THROWS(norm_quantile(0.0));
    CHECK_THROWS(norm_quantile(1.0));
}

TEST_CASE("sign hermite factor") {
    CHECK(sign_hermite_factor(1, 0.0) == doctest::Approx(oracle::kSqrt2OverPi).epsilon(1e-14));
    CHECK(sign_hermite_factor(3, 0.0) == doctest::Approx(-oracle::kSqrt2OverPi).epsilon(1e-14));
    CHECK(sign_hermite_factor(2, 0.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
    for (double mu : {-1.5, -0.2, 0.0, 0.4, 2.0}) {
        CHECK(sign_hermite_factor(0, mu) ==
              doctest::Approx(2.0 * norm_cdf(mu) - 1.0).epsilon(1e-14));
        // independent quadrature route with the sign break at -mu
        const Quadrature1D rule = gaussian_panels({-mu}, 16);
        for (int m = 0; m <= 3; ++m) {
            const double got = integrate(rule, [&](double x) {
                return (x + mu > 0 ? 1.0 : -1.0) * hermite_he(m, x);
            });
            CHECK(sign_hermite_factor(m, mu) == doctest::Approx(got).scale(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("half-space moments, axis-aligned and rotated") {
    for (double a : {-0.8, 0.0, 1.2}) {
        const auto f = GaussianFunctional::half_space({1.0, 0.0}, a);
        CHECK(moment(f, 0).scalar() == doctest::Approx(norm_cdf(-a)).epsilon(1e-13));
        const SymTensor m1 = moment(f, 1);
        CHECK(m1.data()[0] == doctest::Approx(norm_pdf(a)).epsilon(1e-13));
        CHECK(m1.data()[1] == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
        const SymTensor m3 = moment(f, 3);
        CHECK(m3.at({0, 0, 0}) ==
              doctest::Approx((a * a - 1.0) * norm_pdf(a)).scale(1.0).epsilon(1e-12));
    }
    const double s = 1.0 / std::sqrt(2.0);
    const auto g = GaussianFunctional::half_space({s, s}, 0.5);
    for (int k = 0; k <= 3; ++k) {
        const SymTensor closed = moment(g, k);
        const SymTensor quad = moment_quadrature(g, k, 16);
        for (std::size_t i = 0; i < closed.size(); ++i)
            CHECK(closed.data()[i] == doctest::Approx(quad.data()[i]).scale(1.0).epsilon(1e-9));
    }
}

TEST_CASE("sign-composition moments, closed vs quadrature") {
    for (const auto* fn : {&kAnd2, &kMaj3}) {
        for (bool centered : {false, true}) {
            const auto f = GaussianFunctional::sign_composed(*fn, centered);
            for (int k = 0; k <= 3; ++k) {
                const SymTensor closed = moment(f, k);
                const SymTensor quad = moment_quadrature(f, k, 12);
                for (std::size_t i = 0; i < closed.size(); ++i)
                    CHECK(closed.data()[i] ==
                          doctest::Approx(quad.data()[i]).scale(1.0).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("hermite series functional") {
    const auto f = GaussianFunctional::hermite_series(2, {{{2, 0}, 0.5}, {{1, 1}, -0.25}});
    CHECK(mean_value(f) == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
    const SymTensor m2 = moment(f, 2);
    CHECK(m2.at({0, 0}) == doctest::Approx(1.0).epsilon(1e-14));   // 0.5 * 2!
    CHECK(m2.at({0, 1}) == doctest::Approx(-0.25).epsilon(1e-14));
    CHECK(variance_value(f) == doctest::Approx(0.5 * 0.5 * 2.0 + 0.25 * 0.25).epsilon(1e-13));
    const SymTensor quad = moment_quadrature(f, 2, 12);
    for (std::size_t i = 0; i < m2.size(); ++i)
        CHECK(m2.data()[i] == doctest::Approx(quad.data()[i]).scale(1.0).epsilon(1e-10));
}

TEST_CASE("smoothing decay and semigroup composition") {
    const auto base = GaussianFunctional::half_space({1.0}, 0.4);
    for (double t : {0.25, 1.0}) {
        const auto ft = ou_apply(base, t);
        for (int k = 1; k <= 3; ++k) {
            const SymTensor m0 = moment(base, k);
            const SymTensor mt = moment(ft, k);
            const double decay = std::exp(-0.5 * k * t);
            for (std::size_t i = 0; i < m0.size(); ++i)
                CHECK(mt.data()[i] ==
                      doctest::Approx(decay * m0.data()[i]).scale(1.0).epsilon(1e-13));
            // quadrature sees the same decayed tensor on the smoothed functional
            const SymTensor q = moment_quadrature(ft, k, 20);
            for (std::size_t i = 0; i < m0.size(); ++i)
                CHECK(q.data()[i] ==
                      doctest::Approx(decay * m0.data()[i]).scale(1.0).epsilon(1e-8));
        }
    }
    const auto ab = ou_apply(ou_apply(base, 0.3), 0.9);
    const auto once = ou_apply(base, 1.2);
    CHECK(ab.ou_time() == doctest::Approx(once.ou_time()).epsilon(1e-15));
    std::vector<double> x{0.37};
    CHECK(ab.eval(x) == doctest::Approx(once.eval(x)).epsilon(1e-14));
}

TEST_CASE("degree-1 smoothing example") {
    const auto f = GaussianFunctional::hermite_series(1, {{{1}, 1.0}});
    const auto ft = ou_apply(f, 2.0);
    std::vector<double> x{1.7};
    CHECK(ft.eval(x) == doctest::Approx(std::exp(-1.0) * 1.7).epsilon(1e-14));
}

TEST_CASE("correlation of rotated half-spaces matches the arcsine law") {
    for (double rho : {-0.6, 0.0, 0.3, 0.9}) {
        const auto f = GaussianFunctional::half_space({1.0, 0.0}, 0.0);
        const auto g =
            GaussianFunctional::half_space({rho, std::sqrt(1.0 - rho * rho)}, 0.0);
        const double want = std::asin(rho) / (2.0 * 3.14159265358979323846);
        CHECK(correlation_gamma(f, g) == doctest::Approx(want).scale(1.0).epsilon(1e-11));
    }
}

TEST_CASE("variance closed forms") {
    const auto h = GaussianFunctional::half_space({1.0}, 0.9);
    const double p = norm_cdf(-0.9);
    CHECK(variance_value(h) == doctest::Approx(p * (1.0 - p)).epsilon(1e-14));
    const auto s = GaussianFunctional::sign_composed(kAnd2, false);
    CHECK(variance_value(s) == doctest::Approx(0.25 * 0.75).epsilon(1e-14));
    const auto c = GaussianFunctional::sign_composed(kAnd2, true);
    CHECK(variance_value(c) == doctest::Approx(1.0 - 0.25).epsilon(1e-14));
}

TEST_CASE("bridge for one pair") {
    const BridgeReport rep = bridge_report(kAnd2, kAnd2, 12);
    CHECK(rep.cor_boolean == Rational(3, 16));
    CHECK(rep.cor_gauss == Rational(4) * Rational(3, 16));
    CHECK(rep.dev_cor_exact == 0.0);
    CHECK(rep.dev_cor_quad <= 1e-9);
    CHECK(rep.dev_m1 <= 1e-9);
    CHECK(rep.dev_m1_closed <= 1e-13);
    CHECK(rep.dev_m2 <= 1e-9);
    CHECK(rep.dev_m2_closed <= 1e-13);
}

TEST_CASE("bridge sweep covers all monotone pairs") {
    const BridgeSweep sweep = bridge_sweep(2, 12, 2);
    CHECK(sweep.functions == 6);
    CHECK(sweep.pairs == 36);
    CHECK(sweep.worst() <= 1e-8);
    // agreement with the single-pair route on the worst correlation deviation
    double worst_quad = 0.0;
    std::vector<BooleanFunction> fam;
    enumerate_monotone(2, [&](const BooleanFunction& f) {
        fam.push_back(f);
        return true;
    });
    for (const auto& f : fam)
        for (const auto& g : fam)
            worst_quad = std::max(worst_quad, bridge_report(f, g, 12).dev_cor_quad);
    CHECK(sweep.dev_cor_quad == worst_quad);

    const BridgeSweep three_a = bridge_sweep(3, 10, 1);
    const BridgeSweep three_b = bridge_sweep(3, 10, 4);
    CHECK(three_a.pairs == 400);
    CHECK(three_a.worst() <= 1e-8);
    CHECK(three_a.dev_cor_quad == three_b.dev_cor_quad);
    CHECK(three_a.dev_m1 == three_b.dev_m1);
    CHECK(three_a.dev_m2 == three_b.dev_m2);
}

TEST_CASE("hermite accumulation matches the tensor constructor") {
    Rng rng(20240815);
    for (int n : {1, 2, 3}) {
        for (int order = 0; order <= 3; ++order) {
            SymTensor acc(n, order);
            SymTensor want(n, order);
            for (int rep = 0; rep < 5; ++rep) {
                std::vector<double> x(static_cast<std::size_t>(n));
                for (double& xi : x) xi = rng.next_normal();
                const double c = rng.next_double() - 0.5;
                acc.add_hermite(x, c);
                want.add_scaled(SymTensor::hermite_tensor(order, x), c);
            }
            for (std::size_t i = 0; i < acc.size(); ++i)
                CHECK(acc.data()[i] == doctest::Approx(want.data()[i]).epsilon(1e-15));
        }
    }
}

TEST_CASE("functional json round trip") {
    const auto h = GaussianFunctional::half_space({0.6, 0.8}, -0.3);
    const auto s = GaussianFunctional::sign_composed(kMaj3, true);
    const auto e = GaussianFunctional::hermite_series(2, {{{1, 0}, 1.0}, {{0, 2}, 0.5}});
    for (const auto* f : {&h, &s, &e}) {
        const auto back = GaussianFunctional::from_json(f->to_json());
        CHECK(back.dim() == f->dim());
        std::vector<double> x(static_cast<std::size_t>(f->dim()));
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = 0.3 * static_cast<double>(i) - 0.4;
        CHECK(back.eval(x) == doctest::Approx(f->eval(x)).epsilon(1e-15));
    }
    const auto smoothed = ou_apply(h, 0.7);
    const auto back = GaussianFunctional::from_json(smoothed.to_json());
    CHECK(back.ou_time() == doctest::Approx(0.7).epsilon(1e-15));
}
