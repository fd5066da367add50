#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include <nlohmann/json.hpp>

#include "corrbench/level.hpp"
#include "oracle_values.hpp"

using namespace corrbench;

namespace {

Density single_gaussian(std::vector<double> mean, std::vector<std::vector<double>> cov) {
    Density::MixtureComponent c;
    c.weight = 1.0;
    c.mean = std::move(mean);
    c.cov = std::move(cov);
    return Density::gaussian_mixture({c});
}

Density bump_product() {
    Density::AxisFactor axis;
    axis.breaks = {-1.0, 1.0};
    axis.polys = {{0.5}, {1.0, 0.5}, {1.5}};
    return Density::reweighted_product({axis});
}

}  // namespace

TEST_CASE("margin tolerance floor and scaling") {
    CHECK(margin_tolerance(0.0, 0.0) == 1e-7);
    CHECK(margin_tolerance(2.0, -1.0) == doctest::Approx(2e-6).epsilon(1e-12));
    CHECK(margin_tolerance(0.0, -500.0) == doctest::Approx(5e-4).epsilon(1e-12));
}

TEST_CASE("incomplete gaussian moments") {
    const double inf = std::numeric_limits<double>::infinity();
    CHECK(incomplete_moment(0, -inf, inf) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(incomplete_moment(0, -1.0, 2.0) ==
          doctest::Approx(norm_cdf(2.0) - norm_cdf(-1.0)).epsilon(1e-14));
    CHECK(incomplete_moment(1, 0.0, inf) == doctest::Approx(norm_pdf(0.0)).epsilon(1e-14));
    CHECK(incomplete_moment(2, -inf, inf) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(incomplete_moment(3, 0.0, inf) == doctest::Approx(oracle::kAbsMoment3 / 2).epsilon(1e-13));
}

TEST_CASE("density moments and entropy") {
    const Density g = Density::standard_gaussian(2);
    CHECK(g.kl() == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    const auto h0 = h_matrix(g);
    for (const auto& row : h0)
        for (double v : row) CHECK(v == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));

    const Density x = single_gaussian({0.3, -0.2}, {{0.8, 0.1}, {0.1, 1.2}});
    const auto m2 = x.second_moment();
    CHECK(m2[0][0] == doctest::Approx(0.8 + 0.09).epsilon(1e-14));
    CHECK(m2[0][1] == doctest::Approx(0.1 + 0.3 * -0.2).epsilon(1e-14));
    CHECK(m2[1][1] == doctest::Approx(1.2 + 0.04).epsilon(1e-14));
    const auto kc = x.kl_closed();
    REQUIRE(kc.has_value());
    CHECK(*kc == doctest::Approx(x.kl_quadrature(24)).epsilon(1e-8));

    Density::MixtureComponent a, b;
    a.weight = 0.7;
    a.mean = {0.0};
    a.cov = {{1.0}};
    b.weight = 0.3;
    b.mean = {1.5};
    b.cov = {{0.5}};
    const Density mix = Density::gaussian_mixture({a, b});
    CHECK_FALSE(mix.kl_closed().has_value());
    CHECK(mix.kl_quadrature(96) == doctest::Approx(oracle::kMixtureKl).epsilon(1e-12));
    CHECK(mix.kl() == doctest::Approx(oracle::kMixtureKl).epsilon(2e-4));  // default order
    CHECK(mix.kl() > 0.0);

    const Density prod = bump_product();
    CHECK(prod.kl() == doctest::Approx(prod.kl_quadrature(24)).epsilon(1e-8));
    CHECK(prod.quantile_kinks() == std::vector<double>{-1.0, 1.0});
}

TEST_CASE("density validation") {
    Density::MixtureComponent c;
    c.weight = -1.0;
    c.mean = {0.0};
    c.cov = {{1.0}};
    CHECK_THROWS(Density::gaussian_mixture({c}));
    c.weight = 1.0;
    c.cov = {{-2.0}};
    CHECK_THROWS(Density::gaussian_mixture({c}));
    c.cov = {{1.0, 0.0}};
    CHECK_THROWS(Density::gaussian_mixture({c}));

    Density::AxisFactor axis;
    axis.breaks = {0.0};
    axis.polys = {{1.0}, {1.0, 1.0}};  // unbounded right segment must be constant
    CHECK_THROWS(Density::reweighted_product({axis}));
    axis.polys = {{1.0}, {-1.0}};  // factor must stay positive
    CHECK_THROWS(Density::reweighted_product({axis}));
}

TEST_CASE("cdf and quantile round trip") {
    Density::MixtureComponent a, b;
    a.weight = 0.6;
    a.mean = {-0.5};
    a.cov = {{0.7}};
    b.weight = 0.4;
    b.mean = {1.0};
    b.cov = {{1.3}};
    const Density mix = Density::gaussian_mixture({a, b});
    for (double x : {-2.0, -0.3, 0.4, 1.9}) {
        CHECK(mix.quantile(mix.cdf(x)) == doctest::Approx(x).epsilon(1e-9));
    }
    for (double u : {0.02, 0.31, 0.5, 0.77, 0.99}) {
        CHECK(mix.cdf(mix.quantile(u)) == doctest::Approx(u).epsilon(1e-10));
    }
    const Density prod = bump_product();
    for (double u : {0.1, 0.5, 0.9}) {
        CHECK(prod.cdf(prod.quantile(u)) == doctest::Approx(u).epsilon(1e-9));
    }
}

TEST_CASE("trace-entropy check") {
    const MarginReport self = check_lvl21(Density::standard_gaussian(1),
                                          Density::standard_gaussian(1));
    CHECK_FALSE(self.violated);
    CHECK(self.lhs == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(self.rhs == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));

    const MarginReport rep = check_lvl21(single_gaussian({0.0}, {{0.5}}),
                                         single_gaussian({1.0}, {{1.0}}));
    CHECK_FALSE(rep.violated);
    CHECK(rep.margin == doctest::Approx(oracle::kLvl21ExampleMargin).epsilon(1e-12));
}

TEST_CASE("one-dimensional transport check") {
    const Density g = Density::standard_gaussian(1);
    CHECK(w2_1d(g, g) == doctest::Approx(0.0).scale(1.0).epsilon(1e-10));

    // mean shift: both sides equal mu^2, the transport bound is tight
    const Density shifted = single_gaussian({0.8}, {{1.0}});
    CHECK(w2_1d(shifted, g) == doctest::Approx(0.64).epsilon(1e-10));
    const MarginReport tight = check_transport_1d(shifted);
    CHECK_FALSE(tight.violated);
    CHECK(tight.margin == doctest::Approx(0.0).scale(1.0).epsilon(1e-8));

    const Density narrow = single_gaussian({0.0}, {{0.64}});
    CHECK(w2_1d(narrow, g) == doctest::Approx(0.04).epsilon(1e-10));
    const MarginReport rep = check_transport_1d(narrow);
    CHECK_FALSE(rep.violated);
    CHECK(rep.lhs == doctest::Approx(oracle::kTransportSigma08TwoKl).epsilon(1e-10));
    CHECK(rep.rhs == doctest::Approx(0.04).epsilon(1e-10));

    const MarginReport bump = check_transport_1d(bump_product());
    CHECK_FALSE(bump.violated);
}

TEST_CASE("vector field plumbing") {
    VectorField f;
    f.dim = 2;
    f.components = 2;
    f.cuts = {{0.0}, {-0.5}};
    f.values = {{1.0, 0.2}, {0.4, 0.0}, {0.1, 0.9}, {2.0, 1.0}};
    f.validate();
    CHECK(f.cell_count() == 4);
    // axis 0 fastest: cell = (x0 >= 0) + 2 * (x1 >= -0.5)
    CHECK(f.cell_of({-1.0, -1.0}) == 0);
    CHECK(f.cell_of({1.0, -1.0}) == 1);
    CHECK(f.cell_of({-1.0, 0.0}) == 2);
    CHECK(f.cell_of({1.0, 0.0}) == 3);
    CHECK(f.component_at({1.0, 0.0}, 1) == 1.0);

    const VectorField back = VectorField::from_json(f.to_json());
    CHECK(back.values == f.values);
    CHECK(back.cuts == f.cuts);

    VectorField bad = f;
    bad.values[2][0] = -0.1;
    CHECK_THROWS(bad.validate());

    const FieldMoments closed = field_moments_closed(f);
    const FieldMoments quad = field_moments_quadrature(f, 14);
    REQUIRE(closed.integral.size() == 2);
    for (int i = 0; i < 2; ++i) {
        CHECK(closed.integral[i] == doctest::Approx(quad.integral[i]).epsilon(1e-9));
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c)
                CHECK(closed.a[i][r][c] ==
                      doctest::Approx(quad.a[i][r][c]).scale(1.0).epsilon(1e-9));
    }
    CHECK(closed.square_mass == doctest::Approx(quad.square_mass).epsilon(1e-9));
}

TEST_CASE("vector-field trace inequality") {
    const VectorField v = VectorField::constant(2, {0.5, 0.5});
    const MarginReport flat = check_geomineq(v, v);
    CHECK_FALSE(flat.violated);
    CHECK(flat.lhs == doctest::Approx(0.0).scale(1.0).epsilon(1e-10));
    CHECK(flat.rhs == doctest::Approx(0.0).scale(1.0).epsilon(1e-10));

    VectorField u;
    u.dim = 2;
    u.components = 2;
    u.cuts = {{0.0}, {-0.5}};
    u.values = {{1.0, 0.2}, {0.4, 0.0}, {0.1, 0.9}, {2.0, 1.0}};
    const MarginReport rep = check_geomineq(u, u);
    CHECK_FALSE(rep.violated);
    CHECK(rep.margin >= -rep.tolerance);
}

TEST_CASE("first-versus-third level check") {
    const auto h0 = GaussianFunctional::half_space({1.0}, 0.0);
    const MarginReport rep = check_level13(h0, h0);
    CHECK_FALSE(rep.violated);
    CHECK_FALSE(rep.skipped);
    CHECK(rep.lhs == doctest::Approx(oracle::kInvTwoPi).epsilon(1e-10));
    CHECK(rep.rhs == doctest::Approx(oracle::kLevel13Rhs00).epsilon(1e-10));
    CHECK(rep.margin == doctest::Approx(oracle::kLevel13Margin00).epsilon(1e-9));

    // He_2(1) = 0, so the third-level inner product vanishes at offset 1
    const auto h1 = GaussianFunctional::half_space({1.0}, 1.0);
    const MarginReport zero = check_level13(h1, h1);
    CHECK_FALSE(zero.violated);
    CHECK(zero.lhs == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));

    // first-level mass below the cutoff: reported as skipped, not asserted
    const auto far = GaussianFunctional::half_space({1.0}, 13.0);
    const MarginReport skip = check_level13(far, far);
    CHECK(skip.skipped);
    CHECK_FALSE(skip.violated);
}

TEST_CASE("randomized suites stay clean") {
    for (LevelSuite suite :
         {LevelSuite::Lvl21, LevelSuite::Transport, LevelSuite::Geom, LevelSuite::Level13}) {
        const LevelSuiteResult res = run_level_suite(suite, 80, 5, 2);
        CAPTURE(res.suite);
        CHECK(res.cases == 80);
        CHECK(res.violations == 0);
        CHECK(res.bundles.empty());
    }
}

TEST_CASE("suite runs are deterministic and worker-invariant") {
    const LevelSuiteResult a = run_level_suite(LevelSuite::Lvl21, 40, 9, 1);
    const LevelSuiteResult b = run_level_suite(LevelSuite::Lvl21, 40, 9, 3);
    CHECK(a.worst_margin == b.worst_margin);
    CHECK(a.max_upper_ratio == b.max_upper_ratio);
    CHECK(a.max_tolerated_constant == b.max_tolerated_constant);
    CHECK(a.violations == b.violations);
    CHECK(a.skipped == b.skipped);
    const LevelSuiteResult c = run_level_suite(LevelSuite::Lvl21, 40, 10, 1);
    CHECK(a.worst_margin != c.worst_margin);

    CHECK(parse_level_suite("lvl21") == LevelSuite::Lvl21);
    CHECK(parse_level_suite("transport") == LevelSuite::Transport);
    CHECK(parse_level_suite("geom") == LevelSuite::Geom);
    CHECK(parse_level_suite("level13") == LevelSuite::Level13);
    CHECK(level_suite_name(LevelSuite::Geom) == "geom");
    CHECK_THROWS(parse_level_suite("nope"));
}
