#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "corrbench/process.hpp"
#include "oracle_values.hpp"

using namespace corrbench;

namespace {

const BooleanFunction kD1 = BooleanFunction::dictator(1, 1);
const BooleanFunction kAnd2 = BooleanFunction::from_bits(2, {0, 0, 0, 1});
const BooleanFunction kOr2 = BooleanFunction::from_bits(2, {0, 1, 1, 1});

GaussianFunctional centered_sign(const BooleanFunction& f) {
    return GaussianFunctional::sign_composed(f, true);
}

void check_stat(const Stat& s, double want) {
    REQUIRE(s.se >= 0.0);
    CHECK(std::abs(s.mean - want) <= 3.0 * s.se + 1e-12);
}

}  // namespace

TEST_CASE("time grid parsing") {
    const TimeGrid g = TimeGrid::parse("0:1:0.25");
    REQUIRE(g.size() == 5);
    CHECK(g.times.front() == 0.0);
    CHECK(g.times.back() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(g.step() == doctest::Approx(0.25).epsilon(1e-12));

    const TimeGrid one = TimeGrid::parse("6");
    REQUIRE(one.size() == 1);
    CHECK(one.times[0] == 6.0);
    CHECK_THROWS(one.step());

    CHECK_THROWS(TimeGrid::parse("1:0:0.5"));
    CHECK_THROWS(TimeGrid::parse("0:1:0"));

    const TimeGrid u = TimeGrid::uniform(0.0, 2.0, 0.5);
    CHECK(u.size() == 5);
}

TEST_CASE("conditional moments, closed vs quadrature") {
    const auto sgn = centered_sign(BooleanFunction::from_bits(3, {0, 0, 0, 1, 0, 1, 1, 1}));
    const auto half = GaussianFunctional::half_space({0.6, 0.8}, 0.2);
    const std::vector<double> z3{0.4, -1.1, 0.25};
    const std::vector<double> z2{-0.3, 0.9};
    for (double t : {0.3, 1.5}) {
        for (int k = 0; k <= 3; ++k) {
            const SymTensor a = conditional_moment(sgn, k, z3, t, MomentMethod::Closed);
            const SymTensor b = conditional_moment(sgn, k, z3, t, MomentMethod::Quadrature, 20);
            for (std::size_t i = 0; i < a.size(); ++i)
                CHECK(a.data()[i] == doctest::Approx(b.data()[i]).scale(1.0).epsilon(1e-8));
            const SymTensor c = conditional_moment(half, k, z2, t, MomentMethod::Closed);
            const SymTensor d = conditional_moment(half, k, z2, t, MomentMethod::Quadrature, 20);
            for (std::size_t i = 0; i < c.size(); ++i)
                CHECK(c.data()[i] == doctest::Approx(d.data()[i]).scale(1.0).epsilon(1e-8));
        }
    }
}

TEST_CASE("one-dimensional sign process matches its analytic curves") {
    const auto f = centered_sign(kD1);
    const ProcessSuite suite =
        run_process_suite(f, f, TimeGrid::parse("0:1:0.5"), 20000, 2, 2);
    REQUIRE(suite.grid.size() == 3);

    // t = 0: paths have not moved, so p0 and p2 vanish and p1 = 2/pi.
    check_stat(suite.p0[0], 0.0);
    check_stat(suite.p1[0], oracle::kTwoOverPi);
    check_stat(suite.p2[0], 0.0);

    check_stat(suite.p0[1], oracle::kD1P0Half);
    check_stat(suite.p1[1], oracle::kD1P1Half);
    check_stat(suite.p2[1], oracle::kD1P2Half);

    check_stat(suite.p0[2], oracle::kD1P0One);
    check_stat(suite.p1[2], oracle::kD1P1One);
    check_stat(suite.p2[2], oracle::kD1P2One);

    CHECK(suite.fails == 0);
    CHECK(suite.has_cor_limit);
    CHECK(suite.cor_limit == doctest::Approx(1.0).epsilon(1e-14));  // Cor(F,F) = Var(sign) = 1
    CHECK(suite.mean_f == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
}

TEST_CASE("late-time concentration of the conditional mean") {
    const auto f = centered_sign(kD1);
    const PathSample sample = sample_paths(f, f, TimeGrid::parse("6"), 20000, 3);
    std::size_t hits = 0;
    for (std::size_t p = 0; p < sample.paths; ++p)
        if (std::abs(sample.at(sample.m0_f, p, 0)) > 0.99) ++hits;
    const double frac = static_cast<double>(hits) / static_cast<double>(sample.paths);
    const double want = oracle::kD1ConcentrationT6;
    const double se = std::sqrt(want * (1.0 - want) / static_cast<double>(sample.paths));
    CHECK(std::abs(frac - want) <= 3.0 * se);
}

TEST_CASE("suite checks pass across seeds") {
    const auto f = centered_sign(kAnd2);
    const auto g = centered_sign(kOr2);
    const TimeGrid grid = TimeGrid::parse("0:1:0.25");
    for (std::uint64_t seed : {1, 2, 3, 4}) {
        const ProcessSuite suite = run_process_suite(f, g, grid, 6000, seed, 2);
        CAPTURE(seed);
        CHECK(suite.fails == 0);
        // Cor(sign lift) = 4 Cor(boolean): AND vs OR on two bits gives 1/16.
        CHECK(suite.cor_limit == doctest::Approx(0.25).epsilon(1e-13));
        // covariance is nondecreasing along the grid
        for (std::size_t i = 0; i + 1 < suite.cov.size(); ++i)
            CHECK(suite.cov[i] <= suite.cov[i + 1] + 3.0 * (suite.p0[i].se + suite.p0[i + 1].se));
        CHECK(suite.cov.back() <= suite.cor_limit + 3.0 * suite.p0.back().se);
    }
}

TEST_CASE("sampling is deterministic and worker-invariant") {
    const auto f = centered_sign(kAnd2);
    const auto g = centered_sign(kOr2);
    const TimeGrid grid = TimeGrid::parse("0:0.8:0.4");

    const PathSample a = sample_paths(f, g, grid, 500, 7);
    const PathSample b = sample_paths(f, g, grid, 500, 7);
    REQUIRE(a.z.size() == b.z.size());
    CHECK(a.z == b.z);
    CHECK(a.m0_f == b.m0_f);
    const PathSample c = sample_paths(f, g, grid, 500, 8);
    CHECK(a.z != c.z);

    const ProcessSuite w1 = run_process_suite(f, g, grid, 4000, 11, 1);
    const ProcessSuite w3 = run_process_suite(f, g, grid, 4000, 11, 3);
    for (std::size_t i = 0; i < w1.p0.size(); ++i) {
        CHECK(w1.p0[i].mean == w3.p0[i].mean);
        CHECK(w1.p1[i].mean == w3.p1[i].mean);
        CHECK(w1.p2[i].mean == w3.p2[i].mean);
        CHECK(w1.cov[i] == w3.cov[i]);
    }
    CHECK(w1.fails == w3.fails);
}

TEST_CASE("moment curve estimator") {
    const auto f = centered_sign(kD1);
    const MomentCurve curve = estimate_pk(f, f, 1, TimeGrid::parse("0.5"), 20000, 5, 2);
    REQUIRE(curve.value.size() == 1);
    CHECK(curve.k == 1);
    check_stat(curve.value[0], oracle::kD1P1Half);
}

TEST_CASE("moment csv layout") {
    const auto f = centered_sign(kD1);
    const ProcessSuite suite = run_process_suite(f, f, TimeGrid::parse("0:0.5:0.25"), 200, 1, 1);
    std::ostringstream out;
    write_moment_csv(suite, out);
    std::istringstream in(out.str());
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "t,k,estimate,se");
    std::size_t rows = 0;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 3 * suite.grid.size());
}
