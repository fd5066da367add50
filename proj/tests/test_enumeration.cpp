#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "corrbench/boolean.hpp"
#include "corrbench/enumeration.hpp"
#include "oracle_values.hpp"

using namespace corrbench;

namespace {

std::vector<BooleanFunction> collect(int n) {
    std::vector<BooleanFunction> out;
    enumerate_monotone(n, [&](const BooleanFunction& f) {
        out.push_back(f);
        return true;
    });
    return out;
}

// Filter over all 2^(2^n) tables, the independent route.
std::vector<BooleanFunction> brute_force(int n, bool antipodal_only) {
    std::vector<BooleanFunction> out;
    for (std::uint64_t tb = 0; tb < (std::uint64_t(1) << (1u << n)); ++tb) {
        BooleanFunction f = BooleanFunction::zeros(n);
        for (std::uint32_t idx = 0; idx < f.size(); ++idx)
            if ((tb >> idx) & 1) f.set_bit(idx, 1);
        if (!is_monotone(f)) continue;
        if (antipodal_only && !is_antipodal(f)) continue;
        out.push_back(f);
    }
    return out;
}

}  // namespace

TEST_CASE("monotone counts") {
    CHECK(count_monotone(1) == 3);
    CHECK(count_monotone(2) == 6);
    CHECK(count_monotone(3) == 20);
    CHECK(count_monotone(4) == 168);
    CHECK(count_monotone(5) == 7581);
    CHECK_THROWS(count_monotone(7));
}

TEST_CASE("antipodal monotone counts") {
    CHECK(count_antipodal_monotone(1) == 1);
    CHECK(count_antipodal_monotone(2) == 2);
    CHECK(count_antipodal_monotone(3) == 4);
    CHECK(count_antipodal_monotone(4) == 12);
}

TEST_CASE("stream agrees with brute force, n <= 4") {
    for (int n = 1; n <= 4; ++n) {
        const auto got = collect(n);
        const auto want = brute_force(n, false);
        REQUIRE(got.size() == want.size());
        // same set; emission order is lexicographic over the table bits
        std::set<std::string> gs, ws;
        for (const auto& f : got) gs.insert(f.to_hex());
        for (const auto& f : want) ws.insert(f.to_hex());
        CHECK(gs == ws);
        for (const auto& f : got) {
            CHECK(is_monotone(f));
            CHECK(f.n() == n);
        }
        std::set<std::string> dedup(gs);
        CHECK(dedup.size() == got.size());
    }
}

TEST_CASE("antipodal stream is the antipodal subset, same order") {
    for (int n = 1; n <= 4; ++n) {
        std::vector<BooleanFunction> anti;
        enumerate_antipodal_monotone(n, [&](const BooleanFunction& f) {
            anti.push_back(f);
            return true;
        });
        const auto want = brute_force(n, true);
        REQUIRE(anti.size() == want.size());
        std::set<std::string> gs, ws;
        for (const auto& f : anti) gs.insert(f.to_hex());
        for (const auto& f : want) ws.insert(f.to_hex());
        CHECK(gs == ws);
        // subsequence of the full stream
        const auto all = collect(n);
        std::size_t pos = 0;
        for (const auto& f : anti) {
            while (pos < all.size() && !(all[pos] == f)) ++pos;
            CHECK(pos < all.size());
        }
    }
    // MAJ3 and the three dictators at n=3
    std::vector<BooleanFunction> a3;
    enumerate_antipodal_monotone(3, [&](const BooleanFunction& f) {
        a3.push_back(f);
        return true;
    });
    const BooleanFunction maj3 = BooleanFunction::from_bits(3, {0, 0, 0, 1, 0, 1, 1, 1});
    int hits = 0;
    for (const auto& f : a3) {
        if (f == maj3) ++hits;
        for (int i = 1; i <= 3; ++i)
            if (f == BooleanFunction::dictator(3, i)) ++hits;
    }
    CHECK(hits == 4);
}

TEST_CASE("early stop") {
    int seen = 0;
    enumerate_monotone(4, [&](const BooleanFunction&) { return ++seen < 5; });
    CHECK(seen == 5);
}

TEST_CASE("neighbors") {
    const auto zeros = BooleanFunction::zeros(2);
    const auto nz = monotone_neighbors(zeros);
    REQUIRE(nz.size() == 1);
    CHECK(nz[0] == BooleanFunction::from_bits(2, {0, 0, 0, 1}));

    const auto ones = BooleanFunction::ones(2);
    const auto no = monotone_neighbors(ones);
    REQUIRE(no.size() == 1);
    CHECK(no[0] == BooleanFunction::from_bits(2, {0, 1, 1, 1}));

    const auto and2 = BooleanFunction::from_bits(2, {0, 0, 0, 1});
    const auto na = monotone_neighbors(and2);
    REQUIRE(na.size() == 3);  // two up-flips, one down-flip
    for (const auto& g : na) CHECK(is_monotone(g));

    CHECK_THROWS(monotone_neighbors(BooleanFunction::from_bits(2, {0, 1, 1, 0})));
}

TEST_CASE("flip predicate matches the neighbor list") {
    for (const auto& f : collect(3)) {
        const auto nb = monotone_neighbors(f);
        std::size_t count = 0;
        for (std::uint32_t idx = 0; idx < f.size(); ++idx)
            if (flip_keeps_monotone(f, idx)) ++count;
        CHECK(count == nb.size());
    }
}

TEST_CASE("move graph connected at n = 3") {
    const auto all = collect(3);
    std::map<std::string, int> index;
    for (std::size_t i = 0; i < all.size(); ++i) index[all[i].to_hex()] = static_cast<int>(i);
    std::vector<bool> seen(all.size(), false);
    std::queue<BooleanFunction> frontier;
    frontier.push(BooleanFunction::zeros(3));
    seen[static_cast<std::size_t>(index.at(frontier.front().to_hex()))] = true;
    std::size_t reached = 1;
    while (!frontier.empty()) {
        const BooleanFunction f = frontier.front();
        frontier.pop();
        for (const auto& g : monotone_neighbors(f)) {
            const auto i = static_cast<std::size_t>(index.at(g.to_hex()));
            if (seen[i]) continue;
            seen[i] = true;
            ++reached;
            frontier.push(g);
        }
    }
    CHECK(reached == all.size());
}

TEST_CASE("sampler determinism and zero-step start") {
    CHECK(random_monotone(2, 5, 0) == BooleanFunction::zeros(2));
    const auto a = random_monotone(3, 12345, 500);
    const auto b = random_monotone(3, 12345, 500);
    CHECK(a == b);
    CHECK(is_monotone(a));
    const auto c = random_monotone(3, 54321, 500);
    CHECK(is_monotone(c));
}

TEST_CASE("sampler uniformity at n = 2") {
    const auto all = collect(2);
    REQUIRE(all.size() == 6);
    std::map<std::string, int> counts;
    const int samples = 10000;
    for (int s = 0; s < samples; ++s)
        ++counts[random_monotone(2, 1000 + static_cast<std::uint64_t>(s), 100000).to_hex()];
    CHECK(counts.size() == 6);
    const double expect = samples / 6.0;
    double chi2 = 0.0;
    for (const auto& f : all) {
        const double d = counts[f.to_hex()] - expect;
        chi2 += d * d / expect;
    }
    CHECK(chi2 < oracle::kChi2Df5P99);
}
