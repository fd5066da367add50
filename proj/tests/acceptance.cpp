// Acceptance gate: ten go/no-go checks run against release criteria.
// Each prints exactly one PASS/FAIL line; the binary exits nonzero if any
// selected criterion fails. Run a single one with --only <k>.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "corrbench/bounds.hpp"
#include "corrbench/enumeration.hpp"
#include "corrbench/functional.hpp"
#include "corrbench/gronwall.hpp"
#include "corrbench/level.hpp"
#include "corrbench/process.hpp"
#include "corrbench/scan.hpp"

namespace fs = std::filesystem;
using namespace corrbench;

namespace {

constexpr int kWorkers = 4;

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

struct Outcome {
    bool pass = true;
    std::string why;

    void fail(const std::string& reason) {
        pass = false;
        if (!why.empty()) why += "; ";
        why += reason;
    }
    void expect(bool ok, const std::string& reason) {
        if (!ok) fail(reason);
    }
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// 1: nonnegative correlation for every ordered monotone pair at n = 4,
// exact integer arithmetic end to end.
Outcome crit_harris(Timer& timer) {
    Outcome out;
    const ScanReport rep = scan_pairs(4, ScanMode::Exhaustive, 0, 1, Normalization::Std,
                                      kWorkers);
    out.expect(rep.pairs_examined == 28224,
               "expected 28224 pairs, saw " + std::to_string(rep.pairs_examined));
    out.expect(rep.harris_violations == 0,
               std::to_string(rep.harris_violations) + " negative-correlation pairs");
    out.expect(timer.seconds() < 5.0, "over the 5 s budget");
    return out;
}

// 2: antipodal monotone functions up to n = 5 have exactly zero mixed second
// moments and exactly zero even-degree coefficients above the mean.
Outcome crit_antipodal(Timer& timer) {
    Outcome out;
    for (int n = 1; n <= 5; ++n) {
        std::uint64_t seen = 0;
        enumerate_antipodal_monotone(n, [&](const BooleanFunction& f) {
            ++seen;
            const SpectralSummary s = spectral_summary(f);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    if (s.V[i][j] != Rational(0)) out.fail("V != 0 at " + f.to_hex());
            for (std::uint32_t mask = 1; mask < (1u << n); ++mask)
                if (__builtin_popcount(mask) % 2 == 0 && s.fourier_at(mask) != Rational(0))
                    out.fail("even coefficient != 0 at " + f.to_hex());
            return out.pass;
        });
        out.expect(seen == count_antipodal_monotone(n), "stream/count mismatch");
    }
    out.expect(timer.seconds() < 30.0, "over the 30 s budget");
    return out;
}

// 3: free-distributive-lattice counts for n = 2..5.
Outcome crit_counts(Timer& timer) {
    Outcome out;
    const std::uint64_t want[] = {6, 20, 168, 7581};
    for (int n = 2; n <= 5; ++n) {
        const std::uint64_t got = count_monotone(n);
        out.expect(got == want[n - 2], "count_monotone(" + std::to_string(n) + ") = " +
                                           std::to_string(got));
    }
    out.expect(timer.seconds() < 60.0, "over the 60 s budget");
    return out;
}

// 4: quarter-minimum-influence lower bound holds for every monotone x
// antipodal-monotone pair at n <= 4, with (AND2, dictator) exactly tight.
Outcome crit_quarter_bound(Timer& timer) {
    Outcome out;
    for (int n = 2; n <= 4; ++n) {
        const ScanReport rep =
            scan_pairs(n, ScanMode::Exhaustive, 0, 1, Normalization::Std, kWorkers);
        out.expect(rep.chvatal_violations == 0,
                   "counterexample at n = " + std::to_string(n));
        out.expect(rep.chvatal_pairs > 0, "no pairs checked at n = " + std::to_string(n));
    }
    const BooleanFunction and2 = BooleanFunction::from_hex(2, "8");
    const BooleanFunction d1 = BooleanFunction::dictator(2, 1);
    const PairBoundReport rep = pair_bound_report(and2, d1);
    out.expect(rep.chvatal_ratio.has_value() && *rep.chvatal_ratio == 1.0,
               "tightness witness ratio != 1");
    out.expect(!rep.chvatal_trivial && !rep.chvatal_violated, "witness flags wrong");
    (void)timer;
    return out;
}

// 5: the exhaustive n = 4 ratio minima match the stored fixtures to 1e-12,
// and the n = 5 sweep finishes in budget with minima that only move down.
Outcome crit_minima(Timer& timer) {
    Outcome out;
    const std::string path = std::string(CORRBENCH_FIXTURES) + "/scan_n4_minima.json";
    std::ifstream in(path);
    if (!in) {
        out.fail("fixture missing: " + path);
        return out;
    }
    nlohmann::json fix;
    in >> fix;
    const double tol = fix["tolerance"].get<double>();

    const ScanReport four =
        scan_pairs(4, ScanMode::Exhaustive, 0, 1, Normalization::Std, kWorkers);
    for (const auto& [name, want] : fix["minima"].items()) {
        const auto it = four.minima.find(name);
        if (it == four.minima.end() || !it->second.present()) {
            out.fail("minimum '" + name + "' absent at n = 4");
            continue;
        }
        const double got = it->second.ratio;
        const double ref = want["ratio"].get<double>();
        out.expect(got > 0.0, name + " not strictly positive");
        out.expect(std::abs(got - ref) <= tol,
                   name + " drifted: " + fmt(got) + " vs " + fmt(ref));
        out.expect(it->second.f_hex == want["f"].get<std::string>() &&
                       it->second.g_hex == want["g"].get<std::string>(),
                   name + " witness pair moved");
        out.expect(it->second.considered == want["considered"].get<std::uint64_t>(),
                   name + " considered-count moved");
    }

    const ScanReport five =
        scan_pairs(5, ScanMode::Exhaustive, 0, 1, Normalization::Std, 8);
    out.expect(five.pairs_examined == 7581ull * 7581ull, "n = 5 pair count wrong");
    for (const auto& [name, entry] : five.minima) {
        if (!entry.present()) {
            out.fail("minimum '" + name + "' absent at n = 5");
            continue;
        }
        out.expect(entry.ratio > 0.0, name + " not strictly positive at n = 5");
        const double cap = four.minima.at(name).ratio;
        out.expect(entry.ratio <= cap + 1e-15,
                   name + " increased from n = 4: " + fmt(entry.ratio) + " > " + fmt(cap));
    }
    out.expect(timer.seconds() < 600.0, "over the 10 min budget");
    return out;
}

// 6: Boolean quantities and their Gaussian lifts agree pairwise at n <= 3:
// correlations through the /4 identity, first moments against scaled
// influences, mixed second moments against the interaction matrix.
Outcome crit_bridge(Timer& timer) {
    Outcome out;
    for (int n = 1; n <= 3; ++n) {
        const BridgeSweep sweep = bridge_sweep(n, 12, kWorkers);
        out.expect(sweep.worst() <= 1e-8, "n = " + std::to_string(n) + " worst deviation " +
                                              fmt(sweep.worst()));
    }
    (void)timer;
    return out;
}

// 7: shared-path process diagnostics at 1e5 paths: flat conditional means,
// both derivative-chain identities, covariance monotonicity and limit,
// integral identity -- every check inside 3 standard errors.
Outcome crit_process(Timer& timer) {
    Outcome out;
    const auto f =
        GaussianFunctional::sign_composed(BooleanFunction::dictator(1, 1), true);
    const ProcessSuite suite =
        run_process_suite(f, f, TimeGrid::parse("0:1:0.05"), 100000, 1, kWorkers);
    out.expect(suite.fails == 0, std::to_string(suite.fails) + " checks failed");
    out.expect(suite.inconclusive == 0,
               std::to_string(suite.inconclusive) + " checks inconclusive");
    for (const auto& c : suite.checks)
        if (c.status != 0) out.fail(c.name + " " + c.detail);
    out.expect(timer.seconds() < 300.0, "over the 5 min budget");
    return out;
}

// 8: randomized inequality families stay violation-free at volume, and the
// mean-shift transport case sits exactly on the equality line.
Outcome crit_level(Timer& timer) {
    Outcome out;
    const struct {
        LevelSuite suite;
        int cases;
    } plan[] = {{LevelSuite::Lvl21, 10000},
                {LevelSuite::Transport, 10000},
                {LevelSuite::Geom, 1000},
                {LevelSuite::Level13, 200}};
    for (const auto& p : plan) {
        const LevelSuiteResult res = run_level_suite(p.suite, p.cases, 1, kWorkers);
        out.expect(res.violations == 0, res.suite + ": " +
                                            std::to_string(res.violations) + " violations");
        out.expect(res.cases == p.cases, res.suite + ": case count mismatch");
    }

    Density::MixtureComponent shift;
    shift.weight = 1.0;
    shift.mean = {0.8};
    shift.cov = {{1.0}};
    const MarginReport tight = check_transport_1d(Density::gaussian_mixture({shift}));
    out.expect(std::abs(tight.margin) <= 1e-8,
               "mean-shift equality off by " + fmt(tight.margin));
    out.expect(timer.seconds() < 600.0, "over the 10 min budget");
    return out;
}

// 9: decay-ODE sweep at dt = 1e-4 with a thousand perturbed runs keeps the
// no-halving conclusion, and step-halving confirms fourth-order error decay.
Outcome crit_gronwall(Timer& timer) {
    Outcome out;
    const GronwallSweep sweep = run_gronwall_sweep(1000, 1000, 1e-4, 1, kWorkers);
    out.expect(sweep.cases == 1000 && sweep.perturbations == 1000, "sweep size wrong");
    out.expect(sweep.violations == 0,
               std::to_string(sweep.violations) + " halving violations");
    const double ratio = richardson_ratio(1.0, 0.5, 0.0, 0.02, 0.3);
    out.expect(ratio >= 12.0 && ratio <= 20.0, "error ratio " + fmt(ratio));
    out.expect(timer.seconds() < 300.0, "over the 5 min budget");
    return out;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// 10: identical parameters and seed give byte-identical report files for
// every worker count once timestamps are omitted.
Outcome crit_determinism(Timer& timer) {
    Outcome out;
    const char* bin = std::getenv("CORRBENCH_BIN");
    if (!bin) {
        out.fail("CORRBENCH_BIN not set");
        return out;
    }
    const fs::path dir = fs::temp_directory_path() / "corrbench_acceptance";
    fs::create_directories(dir);
    const struct {
        const char* name;
        std::string args;
    } runs[] = {
        {"scan", "scan --n 3"},
        {"gaussian", "gaussian --n 2"},
        {"simulate", "simulate --grid 0:0.5:0.25 --paths 3000"},
        {"levelcheck", "levelcheck --suite lvl21 --cases 50"},
        {"gronwall", "gronwall --cases 48 --perturbations 20 --dt 0.001"},
    };
    for (const auto& r : runs) {
        std::string reference;
        for (int workers : {1, 2, 5}) {
            const fs::path manifest =
                dir / (std::string(r.name) + "_w" + std::to_string(workers) + ".json");
            std::ostringstream cmd;
            cmd << bin << " --no-timestamps --seed 3 --workers " << workers << " --out "
                << manifest << ' ' << r.args << " > /dev/null 2>&1";
            const int rc = std::system(cmd.str().c_str());
            if (rc != 0) {
                out.fail(std::string(r.name) + " exited " + std::to_string(rc));
                continue;
            }
            const std::string text = slurp(manifest);
            if (text.empty()) {
                out.fail(std::string(r.name) + " wrote an empty manifest");
            } else if (reference.empty()) {
                reference = text;
            } else {
                out.expect(text == reference,
                           std::string(r.name) + " differs at workers=" +
                               std::to_string(workers));
            }
        }
    }
    (void)timer;
    return out;
}

struct Criterion {
    int id;
    const char* title;
    Outcome (*run)(Timer&);
};

const Criterion kCriteria[] = {
    {1, "exact nonnegative correlation, all monotone pairs at n = 4", crit_harris},
    {2, "antipodal spectra vanish exactly through n = 5", crit_antipodal},
    {3, "monotone function counts for n = 2..5", crit_counts},
    {4, "quarter-minimum-influence bound, exhaustive with tight witness", crit_quarter_bound},
    {5, "ratio minima fixtures at n = 4 and the n = 5 sweep", crit_minima},
    {6, "Boolean-to-Gaussian bridge identities at n <= 3", crit_bridge},
    {7, "process suite statistics inside three standard errors", crit_process},
    {8, "inequality suites at volume plus transport equality", crit_level},
    {9, "decay-ODE no-halving sweep and integrator order", crit_gronwall},
    {10, "byte-identical reports across worker counts", crit_determinism},
};

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
            only = std::atoi(argv[++i]);
        } else {
            std::fprintf(stderr, "usage: acceptance [--only <1..10>]\n");
            return 2;
        }
    }
    if (only < 0 || only > 10) {
        std::fprintf(stderr, "usage: acceptance [--only <1..10>]\n");
        return 2;
    }

    int failures = 0;
    for (const auto& c : kCriteria) {
        if (only != 0 && c.id != only) continue;
        Timer timer;
        const Outcome out = c.run(timer);
        if (out.pass) {
            std::printf("PASS criterion %d: %s (%.2fs)\n", c.id, c.title, timer.seconds());
        } else {
            std::printf("FAIL criterion %d: %s — %s (%.2fs)\n", c.id, c.title,
                        out.why.c_str(), timer.seconds());
            ++failures;
        }
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
