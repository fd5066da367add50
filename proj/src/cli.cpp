#include "corrbench/cli.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "corrbench/anneal.hpp"
#include "corrbench/boolean.hpp"
#include "corrbench/bounds.hpp"
#include "corrbench/enumeration.hpp"
#include "corrbench/functional.hpp"
#include "corrbench/gronwall.hpp"
#include "corrbench/level.hpp"
#include "corrbench/process.hpp"
#include "corrbench/report.hpp"
#include "corrbench/scan.hpp"

namespace corrbench {

namespace {

constexpr int kExitPass = 0;
constexpr int kExitViolation = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitUsage = 3;

struct CommonOpts {
    std::uint64_t seed = 1;
    bool seed_set = false;
    int workers = 1;
    std::string out;
    bool no_timestamps = false;
};

std::uint64_t resolve_seed(const CommonOpts& c) {
    if (c.seed_set) return c.seed;
    if (const char* env = std::getenv("CORRBENCH_SEED")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end == env || *end != '\0')
            throw std::invalid_argument("CORRBENCH_SEED: not an unsigned integer");
        return v;
    }
    return 1;
}

// The manifest carries only result-bearing parameters; worker count and
// timing never influence the payload and are kept out so reports stay
// byte-comparable.
struct RunContext {
    RunManifest manifest;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

    explicit RunContext(std::string subcommand, bool with_timing) {
        manifest.subcommand = std::move(subcommand);
        manifest.with_timing = with_timing;
        manifest.parameters = nlohmann::json::object();
        if (with_timing) manifest.started_at = now_rfc3339();
    }

    int finish(const std::string& out_path) {
        if (manifest.with_timing) {
            manifest.finished_at = now_rfc3339();
            manifest.wall_seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        }
        std::string path = out_path;
        if (path.empty() && manifest.failed > 0) path = "corrbench_violations.json";
        if (!path.empty()) {
            write_manifest(manifest, path);
            std::printf("report: %s\n", path.c_str());
        }
        return manifest.exit_code();
    }
};

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

nlohmann::json rational_json(const Rational& r) {
    return {{"num", r.numerator()}, {"den", r.denominator()}, {"value", to_double(r)}};
}

nlohmann::json pair_report_json(const PairBoundReport& r) {
    nlohmann::json j;
    j["normalization"] = to_string(r.normalization);
    j["cor"] = rational_json(r.cor);
    j["m1"] = rational_json(r.m1);
    j["m2"] = rational_json(r.m2);
    j["rhs_tal"] = r.rhs_tal;
    j["rhs_kms"] = r.rhs_kms;
    j["rhs_main_tal"] = r.rhs_main_tal;
    j["rhs_main_coord"] = r.rhs_main_coord;
    auto opt = [](const std::optional<double>& v) {
        return v ? nlohmann::json(*v) : nlohmann::json();
    };
    j["ratio_tal"] = opt(r.ratio_tal);
    j["ratio_kms"] = opt(r.ratio_kms);
    j["ratio_main_tal"] = opt(r.ratio_main_tal);
    j["ratio_main_coord"] = opt(r.ratio_main_coord);
    j["rhs_symm"] = opt(r.rhs_symm);
    j["ratio_symm"] = opt(r.ratio_symm);
    j["chvatal_rhs"] = opt(r.chvatal_rhs);
    j["chvatal_ratio"] = opt(r.chvatal_ratio);
    j["chvatal_trivial"] = r.chvatal_trivial;
    j["chvatal_violated"] = r.chvatal_violated;
    j["remark_constant"] = opt(r.remark_constant);
    j["f_monotone"] = r.f_monotone;
    j["g_monotone"] = r.g_monotone;
    j["g_antipodal"] = r.g_antipodal;
    j["vacuous"] = {{"tal", r.vacuous_tal},
                    {"main_tal", r.vacuous_main_tal},
                    {"main_coord", r.vacuous_main_coord}};
    return j;
}

nlohmann::json scan_report_json(const ScanReport& r) {
    nlohmann::json j;
    j["n"] = r.n;
    j["mode"] = to_string(r.mode);
    j["normalization"] = to_string(r.norm);
    j["seed"] = r.seed;
    j["pairs_examined"] = r.pairs_examined;
    j["partial"] = r.partial;
    nlohmann::json mins;
    for (const auto& [name, entry] : r.minima) {
        mins[name] = {{"ratio", entry.present() ? nlohmann::json(entry.ratio) : nlohmann::json()},
                      {"f", entry.f_hex},
                      {"g", entry.g_hex},
                      {"considered", entry.considered},
                      {"vacuous", entry.vacuous}};
    }
    j["minima"] = mins;
    j["harris_violations"] = r.harris_violations;
    j["harris_examples"] = r.harris_examples;
    j["chvatal"] = {{"pairs", r.chvatal_pairs},
                    {"violations", r.chvatal_violations},
                    {"trivial", r.chvatal_trivial},
                    {"tight", r.chvatal_tight},
                    {"examples", r.chvatal_examples}};
    j["remark"] = {{"max", r.remark_max}, {"f", r.remark_f_hex}, {"g", r.remark_g_hex}};
    return j;
}

nlohmann::json stat_array_json(const std::vector<Stat>& stats) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& s : stats) arr.push_back({{"mean", s.mean}, {"se", s.se}});
    return arr;
}

nlohmann::json process_suite_json(const ProcessSuite& suite) {
    nlohmann::json j;
    j["times"] = suite.grid.times;
    j["paths"] = suite.paths;
    j["seed"] = suite.seed;
    j["mean_f"] = suite.mean_f;
    j["mean_g"] = suite.mean_g;
    if (suite.has_cor_limit) j["cor_limit"] = suite.cor_limit;
    j["p0"] = stat_array_json(suite.p0);
    j["p1"] = stat_array_json(suite.p1);
    j["p2"] = stat_array_json(suite.p2);
    j["cov"] = suite.cov;
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : suite.checks)
        checks.push_back({{"name", c.name},
                          {"status", c.status},
                          {"value", c.value},
                          {"allowance", c.allowance},
                          {"detail", c.detail}});
    j["checks"] = checks;
    return j;
}

int cmd_analyze(const std::string& f_path, const std::string& g_path,
                const std::string& norm_name, const CommonOpts& common) {
    RunContext ctx("analyze", !common.no_timestamps);
    const Normalization norm = normalization_from_string(norm_name);
    const BooleanFunction f = BooleanFunction::load(f_path);
    const BooleanFunction g = BooleanFunction::load(g_path);
    if (f.n() != g.n()) throw std::invalid_argument("analyze: functions differ in n");
    const PairBoundReport rep = pair_bound_report(f, g, norm);

    std::printf("n = %d, normalization = %s\n", f.n(), to_string(norm).c_str());
    std::printf("cor = %s\n", to_string(rep.cor).c_str());
    std::printf("m1 = %s\n", to_string(rep.m1).c_str());
    std::printf("m2 = %s\n", to_string(rep.m2).c_str());
    std::printf("rhs_tal = %s\n", format_double(rep.rhs_tal).c_str());
    std::printf("rhs_kms = %s\n", format_double(rep.rhs_kms).c_str());
    std::printf("rhs_main_tal = %s\n", format_double(rep.rhs_main_tal).c_str());
    std::printf("rhs_main_coord = %s\n", format_double(rep.rhs_main_coord).c_str());
    if (rep.rhs_symm) std::printf("rhs_symm = %s\n", format_double(*rep.rhs_symm).c_str());
    if (rep.chvatal_ratio)
        std::printf("chvatal_ratio = %s\n", format_double(*rep.chvatal_ratio).c_str());
    if (rep.remark_constant)
        std::printf("remark_constant = %s\n", format_double(*rep.remark_constant).c_str());

    ctx.manifest.parameters = {{"f", f.to_hex()},
                               {"g", g.to_hex()},
                               {"n", f.n()},
                               {"normalization", to_string(norm)},
                               {"seed", 0}};
    ctx.manifest.payload = pair_report_json(rep);
    const bool harris_broken = rep.f_monotone && rep.g_monotone && rep.cor < Rational(0);
    if (rep.chvatal_violated || harris_broken)
        ctx.manifest.failed = 1;
    else
        ctx.manifest.passed = 1;
    return ctx.finish(common.out);
}

int cmd_enumerate(int n, bool count_only, const CommonOpts& common) {
    RunContext ctx("enumerate", !common.no_timestamps);
    if (n < 0 || n > 6)
        throw std::invalid_argument("enumerate: n must be in [0,6] (listing limit)");
    std::uint64_t count = 0;
    std::string listing;
    enumerate_monotone(n, [&](const BooleanFunction& f) {
        ++count;
        if (!count_only) {
            listing += f.to_hex();
            listing += '\n';
        }
        return true;
    });
    if (count_only)
        std::printf("%llu\n", static_cast<unsigned long long>(count));
    else if (common.out.empty())
        std::fputs(listing.c_str(), stdout);
    ctx.manifest.parameters = {{"n", n}, {"count_only", count_only}};
    ctx.manifest.payload = {{"count", count}};
    ctx.manifest.passed = 1;
    if (!count_only && !common.out.empty()) {
        emit_output(ctx.manifest, common.out, listing);
        ctx.manifest.payload["listing"] = common.out;
        write_manifest(ctx.manifest, common.out + ".manifest.json");
        return kExitPass;
    }
    return ctx.finish(common.out);
}

int cmd_scan(int n, const std::string& mode_name, std::uint64_t budget,
             const std::string& norm_name, const std::string& dump_pairs,
             const CommonOpts& common) {
    RunContext ctx("scan", !common.no_timestamps);
    ScanMode mode;
    if (mode_name == "exhaustive")
        mode = ScanMode::Exhaustive;
    else if (mode_name == "sampled")
        mode = ScanMode::Sampled;
    else
        throw std::invalid_argument("scan: --mode must be exhaustive or sampled");
    if (mode == ScanMode::Exhaustive && (n < 2 || n > 5))
        throw std::invalid_argument("scan: exhaustive limit exceeded (n must be in [2,5])");
    if (n < 2 || n > 6) throw std::invalid_argument("scan: n must be in [2,6]");
    const Normalization norm = normalization_from_string(norm_name);
    const std::uint64_t seed = resolve_seed(common);

    const ScanReport rep = scan_pairs(n, mode, budget, seed, norm, common.workers);
    if (!dump_pairs.empty()) {
        dump_pairs_csv(n, norm, dump_pairs);
        std::ifstream in(dump_pairs, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        ctx.manifest.outputs.emplace_back(dump_pairs, hex64(fnv1a64(ss.str())));
    }

    std::printf("pairs_examined = %llu\n",
                static_cast<unsigned long long>(rep.pairs_examined));
    for (const auto& [name, entry] : rep.minima)
        if (entry.present())
            std::printf("min_ratio[%s] = %s  (f=%s g=%s)\n", name.c_str(),
                        format_double(entry.ratio).c_str(), entry.f_hex.c_str(),
                        entry.g_hex.c_str());
    std::printf("harris_violations = %llu\n",
                static_cast<unsigned long long>(rep.harris_violations));
    std::printf("chvatal_violations = %llu (tight pairs: %llu)\n",
                static_cast<unsigned long long>(rep.chvatal_violations),
                static_cast<unsigned long long>(rep.chvatal_tight));

    ctx.manifest.parameters = {{"n", n},
                               {"mode", to_string(mode)},
                               {"budget", budget},
                               {"normalization", to_string(norm)},
                               {"seed", seed}};
    ctx.manifest.payload = scan_report_json(rep);
    const std::uint64_t violations = rep.harris_violations + rep.chvatal_violations;
    ctx.manifest.failed = static_cast<int>(std::min<std::uint64_t>(violations, 1000));
    if (violations == 0) ctx.manifest.passed = 1;
    return ctx.finish(common.out);
}

int cmd_search(int n, const std::string& objective_name, std::uint64_t iterations,
               double t0, double cooling, const std::string& norm_name,
               const CommonOpts& common) {
    RunContext ctx("search", !common.no_timestamps);
    if (n < 2 || n > 6) throw std::invalid_argument("search: n must be in [2,6]");
    const RatioObjective objective = objective_from_string(objective_name);
    const Normalization norm = normalization_from_string(norm_name);
    AnnealSchedule schedule;
    if (iterations > 0) schedule.iterations = iterations;
    if (t0 > 0) schedule.t0 = t0;
    if (cooling > 0) schedule.cooling = cooling;
    const std::uint64_t seed = resolve_seed(common);
    const AnnealReport rep = anneal_search(n, objective, schedule, seed, norm);
    std::printf("best_ratio[%s] = %s  (f=%s g=%s, %llu pairs)\n",
                to_string(objective).c_str(), format_double(rep.best_ratio).c_str(),
                rep.f_hex.c_str(), rep.g_hex.c_str(),
                static_cast<unsigned long long>(rep.pairs_examined));
    ctx.manifest.parameters = {{"n", n},
                               {"objective", to_string(objective)},
                               {"iterations", schedule.iterations},
                               {"t0", schedule.t0},
                               {"cooling", schedule.cooling},
                               {"normalization", to_string(norm)},
                               {"seed", seed}};
    ctx.manifest.payload = {{"best_ratio", rep.best_ratio},
                            {"start_ratio", rep.start_ratio},
                            {"f", rep.f_hex},
                            {"g", rep.g_hex},
                            {"pairs_examined", rep.pairs_examined}};
    ctx.manifest.passed = 1;
    return ctx.finish(common.out);
}

int cmd_gaussian(int n, const std::string& f_path, const std::string& g_path,
                 int quad_order, double tol, const CommonOpts& common) {
    RunContext ctx("gaussian", !common.no_timestamps);
    if (tol <= 0) tol = 1e-8;
    nlohmann::json payload;
    int failed = 0, passed = 0;
    double worst = 0.0;
    auto absorb = [&](const BridgeReport& rep) {
        const double dev =
            std::max({rep.dev_cor_exact, rep.dev_cor_quad, rep.dev_m1, rep.dev_m1_closed,
                      rep.dev_m2, rep.dev_m2_closed});
        worst = std::max(worst, dev);
        if (dev <= tol)
            ++passed;
        else
            ++failed;
        return dev;
    };
    if (!f_path.empty() || !g_path.empty()) {
        if (f_path.empty() || g_path.empty())
            throw std::invalid_argument("gaussian: provide both --f and --g, or neither");
        const BooleanFunction f = BooleanFunction::load(f_path);
        const BooleanFunction g = BooleanFunction::load(g_path);
        const BridgeReport rep = bridge_report(f, g, quad_order);
        absorb(rep);
        payload["pair"] = {{"f", f.to_hex()},
                           {"g", g.to_hex()},
                           {"cor_boolean", rational_json(rep.cor_boolean)},
                           {"cor_gauss", rational_json(rep.cor_gauss)},
                           {"cor_gauss_quad", rep.cor_gauss_quad},
                           {"dev_cor_exact", rep.dev_cor_exact},
                           {"dev_cor_quad", rep.dev_cor_quad},
                           {"dev_m1", rep.dev_m1},
                           {"dev_m2", rep.dev_m2}};
    } else {
        if (n < 1 || n > 3)
            throw std::invalid_argument("gaussian: n must be in [1,3] for the full sweep");
        const BridgeSweep sweep = bridge_sweep(n, quad_order, common.workers);
        worst = sweep.worst();
        if (worst <= tol)
            ++passed;
        else
            ++failed;
        payload["pairs"] = sweep.pairs;
        payload["functions"] = sweep.functions;
        payload["dev_cor_exact"] = sweep.dev_cor_exact;
        payload["dev_cor_quad"] = sweep.dev_cor_quad;
        payload["dev_m1"] = sweep.dev_m1;
        payload["dev_m2"] = sweep.dev_m2;
    }
    payload["tolerance"] = tol;
    payload["worst_deviation"] = worst;
    std::printf("worst_deviation = %s (tolerance %s)\n", format_double(worst).c_str(),
                format_double(tol).c_str());
    ctx.manifest.parameters = {{"n", n},
                               {"f", f_path},
                               {"g", g_path},
                               {"quad_order", quad_order},
                               {"tol", tol}};
    ctx.manifest.payload = payload;
    ctx.manifest.failed = failed;
    ctx.manifest.passed = passed > 0 && failed == 0 ? 1 : 0;
    return ctx.finish(common.out);
}

int cmd_simulate(const std::string& f_spec, const std::string& g_spec,
                 const std::string& grid_spec, std::uint64_t paths,
                 const std::string& csv_path, const std::string& plot_path,
                 const CommonOpts& common) {
    RunContext ctx("simulate", !common.no_timestamps);
    const GaussianFunctional f = f_spec.empty()
                                     ? GaussianFunctional::sign_composed(
                                           BooleanFunction::dictator(1, 1), true)
                                     : GaussianFunctional::load(f_spec);
    const GaussianFunctional g = g_spec.empty() ? f : GaussianFunctional::load(g_spec);
    const TimeGrid grid = TimeGrid::parse(grid_spec);
    const std::uint64_t seed = resolve_seed(common);
    const ProcessSuite suite =
        run_process_suite(f, g, grid, paths, seed, common.workers);

    for (const auto& c : suite.checks)
        std::printf("%-18s %s  value=%s allowance=%s %s\n", c.name.c_str(),
                    c.status == 0   ? "pass"
                    : c.status == 1 ? "FAIL"
                                    : "inconclusive",
                    format_double(c.value).c_str(), format_double(c.allowance).c_str(),
                    c.detail.c_str());

    if (!csv_path.empty()) {
        std::ostringstream csv;
        write_moment_csv(suite, csv);
        emit_output(ctx.manifest, csv_path, csv.str());
    }
    if (!plot_path.empty()) {
        std::vector<std::array<double, 3>> rows;
        for (std::size_t j = 0; j < suite.grid.size(); ++j)
            rows.push_back({suite.grid.times[j], suite.p0[j].mean, suite.p0[j].se});
        emit_output(ctx.manifest, plot_path, plotdata_text(rows));
    }

    ctx.manifest.parameters = {{"f", f.describe()},
                               {"g", g.describe()},
                               {"grid", grid_spec},
                               {"paths", paths},
                               {"seed", seed}};
    ctx.manifest.payload = process_suite_json(suite);
    ctx.manifest.failed = suite.fails;
    ctx.manifest.inconclusive = suite.inconclusive;
    if (suite.fails == 0 && suite.inconclusive == 0) ctx.manifest.passed = 1;
    return ctx.finish(common.out);
}

int cmd_levelcheck(const std::string& suite_name, int cases, const CommonOpts& common) {
    RunContext ctx("levelcheck", !common.no_timestamps);
    const LevelSuite suite = parse_level_suite(suite_name);
    if (cases <= 0) throw std::invalid_argument("levelcheck: --cases must be positive");
    const std::uint64_t seed = resolve_seed(common);
    const LevelSuiteResult res = run_level_suite(suite, cases, seed, common.workers);
    std::printf("suite=%s cases=%d violations=%d skipped=%d worst_margin=%s\n",
                res.suite.c_str(), res.cases, res.violations, res.skipped,
                format_double(res.worst_margin).c_str());
    std::printf("max_tolerated_constant = %s\n",
                format_double(res.max_tolerated_constant).c_str());
    if (suite == LevelSuite::Lvl21)
        std::printf("max_upper_ratio = %s\n", format_double(res.max_upper_ratio).c_str());
    ctx.manifest.parameters = {{"suite", res.suite}, {"cases", cases}, {"seed", seed}};
    ctx.manifest.payload = res.to_json();
    ctx.manifest.failed = res.violations;
    if (res.violations == 0) ctx.manifest.passed = 1;
    return ctx.finish(common.out);
}

int cmd_gronwall(int cases, int perturbations, double dt, const std::string& csv_path,
                 const CommonOpts& common) {
    RunContext ctx("gronwall", !common.no_timestamps);
    if (!(dt > 0 && dt <= 0.1)) throw std::invalid_argument("gronwall: --dt out of range");
    const std::uint64_t seed = resolve_seed(common);
    const GronwallSweep sweep =
        run_gronwall_sweep(cases, perturbations, dt, seed, common.workers);
    const double ratio = richardson_ratio(1.0, 0.5, 0.0, 0.02, 0.3);
    std::printf("cases=%d perturbations=%d violations=%d rejected=%d clipped=%d\n",
                sweep.cases, sweep.perturbations, sweep.violations, sweep.rejected,
                sweep.clipped);
    std::printf("worst_margin=%s min_crossing_ratio=%s richardson=%s\n",
                format_double(sweep.worst_margin).c_str(),
                format_double(sweep.min_crossing_ratio).c_str(),
                format_double(ratio).c_str());
    if (!csv_path.empty()) {
        const DecayTrajectory traj =
            integrate_extremal(1.0, 0.5, 0.0, dt, 3.0 * lemma_horizon(1.0, 0.5, 0.0));
        std::ostringstream csv;
        write_trajectory_csv(csv, traj);
        emit_output(ctx.manifest, csv_path, csv.str());
    }
    ctx.manifest.parameters = {{"cases", cases},
                               {"perturbations", perturbations},
                               {"dt", dt},
                               {"seed", seed}};
    ctx.manifest.payload = sweep.to_json();
    ctx.manifest.payload["richardson_ratio"] = ratio;
    ctx.manifest.failed = sweep.violations;
    if (sweep.violations == 0) ctx.manifest.passed = 1;
    return ctx.finish(common.out);
}

int cmd_report(const std::string& in_path) {
    std::ifstream in(in_path);
    if (!in) throw std::invalid_argument("report: cannot open '" + in_path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument("report: '" + in_path + "' is not JSON: " + e.what());
    }
    const std::vector<std::string> problems = validate_report(j);
    if (!problems.empty()) {
        for (const auto& p : problems) std::fprintf(stderr, "schema: %s\n", p.c_str());
        return kExitUsage;
    }
    const auto& counts = j["counts"];
    std::printf("subcommand = %s\n", j["subcommand"].get<std::string>().c_str());
    std::printf("passed = %d, failed = %d, inconclusive = %d\n",
                counts["passed"].get<int>(), counts["failed"].get<int>(),
                counts["inconclusive"].get<int>());
    for (const auto& o : j["outputs"])
        std::printf("output %s digest %s\n", o["path"].get<std::string>().c_str(),
                    o["digest"].get<std::string>().c_str());
    std::printf("schema ok\n");
    return kExitPass;
}

}  // namespace

int run_cli(std::vector<std::string> args) {
    CLI::App app{"correlation-inequality workbench"};
    app.require_subcommand(1);
    app.fallthrough();

    CommonOpts common;
    app.add_option("--seed", common.seed, "master seed (fallback: CORRBENCH_SEED, then 1)")
        ->each([&common](const std::string&) { common.seed_set = true; });
    app.add_option("--workers", common.workers, "worker thread count")
        ->check(CLI::Range(1, 256));
    app.add_option("--out", common.out, "write the run manifest to this path");
    app.add_flag("--no-timestamps", common.no_timestamps,
                 "omit the timing block from the manifest");

    // analyze
    auto* analyze = app.add_subcommand("analyze", "evaluate every bound for one pair");
    std::string f_path, g_path, norm_name = "std";
    analyze->add_option("--f", f_path, "Boolean function file (JSON)")->required();
    analyze->add_option("--g", g_path, "Boolean function file (JSON)")->required();
    analyze->add_option("--normalization", norm_name, "std or paper");

    // enumerate
    auto* enumerate = app.add_subcommand("enumerate", "list monotone functions");
    int enum_n = 0;
    bool count_only = false;
    enumerate->add_option("--n", enum_n, "arity")->required();
    enumerate->add_flag("--count-only", count_only, "print only the count");

    // scan
    auto* scan = app.add_subcommand("scan", "pair scan with minima and counterexample hunt");
    int scan_n = 0;
    std::string scan_mode = "exhaustive", scan_norm = "std", dump_pairs;
    std::uint64_t scan_budget = 0;
    scan->add_option("--n", scan_n, "arity")->required();
    scan->add_option("--mode", scan_mode, "exhaustive or sampled");
    scan->add_option("--budget", scan_budget, "pair budget (sampled mode)");
    scan->add_option("--normalization", scan_norm, "std or paper");
    scan->add_option("--dump-pairs", dump_pairs, "per-pair CSV (n <= 3)");

    // search
    auto* search = app.add_subcommand("search", "annealing search for small ratios");
    int search_n = 0;
    std::string objective = "tal", search_norm = "std";
    std::uint64_t iterations = 0;
    double t0 = 0, cooling = 0;
    search->add_option("--n", search_n, "arity")->required();
    search->add_option("--objective", objective, "tal|kms|main_tal|main_coord");
    search->add_option("--iterations", iterations, "annealing steps");
    search->add_option("--t0", t0, "initial temperature");
    search->add_option("--cooling", cooling, "geometric cooling factor");
    search->add_option("--normalization", search_norm, "std or paper");

    // gaussian
    auto* gaussian = app.add_subcommand("gaussian", "sign-composition bridge checks");
    int gauss_n = 2, quad_order = 12;
    double gauss_tol = 1e-8;
    std::string gauss_f, gauss_g;
    gaussian->add_option("--n", gauss_n, "sweep all monotone pairs at this arity");
    gaussian->add_option("--f", gauss_f, "Boolean function file (single pair)");
    gaussian->add_option("--g", gauss_g, "Boolean function file (single pair)");
    gaussian->add_option("--quad-order", quad_order, "panel quadrature order")
        ->check(CLI::Range(2, 64));
    gaussian->add_option("--tol", gauss_tol, "deviation tolerance");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "martingale moment curves");
    std::string sim_f, sim_g, grid_spec = "0:1:0.05", csv_path, plot_path;
    std::uint64_t paths = 10000;
    simulate->add_option("--f", sim_f, "functional spec (JSON file or sign:<fn.json>)");
    simulate->add_option("--g", sim_g, "functional spec; defaults to --f");
    simulate->add_option("--grid", grid_spec, "time grid start:stop:step");
    simulate->add_option("--paths", paths, "Monte Carlo paths");
    simulate->add_option("--csv", csv_path, "write t,k,estimate,se curves here");
    simulate->add_option("--plotdata", plot_path, "write x y yerr rows for p0");

    // levelcheck
    auto* levelcheck = app.add_subcommand("levelcheck", "randomized inequality suites");
    std::string suite_name;
    int cases = 1000;
    levelcheck->add_option("--suite", suite_name, "lvl21|transport|geom|level13")
        ->required();
    levelcheck->add_option("--cases", cases, "number of checks");

    // gronwall
    auto* gronwall = app.add_subcommand("gronwall", "decay-ODE comparison sweep");
    int gr_cases = 1000, gr_pert = 1000;
    double gr_dt = 1e-4;
    std::string gr_csv;
    gronwall->add_option("--cases", gr_cases, "parameter tuples (>= pinned grid)");
    gronwall->add_option("--perturbations", gr_pert, "perturbed trajectories");
    gronwall->add_option("--dt", gr_dt, "integration step");
    gronwall->add_option("--csv", gr_csv, "write the K=1 reference trajectory");

    // report
    auto* report = app.add_subcommand("report", "validate and summarize a manifest");
    std::string report_in;
    report->add_option("--in", report_in, "manifest path")->required();

    std::vector<const char*> argv;
    argv.push_back("corrbench");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*analyze) return cmd_analyze(f_path, g_path, norm_name, common);
        if (*enumerate) return cmd_enumerate(enum_n, count_only, common);
        if (*scan)
            return cmd_scan(scan_n, scan_mode, scan_budget, scan_norm, dump_pairs, common);
        if (*search)
            return cmd_search(search_n, objective, iterations, t0, cooling, search_norm,
                              common);
        if (*gaussian)
            return cmd_gaussian(gauss_n, gauss_f, gauss_g, quad_order, gauss_tol, common);
        if (*simulate)
            return cmd_simulate(sim_f, sim_g, grid_spec, paths, csv_path, plot_path, common);
        if (*levelcheck) return cmd_levelcheck(suite_name, cases, common);
        if (*gronwall) return cmd_gronwall(gr_cases, gr_pert, gr_dt, gr_csv, common);
        if (*report) return cmd_report(report_in);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace corrbench
