#include "corrbench/scan.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <fstream>

#include "corrbench/enumeration.hpp"
#include "corrbench/parallel.hpp"
#include "corrbench/rng.hpp"

namespace corrbench {

std::string to_string(ScanMode m) {
    return m == ScanMode::Exhaustive ? "exhaustive" : "sampled";
}

FuncSpec make_func_spec(const BooleanFunction& f) {
    FuncSpec s;
    s.table = f.words()[0];
    s.sum = static_cast<std::int32_t>(f.ones_count());
    s.antipodal = is_antipodal(f);
    const int n = f.n();
    s.minpiv = std::numeric_limits<std::int16_t>::max();
    for (int i = 0; i < n; ++i) {
        s.piv[i] = static_cast<std::int16_t>(pivotal_count(f, i + 1));
        s.minpiv = std::min(s.minpiv, s.piv[i]);
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            auto v = static_cast<std::int16_t>(v_reduced(f, i + 1, j + 1));
            s.vred[i][j] = v;
            s.vred[j][i] = v;
        }
    return s;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_e_over(double x) { return 1.0 - std::log(x); }

// All bound formulas depend on the pair only through small integer
// numerators, so the transcendental parts are precomputed once. Every table
// entry reproduces bit-for-bit the expressions in bounds.cpp (the operands
// are exact dyadics in both pipelines).
struct RatioTables {
    int n = 0;
    std::int32_t h = 0;        // 2^{n-1}
    double iscale = 0;         // influence numerator -> value
    double qscale = 0;         // influence product numerator -> value
    double vscale = 0;         // vred product numerator -> value (1/4^{n-2})
    double corscale = 0;       // cor numerator -> value (1/4^n)
    std::vector<double> rhs_tal;   // [m1_num], 0 when zero/vacuous
    std::vector<double> mt_b1;     // [m1_num], -1 sentinel when log arg <= 1
    std::vector<double> symm;      // [m1_num]
    std::vector<double> m1_log;    // [m1_num] m1*log(e/m1), -1 when undefined
    std::vector<double> coord_b1;  // [pf*pg], -1 sentinel
    std::vector<double> kms;       // [pf*(h+1)+pg]
};

RatioTables make_tables(int n, Normalization norm) {
    RatioTables t;
    t.n = n;
    t.h = 1 << (n - 1);
    double hinv = 1.0 / t.h;
    t.iscale = norm == Normalization::Std ? hinv : 2.0 * hinv;
    t.qscale = t.iscale * t.iscale;
    t.vscale = n >= 2 ? 1.0 / double(std::int64_t(1) << (2 * n - 4)) : 0.0;
    t.corscale = 1.0 / double(std::int64_t(1) << (2 * n));

    std::int32_t m1max = n * t.h * t.h;
    t.rhs_tal.resize(m1max + 1);
    t.mt_b1.resize(m1max + 1);
    t.symm.resize(m1max + 1);
    t.m1_log.resize(m1max + 1);
    t.rhs_tal[0] = t.mt_b1[0] = t.symm[0] = 0.0;
    t.m1_log[0] = -1.0;
    for (std::int32_t m = 1; m <= m1max; ++m) {
        double m1 = m * t.qscale;
        double l = log_e_over(m1);
        t.rhs_tal[m] = l > 0.0 ? m1 / l : 0.0;
        t.mt_b1[m] = l > 0.0 ? m1 / std::sqrt(l) : -1.0;
        t.symm[m] = m1 / std::sqrt(std::log(2.0) + log_e_over(m1));
        t.m1_log[m] = l > 0.0 ? m1 * l : -1.0;
    }

    std::int32_t pmax = t.h * t.h;
    t.coord_b1.resize(pmax + 1);
    t.coord_b1[0] = 0.0;
    for (std::int32_t p = 1; p <= pmax; ++p) {
        double q = p * t.qscale;
        double l = log_e_over(q);
        t.coord_b1[p] = l > 0.0 ? 1.0 / std::sqrt(l) : -1.0;
    }

    t.kms.assign(std::size_t(t.h + 1) * (t.h + 1), 0.0);
    for (std::int32_t pf = 1; pf <= t.h; ++pf)
        for (std::int32_t pg = 1; pg <= t.h; ++pg) {
            double a = pf * t.iscale, b = pg * t.iscale;
            t.kms[std::size_t(pf) * (t.h + 1) + pg] =
                a * b / std::sqrt(log_e_over(a) * log_e_over(b));
        }
    return t;
}

struct MinAcc {
    double ratio = kInf;
    std::uint32_t f = 0, g = 0;
    std::uint64_t considered = 0, vacuous = 0;

    void offer(double r, std::uint32_t fi, std::uint32_t gi) {
        ++considered;
        if (r < ratio) {
            ratio = r;
            f = fi;
            g = gi;
        }
    }
    void merge(const MinAcc& o) {
        considered += o.considered;
        vacuous += o.vacuous;
        if (o.ratio < ratio) {
            ratio = o.ratio;
            f = o.f;
            g = o.g;
        }
    }
};

struct BlockAcc {
    std::uint64_t pairs = 0;
    MinAcc tal, kms, main_tal, main_coord, symm;
    std::uint64_t harris = 0;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> harris_ex;
    std::uint64_t chv_pairs = 0, chv_viol = 0, chv_triv = 0, chv_tight = 0;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> chv_ex;
    double remark = -kInf;
    std::uint32_t remark_f = 0, remark_g = 0;

    void merge(const BlockAcc& o) {
        pairs += o.pairs;
        tal.merge(o.tal);
        kms.merge(o.kms);
        main_tal.merge(o.main_tal);
        main_coord.merge(o.main_coord);
        symm.merge(o.symm);
        harris += o.harris;
        harris_ex.insert(harris_ex.end(), o.harris_ex.begin(), o.harris_ex.end());
        chv_pairs += o.chv_pairs;
        chv_viol += o.chv_viol;
        chv_triv += o.chv_triv;
        chv_tight += o.chv_tight;
        chv_ex.insert(chv_ex.end(), o.chv_ex.begin(), o.chv_ex.end());
        if (o.remark > remark) {
            remark = o.remark;
            remark_f = o.remark_f;
            remark_g = o.remark_g;
        }
    }
};

void eval_pair(const RatioTables& t, const FuncSpec& a, const FuncSpec& b,
               std::uint32_t fi, std::uint32_t gi, BlockAcc& acc) {
    const int n = t.n;
    ++acc.pairs;

    std::int64_t sfg = std::popcount(a.table & b.table);
    std::int64_t cor_num = (sfg << n) - std::int64_t(a.sum) * b.sum;
    if (cor_num < 0) {
        ++acc.harris;
        if (acc.harris_ex.size() < 16) acc.harris_ex.emplace_back(fi, gi);
    }
    double cor = cor_num * t.corscale;

    std::int32_t m1_num = 0;
    for (int i = 0; i < n; ++i) m1_num += std::int32_t(a.piv[i]) * b.piv[i];

    // Talagrand-form bound.
    {
        double rhs = t.rhs_tal[m1_num];
        if (rhs > 0.0) acc.tal.offer(cor / rhs, fi, gi);
        else if (m1_num > 0) ++acc.tal.vacuous;
    }

    // Coordinate-wise log bound.
    {
        double rhs = 0.0;
        for (int i = 0; i < n; ++i)
            if (a.piv[i] && b.piv[i])
                rhs += t.kms[std::size_t(a.piv[i]) * (t.h + 1) + b.piv[i]];
        if (rhs > 0.0) acc.kms.offer(cor / rhs, fi, gi);
    }

    // Pairwise-interaction bounds need the vred dot products.
    std::int32_t m2_num = 0;
    std::array<std::int32_t, 6> vdot{};
    for (int i = 0; i < n; ++i) {
        std::int32_t d = 0;
        for (int j = 0; j < n; ++j) d += std::int32_t(a.vred[i][j]) * b.vred[i][j];
        vdot[i] = d;
        m2_num += d;
    }
    double m1 = m1_num * t.qscale;
    double m2 = m2_num * t.vscale;

    {
        double rhs;
        if (m1_num == 0) {
            rhs = 0.0;
        } else {
            double b1 = t.mt_b1[m1_num] < 0.0 ? kInf : t.mt_b1[m1_num];
            double b2 = m2 == 0.0 ? kInf : m1 * m1 / std::fabs(m2);
            double r = std::min(b1, b2);
            rhs = std::isfinite(r) ? r : 0.0;
        }
        if (rhs > 0.0) acc.main_tal.offer(cor / rhs, fi, gi);
        else if (m1_num > 0) ++acc.main_tal.vacuous;
    }

    {
        double rhs = 0.0;
        bool vac = false;
        for (int i = 0; i < n; ++i) {
            std::int32_t p = std::int32_t(a.piv[i]) * b.piv[i];
            if (p == 0) continue;
            double q = p * t.qscale;
            double v = vdot[i] * t.vscale;
            double b1 = t.coord_b1[p] < 0.0 ? kInf : t.coord_b1[p];
            double b2 = v == 0.0 ? kInf : q / std::fabs(v);
            double m = std::min(b1, b2);
            if (!std::isfinite(m)) {
                vac = true;
                break;
            }
            rhs += q * m;
        }
        if (vac) ++acc.main_coord.vacuous;
        else if (rhs > 0.0) acc.main_coord.offer(cor / rhs, fi, gi);
    }

    if (b.antipodal) {
        double rhs = t.symm[m1_num];
        if (rhs > 0.0) acc.symm.offer(cor / rhs, fi, gi);

        // Conjectured quarter-min-influence bound, exact integer test
        // (std influences): cor_num < minpiv * 2^{n-1} iff violated.
        ++acc.chv_pairs;
        if (a.minpiv == 0) {
            ++acc.chv_triv;
        } else {
            std::int64_t rhs_num = std::int64_t(a.minpiv) << (n - 1);
            if (cor_num < rhs_num) {
                ++acc.chv_viol;
                if (acc.chv_ex.size() < 16) acc.chv_ex.emplace_back(fi, gi);
            } else if (cor_num == rhs_num) {
                ++acc.chv_tight;
            }
        }
    }

    if (t.m1_log[m1_num] > 0.0) {
        double rc = m2 / t.m1_log[m1_num];
        if (rc > acc.remark) {
            acc.remark = rc;
            acc.remark_f = fi;
            acc.remark_g = gi;
        }
    }
}

std::vector<FuncSpec> build_specs(int n, std::vector<std::string>* hex) {
    std::vector<FuncSpec> specs;
    enumerate_monotone(n, [&](const BooleanFunction& f) {
        specs.push_back(make_func_spec(f));
        hex->push_back(f.to_hex());
        return true;
    });
    return specs;
}

}  // namespace

ScanReport scan_pairs(int n, ScanMode mode, std::uint64_t budget, std::uint64_t seed,
                      Normalization norm, int workers) {
    if (mode == ScanMode::Exhaustive && (n < 1 || n > 5))
        throw std::invalid_argument("exhaustive scan requires 1 <= n <= 5");
    if (mode == ScanMode::Sampled && (n < 1 || n > 6))
        throw std::invalid_argument("sampled scan requires 1 <= n <= 6");
    if (mode == ScanMode::Sampled && budget == 0)
        throw std::invalid_argument("sampled scan requires a positive budget");

    auto t0 = std::chrono::steady_clock::now();
    RatioTables tables = make_tables(n, norm);

    ScanReport rep;
    rep.n = n;
    rep.mode = mode;
    rep.norm = norm;
    rep.seed = seed;
    rep.workers = std::max(1, workers);

    std::vector<BlockAcc> blocks;
    std::vector<std::string> hex;       // exhaustive: per enumerated function
    std::vector<std::string> pair_hex;  // sampled: per examined function, 2 per pair

    if (mode == ScanMode::Exhaustive) {
        std::vector<FuncSpec> specs = build_specs(n, &hex);
        const std::uint64_t count = specs.size();
        const std::uint64_t total = count * count;
        const std::uint64_t limit = budget == 0 ? total : std::min(budget, total);
        rep.partial = limit < total;

        const std::uint32_t rows_per_block = 32;
        std::size_t nblocks = (count + rows_per_block - 1) / rows_per_block;
        blocks.resize(nblocks);
        run_blocks(nblocks, rep.workers, [&](std::size_t bidx) {
            BlockAcc& acc = blocks[bidx];
            std::uint32_t f0 = static_cast<std::uint32_t>(bidx * rows_per_block);
            std::uint32_t f1 = static_cast<std::uint32_t>(
                std::min<std::uint64_t>(count, f0 + rows_per_block));
            for (std::uint32_t fi = f0; fi < f1; ++fi) {
                std::uint64_t base = std::uint64_t(fi) * count;
                if (base >= limit) return;
                std::uint32_t gmax = static_cast<std::uint32_t>(
                    std::min<std::uint64_t>(count, limit - base));
                const FuncSpec& a = specs[fi];
                for (std::uint32_t gi = 0; gi < gmax; ++gi)
                    eval_pair(tables, a, specs[gi], fi, gi, acc);
            }
        });
        BlockAcc total_acc;
        for (const auto& b : blocks) total_acc.merge(b);
        blocks.assign(1, total_acc);
    } else {
        const std::uint64_t pair_block = 256;
        std::size_t nblocks = (budget + pair_block - 1) / pair_block;
        blocks.resize(nblocks);
        std::vector<std::vector<std::string>> block_hex(nblocks);
        std::int64_t steps = default_chain_steps(n);
        run_blocks(nblocks, rep.workers, [&](std::size_t bidx) {
            BlockAcc& acc = blocks[bidx];
            std::uint64_t k0 = bidx * pair_block;
            std::uint64_t k1 = std::min<std::uint64_t>(budget, k0 + pair_block);
            for (std::uint64_t k = k0; k < k1; ++k) {
                BooleanFunction f = random_monotone(n, derive_seed(seed, 2 * k), steps);
                BooleanFunction g = random_monotone(n, derive_seed(seed, 2 * k + 1), steps);
                std::uint32_t fi = static_cast<std::uint32_t>(2 * k);
                std::uint32_t gi = static_cast<std::uint32_t>(2 * k + 1);
                block_hex[bidx].push_back(f.to_hex());
                block_hex[bidx].push_back(g.to_hex());
                eval_pair(tables, make_func_spec(f), make_func_spec(g), fi, gi, acc);
            }
        });
        for (auto& bh : block_hex)
            for (auto& s : bh) pair_hex.push_back(std::move(s));
        BlockAcc total_acc;
        for (const auto& b : blocks) total_acc.merge(b);
        blocks.assign(1, total_acc);
    }

    const BlockAcc& acc = blocks[0];
    auto hex_of = [&](std::uint32_t idx) -> std::string {
        return mode == ScanMode::Exhaustive ? hex[idx] : pair_hex[idx];
    };
    auto to_entry = [&](const MinAcc& m) {
        MinEntry e;
        e.ratio = m.ratio;
        e.considered = m.considered;
        e.vacuous = m.vacuous;
        if (m.considered > 0 && m.ratio != kInf) {
            e.f_hex = hex_of(m.f);
            e.g_hex = hex_of(m.g);
        }
        return e;
    };
    rep.pairs_examined = acc.pairs;
    rep.minima["tal"] = to_entry(acc.tal);
    rep.minima["kms"] = to_entry(acc.kms);
    rep.minima["main_tal"] = to_entry(acc.main_tal);
    rep.minima["main_coord"] = to_entry(acc.main_coord);
    rep.minima["symm"] = to_entry(acc.symm);
    rep.harris_violations = acc.harris;
    for (auto& [fi, gi] : acc.harris_ex) rep.harris_examples.push_back({hex_of(fi), hex_of(gi)});
    rep.chvatal_pairs = acc.chv_pairs;
    rep.chvatal_violations = acc.chv_viol;
    rep.chvatal_trivial = acc.chv_triv;
    rep.chvatal_tight = acc.chv_tight;
    for (auto& [fi, gi] : acc.chv_ex) rep.chvatal_examples.push_back({hex_of(fi), hex_of(gi)});
    rep.remark_max = acc.remark;
    if (acc.remark > -kInf) {
        rep.remark_f_hex = hex_of(acc.remark_f);
        rep.remark_g_hex = hex_of(acc.remark_g);
    }
    rep.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

void dump_pairs_csv(int n, Normalization norm, const std::string& path) {
    if (n > 3) throw std::invalid_argument("--dump-pairs supports n <= 3");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "f_hex,g_hex,cor_exact,cor,m1,m2,rhs_tal,rhs_kms,rhs_main_tal,rhs_main_coord,"
           "rhs_symm,ratio_tal,ratio_kms,ratio_main_tal,ratio_main_coord,ratio_symm,"
           "chvatal_ratio\n";
    std::vector<BooleanFunction> fs;
    enumerate_monotone(n, [&](const BooleanFunction& f) {
        fs.push_back(f);
        return true;
    });
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    auto opt = [&](const std::optional<double>& v) { return v ? num(*v) : std::string(); };
    for (const auto& f : fs)
        for (const auto& g : fs) {
            PairBoundReport r = pair_bound_report(f, g, norm);
            out << f.to_hex() << ',' << g.to_hex() << ',' << to_string(r.cor) << ','
                << num(to_double(r.cor)) << ',' << num(to_double(r.m1)) << ','
                << num(to_double(r.m2)) << ',' << num(r.rhs_tal) << ',' << num(r.rhs_kms)
                << ',' << num(r.rhs_main_tal) << ',' << num(r.rhs_main_coord) << ','
                << opt(r.rhs_symm) << ',' << opt(r.ratio_tal) << ',' << opt(r.ratio_kms) << ','
                << opt(r.ratio_main_tal) << ',' << opt(r.ratio_main_coord) << ','
                << opt(r.ratio_symm) << ',' << opt(r.chvatal_ratio) << '\n';
        }
}

}  // namespace corrbench
