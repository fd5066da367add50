#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "corrbench/bounds.hpp"

namespace corrbench {

enum class ScanMode { Exhaustive, Sampled };

std::string to_string(ScanMode m);

// Integer spectra of one function, every value an exact numerator:
// sum/2^n, piv/2^{n-1}, vred/2^{n-2}. Fits n <= 6.
struct FuncSpec {
    std::uint64_t table = 0;
    std::int32_t sum = 0;
    std::array<std::int16_t, 6> piv{};
    std::int16_t minpiv = 0;
    bool antipodal = false;
    std::array<std::array<std::int16_t, 6>, 6> vred{};
};

FuncSpec make_func_spec(const BooleanFunction& f);

struct MinEntry {
    double ratio = std::numeric_limits<double>::infinity();
    std::string f_hex, g_hex;
    std::uint64_t considered = 0;  // pairs with a defined ratio (rhs > 0)
    std::uint64_t vacuous = 0;     // pairs where the bound degenerated (paper norm)
    bool present() const { return ratio != std::numeric_limits<double>::infinity(); }
};

struct ScanReport {
    int n = 0;
    ScanMode mode = ScanMode::Exhaustive;
    Normalization norm = Normalization::Std;
    std::uint64_t seed = 0;
    int workers = 1;
    std::uint64_t pairs_examined = 0;
    bool partial = false;

    std::map<std::string, MinEntry> minima;  // tal, kms, main_tal, main_coord, symm

    std::uint64_t harris_violations = 0;
    std::vector<std::array<std::string, 2>> harris_examples;

    std::uint64_t chvatal_pairs = 0, chvatal_violations = 0;
    std::uint64_t chvatal_trivial = 0, chvatal_tight = 0;
    std::vector<std::array<std::string, 2>> chvatal_examples;

    double remark_max = -std::numeric_limits<double>::infinity();
    std::string remark_f_hex, remark_g_hex;

    double wall_seconds = 0;
};

// Exhaustive requires n <= 5; sampled draws `budget` chain-sampled pairs.
// In exhaustive mode budget = 0 means the full pair set; a smaller budget
// truncates and marks the report partial. Results are identical for any
// worker count.
ScanReport scan_pairs(int n, ScanMode mode, std::uint64_t budget, std::uint64_t seed,
                      Normalization norm, int workers);

// Per-pair CSV dump for n <= 3 (row per ordered monotone pair).
void dump_pairs_csv(int n, Normalization norm, const std::string& path);

}  // namespace corrbench
