#pragma once

#include <optional>
#include <string>
#include <vector>

#include "corrbench/boolean.hpp"

namespace corrbench {

enum class Normalization { Std, Paper };

std::string to_string(Normalization n);
Normalization normalization_from_string(const std::string& s);

struct CoordTerm {
    Rational inf_product;  // I_i(f) * I_i(g) under the selected normalization
    Rational v_dot;        // <V_i(f), V_i(g)>
};

// Evaluation of every correlation lower bound with the universal constant
// set to 1. Degenerate conventions:
//   * x log(e/x) is extended by 0 at x = 0;
//   * a min-branch with zero denominator is +infinity;
//   * a branch whose log argument drops below 1 (possible only under the
//     paper normalization, where m1 can reach 4) is dropped as invalid, and
//     if no branch of a bound survives, the bound is flagged vacuous
//     (rhs = 0, no ratio).
struct PairBoundReport {
    Normalization normalization = Normalization::Std;
    Rational cor;
    Rational m1;                    // sum_i I_i(f) I_i(g)
    Rational m2;                    // <V(f), V(g)>_HS
    std::vector<CoordTerm> per_coord;

    double rhs_tal = 0, rhs_kms = 0, rhs_main_tal = 0, rhs_main_coord = 0;
    bool vacuous_tal = false, vacuous_main_tal = false, vacuous_main_coord = false;
    std::optional<double> ratio_tal, ratio_kms, ratio_main_tal, ratio_main_coord;

    std::optional<double> rhs_symm, ratio_symm;       // g antipodal only
    std::optional<double> chvatal_rhs, chvatal_ratio; // g antipodal monotone; std influences
    bool chvatal_trivial = false;                     // min influence 0, bound vacuously true
    bool chvatal_violated = false;
    std::optional<double> remark_constant;            // m2 / (m1 log(e/m1)) when defined

    bool f_monotone = false, g_monotone = false, g_antipodal = false;
};

// Individual bound formulas (c = 1). All take exact spectra.
double rhs_talagrand(const SpectralSummary& sf, const SpectralSummary& sg,
                     Normalization norm = Normalization::Std);
double rhs_kms(const SpectralSummary& sf, const SpectralSummary& sg,
               Normalization norm = Normalization::Std);
double rhs_main_tal(const SpectralSummary& sf, const SpectralSummary& sg,
                    Normalization norm = Normalization::Std);
double rhs_main_coord(const SpectralSummary& sf, const SpectralSummary& sg,
                      Normalization norm = Normalization::Std);
// Requires antipodal g (throws otherwise).
double rhs_symm(const SpectralSummary& sf, const SpectralSummary& sg, bool g_antipodal,
                Normalization norm = Normalization::Std);

Rational m1_value(const SpectralSummary& sf, const SpectralSummary& sg, Normalization norm);
Rational m2_value(const SpectralSummary& sf, const SpectralSummary& sg);

// Full per-pair evaluation; needs the functions for Cor and the predicates.
PairBoundReport pair_bound_report(const BooleanFunction& f, const BooleanFunction& g,
                                  Normalization norm = Normalization::Std);

}  // namespace corrbench
