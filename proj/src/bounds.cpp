#include "corrbench/bounds.hpp"

#include <cmath>
#include <limits>

namespace corrbench {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const std::vector<Rational>& influences(const SpectralSummary& s, Normalization norm) {
    return norm == Normalization::Std ? s.inf_std : s.inf_paper;
}

// log(e/x) for x > 0; caller handles x = 0.
double log_e_over(double x) { return 1.0 - std::log(x); }

}  // namespace

std::string to_string(Normalization n) {
    return n == Normalization::Std ? "std" : "paper";
}

Normalization normalization_from_string(const std::string& s) {
    if (s == "std") return Normalization::Std;
    if (s == "paper") return Normalization::Paper;
    throw std::invalid_argument("normalization must be 'std' or 'paper'");
}

Rational m1_value(const SpectralSummary& sf, const SpectralSummary& sg, Normalization norm) {
    const auto& fi = influences(sf, norm);
    const auto& gi = influences(sg, norm);
    Rational m1(0);
    for (std::size_t i = 0; i < fi.size(); ++i) m1 += fi[i] * gi[i];
    return m1;
}

Rational m2_value(const SpectralSummary& sf, const SpectralSummary& sg) {
    Rational m2(0);
    for (std::size_t i = 0; i < sf.V.size(); ++i)
        for (std::size_t j = 0; j < sf.V.size(); ++j) m2 += sf.V[i][j] * sg.V[i][j];
    return m2;
}

double rhs_talagrand(const SpectralSummary& sf, const SpectralSummary& sg, Normalization norm) {
    double m1 = to_double(m1_value(sf, sg, norm));
    if (m1 == 0.0) return 0.0;
    double l = log_e_over(m1);
    return l > 0.0 ? m1 / l : 0.0;
}

double rhs_kms(const SpectralSummary& sf, const SpectralSummary& sg, Normalization norm) {
    const auto& fi = influences(sf, norm);
    const auto& gi = influences(sg, norm);
    double s = 0.0;
    for (std::size_t i = 0; i < fi.size(); ++i) {
        double a = to_double(fi[i]), b = to_double(gi[i]);
        if (a == 0.0 || b == 0.0) continue;
        s += a * b / std::sqrt(log_e_over(a) * log_e_over(b));
    }
    return s;
}

double rhs_main_tal(const SpectralSummary& sf, const SpectralSummary& sg, Normalization norm) {
    double m1 = to_double(m1_value(sf, sg, norm));
    if (m1 == 0.0) return 0.0;
    double m2 = to_double(m2_value(sf, sg));
    double l = log_e_over(m1);
    double b1 = l > 0.0 ? m1 / std::sqrt(l) : kInf;
    double b2 = m2 == 0.0 ? kInf : m1 * m1 / std::fabs(m2);
    double r = std::min(b1, b2);
    return std::isfinite(r) ? r : 0.0;
}

double rhs_main_coord(const SpectralSummary& sf, const SpectralSummary& sg, Normalization norm) {
    const auto& fi = influences(sf, norm);
    const auto& gi = influences(sg, norm);
    double s = 0.0;
    for (std::size_t i = 0; i < fi.size(); ++i) {
        double q = to_double(fi[i]) * to_double(gi[i]);
        if (q == 0.0) continue;
        Rational vd(0);
        for (std::size_t j = 0; j < fi.size(); ++j) vd += sf.V[i][j] * sg.V[i][j];
        double v = to_double(vd);
        double l = log_e_over(q);
        double b1 = l > 0.0 ? 1.0 / std::sqrt(l) : kInf;
        double b2 = v == 0.0 ? kInf : q / std::fabs(v);
        double m = std::min(b1, b2);
        if (!std::isfinite(m)) return 0.0;  // vacuous term poisons the sum
        s += q * m;
    }
    return s;
}

double rhs_symm(const SpectralSummary& sf, const SpectralSummary& sg, bool g_antipodal,
                Normalization norm) {
    if (!g_antipodal) throw std::invalid_argument("rhs_symm requires antipodal g");
    double m1 = to_double(m1_value(sf, sg, norm));
    if (m1 == 0.0) return 0.0;
    return m1 / std::sqrt(std::log(2.0) + log_e_over(m1));
}

PairBoundReport pair_bound_report(const BooleanFunction& f, const BooleanFunction& g,
                                  Normalization norm) {
    if (f.n() != g.n()) throw std::invalid_argument("dimension mismatch");
    SpectralSummary sf = spectral_summary(f);
    SpectralSummary sg = spectral_summary(g);

    PairBoundReport r;
    r.normalization = norm;
    r.cor = correlation(f, g);
    r.m1 = m1_value(sf, sg, norm);
    r.m2 = m2_value(sf, sg);
    r.f_monotone = is_monotone(f);
    r.g_monotone = is_monotone(g);
    r.g_antipodal = is_antipodal(g);

    const auto& fi = influences(sf, norm);
    const auto& gi = influences(sg, norm);
    for (std::size_t i = 0; i < fi.size(); ++i) {
        Rational vd(0);
        for (std::size_t j = 0; j < fi.size(); ++j) vd += sf.V[i][j] * sg.V[i][j];
        r.per_coord.push_back({fi[i] * gi[i], vd});
    }

    double cor = to_double(r.cor);
    double m1 = to_double(r.m1);

    r.rhs_tal = rhs_talagrand(sf, sg, norm);
    r.vacuous_tal = m1 > 0.0 && r.rhs_tal == 0.0;
    r.rhs_kms = rhs_kms(sf, sg, norm);
    r.rhs_main_tal = rhs_main_tal(sf, sg, norm);
    r.vacuous_main_tal = m1 > 0.0 && r.rhs_main_tal == 0.0;
    r.rhs_main_coord = rhs_main_coord(sf, sg, norm);
    r.vacuous_main_coord = m1 > 0.0 && r.rhs_main_coord == 0.0;

    auto ratio = [&](double rhs) -> std::optional<double> {
        if (rhs > 0.0) return cor / rhs;
        return std::nullopt;
    };
    r.ratio_tal = ratio(r.rhs_tal);
    r.ratio_kms = ratio(r.rhs_kms);
    r.ratio_main_tal = ratio(r.rhs_main_tal);
    r.ratio_main_coord = ratio(r.rhs_main_coord);

    if (r.g_antipodal) {
        r.rhs_symm = rhs_symm(sf, sg, true, norm);
        r.ratio_symm = ratio(*r.rhs_symm);
        if (r.g_monotone) {
            // Conjectured bound Cor >= 1/4 min_i inf_std_i(f); the min runs
            // over all coordinates, so a dummy coordinate makes it vacuous.
            Rational minimum = sf.inf_std[0];
            for (const auto& v : sf.inf_std) minimum = std::min(minimum, v);
            Rational rhs = minimum / 4;
            r.chvatal_rhs = to_double(rhs);
            r.chvatal_violated = r.cor < rhs;
            if (rhs > Rational(0)) {
                r.chvatal_ratio = cor / to_double(rhs);
            } else {
                r.chvatal_trivial = true;
                if (cor > 0.0) r.chvatal_ratio = kInf;
            }
        }
    }

    if (m1 > 0.0) {
        double l = log_e_over(m1);
        if (l > 0.0) r.remark_constant = to_double(r.m2) / (m1 * l);
    }
    return r;
}

}  // namespace corrbench
