#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/rational.hpp>
#include <nlohmann/json_fwd.hpp>

namespace corrbench {

using Rational = boost::rational<std::int64_t>;

inline double to_double(const Rational& r) {
    return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

std::string to_string(const Rational& r);

// Truth table of f : {-1,+1}^n -> {0,1}, packed 64 points per word.
// Point encoding: table index idx has x_i = +1 iff bit i-1 of idx is set
// (little-endian coordinate convention; fixed for file-format stability).
class BooleanFunction {
public:
    BooleanFunction() = default;
    BooleanFunction(int n, std::vector<std::uint64_t> words);

    static BooleanFunction zeros(int n);
    static BooleanFunction ones(int n);
    static BooleanFunction from_bits(int n, const std::vector<int>& bits);
    // Hex digit 0 carries table bits 0..3, digit 1 bits 4..7, and so on.
    static BooleanFunction from_hex(int n, const std::string& hex);
    static BooleanFunction dictator(int n, int i);  // 1{x_i = +1}

    static BooleanFunction from_json(const nlohmann::json& j);
    static BooleanFunction load(const std::string& path);
    nlohmann::json to_json() const;
    void store(const std::string& path) const;

    int n() const { return n_; }
    std::uint32_t size() const { return 1u << n_; }
    int bit(std::uint32_t idx) const {
        return static_cast<int>((words_[idx >> 6] >> (idx & 63)) & 1u);
    }
    void set_bit(std::uint32_t idx, int v);
    void flip_bit(std::uint32_t idx) { words_[idx >> 6] ^= 1ull << (idx & 63); }

    int evaluate(const std::vector<int>& x) const;  // x in {-1,+1}^n

    std::string to_hex() const;
    const std::vector<std::uint64_t>& words() const { return words_; }
    std::int64_t ones_count() const;

    bool operator==(const BooleanFunction&) const = default;

private:
    int n_ = 0;
    std::vector<std::uint64_t> words_;
};

// d_i f(x) = f(x with x_i=+1) - f(x with x_i=-1); independent of x_i.
int discrete_derivative(const BooleanFunction& f, int i, const std::vector<int>& x);

bool is_monotone(const BooleanFunction& f);
bool is_antipodal(const BooleanFunction& f);  // f(x) = 1 - f(-x)

// Exact spectral data; every denominator is a power of two.
struct SpectralSummary {
    int n = 0;
    Rational mean;                           // E f
    std::vector<Rational> inf_std;           // Pr[coordinate i pivotal]
    std::vector<Rational> inf_paper;         // 2 * inf_std
    std::vector<std::vector<Rational>> V;    // E[d_i d_j f], zero diagonal
    // Walsh coefficients f^(S) = E[f(x) prod_{i in S} x_i], stored as
    // signed numerators over 2^n, indexed by the subset mask of S.
    std::vector<std::int32_t> fourier_num;

    Rational fourier_at(std::uint32_t mask) const {
        return Rational(fourier_num[mask], std::int64_t(1) << n);
    }
};

// Exhaustive pass over the table; pre: n <= 24.
SpectralSummary spectral_summary(const BooleanFunction& f);

// Cor(f,g) = E[fg] - E[f]E[g], exact.
Rational correlation(const BooleanFunction& f, const BooleanFunction& g);

// Integer kernels shared with the pair scans (all denominators implied):
// sum/2^n = mean, piv[i]/2^{n-1} = inf_std_i, vred[i][j]/2^{n-2} = V_ij,
// and (2^n*sum_fg - sum_f*sum_g)/4^n = Cor.
std::int64_t pivotal_count(const BooleanFunction& f, int i);
std::int64_t v_reduced(const BooleanFunction& f, int i, int j);
std::int64_t product_sum(const BooleanFunction& f, const BooleanFunction& g);

// In-place FWHT; w[m] becomes sum_idx w[idx] * (-1)^popcount(m & idx).
void fwht(std::vector<std::int64_t>& w);

}  // namespace corrbench
