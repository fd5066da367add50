#include "corrbench/boolean.hpp"

#include <bit>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace corrbench {

std::string to_string(const Rational& r) {
    std::ostringstream os;
    os << r.numerator();
    if (r.denominator() != 1) os << '/' << r.denominator();
    return os.str();
}

namespace {

std::size_t word_count(int n) { return std::size_t(1) << (n > 6 ? n - 6 : 0); }

void check_dim(int n) {
    if (n < 1 || n > 24) throw std::invalid_argument("dimension out of range [1,24]");
}

}  // namespace

BooleanFunction::BooleanFunction(int n, std::vector<std::uint64_t> words)
    : n_(n), words_(std::move(words)) {
    check_dim(n);
    if (words_.size() != word_count(n)) throw std::invalid_argument("table word count mismatch");
    if (n_ < 6) words_[0] &= (1ull << (1u << n_)) - 1;
}

BooleanFunction BooleanFunction::zeros(int n) {
    check_dim(n);
    return BooleanFunction(n, std::vector<std::uint64_t>(word_count(n), 0));
}

BooleanFunction BooleanFunction::ones(int n) {
    BooleanFunction f = zeros(n);
    for (auto& w : f.words_) w = ~0ull;
    if (n < 6) f.words_[0] = (1ull << (1u << n)) - 1;
    return f;
}

BooleanFunction BooleanFunction::from_bits(int n, const std::vector<int>& bits) {
    check_dim(n);
    if (bits.size() != (std::size_t(1) << n)) throw std::invalid_argument("bit count mismatch");
    BooleanFunction f = zeros(n);
    for (std::uint32_t i = 0; i < bits.size(); ++i) {
        if (bits[i] != 0 && bits[i] != 1) throw std::invalid_argument("table values must be 0/1");
        if (bits[i]) f.words_[i >> 6] |= 1ull << (i & 63);
    }
    return f;
}

BooleanFunction BooleanFunction::from_hex(int n, const std::string& hex) {
    check_dim(n);
    std::size_t digits = std::max<std::size_t>(1, (std::size_t(1) << n) / 4);
    if (hex.size() != digits) throw std::invalid_argument("table_hex has wrong length");
    BooleanFunction f = zeros(n);
    for (std::size_t d = 0; d < hex.size(); ++d) {
        char c = hex[d];
        int v;
        if (c >= '0' && c <= '9') v = c - '0';
        else if (c >= 'a' && c <= 'f') v = 10 + (c - 'a');
        else throw std::invalid_argument("table_hex must be lowercase hex");
        f.words_[(4 * d) >> 6] |= std::uint64_t(v) << ((4 * d) & 63);
    }
    if (n == 1) f.words_[0] &= 3;
    return f;
}

std::string BooleanFunction::to_hex() const {
    std::size_t digits = std::max<std::size_t>(1, (std::size_t(1) << n_) / 4);
    std::string out(digits, '0');
    for (std::size_t d = 0; d < digits; ++d) {
        int v = static_cast<int>((words_[(4 * d) >> 6] >> ((4 * d) & 63)) & 0xf);
        out[d] = v < 10 ? char('0' + v) : char('a' + v - 10);
    }
    return out;
}

BooleanFunction BooleanFunction::dictator(int n, int i) {
    check_dim(n);
    if (i < 1 || i > n) throw std::invalid_argument("coordinate out of range");
    BooleanFunction f = zeros(n);
    for (std::uint32_t idx = 0; idx < f.size(); ++idx)
        if (idx >> (i - 1) & 1) f.words_[idx >> 6] |= 1ull << (idx & 63);
    return f;
}

void BooleanFunction::set_bit(std::uint32_t idx, int v) {
    if (v) words_[idx >> 6] |= 1ull << (idx & 63);
    else words_[idx >> 6] &= ~(1ull << (idx & 63));
}

int BooleanFunction::evaluate(const std::vector<int>& x) const {
    if (static_cast<int>(x.size()) != n_) throw std::invalid_argument("point dimension mismatch");
    std::uint32_t idx = 0;
    for (int i = 0; i < n_; ++i) {
        if (x[i] != 1 && x[i] != -1) throw std::invalid_argument("coordinates must be +-1");
        if (x[i] == 1) idx |= 1u << i;
    }
    return bit(idx);
}

std::int64_t BooleanFunction::ones_count() const {
    std::int64_t s = 0;
    for (auto w : words_) s += std::popcount(w);
    return s;
}

BooleanFunction BooleanFunction::from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw std::invalid_argument("function file: expected an object");
    if (!j.contains("n") || !j["n"].is_number_integer())
        throw std::invalid_argument("function file: missing integer field 'n'");
    if (!j.contains("table_hex") || !j["table_hex"].is_string())
        throw std::invalid_argument("function file: missing string field 'table_hex'");
    return from_hex(j["n"].get<int>(), j["table_hex"].get<std::string>());
}

nlohmann::json BooleanFunction::to_json() const {
    return nlohmann::json{{"n", n_}, {"table_hex", to_hex()}};
}

BooleanFunction BooleanFunction::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open function file: " + path);
    nlohmann::json j;
    in >> j;
    return from_json(j);
}

void BooleanFunction::store(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write function file: " + path);
    out << to_json().dump() << '\n';
}

int discrete_derivative(const BooleanFunction& f, int i, const std::vector<int>& x) {
    if (i < 1 || i > f.n()) throw std::invalid_argument("coordinate out of range");
    std::uint32_t idx = 0;
    for (int k = 0; k < f.n(); ++k)
        if (x[k] == 1) idx |= 1u << k;
    std::uint32_t m = 1u << (i - 1);
    return f.bit(idx | m) - f.bit(idx & ~m);
}

bool is_monotone(const BooleanFunction& f) {
    for (std::uint32_t idx = 0; idx < f.size(); ++idx)
        for (int i = 0; i < f.n(); ++i) {
            std::uint32_t m = 1u << i;
            if (!(idx & m) && f.bit(idx) > f.bit(idx | m)) return false;
        }
    return true;
}

bool is_antipodal(const BooleanFunction& f) {
    std::uint32_t all = f.size() - 1;
    for (std::uint32_t idx = 0; idx < f.size(); ++idx)
        if (f.bit(idx) != 1 - f.bit(all ^ idx)) return false;
    return true;
}

std::int64_t pivotal_count(const BooleanFunction& f, int i) {
    std::int64_t c = 0;
    std::uint32_t m = 1u << (i - 1);
    for (std::uint32_t idx = 0; idx < f.size(); ++idx)
        if ((idx & m) && f.bit(idx) != f.bit(idx ^ m)) ++c;
    return c;
}

std::int64_t v_reduced(const BooleanFunction& f, int i, int j) {
    if (i == j) return 0;
    std::uint32_t mi = 1u << (i - 1), mj = 1u << (j - 1);
    std::int64_t s = 0;
    for (std::uint32_t idx = 0; idx < f.size(); ++idx) {
        if ((idx & mi) || (idx & mj)) continue;
        s += f.bit(idx | mi | mj) - f.bit(idx | mi) - f.bit(idx | mj) + f.bit(idx);
    }
    return s;
}

std::int64_t product_sum(const BooleanFunction& f, const BooleanFunction& g) {
    if (f.n() != g.n()) throw std::invalid_argument("dimension mismatch");
    std::int64_t s = 0;
    for (std::size_t w = 0; w < f.words().size(); ++w)
        s += std::popcount(f.words()[w] & g.words()[w]);
    return s;
}

void fwht(std::vector<std::int64_t>& w) {
    for (std::size_t len = 1; len < w.size(); len <<= 1)
        for (std::size_t base = 0; base < w.size(); base += 2 * len)
            for (std::size_t k = base; k < base + len; ++k) {
                std::int64_t a = w[k], b = w[k + len];
                w[k] = a + b;
                w[k + len] = a - b;
            }
}

SpectralSummary spectral_summary(const BooleanFunction& f) {
    const int n = f.n();
    const std::int64_t sz = std::int64_t(1) << n;
    SpectralSummary s;
    s.n = n;
    s.mean = Rational(f.ones_count(), sz);

    s.inf_std.reserve(n);
    s.inf_paper.reserve(n);
    for (int i = 1; i <= n; ++i) {
        Rational inf(pivotal_count(f, i), sz / 2);
        s.inf_std.push_back(inf);
        s.inf_paper.push_back(2 * inf);
    }

    s.V.assign(n, std::vector<Rational>(n, Rational(0)));
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) {
            Rational v(v_reduced(f, i, j), sz / 4);
            s.V[i - 1][j - 1] = v;
            s.V[j - 1][i - 1] = v;
        }

    // chi_S(x) = prod_{i in S} x_i picks up (-1)^|S| relative to the
    // (-1)^popcount(S & idx) kernel because x_i = -(-1)^{bit i-1 of idx}.
    std::vector<std::int64_t> w(sz);
    for (std::int64_t idx = 0; idx < sz; ++idx) w[idx] = f.bit(static_cast<std::uint32_t>(idx));
    fwht(w);
    s.fourier_num.resize(sz);
    for (std::int64_t m = 0; m < sz; ++m) {
        std::int64_t v = (std::popcount(static_cast<std::uint64_t>(m)) & 1) ? -w[m] : w[m];
        s.fourier_num[m] = static_cast<std::int32_t>(v);
    }
    return s;
}

Rational correlation(const BooleanFunction& f, const BooleanFunction& g) {
    const std::int64_t sz = std::int64_t(1) << f.n();
    std::int64_t num = sz * product_sum(f, g) - f.ones_count() * g.ones_count();
    return Rational(num, sz * sz);
}

}  // namespace corrbench
