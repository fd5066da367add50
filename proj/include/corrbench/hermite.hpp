#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace corrbench {

// Probabilists' Hermite polynomial He_m.
inline double hermite_he(int m, double x) {
    if (m < 0) throw std::invalid_argument("hermite_he: negative degree");
    double prev = 1.0;  // He_0
    if (m == 0) return prev;
    double cur = x;  // He_1
    for (int k = 1; k < m; ++k) {
        const double next = x * cur - k * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

// Dense order-k tensor over R^n, k <= 3. Entries are indexed by tuples of
// coordinates; symmetric content is stored redundantly (n stays small here,
// so n^k is cheap and contraction code stays branch-free).
class SymTensor {
public:
    SymTensor() : n_(0), order_(0), data_(1, 0.0) {}
    SymTensor(int n, int order) : n_(n), order_(order) {
        if (n < 1 || order < 0 || order > 3)
            throw std::invalid_argument("SymTensor: order must be in [0,3]");
        std::size_t sz = 1;
        for (int k = 0; k < order; ++k) sz *= static_cast<std::size_t>(n);
        data_.assign(sz, 0.0);
    }

    int dim() const { return n_; }
    int order() const { return order_; }
    std::size_t size() const { return data_.size(); }
    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    double& at(const std::vector<int>& idx) { return data_[flat(idx)]; }
    double at(const std::vector<int>& idx) const { return data_[flat(idx)]; }
    double& scalar() { return data_[0]; }
    double scalar() const { return data_[0]; }

    SymTensor& scale(double c) {
        for (double& v : data_) v *= c;
        return *this;
    }
    SymTensor& add_scaled(const SymTensor& other, double c) {
        check_shape(other);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += c * other.data_[i];
        return *this;
    }
    double dot(const SymTensor& other) const {
        check_shape(other);
        double s = 0.0;
        for (std::size_t i = 0; i < data_.size(); ++i) s += data_[i] * other.data_[i];
        return s;
    }

    // Accumulates c times the Hermite tensor at x; allocation-free, so it is
    // the form quadrature loops should use.
    SymTensor& add_hermite(const std::vector<double>& x, double c) {
        const int n = n_;
        switch (order_) {
            case 0:
                data_[0] += c;
                break;
            case 1:
                for (int i = 0; i < n; ++i)
                    data_[static_cast<std::size_t>(i)] += c * x[static_cast<std::size_t>(i)];
                break;
            case 2: {
                std::size_t f = 0;
                for (int i = 0; i < n; ++i) {
                    const double xi = x[static_cast<std::size_t>(i)];
                    for (int j = 0; j < n; ++j, ++f)
                        data_[f] += c * (i == j ? xi * xi - 1.0
                                                : xi * x[static_cast<std::size_t>(j)]);
                }
                break;
            }
            default: {
                std::size_t f = 0;
                for (int i = 0; i < n; ++i) {
                    const double xi = x[static_cast<std::size_t>(i)];
                    for (int j = 0; j < n; ++j) {
                        const double xj = x[static_cast<std::size_t>(j)];
                        for (int k = 0; k < n; ++k, ++f) {
                            const double xk = x[static_cast<std::size_t>(k)];
                            double v;
                            if (i == j && j == k)
                                v = xi * xi * xi - 3.0 * xi;
                            else if (i == j)
                                v = (xi * xi - 1.0) * xk;
                            else if (i == k)
                                v = (xi * xi - 1.0) * xj;
                            else if (j == k)
                                v = (xj * xj - 1.0) * xi;
                            else
                                v = xi * xj * xk;
                            data_[f] += c * v;
                        }
                    }
                }
                break;
            }
        }
        return *this;
    }

    // v ^ (tensor order), scaled.
    static SymTensor rank_one(const std::vector<double>& v, int order, double c = 1.0) {
        const int n = static_cast<int>(v.size());
        SymTensor t(n, order);
        std::vector<int> idx(static_cast<std::size_t>(order), 0);
        t.for_each_index(idx, [&](const std::vector<int>& tuple, std::size_t flat) {
            double p = c;
            for (int i : tuple) p *= v[static_cast<std::size_t>(i)];
            t.data_[flat] = p;
        });
        return t;
    }

    // Entry (i1..ik) = product over coordinates j of He_{m_j}(x_j), where m_j
    // is the multiplicity of j in the tuple.
    static SymTensor hermite_tensor(int order, const std::vector<double>& x) {
        const int n = static_cast<int>(x.size());
        SymTensor t(n, order);
        // He_0..He_3 per coordinate.
        std::vector<std::array<double, 4>> he(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j) {
            const double xj = x[static_cast<std::size_t>(j)];
            he[static_cast<std::size_t>(j)] = {1.0, xj, xj * xj - 1.0, xj * xj * xj - 3.0 * xj};
        }
        std::vector<int> idx(static_cast<std::size_t>(order), 0);
        std::vector<int> mult(static_cast<std::size_t>(n), 0);
        t.for_each_index(idx, [&](const std::vector<int>& tuple, std::size_t flat) {
            std::fill(mult.begin(), mult.end(), 0);
            for (int i : tuple) ++mult[static_cast<std::size_t>(i)];
            double p = 1.0;
            for (int j = 0; j < n; ++j)
                p *= he[static_cast<std::size_t>(j)][static_cast<std::size_t>(
                    mult[static_cast<std::size_t>(j)])];
            t.data_[flat] = p;
        });
        return t;
    }

    // Multiplicity vector of the tuple with this flat index.
    template <class Fn>
    void for_each_index(std::vector<int>& idx, Fn&& fn) const {
        if (order_ == 0) {
            fn(idx, 0);
            return;
        }
        std::fill(idx.begin(), idx.end(), 0);
        std::size_t flat = 0;
        while (true) {
            fn(idx, flat);
            ++flat;
            int pos = order_ - 1;
            while (pos >= 0) {
                if (++idx[static_cast<std::size_t>(pos)] < n_) break;
                idx[static_cast<std::size_t>(pos)] = 0;
                --pos;
            }
            if (pos < 0) break;
        }
    }

private:
    std::size_t flat(const std::vector<int>& idx) const {
        if (static_cast<int>(idx.size()) != order_)
            throw std::invalid_argument("SymTensor: index arity mismatch");
        std::size_t f = 0;
        for (int i : idx) {
            if (i < 0 || i >= n_) throw std::out_of_range("SymTensor: index out of range");
            f = f * static_cast<std::size_t>(n_) + static_cast<std::size_t>(i);
        }
        return f;
    }
    void check_shape(const SymTensor& other) const {
        if (n_ != other.n_ || order_ != other.order_)
            throw std::invalid_argument("SymTensor: shape mismatch");
    }

    int n_, order_;
    std::vector<double> data_;
};

}  // namespace corrbench
