#include "corrbench/enumeration.hpp"

#include <bit>

#include "corrbench/rng.hpp"

namespace corrbench {

namespace {

struct Dfs {
    int n;
    std::uint32_t size;
    std::vector<std::uint64_t> sup;  // sup[idx] = mask of all supersets of idx
    std::uint64_t table = 0;
    const std::function<bool(const BooleanFunction&)>* visit;
    bool stopped = false;

    explicit Dfs(int n_, const std::function<bool(const BooleanFunction&)>& v)
        : n(n_), size(1u << n_), sup(size, 0), visit(&v) {
        for (std::uint32_t a = 0; a < size; ++a)
            for (std::uint32_t b = 0; b < size; ++b)
                if ((a & b) == a) sup[a] |= 1ull << b;
    }

    void emit() {
        BooleanFunction f(n, {table});
        if (!(*visit)(f)) stopped = true;
    }

    // Assign table bits idx..size-1; forced has the bits already pinned to 1
    // by earlier 1-assignments (up-set closure). 0-branch first gives the
    // lexicographic emission order.
    void run(std::uint32_t idx, std::uint64_t forced) {
        if (stopped) return;
        if (idx == size) {
            emit();
            return;
        }
        if (forced >> idx & 1) {
            table |= 1ull << idx;
            run(idx + 1, forced);
            table &= ~(1ull << idx);
            return;
        }
        run(idx + 1, forced);
        if (stopped) return;
        table |= 1ull << idx;
        run(idx + 1, forced | sup[idx]);
        table &= ~(1ull << idx);
    }
};

void check_enum_dim(int n) {
    if (n < 1 || n > 6) throw std::invalid_argument("enumeration supports 1 <= n <= 6");
}

}  // namespace

void enumerate_monotone(int n, const std::function<bool(const BooleanFunction&)>& visit) {
    check_enum_dim(n);
    Dfs dfs(n, visit);
    dfs.run(0, 0);
}

void enumerate_antipodal_monotone(int n, const std::function<bool(const BooleanFunction&)>& visit) {
    check_enum_dim(n);
    enumerate_monotone(n, [&](const BooleanFunction& f) {
        return is_antipodal(f) ? visit(f) : true;
    });
}

std::uint64_t count_monotone(int n) {
    std::uint64_t c = 0;
    enumerate_monotone(n, [&](const BooleanFunction&) {
        ++c;
        return true;
    });
    return c;
}

std::uint64_t count_antipodal_monotone(int n) {
    std::uint64_t c = 0;
    enumerate_antipodal_monotone(n, [&](const BooleanFunction&) {
        ++c;
        return true;
    });
    return c;
}

bool flip_keeps_monotone(const BooleanFunction& f, std::uint32_t idx) {
    if (f.bit(idx) == 0) {
        // 0 -> 1 needs every immediate superset at 1.
        for (int i = 0; i < f.n(); ++i) {
            std::uint32_t m = 1u << i;
            if (!(idx & m) && f.bit(idx | m) == 0) return false;
        }
    } else {
        // 1 -> 0 needs every immediate subset at 0.
        for (int i = 0; i < f.n(); ++i) {
            std::uint32_t m = 1u << i;
            if ((idx & m) && f.bit(idx ^ m) == 1) return false;
        }
    }
    return true;
}

std::vector<BooleanFunction> monotone_neighbors(const BooleanFunction& f) {
    if (!is_monotone(f)) throw std::invalid_argument("monotone_neighbors requires monotone input");
    std::vector<BooleanFunction> out;
    for (std::uint32_t idx = 0; idx < f.size(); ++idx)
        if (flip_keeps_monotone(f, idx)) {
            BooleanFunction g = f;
            g.flip_bit(idx);
            out.push_back(std::move(g));
        }
    return out;
}

BooleanFunction random_monotone(int n, std::uint64_t seed, std::int64_t steps) {
    if (steps < 0) throw std::invalid_argument("steps must be >= 0");
    BooleanFunction f = BooleanFunction::zeros(n);
    Rng rng(seed);
    for (std::int64_t s = 0; s < steps; ++s) {
        if (rng.next_double() < 0.5) continue;
        std::uint32_t idx = static_cast<std::uint32_t>(rng.next_below(f.size()));
        if (flip_keeps_monotone(f, idx)) f.flip_bit(idx);
    }
    return f;
}

}  // namespace corrbench
