#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <random>

namespace corrbench {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d4a4a5a634dd4dull;
    return x ^ (x >> 31);
}

// Derives independent sub-streams (per path, per case, ...) from a master seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(splitmix64(master) ^ splitmix64(index + 0x517cc1b727220a95ull));
}

// mt19937_64 is fully specified by the standard; the variate transforms are
// written out here because std::uniform_* distributions are not portable.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    double next_double() {  // uniform on [0,1), 53-bit
        return static_cast<double>(eng_() >> 11) * 0x1p-53;
    }

    std::uint64_t next_below(std::uint64_t k) {  // uniform on [0,k)
        if (k <= 1) return 0;
        std::uint64_t mask = ~0ull >> std::countl_zero(k - 1);
        for (;;) {
            std::uint64_t v = eng_() & mask;
            if (v < k) return v;
        }
    }

    double next_normal() {  // Box-Muller, pairs cached
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v;
        do {
            u = next_double();
        } while (u <= 0.0);
        v = next_double();
        double r = std::sqrt(-2.0 * std::log(u));
        double a = 6.283185307179586476925286766559 * v;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace corrbench
