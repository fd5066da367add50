#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "corrbench/boolean.hpp"

namespace corrbench {

// Streams every monotone function on n <= 6 variables exactly once, in
// lexicographic order of the table bit sequence b_0, b_1, ..., b_{2^n-1}.
// Return false from the visitor to stop early.
void enumerate_monotone(int n, const std::function<bool(const BooleanFunction&)>& visit);

// The antipodal-monotone sublist, same order.
void enumerate_antipodal_monotone(int n, const std::function<bool(const BooleanFunction&)>& visit);

std::uint64_t count_monotone(int n);
std::uint64_t count_antipodal_monotone(int n);

// All single point-flips of f that stay monotone, in table-index order.
std::vector<BooleanFunction> monotone_neighbors(const BooleanFunction& f);

// Flip of table bit idx keeps the function monotone (f assumed monotone).
bool flip_keeps_monotone(const BooleanFunction& f, std::uint32_t idx);

// Lazy Metropolis chain started from all-zeros: each step holds with
// probability 1/2, otherwise proposes a uniform point flip and accepts
// iff the result is monotone. Uniform stationary law; no mixing claim.
BooleanFunction random_monotone(int n, std::uint64_t seed, std::int64_t steps);

inline std::int64_t default_chain_steps(int n) { return std::int64_t(50) << n; }

}  // namespace corrbench
