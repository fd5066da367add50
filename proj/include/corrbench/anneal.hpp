#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "corrbench/bounds.hpp"

namespace corrbench {

enum class RatioObjective { Tal, Kms, MainTal, MainCoord };

std::string to_string(RatioObjective o);
RatioObjective objective_from_string(const std::string& s);

std::optional<double> objective_ratio(const PairBoundReport& r, RatioObjective o);

struct AnnealSchedule {
    double t0 = 0.5;
    double cooling = 0.9995;
    std::uint64_t iterations = 20000;
};

struct AnnealReport {
    int n = 0;
    RatioObjective objective = RatioObjective::Tal;
    AnnealSchedule schedule;
    Normalization norm = Normalization::Std;
    std::uint64_t seed = 0;
    double start_ratio = 0;
    double best_ratio = 0;
    std::string f_hex, g_hex;
    std::uint64_t pairs_examined = 0;
    double wall_seconds = 0;
};

// Simulated annealing over ordered monotone pairs; moves replace one side by
// a uniformly chosen single-flip neighbor. Deterministic given the seed.
AnnealReport anneal_search(int n, RatioObjective objective, AnnealSchedule schedule,
                           std::uint64_t seed, Normalization norm = Normalization::Std);

}  // namespace corrbench
