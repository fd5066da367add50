#include "corrbench/anneal.hpp"

#include <chrono>
#include <cmath>

#include "corrbench/enumeration.hpp"
#include "corrbench/rng.hpp"

namespace corrbench {

std::string to_string(RatioObjective o) {
    switch (o) {
        case RatioObjective::Tal: return "tal";
        case RatioObjective::Kms: return "kms";
        case RatioObjective::MainTal: return "main_tal";
        case RatioObjective::MainCoord: return "main_coord";
    }
    return "tal";
}

RatioObjective objective_from_string(const std::string& s) {
    if (s == "tal") return RatioObjective::Tal;
    if (s == "kms") return RatioObjective::Kms;
    if (s == "main_tal") return RatioObjective::MainTal;
    if (s == "main_coord") return RatioObjective::MainCoord;
    throw std::invalid_argument("objective must be one of tal|kms|main_tal|main_coord");
}

std::optional<double> objective_ratio(const PairBoundReport& r, RatioObjective o) {
    switch (o) {
        case RatioObjective::Tal: return r.ratio_tal;
        case RatioObjective::Kms: return r.ratio_kms;
        case RatioObjective::MainTal: return r.ratio_main_tal;
        case RatioObjective::MainCoord: return r.ratio_main_coord;
    }
    return std::nullopt;
}

AnnealReport anneal_search(int n, RatioObjective objective, AnnealSchedule schedule,
                           std::uint64_t seed, Normalization norm) {
    if (n < 1 || n > 6) throw std::invalid_argument("anneal_search requires 1 <= n <= 6");
    auto t0 = std::chrono::steady_clock::now();

    AnnealReport rep;
    rep.n = n;
    rep.objective = objective;
    rep.schedule = schedule;
    rep.norm = norm;
    rep.seed = seed;

    auto energy = [&](const BooleanFunction& f,
                      const BooleanFunction& g) -> std::optional<double> {
        return objective_ratio(pair_bound_report(f, g, norm), objective);
    };

    std::int64_t steps = default_chain_steps(n);
    BooleanFunction f, g;
    std::optional<double> e;
    for (std::uint64_t k = 0;; ++k) {
        f = random_monotone(n, derive_seed(seed, 2 * k + 1), steps);
        g = random_monotone(n, derive_seed(seed, 2 * k + 2), steps);
        ++rep.pairs_examined;
        e = energy(f, g);
        if (e) break;
        if (k > 256) throw std::runtime_error("could not find a starting pair with a defined ratio");
    }
    rep.start_ratio = *e;

    double best = *e;
    BooleanFunction best_f = f, best_g = g;

    Rng rng(derive_seed(seed, 0));
    double temp = schedule.t0;
    for (std::uint64_t it = 0; it < schedule.iterations; ++it, temp *= schedule.cooling) {
        bool move_f = rng.next_double() < 0.5;
        const BooleanFunction& cur = move_f ? f : g;
        auto moves = monotone_neighbors(cur);
        if (moves.empty()) continue;
        BooleanFunction cand = moves[rng.next_below(moves.size())];
        ++rep.pairs_examined;
        auto e2 = move_f ? energy(cand, g) : energy(f, cand);
        if (!e2) continue;
        bool accept = *e2 <= *e;
        if (!accept && temp > 0.0)
            accept = rng.next_double() < std::exp(-(*e2 - *e) / temp);
        if (!accept) continue;
        (move_f ? f : g) = cand;
        e = e2;
        if (*e < best) {
            best = *e;
            best_f = f;
            best_g = g;
        }
    }

    rep.best_ratio = best;
    rep.f_hex = best_f.to_hex();
    rep.g_hex = best_g.to_hex();
    rep.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

}  // namespace corrbench
