#pragma once

#include <cstdint>
#include <vector>

#include "routepe/json_io.hpp"
#include "routepe/rng.hpp"
#include "routepe/types.hpp"

namespace routepe {

struct SearchConfig {
    long long budget = 20000;     // ruin-recreate iterations
    double sigma = 0.1;           // initial SA temperature; 0 = accept iff not worse
    double sigma_decay = 0.9995;  // geometric per-iteration factor
    int ruin_size = 10;           // customers removed per step
    double recreate_noise = 0.25; // randomization strength of the greedy repair
    std::uint64_t seed = 0;
};

// Feasible starting solution: Clarke-Wright savings for CVRP/PCVRP (PCVRP
// starts with every customer served), deadline-ordered sequential insertion
// for VRPTW, precedence-respecting nearest-neighbor for PDTSP. Throws
// InfeasibleError when some customer cannot be served at all.
Solution construct(const Instance& inst);

// First-improvement sweeps of 2-opt, or-opt (segments of 1..3) and swap until
// locally optimal; PCVRP additionally drops/adds customers when the prize
// does not pay for the detour. Every move is re-validated against the
// variant's constraints. Deterministic; never worsens the objective.
Solution local_search(const Instance& inst, const Solution& sol);

// Metropolis rule: improvements always accepted, a worsening of delta with
// probability exp(-delta/sigma). Consumes exactly one uniform draw per call.
bool sa_accept(double old_cost, double new_cost, double sigma, Rng& rng);

struct RuinResult {
    Solution partial;
    std::vector<int> removed;
};

// Removes `ruin_size` customers as contiguous strings, one string per
// affected route, each around a uniformly chosen anchor customer. Routes
// reduced to depot-depot are dropped. The depot is never removed.
RuinResult ruin(const Instance& inst, const Solution& sol, int ruin_size, Rng& rng);

// Reinserts the removed customers in random order, each at the cheapest
// feasible position after multiplying detours by (1 + noise * U[0,1)).
// PCVRP leaves a customer unserved when no insertion detour beats its prize.
Solution recreate(const Instance& inst, const Solution& partial, const std::vector<int>& removed,
                  double noise, Rng& rng);

struct ImproveResult {
    Solution best;
    std::vector<double> rewards;  // one entry per iteration
};

// Ruin-recreate loop with SA acceptance. The incumbent objective never
// increases and the rewards telescope: start cost minus the sum of rewards
// reproduces the incumbent cost step by step, exactly.
ImproveResult improve(const Instance& inst, const Solution& start, const SearchConfig& cfg);

// construct + local_search + improve, packaged with cost and config echo.
SolutionRecord solve_instance(const Instance& inst, const SearchConfig& cfg);

}  // namespace routepe
