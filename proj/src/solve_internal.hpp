#pragma once

// Shared helpers for the solver translation units. Routes are handled as
// interior customer sequences here; depots are added back at the boundary.

#include <vector>

#include "routepe/core.hpp"
#include "routepe/types.hpp"

namespace routepe::detail {

inline std::vector<std::vector<int>> to_interior(const Solution& sol) {
    std::vector<std::vector<int>> routes;
    routes.reserve(sol.routes.size());
    for (const Route& r : sol.routes) {
        routes.emplace_back(r.nodes.begin() + 1, r.nodes.end() - 1);
    }
    return routes;
}

inline Solution to_solution(const std::vector<std::vector<int>>& routes) {
    Solution sol;
    for (const auto& interior : routes) {
        if (interior.empty()) continue;
        Route r;
        r.nodes.reserve(interior.size() + 2);
        r.nodes.push_back(0);
        r.nodes.insert(r.nodes.end(), interior.begin(), interior.end());
        r.nodes.push_back(0);
        sol.routes.push_back(std::move(r));
    }
    return sol;
}

inline double interior_travel(const Dist& dist, const std::vector<int>& interior) {
    if (interior.empty()) return 0.0;
    double total = dist(0, interior.front());
    for (std::size_t i = 1; i < interior.size(); ++i) total += dist(interior[i - 1], interior[i]);
    total += dist(interior.back(), 0);
    return total;
}

inline long long interior_load(const Instance& inst, const std::vector<int>& interior) {
    long long load = 0;
    for (int v : interior) load += inst.demands[v];
    return load;
}

// Simulates service starts along one route; true iff every window is met.
inline bool vrptw_interior_feasible(const Instance& inst, const Dist& dist,
                                    const std::vector<int>& interior) {
    double t = 0.0;
    int prev = 0;
    for (int v : interior) {
        const double arrive = t + (prev == 0 ? 0.0 : inst.service[prev]) + dist(prev, v);
        const double start = std::max(arrive, inst.windows[v].open);
        if (start > inst.windows[v].close + kTimeTol) return false;
        t = start;
        prev = v;
    }
    return true;
}

// PDTSP: every pickup must appear before its paired delivery.
inline bool pdtsp_interior_feasible(const Instance& inst, const std::vector<int>& interior) {
    std::vector<int> pos(inst.num_nodes(), -1);
    for (std::size_t i = 0; i < interior.size(); ++i) pos[interior[i]] = static_cast<int>(i);
    for (const auto& [p, d] : inst.pd_pairs) {
        if (pos[p] >= 0 && pos[d] >= 0 && pos[d] < pos[p]) return false;
    }
    return true;
}

}  // namespace routepe::detail
