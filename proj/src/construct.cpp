#include <algorithm>
#include <limits>
#include <numeric>

#include "routepe/errors.hpp"
#include "routepe/solve.hpp"
#include "solve_internal.hpp"

namespace routepe {

namespace {

using detail::to_solution;

// Classic savings merge: start with one route per customer, then join route
// ends in order of decreasing saving while capacity allows. Either route may
// be flipped since distances are symmetric.
Solution clarke_wright(const Instance& inst, const Dist& dist) {
    const int n = inst.num_customers();
    for (int c = 1; c <= n; ++c) {
        if (inst.demands[c] > inst.capacity) {
            throw InfeasibleError("customer " + std::to_string(c) + " exceeds vehicle capacity");
        }
    }

    std::vector<std::vector<int>> routes(n);
    std::vector<int> route_of(n + 1);
    std::vector<long long> load(n, 0);
    for (int c = 1; c <= n; ++c) {
        routes[c - 1] = {c};
        route_of[c] = c - 1;
        load[c - 1] = inst.demands[c];
    }

    struct Saving {
        double value;
        int i, j;
    };
    std::vector<Saving> savings;
    savings.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (int i = 1; i <= n; ++i) {
        for (int j = i + 1; j <= n; ++j) {
            savings.push_back({dist(0, i) + dist(0, j) - dist(i, j), i, j});
        }
    }
    std::sort(savings.begin(), savings.end(), [](const Saving& a, const Saving& b) {
        if (a.value != b.value) return a.value > b.value;
        return std::tie(a.i, a.j) < std::tie(b.i, b.j);
    });

    for (const Saving& s : savings) {
        const int ri = route_of[s.i];
        const int rj = route_of[s.j];
        if (ri == rj) continue;
        if (load[ri] + load[rj] > inst.capacity) continue;
        auto& a = routes[ri];
        auto& b = routes[rj];
        // Only exterior customers can be joined.
        const bool i_head = a.front() == s.i, i_tail = a.back() == s.i;
        const bool j_head = b.front() == s.j, j_tail = b.back() == s.j;
        if (!(i_head || i_tail) || !(j_head || j_tail)) continue;
        if (i_tail && j_head) {
            // a ... i -> j ... b
        } else if (i_tail && j_tail) {
            std::reverse(b.begin(), b.end());
        } else if (i_head && j_head) {
            std::reverse(a.begin(), a.end());
        } else {  // i_head && j_tail
            std::reverse(a.begin(), a.end());
            std::reverse(b.begin(), b.end());
        }
        a.insert(a.end(), b.begin(), b.end());
        for (int v : b) route_of[v] = ri;
        load[ri] += load[rj];
        b.clear();
        load[rj] = 0;
    }

    routes.erase(std::remove_if(routes.begin(), routes.end(),
                                [](const std::vector<int>& r) { return r.empty(); }),
                 routes.end());
    return to_solution(routes);
}

// Deadline-ordered sequential insertion: fill one route at a time, always
// adding the unserved customer with the earliest window close that still fits
// somewhere in the route.
Solution vrptw_sequential(const Instance& inst, const Dist& dist) {
    const int n = inst.num_customers();
    std::vector<int> unserved(n);
    std::iota(unserved.begin(), unserved.end(), 1);
    std::sort(unserved.begin(), unserved.end(), [&](int a, int b) {
        if (inst.windows[a].close != inst.windows[b].close) {
            return inst.windows[a].close < inst.windows[b].close;
        }
        return a < b;
    });

    std::vector<std::vector<int>> routes;
    while (!unserved.empty()) {
        std::vector<int> route;
        long long load = 0;
        bool grew = true;
        while (grew) {
            grew = false;
            for (std::size_t ui = 0; ui < unserved.size(); ++ui) {
                const int c = unserved[ui];
                if (load + inst.demands[c] > inst.capacity) continue;
                int best_pos = -1;
                double best_detour = std::numeric_limits<double>::infinity();
                for (std::size_t p = 0; p <= route.size(); ++p) {
                    std::vector<int> cand = route;
                    cand.insert(cand.begin() + p, c);
                    if (!detail::vrptw_interior_feasible(inst, dist, cand)) continue;
                    const int a = p == 0 ? 0 : route[p - 1];
                    const int b = p == route.size() ? 0 : route[p];
                    const double detour = dist(a, c) + dist(c, b) - dist(a, b);
                    if (detour < best_detour) {
                        best_detour = detour;
                        best_pos = static_cast<int>(p);
                    }
                }
                if (best_pos >= 0) {
                    route.insert(route.begin() + best_pos, c);
                    load += inst.demands[c];
                    unserved.erase(unserved.begin() + ui);
                    grew = true;
                    break;  // earliest-deadline customer placed; rescan
                }
            }
        }
        if (route.empty()) {
            throw InfeasibleError("vrptw: customer " + std::to_string(unserved.front()) +
                                  " cannot be served on an empty route");
        }
        routes.push_back(std::move(route));
    }
    return to_solution(routes);
}

// Nearest neighbor over currently available nodes: pickups are available from
// the start, a delivery becomes available once its pickup is visited.
Solution pdtsp_nearest_neighbor(const Instance& inst, const Dist& dist) {
    const int n_nodes = inst.num_nodes();
    std::vector<int> delivery_of(n_nodes, -1);
    for (const auto& [p, d] : inst.pd_pairs) delivery_of[p] = d;
    std::vector<char> available(n_nodes, 0), visited(n_nodes, 0);
    for (const auto& [p, d] : inst.pd_pairs) available[p] = 1;

    std::vector<int> tour;
    int cur = 0;
    for (int step = 0; step < inst.num_customers(); ++step) {
        int best = -1;
        double best_d = std::numeric_limits<double>::infinity();
        for (int v = 1; v < n_nodes; ++v) {
            if (!available[v] || visited[v]) continue;
            const double d = dist(cur, v);
            if (d < best_d) {
                best_d = d;
                best = v;
            }
        }
        if (best < 0) throw InfeasibleError("pdtsp: no available node; pd_pairs incomplete?");
        tour.push_back(best);
        visited[best] = 1;
        if (delivery_of[best] >= 0) available[delivery_of[best]] = 1;
        cur = best;
    }
    return to_solution({tour});
}

}  // namespace

Solution construct(const Instance& inst) {
    const Dist dist(inst);
    switch (inst.variant) {
        case Variant::cvrp:
        case Variant::pcvrp:
            return clarke_wright(inst, dist);
        case Variant::vrptw:
            return vrptw_sequential(inst, dist);
        case Variant::pdtsp:
            return pdtsp_nearest_neighbor(inst, dist);
    }
    throw ConfigError("construct: unknown variant");
}

}  // namespace routepe
