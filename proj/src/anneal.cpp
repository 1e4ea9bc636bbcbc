#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <json.hpp>

#include "routepe/errors.hpp"
#include "routepe/solve.hpp"
#include "solve_internal.hpp"

namespace routepe {

bool sa_accept(double old_cost, double new_cost, double sigma, Rng& rng) {
    const double u = rng.next_double();  // one draw per call, whatever the branch
    const double delta = new_cost - old_cost;
    if (delta <= 0.0) return true;
    if (sigma <= 0.0) return false;
    return u < std::exp(-delta / sigma);
}

RuinResult ruin(const Instance& inst, const Solution& sol, int ruin_size, Rng& rng) {
    (void)inst;  // kept for signature symmetry with recreate
    auto routes = detail::to_interior(sol);
    RuinResult out;
    if (ruin_size <= 0) {
        out.partial = detail::to_solution(routes);
        return out;
    }

    std::vector<char> touched(routes.size(), 0);
    int needed = ruin_size;
    while (needed > 0) {
        // Anchor uniform over customers in routes not yet ruined.
        std::vector<std::pair<int, int>> pool;  // (route, position)
        for (std::size_t r = 0; r < routes.size(); ++r) {
            if (touched[r]) continue;
            for (std::size_t p = 0; p < routes[r].size(); ++p) {
                pool.emplace_back(static_cast<int>(r), static_cast<int>(p));
            }
        }
        if (pool.empty()) break;
        const auto [r, anchor] = pool[rng.index(pool.size())];
        auto& route = routes[r];
        const int m = static_cast<int>(route.size());
        const int len = std::min(needed, m);
        // Window of `len` consecutive customers containing the anchor.
        const int lo = std::max(0, anchor - len + 1);
        const int hi = std::min(anchor, m - len);
        const int start = lo + (hi > lo ? static_cast<int>(rng.index(hi - lo + 1)) : 0);
        for (int t = 0; t < len; ++t) out.removed.push_back(route[start + t]);
        route.erase(route.begin() + start, route.begin() + start + len);
        touched[r] = 1;
        needed -= len;
    }

    out.partial = detail::to_solution(routes);
    return out;
}

namespace {

struct InsertSpot {
    double detour = std::numeric_limits<double>::infinity();
    int route = -1;  // -1 = open a fresh route
    int pos = 0;
};

// Cheapest feasible insertion for customer c, detours perturbed by
// (1 + noise * U). `spot.detour` reports the unperturbed value of the chosen
// position so PCVRP can apply its prize test to the real cost.
InsertSpot cheapest_insertion(const Instance& inst, const Dist& dist,
                              const std::vector<std::vector<int>>& routes,
                              const std::vector<long long>& loads, int c, double noise, Rng& rng,
                              bool allow_new_route) {
    InsertSpot best;
    double best_score = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < routes.size(); ++r) {
        if (!inst.demands.empty() && loads[r] + inst.demands[c] > inst.capacity) continue;
        const auto& route = routes[r];
        for (std::size_t p = 0; p <= route.size(); ++p) {
            const int a = p == 0 ? 0 : route[p - 1];
            const int b = p == route.size() ? 0 : route[p];
            const double detour = dist(a, c) + dist(c, b) - dist(a, b);
            const double score = noise > 0.0 ? detour * (1.0 + noise * rng.next_double()) : detour;
            if (score >= best_score) continue;
            bool ok = true;
            if (inst.variant == Variant::vrptw) {
                std::vector<int> cand = route;
                cand.insert(cand.begin() + p, c);
                ok = detail::vrptw_interior_feasible(inst, dist, cand);
            } else if (inst.variant == Variant::pdtsp) {
                std::vector<int> cand = route;
                cand.insert(cand.begin() + p, c);
                ok = detail::pdtsp_interior_feasible(inst, cand);
            }
            if (!ok) continue;
            best_score = score;
            best = {detour, static_cast<int>(r), static_cast<int>(p)};
        }
    }
    if (allow_new_route) {
        const double detour = 2.0 * dist(0, c);
        const double score = noise > 0.0 ? detour * (1.0 + noise * rng.next_double()) : detour;
        if (score < best_score) best = {detour, -1, 0};
    }
    return best;
}

// Single-customer routes are the fallback of last resort; they still have to
// respect the variant's constraints.
bool singleton_feasible(const Instance& inst, const Dist& dist, int c) {
    if (!inst.demands.empty() && inst.demands[c] > inst.capacity) return false;
    if (inst.variant == Variant::vrptw) {
        const std::vector<int> route{c};
        return detail::vrptw_interior_feasible(inst, dist, route);
    }
    return true;
}

Solution recreate_with(const Instance& inst, const Dist& dist, const Solution& partial,
                       const std::vector<int>& removed, double noise, Rng& rng) {
    auto routes = detail::to_interior(partial);
    std::vector<long long> loads(routes.size(), 0);
    if (!inst.demands.empty()) {
        for (std::size_t r = 0; r < routes.size(); ++r) loads[r] = detail::interior_load(inst, routes[r]);
    }

    std::vector<int> order = removed;
    rng.shuffle(order);

    std::vector<char> pending(inst.num_nodes(), 0);
    for (int c : order) pending[c] = 1;

    // PDTSP: a delivery whose pickup is also pending must wait for it.
    std::vector<int> pickup_of(inst.num_nodes(), -1);
    for (const auto& [p, d] : inst.pd_pairs) pickup_of[d] = p;

    std::size_t qi = 0;
    std::vector<int> queue = order;
    while (qi < queue.size()) {
        const int c = queue[qi++];
        if (inst.variant == Variant::pdtsp && pickup_of[c] >= 0 && pending[pickup_of[c]]) {
            queue.push_back(c);  // retry after the pickup lands
            continue;
        }
        const bool allow_new_route = inst.variant != Variant::pdtsp && singleton_feasible(inst, dist, c);
        if (inst.variant == Variant::pdtsp && routes.empty()) {
            routes.push_back({});
            loads.push_back(0);
        }
        const InsertSpot spot =
            cheapest_insertion(inst, dist, routes, loads, c, noise, rng, allow_new_route);
        if (inst.variant == Variant::pcvrp && spot.detour >= inst.prizes[c]) {
            pending[c] = 0;  // not worth serving
            continue;
        }
        if (spot.route < 0 && !allow_new_route) {
            throw InfeasibleError("recreate: no feasible insertion for customer " + std::to_string(c));
        }
        if (spot.route < 0) {
            if (!std::isfinite(spot.detour)) {
                throw InfeasibleError("recreate: no feasible insertion for customer " + std::to_string(c));
            }
            routes.push_back({c});
            loads.push_back(inst.demands.empty() ? 0 : inst.demands[c]);
        } else {
            routes[spot.route].insert(routes[spot.route].begin() + spot.pos, c);
            if (!inst.demands.empty()) loads[spot.route] += inst.demands[c];
        }
        pending[c] = 0;
    }

    return detail::to_solution(routes);
}

}  // namespace

Solution recreate(const Instance& inst, const Solution& partial, const std::vector<int>& removed,
                  double noise, Rng& rng) {
    const Dist dist(inst);
    return recreate_with(inst, dist, partial, removed, noise, rng);
}

ImproveResult improve(const Instance& inst, const Solution& start, const SearchConfig& cfg) {
    if (cfg.budget < 0) throw ConfigError("improve: budget must be >= 0");
    if (cfg.sigma < 0.0) throw ConfigError("improve: sigma must be >= 0");

    ImproveResult out;
    out.best = start;
    if (cfg.budget == 0) return out;

    const Dist dist(inst);
    Rng rng(cfg.seed);
    Solution current = start;
    double current_cost = solution_cost(inst, current).objective;
    // Incumbent cost is updated through the reward subtraction itself so the
    // trace telescopes bit-exactly back to it.
    double best_cost = current_cost;
    double sigma = cfg.sigma;
    out.rewards.reserve(static_cast<std::size_t>(cfg.budget));

    for (long long it = 0; it < cfg.budget; ++it) {
        int served = 0;
        for (const Route& r : current.routes) served += r.num_customers();
        const int rs = std::min(cfg.ruin_size, std::max(0, served - 1));

        RuinResult ruined = ruin(inst, current, rs, rng);
        if (inst.variant == Variant::pcvrp) {
            // Unserved customers re-enter the repair pool each step.
            std::vector<char> present(inst.num_nodes(), 0);
            for (const Route& r : ruined.partial.routes) {
                for (int i = 1; i + 1 < r.length(); ++i) present[r.nodes[i]] = 1;
            }
            for (int c : ruined.removed) present[c] = 1;
            for (int c = 1; c < inst.num_nodes(); ++c) {
                if (!present[c]) ruined.removed.push_back(c);
            }
        }
        const Solution candidate =
            recreate_with(inst, dist, ruined.partial, ruined.removed, cfg.recreate_noise, rng);
        const double cand_cost = solution_cost(inst, candidate).objective;

        const double r = reward(best_cost, cand_cost);
        out.rewards.push_back(r);
        if (r > 0.0) out.best = candidate;
        best_cost -= r;

        if (sa_accept(current_cost, cand_cost, sigma, rng)) {
            current = candidate;
            current_cost = cand_cost;
        }
        sigma *= cfg.sigma_decay;
    }
    return out;
}

SolutionRecord solve_instance(const Instance& inst, const SearchConfig& cfg) {
    const Solution initial = local_search(inst, construct(inst));
    ImproveResult res = improve(inst, initial, cfg);
    // Final polish: the annealing loop repairs greedily, so the incumbent
    // usually still admits a few descent moves.
    Solution polished = local_search(inst, res.best);

    SolutionRecord rec;
    rec.instance = inst;
    rec.solution = std::move(polished);
    rec.cost = solution_cost(inst, rec.solution);
    rec.reward_trace_len = res.rewards.size();
    nlohmann::json echo;
    echo["solver"] = {
        {"budget", cfg.budget},
        {"sigma", cfg.sigma},
        {"sigma_decay", cfg.sigma_decay},
        {"ruin_size", cfg.ruin_size},
        {"recreate_noise", cfg.recreate_noise},
        {"seed", cfg.seed},
    };
    rec.meta_json = echo.dump();
    return rec;
}

}  // namespace routepe
