#include <algorithm>
#include <limits>

#include "routepe/errors.hpp"
#include "routepe/solve.hpp"
#include "solve_internal.hpp"

namespace routepe {

namespace {

constexpr double kImproveEps = 1e-9;

// First-improvement local search over interior-route sequences. Candidate
// routes are re-validated against the variant's constraints before a move is
// applied, so feasibility is an invariant of the sweep.
class LocalSearch {
public:
    LocalSearch(const Instance& inst, const Solution& sol)
        : inst_(inst), dist_(inst), routes_(detail::to_interior(sol)) {
        loads_.resize(routes_.size());
        for (std::size_t r = 0; r < routes_.size(); ++r) {
            loads_[r] = inst.demands.empty() ? 0 : detail::interior_load(inst, routes_[r]);
        }
        if (inst.variant == Variant::pcvrp) {
            std::vector<char> served(inst.num_nodes(), 0);
            for (const auto& r : routes_) {
                for (int v : r) served[v] = 1;
            }
            for (int c = 1; c < inst.num_nodes(); ++c) {
                if (!served[c]) unserved_.push_back(c);
            }
        }
    }

    Solution run() {
        while (apply_one()) {
        }
        return detail::to_solution(routes_);
    }

private:
    bool route_ok(std::size_t r, const std::vector<int>& cand) const {
        if (!inst_.demands.empty() && detail::interior_load(inst_, cand) > inst_.capacity) return false;
        if (inst_.variant == Variant::vrptw && !detail::vrptw_interior_feasible(inst_, dist_, cand)) return false;
        (void)r;
        return true;
    }

    bool apply_one() {
        if (two_opt()) return true;
        if (two_opt_star()) return true;
        if (or_opt()) return true;
        if (swap_customers()) return true;
        if (inst_.variant == Variant::pcvrp) {
            if (drop_unprofitable()) return true;
            if (add_profitable()) return true;
        }
        return false;
    }

    // Reverse interior segment [i..j]; eliminates crossing edge pairs.
    bool two_opt() {
        for (std::size_t r = 0; r < routes_.size(); ++r) {
            auto& route = routes_[r];
            const int m = static_cast<int>(route.size());
            for (int i = 0; i < m - 1; ++i) {
                for (int j = i + 1; j < m; ++j) {
                    const int before = i == 0 ? 0 : route[i - 1];
                    const int after = j == m - 1 ? 0 : route[j + 1];
                    const double delta = dist_(before, route[j]) + dist_(route[i], after) -
                                         dist_(before, route[i]) - dist_(route[j], after);
                    if (delta >= -kImproveEps) continue;
                    std::vector<int> cand = route;
                    std::reverse(cand.begin() + i, cand.begin() + j + 1);
                    if (inst_.variant == Variant::vrptw &&
                        !detail::vrptw_interior_feasible(inst_, dist_, cand)) {
                        continue;
                    }
                    if (inst_.variant == Variant::pdtsp && !detail::pdtsp_interior_feasible(inst_, cand)) {
                        continue;
                    }
                    route = std::move(cand);
                    return true;
                }
            }
        }
        return false;
    }

    // Exchange route tails: a[0..i) + b[j..) and b[0..j) + a[i..). Removes
    // long crossings between routes that intra-route 2-opt cannot reach.
    bool two_opt_star() {
        if (inst_.variant == Variant::pdtsp) return false;  // single tour
        for (std::size_t r1 = 0; r1 < routes_.size(); ++r1) {
            for (std::size_t r2 = r1 + 1; r2 < routes_.size(); ++r2) {
                const auto& a = routes_[r1];
                const auto& b = routes_[r2];
                const int ma = static_cast<int>(a.size());
                const int mb = static_cast<int>(b.size());
                for (int i = 0; i <= ma; ++i) {
                    const int a_last = i == 0 ? 0 : a[i - 1];
                    const int a_next = i == ma ? 0 : a[i];
                    for (int j = 0; j <= mb; ++j) {
                        if (i == 0 && j == 0) continue;
                        if (i == ma && j == mb) continue;
                        const int b_last = j == 0 ? 0 : b[j - 1];
                        const int b_next = j == mb ? 0 : b[j];
                        const double delta = dist_(a_last, b_next) + dist_(b_last, a_next) -
                                             dist_(a_last, a_next) - dist_(b_last, b_next);
                        if (delta >= -kImproveEps) continue;
                        std::vector<int> na(a.begin(), a.begin() + i);
                        na.insert(na.end(), b.begin() + j, b.end());
                        std::vector<int> nb(b.begin(), b.begin() + j);
                        nb.insert(nb.end(), a.begin() + i, a.end());
                        if (!inst_.demands.empty()) {
                            if (detail::interior_load(inst_, na) > inst_.capacity) continue;
                            if (detail::interior_load(inst_, nb) > inst_.capacity) continue;
                        }
                        if (inst_.variant == Variant::vrptw &&
                            (!detail::vrptw_interior_feasible(inst_, dist_, na) ||
                             !detail::vrptw_interior_feasible(inst_, dist_, nb))) {
                            continue;
                        }
                        routes_[r1] = std::move(na);
                        routes_[r2] = std::move(nb);
                        if (!inst_.demands.empty()) {
                            loads_[r1] = detail::interior_load(inst_, routes_[r1]);
                            loads_[r2] = detail::interior_load(inst_, routes_[r2]);
                        }
                        prune_empty();
                        return true;
                    }
                }
            }
        }
        return false;
    }

    // Relocate a segment of 1..3 customers, same or different route.
    bool or_opt() {
        for (std::size_t r = 0; r < routes_.size(); ++r) {
            const auto& src = routes_[r];
            const int m = static_cast<int>(src.size());
            for (int len = 1; len <= 3; ++len) {
                for (int i = 0; i + len <= m; ++i) {
                    const int before = i == 0 ? 0 : src[i - 1];
                    const int after = i + len == m ? 0 : src[i + len];
                    const double removal_gain = dist_(before, src[i]) + dist_(src[i + len - 1], after) -
                                                dist_(before, after);
                    long long seg_load = 0;
                    if (!inst_.demands.empty()) {
                        for (int t = 0; t < len; ++t) seg_load += inst_.demands[src[i + t]];
                    }
                    for (std::size_t r2 = 0; r2 < routes_.size(); ++r2) {
                        if (r2 == r) {
                            if (same_route_or_opt(r, i, len, removal_gain)) return true;
                            continue;
                        }
                        const auto& dst = routes_[r2];
                        if (!inst_.demands.empty() && loads_[r2] + seg_load > inst_.capacity) continue;
                        for (std::size_t p = 0; p <= dst.size(); ++p) {
                            const int a = p == 0 ? 0 : dst[p - 1];
                            const int b = p == dst.size() ? 0 : dst[p];
                            const double insert_cost =
                                dist_(a, src[i]) + dist_(src[i + len - 1], b) - dist_(a, b);
                            if (insert_cost - removal_gain >= -kImproveEps) continue;
                            std::vector<int> cand_dst = dst;
                            cand_dst.insert(cand_dst.begin() + p, src.begin() + i, src.begin() + i + len);
                            if (inst_.variant == Variant::vrptw) {
                                std::vector<int> cand_src = src;
                                cand_src.erase(cand_src.begin() + i, cand_src.begin() + i + len);
                                if (!detail::vrptw_interior_feasible(inst_, dist_, cand_src) ||
                                    !detail::vrptw_interior_feasible(inst_, dist_, cand_dst)) {
                                    continue;
                                }
                            }
                            apply_or_opt(r, i, len, r2, static_cast<int>(p), seg_load);
                            return true;
                        }
                    }
                }
            }
        }
        return false;
    }

    bool same_route_or_opt(std::size_t r, int i, int len, double removal_gain) {
        auto& route = routes_[r];
        if (removal_gain <= kImproveEps) return false;  // cannot pay for any reinsertion
        std::vector<int> rest = route;
        rest.erase(rest.begin() + i, rest.begin() + i + len);
        const double base = detail::interior_travel(dist_, route);
        for (int p = 0; p <= static_cast<int>(rest.size()); ++p) {
            if (p == i) continue;  // identity
            std::vector<int> cand = rest;
            cand.insert(cand.begin() + p, route.begin() + i, route.begin() + i + len);
            const double delta = detail::interior_travel(dist_, cand) - base;
            if (delta >= -kImproveEps) continue;
            if (inst_.variant == Variant::vrptw &&
                !detail::vrptw_interior_feasible(inst_, dist_, cand)) {
                continue;
            }
            if (inst_.variant == Variant::pdtsp && !detail::pdtsp_interior_feasible(inst_, cand)) {
                continue;
            }
            route = std::move(cand);
            return true;
        }
        return false;
    }

    void apply_or_opt(std::size_t r, int i, int len, std::size_t r2, int p, long long seg_load) {
        auto seg_begin = routes_[r].begin() + i;
        std::vector<int> seg(seg_begin, seg_begin + len);
        routes_[r].erase(seg_begin, seg_begin + len);
        routes_[r2].insert(routes_[r2].begin() + p, seg.begin(), seg.end());
        loads_[r] -= seg_load;
        loads_[r2] += seg_load;
        prune_empty();
    }

    bool swap_customers() {
        for (std::size_t r1 = 0; r1 < routes_.size(); ++r1) {
            for (std::size_t r2 = r1; r2 < routes_.size(); ++r2) {
                auto& a = routes_[r1];
                auto& b = routes_[r2];
                for (std::size_t i = 0; i < a.size(); ++i) {
                    for (std::size_t j = r1 == r2 ? i + 1 : std::size_t{0}; j < b.size(); ++j) {
                        const int u = a[i];
                        const int v = b[j];
                        if (!inst_.demands.empty() && r1 != r2) {
                            if (loads_[r1] - inst_.demands[u] + inst_.demands[v] > inst_.capacity) continue;
                            if (loads_[r2] - inst_.demands[v] + inst_.demands[u] > inst_.capacity) continue;
                        }
                        std::vector<int> ca = a;
                        std::vector<int> cb;
                        double delta;
                        if (r1 == r2) {
                            ca[i] = v;
                            ca[j] = u;
                            delta = detail::interior_travel(dist_, ca) - detail::interior_travel(dist_, a);
                        } else {
                            cb = b;
                            ca[i] = v;
                            cb[j] = u;
                            delta = detail::interior_travel(dist_, ca) + detail::interior_travel(dist_, cb) -
                                    detail::interior_travel(dist_, a) - detail::interior_travel(dist_, b);
                        }
                        if (delta >= -kImproveEps) continue;
                        if (inst_.variant == Variant::vrptw) {
                            if (!detail::vrptw_interior_feasible(inst_, dist_, ca)) continue;
                            if (r1 != r2 && !detail::vrptw_interior_feasible(inst_, dist_, cb)) continue;
                        }
                        if (inst_.variant == Variant::pdtsp && !detail::pdtsp_interior_feasible(inst_, ca)) {
                            continue;
                        }
                        if (r1 == r2) {
                            a = std::move(ca);
                        } else {
                            const long long du = inst_.demands.empty() ? 0 : inst_.demands[u];
                            const long long dv = inst_.demands.empty() ? 0 : inst_.demands[v];
                            a = std::move(ca);
                            b = std::move(cb);
                            loads_[r1] += dv - du;
                            loads_[r2] += du - dv;
                        }
                        return true;
                    }
                }
            }
        }
        return false;
    }

    // PCVRP: removing v gains its detour but forfeits its prize.
    bool drop_unprofitable() {
        for (std::size_t r = 0; r < routes_.size(); ++r) {
            auto& route = routes_[r];
            for (std::size_t i = 0; i < route.size(); ++i) {
                const int before = i == 0 ? 0 : route[i - 1];
                const int after = i + 1 == route.size() ? 0 : route[i + 1];
                const double detour = dist_(before, route[i]) + dist_(route[i], after) - dist_(before, after);
                if (inst_.prizes[route[i]] - detour >= -kImproveEps) continue;
                unserved_.push_back(route[i]);
                loads_[r] -= inst_.demands[route[i]];
                route.erase(route.begin() + i);
                prune_empty();
                return true;
            }
        }
        return false;
    }

    bool add_profitable() {
        for (std::size_t u = 0; u < unserved_.size(); ++u) {
            const int c = unserved_[u];
            double best = 2.0 * dist_(0, c);  // fresh route
            int best_r = -1, best_p = -1;
            for (std::size_t r = 0; r < routes_.size(); ++r) {
                if (loads_[r] + inst_.demands[c] > inst_.capacity) continue;
                const auto& route = routes_[r];
                for (std::size_t p = 0; p <= route.size(); ++p) {
                    const int a = p == 0 ? 0 : route[p - 1];
                    const int b = p == route.size() ? 0 : route[p];
                    const double detour = dist_(a, c) + dist_(c, b) - dist_(a, b);
                    if (detour < best) {
                        best = detour;
                        best_r = static_cast<int>(r);
                        best_p = static_cast<int>(p);
                    }
                }
            }
            if (best - inst_.prizes[c] >= -kImproveEps) continue;
            if (best_r < 0) {
                routes_.push_back({c});
                loads_.push_back(inst_.demands[c]);
            } else {
                routes_[best_r].insert(routes_[best_r].begin() + best_p, c);
                loads_[best_r] += inst_.demands[c];
            }
            unserved_.erase(unserved_.begin() + u);
            return true;
        }
        return false;
    }

    void prune_empty() {
        for (std::size_t r = routes_.size(); r-- > 0;) {
            if (routes_[r].empty()) {
                routes_.erase(routes_.begin() + r);
                loads_.erase(loads_.begin() + r);
            }
        }
    }

    const Instance& inst_;
    Dist dist_;
    std::vector<std::vector<int>> routes_;
    std::vector<long long> loads_;
    std::vector<int> unserved_;
};

}  // namespace

Solution local_search(const Instance& inst, const Solution& sol) {
    return LocalSearch(inst, sol).run();
}

}  // namespace routepe
