#include "routepe/core.hpp"

#include <algorithm>
#include <cmath>

#include "routepe/errors.hpp"

namespace routepe {

std::string to_string(Variant v) {
    switch (v) {
        case Variant::cvrp: return "cvrp";
        case Variant::vrptw: return "vrptw";
        case Variant::pcvrp: return "pcvrp";
        case Variant::pdtsp: return "pdtsp";
    }
    return "cvrp";
}

Variant variant_from_string(const std::string& s) {
    if (s == "cvrp") return Variant::cvrp;
    if (s == "vrptw") return Variant::vrptw;
    if (s == "pcvrp") return Variant::pcvrp;
    if (s == "pdtsp") return Variant::pdtsp;
    throw ConfigError("unknown variant: " + s);
}

std::string to_string(ViolationKind k) {
    switch (k) {
        case ViolationKind::structure: return "structure";
        case ViolationKind::duplicate_visit: return "duplicate_visit";
        case ViolationKind::unserved: return "unserved";
        case ViolationKind::capacity: return "capacity";
        case ViolationKind::time_window: return "time_window";
        case ViolationKind::precedence: return "precedence";
    }
    return "structure";
}

double euclid(const Point& a, const Point& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return std::sqrt(dx * dx + dy * dy);
}

double route_travel(const Instance& inst, const Route& r) {
    double total = 0.0;
    for (std::size_t i = 1; i < r.nodes.size(); ++i) {
        total += euclid(inst.coords[r.nodes[i - 1]], inst.coords[r.nodes[i]]);
    }
    return total;
}

namespace {

void require_closed(const Instance& inst, const Route& r, int route_idx) {
    if (r.length() < 2) {
        throw StructureError("route " + std::to_string(route_idx) + " has fewer than 2 nodes");
    }
    if (r.nodes.front() != 0 || r.nodes.back() != 0) {
        throw StructureError("route " + std::to_string(route_idx) + " does not start and end at the depot");
    }
    for (int i = 1; i + 1 < r.length(); ++i) {
        const int v = r.nodes[i];
        if (v == 0) {
            throw StructureError("route " + std::to_string(route_idx) + " visits the depot mid-route");
        }
        if (v < 0 || v >= inst.num_nodes()) {
            throw StructureError("route " + std::to_string(route_idx) + " references node " + std::to_string(v));
        }
    }
}

}  // namespace

CostBreakdown solution_cost(const Instance& inst, const Solution& sol) {
    CostBreakdown out;
    for (std::size_t k = 0; k < sol.routes.size(); ++k) {
        const Route& r = sol.routes[k];
        require_closed(inst, r, static_cast<int>(k));
        out.travel += route_travel(inst, r);
        if (inst.variant == Variant::pcvrp) {
            for (int i = 1; i + 1 < r.length(); ++i) {
                out.prize_collected += inst.prizes[r.nodes[i]];
            }
        }
    }
    out.objective = inst.variant == Variant::pcvrp ? out.travel - out.prize_collected : out.travel;
    return out;
}

std::vector<Violation> check_feasible(const Instance& inst, const Solution& sol) {
    std::vector<Violation> out;
    const int n_nodes = inst.num_nodes();
    std::vector<int> visits(n_nodes, 0);

    for (std::size_t k = 0; k < sol.routes.size(); ++k) {
        const Route& r = sol.routes[k];
        const int ridx = static_cast<int>(k);

        // Structural problems are reported as violations here, not thrown.
        bool malformed = r.length() < 2 || r.nodes.front() != 0 || r.nodes.back() != 0;
        for (int i = 1; !malformed && i + 1 < r.length(); ++i) {
            malformed = r.nodes[i] <= 0 || r.nodes[i] >= n_nodes;
        }
        if (malformed) {
            out.push_back({ViolationKind::structure, ridx, -1, "malformed route"});
            continue;
        }

        for (int i = 1; i + 1 < r.length(); ++i) visits[r.nodes[i]]++;

        if (inst.variant != Variant::pdtsp && !inst.demands.empty()) {
            long long load = 0;
            for (int i = 1; i + 1 < r.length(); ++i) load += inst.demands[r.nodes[i]];
            if (load > inst.capacity) {
                out.push_back({ViolationKind::capacity, ridx, -1,
                               "load " + std::to_string(load) + " > capacity " + std::to_string(inst.capacity)});
            }
        }

        if (inst.variant == Variant::vrptw) {
            // t_j = max(a_j, t_i + s_i + tau_ij), waiting allowed, depot open-ended.
            double t = 0.0;
            int prev = 0;
            for (int i = 1; i + 1 < r.length(); ++i) {
                const int v = r.nodes[i];
                const double arrive = t + (prev == 0 ? 0.0 : inst.service[prev]) + euclid(inst.coords[prev], inst.coords[v]);
                const double start = std::max(arrive, inst.windows[v].open);
                if (start > inst.windows[v].close + kTimeTol) {
                    out.push_back({ViolationKind::time_window, ridx, v, "service starts after window close"});
                }
                t = start;
                prev = v;
            }
        }
    }

    for (int v = 1; v < n_nodes; ++v) {
        if (visits[v] > 1) {
            out.push_back({ViolationKind::duplicate_visit, -1, v, "visited " + std::to_string(visits[v]) + " times"});
        } else if (visits[v] == 0 && inst.variant != Variant::pcvrp) {
            out.push_back({ViolationKind::unserved, -1, v, "customer never visited"});
        }
    }

    if (inst.variant == Variant::pdtsp) {
        if (sol.routes.size() != 1) {
            out.push_back({ViolationKind::structure, -1, -1, "pdtsp requires a single tour"});
        } else {
            std::vector<int> pos(n_nodes, -1);
            const Route& r = sol.routes[0];
            if (r.length() >= 2 && r.nodes.front() == 0 && r.nodes.back() == 0) {
                for (int i = 1; i + 1 < r.length(); ++i) pos[r.nodes[i]] = i;
                for (const auto& [p, d] : inst.pd_pairs) {
                    if (pos[p] >= 0 && pos[d] >= 0 && pos[d] < pos[p]) {
                        out.push_back({ViolationKind::precedence, 0, d,
                                       "delivery " + std::to_string(d) + " before pickup " + std::to_string(p)});
                    }
                }
            }
        }
    }

    return out;
}

std::vector<double> cumulative_distances(const Instance& inst, const Route& r) {
    if (r.length() < 2) throw StructureError("cumulative_distances: route shorter than 2 nodes");
    std::vector<double> d(r.nodes.size(), 0.0);
    for (std::size_t i = 1; i < r.nodes.size(); ++i) {
        d[i] = d[i - 1] + euclid(inst.coords[r.nodes[i - 1]], inst.coords[r.nodes[i]]);
    }
    return d;
}

DepotAngles depot_angles(const Instance& inst) {
    constexpr double pi = 3.14159265358979323846;
    DepotAngles out;
    out.theta.assign(inst.coords.size(), 0.0);
    out.at_depot.assign(inst.coords.size(), false);
    const Point depot = inst.coords[0];
    for (int v = 1; v < inst.num_nodes(); ++v) {
        const double dx = inst.coords[v].x - depot.x;
        const double dy = inst.coords[v].y - depot.y;
        if (dx == 0.0 && dy == 0.0) {
            out.theta[v] = 0.0;
            out.at_depot[v] = true;
            continue;
        }
        double t = std::atan2(dy, dx);
        if (t >= pi) t = -pi;  // fold the branch cut so the range is [-pi, pi)
        out.theta[v] = t;
    }
    return out;
}

double reward(double incumbent_cost, double new_cost) {
    return incumbent_cost - std::min(new_cost, incumbent_cost);
}

NodePositions node_positions(const Instance& inst, const Solution& sol) {
    NodePositions np;
    const int n = inst.num_nodes();
    np.route.assign(n, -1);
    np.pos.assign(n, 0);
    np.cycle_len.assign(n, 1);
    for (std::size_t k = 0; k < sol.routes.size(); ++k) {
        const Route& r = sol.routes[k];
        const int cyc = r.num_customers() + 1;  // depot + customers form the cycle
        for (int i = 1; i + 1 < r.length(); ++i) {
            const int v = r.nodes[i];
            np.route[v] = static_cast<int>(k);
            np.pos[v] = i;
            np.cycle_len[v] = cyc;
            np.max_pos = std::max(np.max_pos, i);
        }
    }
    return np;
}

Dist::Dist(const Instance& inst) : inst_(&inst), n_(inst.coords.size()) {
    // ~32 MB ceiling; beyond that distances are computed on demand.
    if (n_ * n_ <= (std::size_t{1} << 22)) {
        matrix_.resize(n_ * n_);
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = 0; j < n_; ++j) {
                matrix_[i * n_ + j] = euclid(inst.coords[i], inst.coords[j]);
            }
        }
    }
}

}  // namespace routepe
