#pragma once

#include <vector>

#include "routepe/types.hpp"

namespace routepe {

// Tolerance used when comparing simulated service times against window ends.
inline constexpr double kTimeTol = 1e-9;

double euclid(const Point& a, const Point& b);

double route_travel(const Instance& inst, const Route& r);

// Travel, collected prizes and the variant objective. Throws StructureError
// on malformed routes (missing depot endpoints, interior depots).
CostBreakdown solution_cost(const Instance& inst, const Solution& sol);

// Violations are data, not errors: returns an empty list iff `sol` is
// feasible for `inst`. VRPTW arrivals are simulated with waiting allowed,
// t_j = max(a_j, t_i + s_i + tau_ij).
std::vector<Violation> check_feasible(const Instance& inst, const Solution& sol);

// d_1 = 0, d_i = distance travelled up to position i. One entry per route
// position, so the last entry is the total route length.
std::vector<double> cumulative_distances(const Instance& inst, const Route& r);

// Depot-anchored polar angles in [-pi, pi), indexed by node (entry 0 unused).
// A customer coincident with the depot gets angle 0 and its at_depot flag set.
struct DepotAngles {
    std::vector<double> theta;
    std::vector<bool> at_depot;
};

DepotAngles depot_angles(const Instance& inst);

// incumbent - min(new_cost, incumbent); positive iff the candidate improves
// the incumbent.
double reward(double incumbent_cost, double new_cost);

// Per-node lookup tables for a solution: which route serves each node, its
// within-route position (depot = 0) and the cyclic length customers+1 of its
// route. Unserved nodes get route -1.
struct NodePositions {
    std::vector<int> route;
    std::vector<int> pos;
    std::vector<int> cycle_len;
    int max_pos = 0;
};

NodePositions node_positions(const Instance& inst, const Solution& sol);

// Pairwise distance helper; precomputes the full matrix for desk-scale
// instances and falls back to direct evaluation above ~2000 nodes.
class Dist {
public:
    explicit Dist(const Instance& inst);

    double operator()(int i, int j) const {
        if (!matrix_.empty()) return matrix_[static_cast<std::size_t>(i) * n_ + j];
        return euclid(inst_->coords[i], inst_->coords[j]);
    }

private:
    const Instance* inst_;
    std::size_t n_;
    std::vector<double> matrix_;
};

}  // namespace routepe
