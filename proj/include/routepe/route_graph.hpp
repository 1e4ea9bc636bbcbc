#pragma once

#include <vector>

#include "routepe/types.hpp"

namespace routepe {

// Undirected graph formed by the depot and the arcs of every route, with
// parallel edges collapsed. Nodes outside any route are absent.
struct RouteGraph {
    int n = 0;                          // instance node count
    std::vector<std::vector<int>> adj;  // sorted, deduplicated neighbors
    std::vector<char> present;
};

RouteGraph route_graph(const Instance& inst, const Solution& sol);

// Hop distances from src; -1 for unreachable nodes.
std::vector<int> bfs_hops(const RouteGraph& g, int src);

}  // namespace routepe
