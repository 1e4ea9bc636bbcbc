#pragma once

#include <string>
#include <utility>
#include <vector>

namespace routepe {

enum class Variant { cvrp, vrptw, pcvrp, pdtsp };

std::string to_string(Variant v);
Variant variant_from_string(const std::string& s);

struct Point {
    double x = 0.0;
    double y = 0.0;
};

struct TimeWindow {
    double open = 0.0;
    double close = 0.0;
};

// A routing instance on the unit square. Node 0 is the depot; per-node arrays
// are sized num_nodes() with a neutral entry at index 0. For PDTSP, `n`
// requests occupy customers 1..2n and pd_pairs maps pickup -> delivery.
struct Instance {
    Variant variant = Variant::cvrp;
    std::vector<Point> coords;                  // [0] = depot
    std::vector<int> demands;                   // empty for PDTSP
    int capacity = 0;
    std::vector<TimeWindow> windows;            // VRPTW only
    std::vector<double> service;                // VRPTW only
    std::vector<double> prizes;                 // PCVRP only
    std::vector<std::pair<int, int>> pd_pairs;  // PDTSP only
    std::string meta_json;                      // generator config echo, preserved on round-trip

    int num_nodes() const { return static_cast<int>(coords.size()); }
    int num_customers() const { return num_nodes() - 1; }
};

// Closed route: nodes.front() == nodes.back() == 0, customers in between.
struct Route {
    std::vector<int> nodes;

    int length() const { return static_cast<int>(nodes.size()); }
    int num_customers() const { return length() - 2; }
};

struct Solution {
    std::vector<Route> routes;
};

struct CostBreakdown {
    double travel = 0.0;
    double prize_collected = 0.0;  // PCVRP only, zero otherwise
    double objective = 0.0;        // travel - prize_collected for PCVRP, travel otherwise
};

enum class ViolationKind {
    structure,        // malformed route
    duplicate_visit,  // customer appears more than once
    unserved,         // customer missing (not a violation for PCVRP)
    capacity,         // route load exceeds C
    time_window,      // simulated service start after window close
    precedence,       // delivery visited before its pickup
};

std::string to_string(ViolationKind k);

struct Violation {
    ViolationKind kind;
    int route = -1;  // route index, -1 when solution-level
    int node = -1;   // offending node, -1 when route-level
    std::string detail;
};

}  // namespace routepe
