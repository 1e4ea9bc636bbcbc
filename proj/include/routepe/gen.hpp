#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "routepe/types.hpp"

namespace routepe {

enum class Layout { uniform, clustered };

std::string to_string(Layout l);
Layout layout_from_string(const std::string& s);

struct GenConfig {
    Variant variant = Variant::cvrp;
    int n = 100;  // customers; for PDTSP the number of pickup-delivery requests
    Layout layout = Layout::uniform;
    std::uint64_t seed = 0;
    std::optional<double> kappa;  // PCVRP prize scale, required for that variant
    int cluster_count = 5;
    double horizon = 3.0;  // VRPTW planning horizon
};

// Size-dependent vehicle capacity: 30 for n <= 20, 30 + floor(n/5) up to
// n = 1000, 30 + floor(1000/5 + (n-1000)/33.3) beyond.
int capacity_for(int n);

// Deterministic synthesis: the pair (config, index) fully determines the
// instance. `index` selects the per-instance RNG stream within a batch.
Instance gen_instance(const GenConfig& cfg, std::uint64_t index = 0);

// Convenience batch; parallel generation elsewhere must reproduce exactly
// this sequence because every index draws from its own stream.
std::vector<Instance> gen_batch(const GenConfig& cfg, int count, int jobs = 1);

// Fraction of customers a greedy prize-vs-detour insertion serves on PCVRP
// instances with the given kappa, averaged over 20 seeded instances. Exposed
// because calibrate_kappa's contract is stated in terms of this oracle.
double greedy_served_fraction(int n, std::uint64_t seed, double kappa, int batch = 20);

// Bisection on kappa until the greedy oracle serves target_fraction of
// customers (within +-0.05) at size n.
double calibrate_kappa(int n, std::uint64_t seed, double target_fraction);

}  // namespace routepe
