#pragma once

#include <vector>

#include "routepe/types.hpp"

namespace routepe {

// Edge-length heterogeneity of a solved batch. CV is computed per route and
// averaged (the pooled per-instance variant is reported alongside), max/min
// is per instance and averaged (per-route variant alongside), MAD is the
// median absolute deviation of per-route linear-fit residuals (d_i against i)
// pooled across all routes, in units of the mean edge length.
struct AnisometryReport {
    double cv = 0.0;              // mean per-route CV
    double cv_pooled = 0.0;       // mean per-instance pooled CV
    double max_min = 0.0;         // mean per-instance max/min edge ratio
    double max_min_per_route = 0.0;
    double mad = 0.0;
    std::size_t n_instances = 0;
    std::size_t n_routes = 0;
};

AnisometryReport anisometry(const std::vector<Instance>& instances,
                            const std::vector<Solution>& solutions);

// Normalized Shannon entropy of the depot-angle distribution of customers at
// within-route position k, pooled across routes and instances, one value per
// k. Positions are 1-based with the depot at 1, so k starts at 2.
struct EntropyReport {
    int k_lo = 2;
    int k_hi = 15;
    std::vector<double> per_k;  // entry i corresponds to k = k_lo + i; -1 when no samples
    double mean = 0.0;          // over k with samples
    double min = 0.0;
};

EntropyReport angular_entropy(const std::vector<Instance>& instances,
                              const std::vector<Solution>& solutions, int k_lo = 2, int k_hi = 15,
                              int bins = 36);

}  // namespace routepe
