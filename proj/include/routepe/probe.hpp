#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "routepe/pe.hpp"
#include "routepe/types.hpp"

namespace routepe {

// One sampled customer pair. d1/d2 are only defined for same-route pairs:
// d1 = |d_i - d_j| (cumulative travel-distance gap), d2 = min(d1, d_L - d1)
// (cyclic arc distance). d3 is the different-route indicator.
struct PairSample {
    int solution = 0;
    int u = 0;
    int v = 0;
    bool same_route = false;
    double d1 = 0.0;
    double d2 = 0.0;
    int d3 = 0;
};

// Uniform over (solution, unordered customer pair); the depot and unserved
// customers are never sampled. Pairs are grouped by solution and drawn from
// per-solution seed streams, so the result is independent of how probing is
// later parallelized.
std::vector<PairSample> sample_pairs(const std::vector<Instance>& instances,
                                     const std::vector<Solution>& solutions, std::size_t count,
                                     std::uint64_t seed);

// Spearman rank correlation with average ranks for ties. Throws
// UndefinedCorrelation when either input is constant, ConfigError on length
// mismatch or fewer than two points.
double spearman(const std::vector<double>& xs, const std::vector<double>& ys);

struct ProbeReport {
    PEMethod method = PEMethod::nope;
    std::optional<double> rho_d1;
    std::optional<double> rho_d2;
    std::optional<double> rho_d3;
    std::size_t n_pairs_d1 = 0;  // same-route pairs (also the D2 count)
    std::size_t n_pairs_d3 = 0;  // all pairs
    // Supplementary scalar: mean embedding distance of inter-route pairs over
    // intra-route pairs.
    double d3_ratio = 0.0;
};

// Spearman between embedding L2 distances and the three structural targets,
// one report per method. Undefined coefficients (constant distances, e.g.
// NoPE) surface as empty optionals. Embeddings are computed per solution,
// parallel over `jobs` workers, reduced in solution order.
std::vector<ProbeReport> probe(const std::vector<Instance>& instances,
                               const std::vector<Solution>& solutions,
                               const std::vector<PEMethod>& methods, std::size_t pair_count,
                               std::uint64_t seed, const PEConfig& base_cfg, int jobs = 1);

}  // namespace routepe
