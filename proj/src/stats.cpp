#include "routepe/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "routepe/core.hpp"
#include "routepe/errors.hpp"

namespace routepe {

namespace {

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

AnisometryReport anisometry(const std::vector<Instance>& instances,
                            const std::vector<Solution>& solutions) {
    if (instances.empty() || instances.size() != solutions.size()) {
        throw ConfigError("anisometry: need a nonempty, aligned batch");
    }

    AnisometryReport rep;
    std::vector<double> pooled_residuals;
    double edge_sum = 0.0;
    std::size_t edge_count = 0;
    double pooled_cv_sum = 0.0, ratio_sum = 0.0;
    double route_cv_sum = 0.0, route_ratio_sum = 0.0;
    std::size_t used = 0, routes_used = 0;

    auto stats_of = [](const std::vector<double>& edges, double* cv, double* ratio) {
        double mean = 0.0;
        for (double e : edges) mean += e;
        mean /= edges.size();
        double var = 0.0;
        double emin = std::numeric_limits<double>::infinity(), emax = 0.0;
        for (double e : edges) {
            var += (e - mean) * (e - mean);
            emin = std::min(emin, e);
            emax = std::max(emax, e);
        }
        var /= edges.size();  // population variance
        if (mean <= 0.0 || emin <= 0.0) return false;
        *cv = std::sqrt(var) / mean;
        *ratio = emax / emin;
        return true;
    };

    for (std::size_t s = 0; s < instances.size(); ++s) {
        const Instance& inst = instances[s];
        std::vector<double> instance_edges;
        for (const Route& r : solutions[s].routes) {
            const std::vector<double> cum = cumulative_distances(inst, r);
            const int len = static_cast<int>(cum.size());
            std::vector<double> edges(len - 1);
            for (int i = 1; i < len; ++i) edges[i - 1] = cum[i] - cum[i - 1];
            instance_edges.insert(instance_edges.end(), edges.begin(), edges.end());

            double cv, ratio;
            if (stats_of(edges, &cv, &ratio)) {
                route_cv_sum += cv;
                route_ratio_sum += ratio;
                routes_used++;
            }

            // Least-squares fit of d_i against the position index i = 1..len.
            const double n = len;
            double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
            for (int i = 0; i < len; ++i) {
                const double x = i + 1;
                sx += x;
                sy += cum[i];
                sxx += x * x;
                sxy += x * cum[i];
            }
            const double denom = n * sxx - sx * sx;
            const double slope = denom != 0.0 ? (n * sxy - sx * sy) / denom : 0.0;
            const double intercept = (sy - slope * sx) / n;
            std::vector<double> resid(len);
            for (int i = 0; i < len; ++i) resid[i] = cum[i] - (slope * (i + 1) + intercept);
            const double med = median(resid);
            for (double rr : resid) pooled_residuals.push_back(std::abs(rr - med));
        }
        if (instance_edges.empty()) continue;

        double cv, ratio;
        if (stats_of(instance_edges, &cv, &ratio)) {
            pooled_cv_sum += cv;
            ratio_sum += ratio;
            used++;
        }
        double mean = 0.0;
        for (double e : instance_edges) mean += e;
        edge_sum += mean;
        edge_count += instance_edges.size();
    }

    if (used == 0 || routes_used == 0 || edge_count == 0) {
        throw ConfigError("anisometry: batch has no route edges");
    }
    rep.cv = route_cv_sum / routes_used;
    rep.cv_pooled = pooled_cv_sum / used;
    rep.max_min = ratio_sum / used;
    rep.max_min_per_route = route_ratio_sum / routes_used;
    rep.mad = median(std::move(pooled_residuals)) / (edge_sum / edge_count);
    rep.n_instances = used;
    rep.n_routes = routes_used;
    return rep;
}

EntropyReport angular_entropy(const std::vector<Instance>& instances,
                              const std::vector<Solution>& solutions, int k_lo, int k_hi, int bins) {
    if (instances.empty() || instances.size() != solutions.size()) {
        throw ConfigError("angular_entropy: need a nonempty, aligned batch");
    }
    if (k_lo < 2 || k_hi < k_lo || bins < 2) throw ConfigError("angular_entropy: bad k range or bins");

    constexpr double pi = 3.14159265358979323846;
    EntropyReport rep;
    rep.k_lo = k_lo;
    rep.k_hi = k_hi;

    std::vector<DepotAngles> angles(instances.size());
    for (std::size_t s = 0; s < instances.size(); ++s) angles[s] = depot_angles(instances[s]);

    double sum = 0.0;
    std::size_t counted = 0;
    double minimum = std::numeric_limits<double>::infinity();
    for (int k = k_lo; k <= k_hi; ++k) {
        std::vector<std::size_t> hist(bins, 0);
        std::size_t total = 0;
        for (std::size_t s = 0; s < instances.size(); ++s) {
            for (const Route& r : solutions[s].routes) {
                // Route positions are 1-based with the depot at 1, so the
                // customer at position k sits at nodes[k - 1].
                if (k - 1 > r.num_customers()) continue;
                const int v = r.nodes[k - 1];
                int bin = static_cast<int>((angles[s].theta[v] + pi) / (2.0 * pi) * bins);
                bin = std::clamp(bin, 0, bins - 1);
                hist[bin]++;
                total++;
            }
        }
        if (total == 0) {
            rep.per_k.push_back(-1.0);
            continue;
        }
        double h = 0.0;
        for (std::size_t c : hist) {
            if (c == 0) continue;
            const double p = static_cast<double>(c) / total;
            h -= p * std::log(p);
        }
        const double norm = h / std::log(static_cast<double>(bins));
        rep.per_k.push_back(norm);
        sum += norm;
        counted++;
        minimum = std::min(minimum, norm);
    }
    if (counted == 0) throw ConfigError("angular_entropy: no routes reach the requested positions");
    rep.mean = sum / counted;
    rep.min = minimum;
    return rep;
}

}  // namespace routepe
