#include "routepe/gen.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "routepe/core.hpp"
#include "routepe/errors.hpp"
#include "routepe/parallel.hpp"
#include "routepe/rng.hpp"

namespace routepe {

std::string to_string(Layout l) {
    return l == Layout::uniform ? "uniform" : "clustered";
}

Layout layout_from_string(const std::string& s) {
    if (s == "uniform") return Layout::uniform;
    if (s == "clustered") return Layout::clustered;
    throw ConfigError("unknown layout: " + s);
}

int capacity_for(int n) {
    if (n > 1000) return 30 + static_cast<int>(std::floor(1000.0 / 5.0 + (n - 1000) / 33.3));
    if (n > 20) return 30 + n / 5;
    return 30;
}

namespace {

Point draw_point(Rng& rng) {
    const double x = rng.next_double();
    const double y = rng.next_double();
    return {x, y};
}

std::vector<Point> draw_coords_uniform(Rng& rng, int n_nodes) {
    std::vector<Point> coords(n_nodes);
    for (Point& p : coords) p = draw_point(rng);
    return coords;
}

// Cluster centers uniform in [0.2, 0.8]^2; customers Gaussian (sigma = 0.05)
// around a uniformly chosen center, rejection-sampled into the unit square.
// The depot stays uniform over the whole square.
std::vector<Point> draw_coords_clustered(Rng& rng, int n_nodes, int cluster_count) {
    std::vector<Point> coords(n_nodes);
    coords[0] = draw_point(rng);
    std::vector<Point> centers(cluster_count);
    for (Point& c : centers) {
        c.x = rng.uniform(0.2, 0.8);
        c.y = rng.uniform(0.2, 0.8);
    }
    constexpr double sigma = 0.05;
    for (int v = 1; v < n_nodes; ++v) {
        const Point& c = centers[rng.index(centers.size())];
        double x, y;
        do {
            x = c.x + sigma * rng.normal();
            y = c.y + sigma * rng.normal();
        } while (x < 0.0 || x > 1.0 || y < 0.0 || y > 1.0);
        coords[v] = {x, y};
    }
    return coords;
}

std::string config_echo(const GenConfig& cfg, std::uint64_t index) {
    nlohmann::json j;
    j["generator"] = {
        {"variant", to_string(cfg.variant)},
        {"n", cfg.n},
        {"layout", to_string(cfg.layout)},
        {"seed", cfg.seed},
        {"index", index},
    };
    if (cfg.layout == Layout::clustered) j["generator"]["cluster_count"] = cfg.cluster_count;
    if (cfg.variant == Variant::vrptw) j["generator"]["horizon"] = cfg.horizon;
    if (cfg.kappa) j["generator"]["kappa"] = *cfg.kappa;
    return j.dump();
}

}  // namespace

Instance gen_instance(const GenConfig& cfg, std::uint64_t index) {
    if (cfg.n < 1) throw ConfigError("gen: n must be >= 1");
    if (cfg.layout == Layout::clustered && cfg.cluster_count < 1) {
        throw ConfigError("gen: cluster_count must be >= 1");
    }
    if (cfg.variant == Variant::pcvrp && !cfg.kappa) {
        throw ConfigError("gen: pcvrp requires kappa (see calibrate-kappa)");
    }

    Rng rng(stream_seed(cfg.seed, index));
    const int n_customers = cfg.variant == Variant::pdtsp ? 2 * cfg.n : cfg.n;
    const int n_nodes = n_customers + 1;

    Instance inst;
    inst.variant = cfg.variant;
    inst.coords = cfg.layout == Layout::uniform ? draw_coords_uniform(rng, n_nodes)
                                                : draw_coords_clustered(rng, n_nodes, cfg.cluster_count);

    if (cfg.variant != Variant::pdtsp) {
        inst.capacity = capacity_for(cfg.n);
        inst.demands.assign(n_nodes, 0);
        for (int v = 1; v < n_nodes; ++v) inst.demands[v] = rng.uniform_int(1, 9);
    }

    if (cfg.variant == Variant::vrptw) {
        inst.service.assign(n_nodes, 0.0);
        inst.windows.assign(n_nodes, TimeWindow{});
        for (int v = 1; v < n_nodes; ++v) {
            const double s = rng.uniform(0.15, 0.18);
            const double len = rng.uniform(0.18, 0.20);
            const double direct = euclid(inst.coords[0], inst.coords[v]);
            // Start no earlier than a direct depot trip so a schedule always
            // exists; stay clear of the horizon when the square allows it.
            const double slack = cfg.horizon - len - s - direct - direct;
            const double open = direct + std::max(0.0, slack) * rng.next_double();
            inst.service[v] = s;
            inst.windows[v] = {open, open + len};
        }
    }

    if (cfg.variant == Variant::pcvrp) {
        inst.prizes.assign(n_nodes, 0.0);
        for (int v = 1; v < n_nodes; ++v) {
            const double xi = rng.uniform(0.8, 1.2);
            inst.prizes[v] = *cfg.kappa * xi * inst.demands[v];
        }
    }

    if (cfg.variant == Variant::pdtsp) {
        for (int r = 1; r <= cfg.n; ++r) inst.pd_pairs.emplace_back(r, r + cfg.n);
    }

    inst.meta_json = config_echo(cfg, index);
    return inst;
}

std::vector<Instance> gen_batch(const GenConfig& cfg, int count, int jobs) {
    std::vector<Instance> out(count);
    parallel_for(static_cast<std::size_t>(count), jobs,
                 [&](std::size_t i) { out[i] = gen_instance(cfg, i); });
    return out;
}

namespace {

// Greedy oracle: repeatedly serve the customer whose prize most exceeds its
// cheapest feasible insertion detour; stop when no profitable customer
// remains. New single-customer routes count as an insertion candidate.
double greedy_served_one(const Instance& inst) {
    const Dist dist(inst);
    const int n = inst.num_customers();
    std::vector<std::vector<int>> routes;
    std::vector<double> loads;
    std::vector<char> served(inst.num_nodes(), 0);

    while (true) {
        int best_c = -1, best_r = -1, best_p = -1;
        double best_gain = 0.0;
        for (int c = 1; c <= n; ++c) {
            if (served[c]) continue;
            double cheapest = 2.0 * dist(0, c);  // open a fresh route
            int at_r = -1, at_p = -1;
            for (std::size_t r = 0; r < routes.size(); ++r) {
                if (loads[r] + inst.demands[c] > inst.capacity) continue;
                const auto& route = routes[r];
                for (std::size_t p = 0; p <= route.size(); ++p) {
                    const int a = p == 0 ? 0 : route[p - 1];
                    const int b = p == route.size() ? 0 : route[p];
                    const double detour = dist(a, c) + dist(c, b) - dist(a, b);
                    if (detour < cheapest) {
                        cheapest = detour;
                        at_r = static_cast<int>(r);
                        at_p = static_cast<int>(p);
                    }
                }
            }
            const double gain = inst.prizes[c] - cheapest;
            if (gain > best_gain) {
                best_gain = gain;
                best_c = c;
                best_r = at_r;
                best_p = at_p;
            }
        }
        if (best_c < 0) break;
        if (best_r < 0) {
            routes.push_back({best_c});
            loads.push_back(inst.demands[best_c]);
        } else {
            routes[best_r].insert(routes[best_r].begin() + best_p, best_c);
            loads[best_r] += inst.demands[best_c];
        }
        served[best_c] = 1;
    }

    int count = 0;
    for (int c = 1; c <= n; ++c) count += served[c];
    return static_cast<double>(count) / n;
}

}  // namespace

double greedy_served_fraction(int n, std::uint64_t seed, double kappa, int batch) {
    GenConfig cfg;
    cfg.variant = Variant::pcvrp;
    cfg.n = n;
    cfg.seed = seed;
    cfg.kappa = kappa;
    double total = 0.0;
    for (int i = 0; i < batch; ++i) total += greedy_served_one(gen_instance(cfg, i));
    return total / batch;
}

double calibrate_kappa(int n, std::uint64_t seed, double target_fraction) {
    if (target_fraction <= 0.0 || target_fraction >= 1.0) {
        throw ConfigError("calibrate_kappa: target_fraction must be in (0, 1)");
    }
    double lo = 0.0;
    double hi = 0.05;
    while (greedy_served_fraction(n, seed, hi) < target_fraction) {
        hi *= 2.0;
        if (hi > 1e6) throw NumericError("calibrate_kappa: target fraction unreachable");
    }
    double mid = hi;
    for (int it = 0; it < 48; ++it) {
        mid = 0.5 * (lo + hi);
        const double f = greedy_served_fraction(n, seed, mid);
        if (std::abs(f - target_fraction) <= 0.01) break;
        (f < target_fraction ? lo : hi) = mid;
    }
    return mid;
}

}  // namespace routepe
