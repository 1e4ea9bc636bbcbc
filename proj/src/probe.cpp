#include "routepe/probe.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "routepe/core.hpp"
#include "routepe/errors.hpp"
#include "routepe/parallel.hpp"
#include "routepe/rng.hpp"

namespace routepe {

namespace {

// Per-solution lookup: cumulative travel distance and route totals per node.
struct SolutionIndex {
    std::vector<int> customers;  // served, non-depot
    std::vector<int> route;      // per node
    std::vector<double> cum;     // per node, d_i at its route position
    std::vector<double> total;   // per node, d_L of its route
};

SolutionIndex index_solution(const Instance& inst, const Solution& sol) {
    SolutionIndex si;
    const int n = inst.num_nodes();
    si.route.assign(n, -1);
    si.cum.assign(n, 0.0);
    si.total.assign(n, 0.0);
    for (std::size_t k = 0; k < sol.routes.size(); ++k) {
        const Route& r = sol.routes[k];
        const std::vector<double> cum = cumulative_distances(inst, r);
        for (int i = 1; i + 1 < r.length(); ++i) {
            const int v = r.nodes[i];
            si.route[v] = static_cast<int>(k);
            si.cum[v] = cum[i];
            si.total[v] = cum.back();
            si.customers.push_back(v);
        }
    }
    std::sort(si.customers.begin(), si.customers.end());
    return si;
}

}  // namespace

std::vector<PairSample> sample_pairs(const std::vector<Instance>& instances,
                                     const std::vector<Solution>& solutions, std::size_t count,
                                     std::uint64_t seed) {
    if (instances.empty() || instances.size() != solutions.size()) {
        throw ConfigError("sample_pairs: need a nonempty, aligned batch");
    }
    const std::size_t n_sol = solutions.size();

    std::vector<SolutionIndex> idx(n_sol);
    for (std::size_t s = 0; s < n_sol; ++s) idx[s] = index_solution(instances[s], solutions[s]);

    // Split the budget across solutions first, then draw each solution's
    // pairs from its own stream; worker count cannot change the result.
    std::vector<std::size_t> quota(n_sol, 0);
    Rng master(seed);
    for (std::size_t i = 0; i < count; ++i) quota[master.index(n_sol)]++;

    std::vector<PairSample> out;
    out.reserve(count);
    for (std::size_t s = 0; s < n_sol; ++s) {
        const SolutionIndex& si = idx[s];
        const std::size_t m = si.customers.size();
        if (m < 2) {
            if (quota[s] > 0) throw ConfigError("sample_pairs: solution with fewer than 2 served customers");
            continue;
        }
        Rng rng(stream_seed(seed, s + 1));
        for (std::size_t q = 0; q < quota[s]; ++q) {
            const std::size_t a = rng.index(m);
            std::size_t b = rng.index(m - 1);
            if (b >= a) ++b;
            PairSample ps;
            ps.solution = static_cast<int>(s);
            ps.u = si.customers[a];
            ps.v = si.customers[b];
            ps.same_route = si.route[ps.u] == si.route[ps.v];
            ps.d3 = ps.same_route ? 0 : 1;
            if (ps.same_route) {
                const double gap = std::abs(si.cum[ps.u] - si.cum[ps.v]);
                ps.d1 = gap;
                ps.d2 = std::min(gap, si.total[ps.u] - gap);
            }
            out.push_back(ps);
        }
    }
    return out;
}

double spearman(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) throw ConfigError("spearman: length mismatch");
    const std::size_t n = xs.size();
    if (n < 2) throw ConfigError("spearman: need at least two points");

    auto ranks = [n](const std::vector<double>& v) {
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
        std::vector<double> r(n);
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
            const double mean_rank = 0.5 * (i + j) + 1.0;  // average rank of the tie group
            for (std::size_t t = i; t <= j; ++t) r[order[t]] = mean_rank;
            i = j + 1;
        }
        return r;
    };

    const std::vector<double> rx = ranks(xs);
    const std::vector<double> ry = ranks(ys);

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += rx[i];
        my += ry[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = rx[i] - mx;
        const double dy = ry[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) {
        throw UndefinedCorrelation("spearman: constant input");
    }
    return sxy / std::sqrt(sxx * syy);
}

std::vector<ProbeReport> probe(const std::vector<Instance>& instances,
                               const std::vector<Solution>& solutions,
                               const std::vector<PEMethod>& methods, std::size_t pair_count,
                               std::uint64_t seed, const PEConfig& base_cfg, int jobs) {
    const std::vector<PairSample> pairs = sample_pairs(instances, solutions, pair_count, seed);

    std::vector<ProbeReport> reports;
    reports.reserve(methods.size());
    for (PEMethod method : methods) {
        PEConfig cfg = base_cfg;
        cfg.method = method;

        // Seeded tables (APE rows, DACT projection, RPE/SPD tables, sign
        // flips) are drawn per solution, mirroring the per-solution pair
        // streams, so one unlucky table draw cannot skew a whole batch.
        std::vector<Embedding> embeddings(solutions.size());
        parallel_for(solutions.size(), jobs, [&](std::size_t s) {
            PEConfig per_solution = cfg;
            per_solution.seed = stream_seed(seed, s);
            embeddings[s] = encode(instances[s], solutions[s], per_solution);
        });

        std::vector<double> dist(pairs.size());
        for (std::size_t p = 0; p < pairs.size(); ++p) {
            const PairSample& ps = pairs[p];
            const auto& a = embeddings[ps.solution].vectors[ps.u];
            const auto& b = embeddings[ps.solution].vectors[ps.v];
            double acc = 0.0;
            for (std::size_t d = 0; d < a.size(); ++d) {
                const double diff = a[d] - b[d];
                acc += diff * diff;
            }
            dist[p] = std::sqrt(acc);
        }

        ProbeReport rep;
        rep.method = method;
        std::vector<double> x1, y1, x2, y2, x3, y3;
        double inter_sum = 0.0, intra_sum = 0.0;
        std::size_t inter_n = 0, intra_n = 0;
        for (std::size_t p = 0; p < pairs.size(); ++p) {
            const PairSample& ps = pairs[p];
            if (ps.same_route) {
                x1.push_back(dist[p]);
                y1.push_back(ps.d1);
                x2.push_back(dist[p]);
                y2.push_back(ps.d2);
                intra_sum += dist[p];
                intra_n++;
            } else {
                inter_sum += dist[p];
                inter_n++;
            }
            x3.push_back(dist[p]);
            y3.push_back(static_cast<double>(ps.d3));
        }
        rep.n_pairs_d1 = x1.size();
        rep.n_pairs_d3 = x3.size();
        auto rho_or_null = [](const std::vector<double>& a,
                              const std::vector<double>& b) -> std::optional<double> {
            try {
                return spearman(a, b);
            } catch (const UndefinedCorrelation&) {
                return std::nullopt;
            }
        };
        if (!x1.empty()) {
            rep.rho_d1 = rho_or_null(x1, y1);
            rep.rho_d2 = rho_or_null(x2, y2);
        }
        rep.rho_d3 = rho_or_null(x3, y3);
        if (intra_n > 0 && inter_n > 0 && intra_sum > 0.0) {
            rep.d3_ratio = (inter_sum / inter_n) / (intra_sum / intra_n);
        }
        reports.push_back(std::move(rep));
    }
    return reports;
}

}  // namespace routepe
