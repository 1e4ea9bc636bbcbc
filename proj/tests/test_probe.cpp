#include <cmath>
#include <map>

#include <doctest.h>

#include "routepe/core.hpp"
#include "routepe/errors.hpp"
#include "routepe/gen.hpp"
#include "routepe/probe.hpp"
#include "routepe/solve.hpp"
#include "routepe/stats.hpp"
#include "oracles.hpp"

using namespace routepe;

namespace {

// Unit square tour: edges all length 1, total 4.
Instance square_instance() {
    Instance inst;
    inst.variant = Variant::cvrp;
    inst.coords = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    inst.demands = {0, 1, 1, 1};
    inst.capacity = 10;
    return inst;
}

Solution square_tour() {
    return Solution{{Route{{0, 1, 2, 3, 0}}}};
}

struct Batch {
    std::vector<Instance> instances;
    std::vector<Solution> solutions;
};

Batch solved_batch(int count, int n, std::uint64_t seed, long long budget) {
    Batch b;
    GenConfig gc;
    gc.n = n;
    gc.seed = seed;
    for (int i = 0; i < count; ++i) {
        b.instances.push_back(gen_instance(gc, i));
        SearchConfig sc;
        sc.budget = budget;
        sc.seed = stream_seed(seed, i);
        b.solutions.push_back(improve(b.instances.back(),
                                      local_search(b.instances.back(), construct(b.instances.back())),
                                      sc)
                                  .best);
    }
    return b;
}

}  // namespace

TEST_CASE("sample_pairs targets: adjacent edge gap and antipodal cyclic max") {
    const std::vector<Instance> instances{square_instance()};
    const std::vector<Solution> solutions{square_tour()};
    const auto pairs = sample_pairs(instances, solutions, 4000, 11);
    bool saw_adjacent = false, saw_antipodal = false;
    for (const PairSample& p : pairs) {
        CHECK(p.u != 0);
        CHECK(p.v != 0);
        REQUIRE(p.same_route);
        CHECK(p.d2 <= 2.0 + 1e-12);  // d2 <= d_L / 2
        const auto [lo, hi] = std::minmax(p.u, p.v);
        if (lo == 1 && hi == 2) {
            CHECK(p.d1 == doctest::Approx(1.0));  // one edge apart
            saw_adjacent = true;
        }
        if (lo == 1 && hi == 3) {
            CHECK(p.d1 == doctest::Approx(2.0));
            CHECK(p.d2 == doctest::Approx(2.0));  // exactly d_L / 2
            saw_antipodal = true;
        }
    }
    CHECK(saw_adjacent);
    CHECK(saw_antipodal);
}

TEST_CASE("sample_pairs: uniform over pairs, deterministic per seed") {
    const std::vector<Instance> instances{square_instance()};
    const std::vector<Solution> solutions{square_tour()};
    const std::size_t draws = 100000;
    const auto pairs = sample_pairs(instances, solutions, draws, 29);
    REQUIRE(pairs.size() == draws);
    std::map<std::pair<int, int>, std::size_t> counts;
    for (const PairSample& p : pairs) counts[std::minmax(p.u, p.v)]++;
    REQUIRE(counts.size() == 3u);  // C(3,2) unordered customer pairs
    const double expect = static_cast<double>(draws) / 3.0;
    const double sigma = std::sqrt(draws * (1.0 / 3.0) * (2.0 / 3.0));
    for (const auto& [pair, c] : counts) {
        CHECK(std::abs(static_cast<double>(c) - expect) < 3.0 * sigma);
    }

    const auto again = sample_pairs(instances, solutions, draws, 29);
    REQUIRE(again.size() == pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        CHECK(again[i].u == pairs[i].u);
        CHECK(again[i].v == pairs[i].v);
    }
}

TEST_CASE("spearman: exact cases and the tied oracle") {
    std::vector<double> xs{1, 2, 3, 4, 5};
    CHECK(spearman(xs, xs) == doctest::Approx(1.0));
    std::vector<double> neg{-1, -2, -3, -4, -5};
    CHECK(spearman(xs, neg) == doctest::Approx(-1.0));

    const std::vector<double> ys{2, 1, 4, 3, 5};
    CHECK(spearman(xs, ys) == doctest::Approx(oracle::spearman_rank_pearson(xs, ys)).epsilon(1e-12));

    // Random tied/untied datasets against the independent implementation.
    Rng rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 5 + rng.index(40);
        std::vector<double> a(n), b(n);
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = trial % 2 == 0 ? rng.uniform(0, 10) : rng.uniform_int(0, 5);
            b[i] = trial % 3 == 0 ? rng.uniform_int(0, 4) : rng.uniform(-1, 1);
        }
        double ours;
        try {
            ours = spearman(a, b);
        } catch (const UndefinedCorrelation&) {
            continue;  // constant draw; covered below
        }
        CHECK(ours == doctest::Approx(oracle::spearman_rank_pearson(a, b)).epsilon(1e-12));
        CHECK(ours >= -1.0 - 1e-12);
        CHECK(ours <= 1.0 + 1e-12);
    }

    CHECK_THROWS_AS(spearman({1, 1, 1}, {1, 2, 3}), UndefinedCorrelation);
    CHECK_THROWS_AS(spearman({1, 2}, {1, 2, 3}), ConfigError);
    CHECK_THROWS_AS(spearman({1}, {1}), ConfigError);
}

TEST_CASE("spearman is invariant under strictly monotone transforms") {
    Rng rng(77);
    std::vector<double> a(200), b(200);
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] = rng.uniform(0.1, 5.0);
        b[i] = rng.uniform(0.1, 5.0);
    }
    const double base = spearman(a, b);
    std::vector<double> ea(a.size()), la(a.size()), fa(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        ea[i] = std::exp(a[i]);
        la[i] = std::log(a[i]);
        fa[i] = 3.0 * a[i] + 2.0;
    }
    CHECK(spearman(ea, b) == doctest::Approx(base).epsilon(1e-12));
    CHECK(spearman(la, b) == doctest::Approx(base).epsilon(1e-12));
    CHECK(spearman(fa, b) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("probe: circle route gives near-perfect D2 for ipe, nope yields nulls") {
    // Uniform circle: cumulative distance is proportional to the index, so
    // the integer-harmonic ipe embedding distance is monotone in the cyclic
    // arc distance.
    Instance inst;
    inst.variant = Variant::cvrp;
    inst.capacity = 1000;
    inst.coords.push_back({0.5, 0.5});
    const int n = 24;
    inst.demands.assign(n + 1, 1);
    inst.demands[0] = 0;
    for (int i = 0; i < n; ++i) {
        const double a = 2.0 * 3.14159265358979323846 * i / n;
        inst.coords.push_back({0.5 + 0.4 * std::cos(a), 0.5 + 0.4 * std::sin(a)});
    }
    Route r;
    r.nodes.push_back(0);
    for (int i = 1; i <= n; ++i) r.nodes.push_back(i);
    r.nodes.push_back(0);

    PEConfig cfg;
    cfg.direction = Direction::aware;
    cfg.ipe_bands = 1;  // the fundamental alone is monotone in arc distance
    const auto reports = probe({inst}, {Solution{{r}}}, {PEMethod::ipe, PEMethod::nope}, 2000, 3, cfg);
    REQUIRE(reports.size() == 2);
    REQUIRE(reports[0].rho_d2.has_value());
    CHECK(*reports[0].rho_d2 > 0.9);
    CHECK_FALSE(reports[1].rho_d1.has_value());  // NoPE: constant distances
    CHECK_FALSE(reports[1].rho_d3.has_value());
}

TEST_CASE("probe: seeded-random ape table carries no distance signal") {
    const Batch b = solved_batch(10, 60, 21, 1000);
    PEConfig cfg;
    const auto reports = probe(b.instances, b.solutions, {PEMethod::ape}, 10000, 5, cfg);
    REQUIRE(reports[0].rho_d1.has_value());
    CHECK(std::abs(*reports[0].rho_d1) < 0.1);
}

TEST_CASE("probe ranking on a desk-scale batch" * doctest::timeout(300)) {
    const Batch b = solved_batch(20, 100, 57, 4000);
    // Probe with the literal schedule and the direction-aware variant, the
    // configuration the reference correlations were reported under.
    PEConfig cfg;
    cfg.direction = Direction::aware;
    cfg.freq_mode = FreqMode::paper_geometric;
    const auto reports = probe(b.instances, b.solutions,
                               {PEMethod::ipe, PEMethod::sin, PEMethod::dact_cpe, PEMethod::xpe},
                               10000, 9, cfg);
    const auto& ipe = reports[0];
    const auto& sin = reports[1];
    const auto& dact = reports[2];
    const auto& xpe = reports[3];
    REQUIRE(ipe.rho_d1.has_value());
    REQUIRE(sin.rho_d1.has_value());
    REQUIRE(dact.rho_d1.has_value());
    CHECK(*ipe.rho_d1 > *sin.rho_d1);
    CHECK(*ipe.rho_d1 > *dact.rho_d1);
    CHECK(*ipe.rho_d2 > *sin.rho_d2);
    CHECK(*xpe.rho_d3 > *ipe.rho_d3);
    // Reports are reproducible bit for bit.
    const auto again = probe(b.instances, b.solutions, {PEMethod::ipe}, 10000, 9, cfg);
    CHECK(*again[0].rho_d1 == *ipe.rho_d1);
    // Probing parallelism does not change the result.
    const auto par = probe(b.instances, b.solutions, {PEMethod::ipe}, 10000, 9, cfg, 4);
    CHECK(*par[0].rho_d1 == *ipe.rho_d1);
}

TEST_CASE("anisometry: equal-edge tours are exactly (0, 1, 0)") {
    const AnisometryReport rep = anisometry({square_instance()}, {square_tour()});
    CHECK(rep.cv == 0.0);
    CHECK(rep.max_min == 1.0);
    CHECK(rep.mad == 0.0);
}

TEST_CASE("anisometry: hand-computed route edges [1,1,1,3]") {
    Instance inst;
    inst.variant = Variant::cvrp;
    inst.coords = {{0, 0}, {1, 0}, {2, 0}, {3, 0}};
    inst.demands = {0, 1, 1, 1};
    inst.capacity = 10;
    const Solution sol{{Route{{0, 1, 2, 3, 0}}}};
    const AnisometryReport rep = anisometry({inst}, {sol});
    CHECK(rep.cv == doctest::Approx(std::sqrt(0.75) / 1.5).epsilon(1e-12));
    CHECK(rep.max_min == doctest::Approx(3.0));
}

TEST_CASE("angular entropy: degenerate and uniform histograms") {
    // All customers in one direction -> one bin -> entropy 0.
    Instance inst;
    inst.variant = Variant::cvrp;
    inst.capacity = 100;
    inst.coords = {{0.5, 0.5}};
    inst.demands.assign(9, 1);
    inst.demands[0] = 0;
    Solution sol;
    for (int r = 0; r < 4; ++r) {
        const int a = 1 + 2 * r;
        inst.coords.push_back({0.9, 0.5 + 1e-4 * r});
        inst.coords.push_back({0.95, 0.5 + 1e-4 * r});
        sol.routes.push_back(Route{{0, a, a + 1, 0}});
    }
    const EntropyReport rep = angular_entropy({inst}, {sol}, 2, 3, 36);
    CHECK(rep.mean == doctest::Approx(0.0));

    // Angles spread exactly one per bin -> entropy 1.
    Instance uni;
    uni.variant = Variant::cvrp;
    uni.capacity = 100;
    uni.coords = {{0.0, 0.0}};
    Solution usol;
    const int bins = 8;
    uni.demands.assign(bins + 1, 1);
    uni.demands[0] = 0;
    for (int k = 0; k < bins; ++k) {
        const double a = -3.14159265358979323846 + (k + 0.5) * 2.0 * 3.14159265358979323846 / bins;
        uni.coords.push_back({0.4 * std::cos(a), 0.4 * std::sin(a)});
        usol.routes.push_back(Route{{0, k + 1, 0}});
    }
    const EntropyReport urep = angular_entropy({uni}, {usol}, 2, 2, bins);
    CHECK(urep.mean == doctest::Approx(1.0));
}
