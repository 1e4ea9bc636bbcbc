// Times the batch kernels against their serial reference path and checks the
// outputs match, since jobs > 1 must not change any artifact.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "routepe/gen.hpp"
#include "routepe/json_io.hpp"
#include "routepe/parallel.hpp"
#include "routepe/pe.hpp"
#include "routepe/probe.hpp"
#include "routepe/solve.hpp"

using namespace routepe;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<std::string> solve_batch(const std::vector<Instance>& batch, int jobs, double* elapsed) {
    SearchConfig cfg;
    cfg.budget = 5000;
    std::vector<std::string> out(batch.size());
    const auto t0 = std::chrono::steady_clock::now();
    parallel_for(batch.size(), jobs, [&](std::size_t i) {
        SearchConfig c = cfg;
        c.seed = stream_seed(7, i);
        out[i] = solution_to_json(solve_instance(batch[i], c));
    });
    *elapsed = seconds_since(t0);
    return out;
}

std::vector<ProbeReport> probe_batch(const std::vector<Instance>& instances,
                                     const std::vector<Solution>& solutions, int jobs,
                                     double* elapsed) {
    PEConfig cfg;
    const auto t0 = std::chrono::steady_clock::now();
    auto reports = probe(instances, solutions, all_pe_methods(), 5000, 7, cfg, jobs);
    *elapsed = seconds_since(t0);
    return reports;
}

}  // namespace

int main(int argc, char** argv) {
    int count = 16;
    if (argc > 1) count = std::atoi(argv[1]);
    const int jobs = hardware_jobs();

    GenConfig gen_cfg;
    gen_cfg.n = 100;
    gen_cfg.seed = 7;
    const std::vector<Instance> batch = gen_batch(gen_cfg, count);

    std::printf("benchmark: %d cvrp-100 instances, %d thread(s) available\n", count, jobs);

    double t_serial = 0.0, t_parallel = 0.0;
    const auto serial = solve_batch(batch, 1, &t_serial);
    const auto parallel = solve_batch(batch, jobs, &t_parallel);
    bool match = serial == parallel;
    std::printf("%-14s %10s %10s %9s %8s\n", "kernel", "serial[s]", "omp[s]", "speedup", "match");
    std::printf("%-14s %10.2f %10.2f %8.2fx %8s\n", "solve", t_serial, t_parallel,
                t_serial / t_parallel, match ? "yes" : "NO");
    if (!match) return 1;

    std::vector<Solution> solutions;
    std::vector<Instance> instances;
    for (std::size_t i = 0; i < serial.size(); ++i) {
        SolutionRecord rec = solution_from_json(serial[i]);
        instances.push_back(std::move(rec.instance));
        solutions.push_back(std::move(rec.solution));
    }

    const auto probe_serial = probe_batch(instances, solutions, 1, &t_serial);
    const auto probe_parallel = probe_batch(instances, solutions, jobs, &t_parallel);
    match = true;
    for (std::size_t i = 0; i < probe_serial.size(); ++i) {
        match = match && probe_serial[i].rho_d1 == probe_parallel[i].rho_d1 &&
                probe_serial[i].rho_d2 == probe_parallel[i].rho_d2 &&
                probe_serial[i].rho_d3 == probe_parallel[i].rho_d3;
    }
    std::printf("%-14s %10.2f %10.2f %8.2fx %8s\n", "probe", t_serial, t_parallel,
                t_serial / t_parallel, match ? "yes" : "NO");
    return match ? 0 : 1;
}
