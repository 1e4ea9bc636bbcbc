#include "routepe/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "routepe/core.hpp"
#include "routepe/errors.hpp"
#include "routepe/gen.hpp"
#include "routepe/json_io.hpp"
#include "routepe/parallel.hpp"
#include "routepe/pe.hpp"
#include "routepe/probe.hpp"
#include "routepe/solve.hpp"
#include "routepe/stats.hpp"

namespace routepe::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// All report numbers go through this: 6 significant digits, NaN normalized.
std::string fmt6(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string fmt6(const std::optional<double>& v) {
    return v ? fmt6(*v) : "nan";
}

struct GenOpts {
    std::string variant = "cvrp";
    int n = 100;
    std::string layout = "uniform";
    std::uint64_t seed = 0;
    int count = 1;
    std::string out;
    int cluster_count = 5;
    double horizon = 3.0;
    double kappa = -1.0;         // < 0 = unset
    double kappa_target = -1.0;  // < 0 = unset; triggers calibration
    int jobs = 1;
};

GenConfig to_gen_config(const GenOpts& o) {
    GenConfig cfg;
    cfg.variant = variant_from_string(o.variant);
    cfg.n = o.n;
    cfg.layout = layout_from_string(o.layout);
    cfg.seed = o.seed;
    cfg.cluster_count = o.cluster_count;
    cfg.horizon = o.horizon;
    if (o.kappa >= 0.0) {
        cfg.kappa = o.kappa;
    } else if (cfg.variant == Variant::pcvrp && o.kappa_target > 0.0) {
        cfg.kappa = calibrate_kappa(o.n, o.seed, o.kappa_target);
    }
    return cfg;
}

void cmd_gen(const GenOpts& o) {
    const GenConfig cfg = to_gen_config(o);
    fs::create_directories(o.out);
    const std::vector<Instance> batch = gen_batch(cfg, o.count, o.jobs);
    for (int i = 0; i < o.count; ++i) {
        std::ostringstream name;
        name << o.variant << "_" << o.n << "_" << o.seed << "_" << i << ".json";
        write_text_file(fs::path(o.out) / name.str(), instance_to_json(batch[i]));
    }
    std::cout << "gen: wrote " << o.count << " instance(s) to " << o.out << "\n";
}

struct SolveOpts {
    std::string in;
    std::string out;
    long long budget = 20000;
    std::uint64_t seed = 0;
    double sigma = 0.1;
    double sigma_decay = 0.9995;
    int ruin_size = 10;
    double noise = 0.25;
    int jobs = 1;
};

std::vector<fs::path> instance_files(const std::string& dir) {
    std::vector<fs::path> files;
    for (const fs::path& p : list_files(dir, ".json")) {
        const std::string name = p.filename().string();
        if (name.ends_with(".sol.json") || name.ends_with(".emb.json")) continue;
        files.push_back(p);
    }
    return files;
}

void cmd_solve(const SolveOpts& o) {
    const std::vector<fs::path> files = instance_files(o.in);
    if (files.empty()) throw ConfigError("no instances found in " + o.in);
    fs::create_directories(o.out);

    std::vector<std::string> outputs(files.size());
    parallel_for(files.size(), o.jobs, [&](std::size_t i) {
        const Instance inst = instance_from_json(read_text_file(files[i]));
        SearchConfig cfg;
        cfg.budget = o.budget;
        cfg.sigma = o.sigma;
        cfg.sigma_decay = o.sigma_decay;
        cfg.ruin_size = o.ruin_size;
        cfg.recreate_noise = o.noise;
        cfg.seed = stream_seed(o.seed, i);  // one stream per instance index
        outputs[i] = solution_to_json(solve_instance(inst, cfg));
    });
    for (std::size_t i = 0; i < files.size(); ++i) {
        std::string stem = files[i].stem().string();
        write_text_file(fs::path(o.out) / (stem + ".sol.json"), outputs[i]);
    }
    std::cout << "solve: wrote " << files.size() << " solution(s) to " << o.out << "\n";
}

struct PEOpts {
    std::string method = "ipe+xpe";
    int dim = 128;
    std::string direction = "invariant";
    std::string freq = "integer";
    int ipe_bands = 4;
    int xpe_bands = 4;
    int graph_bands = 8;
    int rpe_window = 16;
    std::uint64_t seed = 0;
};

PEConfig to_pe_config(const PEOpts& o) {
    PEConfig cfg;
    cfg.method = pe_method_from_string(o.method);
    cfg.dim = o.dim;
    cfg.direction = direction_from_string(o.direction);
    cfg.freq_mode = freq_mode_from_string(o.freq);
    cfg.ipe_bands = o.ipe_bands;
    cfg.xpe_bands = o.xpe_bands;
    cfg.graph_bands = o.graph_bands;
    cfg.rpe_window = o.rpe_window;
    cfg.seed = o.seed;
    return cfg;
}

json pe_config_echo(const PEConfig& cfg) {
    return json{
        {"method", to_string(cfg.method)},   {"dim", cfg.dim},
        {"direction", to_string(cfg.direction)}, {"freq", to_string(cfg.freq_mode)},
        {"ipe_bands", cfg.ipe_bands},        {"xpe_bands", cfg.xpe_bands},
        {"graph_bands", cfg.graph_bands},    {"rpe_window", cfg.rpe_window},
        {"seed", cfg.seed},
    };
}

struct BatchFiles {
    std::vector<fs::path> files;
    std::vector<Instance> instances;
    std::vector<Solution> solutions;
};

BatchFiles load_solutions(const std::string& dir) {
    BatchFiles batch;
    batch.files = list_files(dir, ".sol.json");
    if (batch.files.empty()) throw ConfigError("no solutions found in " + dir);
    for (const fs::path& p : batch.files) {
        SolutionRecord rec = solution_from_json(read_text_file(p));
        batch.instances.push_back(std::move(rec.instance));
        batch.solutions.push_back(std::move(rec.solution));
    }
    return batch;
}

struct EncodeOpts {
    std::string in;
    std::string out;
    PEOpts pe;
    int jobs = 1;
};

void cmd_encode(const EncodeOpts& o) {
    const PEConfig cfg = to_pe_config(o.pe);
    const BatchFiles batch = load_solutions(o.in);
    fs::create_directories(o.out);

    std::vector<std::string> outputs(batch.files.size());
    parallel_for(batch.files.size(), o.jobs, [&](std::size_t i) {
        const Embedding emb = encode(batch.instances[i], batch.solutions[i], cfg);
        json j;
        j["schema"] = 1;
        j["config"] = pe_config_echo(cfg);
        j["rows"] = emb.vectors.size();
        j["cols"] = emb.vectors.empty() ? 0 : emb.vectors.front().size();
        json data = json::array();  // row-major
        for (const auto& row : emb.vectors) {
            for (double x : row) data.push_back(x);
        }
        j["data"] = std::move(data);
        outputs[i] = j.dump() + "\n";
    });
    for (std::size_t i = 0; i < batch.files.size(); ++i) {
        std::string name = batch.files[i].filename().string();
        name.replace(name.size() - 9, 9, ".emb.json");  // swap ".sol.json"
        write_text_file(fs::path(o.out) / name, outputs[i]);
    }
    std::cout << "encode: wrote " << batch.files.size() << " embedding(s) to " << o.out << "\n";
}

struct ProbeOpts {
    std::string solutions;
    std::string methods = "all";
    std::size_t pairs = 10000;
    std::uint64_t seed = 0;
    std::string out = "report.csv";
    std::string format = "csv";
    PEOpts pe;
    int jobs = 1;
};

std::vector<PEMethod> parse_methods(const std::string& spec) {
    if (spec == "all") return all_pe_methods();
    std::vector<PEMethod> methods;
    std::stringstream ss(spec);
    std::string token;
    while (std::getline(ss, token, ',')) {
        if (!token.empty()) methods.push_back(pe_method_from_string(token));
    }
    if (methods.empty()) throw ConfigError("no methods requested");
    return methods;
}

std::string probe_csv(const std::vector<ProbeReport>& reports, const PEConfig& cfg,
                      std::size_t pairs, std::uint64_t seed) {
    std::ostringstream out;
    json meta = pe_config_echo(cfg);
    meta.erase("method");
    meta["pairs"] = pairs;
    meta["seed"] = seed;
    out << "# routepe probe schema=1 config=" << meta.dump() << "\n";
    out << "method,rho_d1,rho_d2,rho_d3,n_pairs_d1,n_pairs_d3\n";
    for (const ProbeReport& r : reports) {
        out << to_string(r.method) << "," << fmt6(r.rho_d1) << "," << fmt6(r.rho_d2) << ","
            << fmt6(r.rho_d3) << "," << r.n_pairs_d1 << "," << r.n_pairs_d3 << "\n";
    }
    return out.str();
}

std::string probe_json(const std::vector<ProbeReport>& reports, const PEConfig& cfg,
                       std::size_t pairs, std::uint64_t seed) {
    json j;
    j["schema"] = 1;
    j["config"] = pe_config_echo(cfg);
    j["config"].erase("method");
    j["config"]["pairs"] = pairs;
    j["config"]["seed"] = seed;
    json rows = json::array();
    for (const ProbeReport& r : reports) {
        json row;
        row["method"] = to_string(r.method);
        row["rho_d1"] = r.rho_d1 ? json(*r.rho_d1) : json();
        row["rho_d2"] = r.rho_d2 ? json(*r.rho_d2) : json();
        row["rho_d3"] = r.rho_d3 ? json(*r.rho_d3) : json();
        row["n_pairs_d1"] = r.n_pairs_d1;
        row["n_pairs_d3"] = r.n_pairs_d3;
        row["d3_ratio"] = r.d3_ratio;
        rows.push_back(std::move(row));
    }
    j["reports"] = std::move(rows);
    return j.dump(2) + "\n";
}

void cmd_probe(const ProbeOpts& o) {
    const PEConfig cfg = to_pe_config(o.pe);
    const std::vector<PEMethod> methods = parse_methods(o.methods);
    const BatchFiles batch = load_solutions(o.solutions);
    const std::vector<ProbeReport> reports =
        probe(batch.instances, batch.solutions, methods, o.pairs, o.seed, cfg, o.jobs);
    const std::string text = o.format == "json" ? probe_json(reports, cfg, o.pairs, o.seed)
                                                : probe_csv(reports, cfg, o.pairs, o.seed);
    write_text_file(o.out, text);
    std::cout << "probe: wrote " << reports.size() << " method report(s) to " << o.out << "\n";
}

struct StatsOpts {
    std::string solutions;
    std::string out = "stats.csv";
    int k_lo = 2;
    int k_hi = 15;
    int bins = 36;
};

std::string stats_csv(const std::string& problem, const AnisometryReport& a, const EntropyReport& e,
                      const StatsOpts& o) {
    std::ostringstream out;
    json meta{{"k_lo", o.k_lo}, {"k_hi", o.k_hi}, {"bins", o.bins}};
    out << "# routepe stats schema=1 config=" << meta.dump() << "\n";
    out << "problem,cv,max_min,mad,entropy_mean,entropy_min\n";
    out << problem << "," << fmt6(a.cv) << "," << fmt6(a.max_min) << "," << fmt6(a.mad) << ","
        << fmt6(e.mean) << "," << fmt6(e.min) << "\n";
    return out.str();
}

void cmd_stats(const StatsOpts& o) {
    const BatchFiles batch = load_solutions(o.solutions);
    const AnisometryReport a = anisometry(batch.instances, batch.solutions);
    const EntropyReport e =
        angular_entropy(batch.instances, batch.solutions, o.k_lo, o.k_hi, o.bins);
    const std::string problem = to_string(batch.instances.front().variant) + "-" +
                                std::to_string(batch.instances.front().num_customers());
    write_text_file(o.out, stats_csv(problem, a, e, o));
    std::cout << "stats: wrote " << o.out << "\n";
}

struct PipelineOpts {
    GenOpts gen;
    SolveOpts solve;
    ProbeOpts probe;
    StatsOpts stats;
    std::string out;
};

void cmd_pipeline(PipelineOpts o) {
    const fs::path root(o.out);
    o.gen.out = (root / "instances").string();
    o.solve.in = o.gen.out;
    o.solve.out = (root / "solutions").string();
    o.probe.solutions = o.solve.out;
    o.probe.out = (root / "report.csv").string();
    o.stats.solutions = o.solve.out;
    o.stats.out = (root / "stats.csv").string();
    cmd_gen(o.gen);
    cmd_solve(o.solve);
    cmd_probe(o.probe);
    cmd_stats(o.stats);
    std::cout << "pipeline: report at " << o.probe.out << "\n";
}

void add_pe_options(CLI::App* cmd, PEOpts& pe, bool single_method) {
    if (single_method) {
        cmd->add_option("--method", pe.method, "pe method (nope,ape,sin,rope,rpe,alibi,laplacian,rwse,spd,dact,cycleformer,ipe,xpe,ipe+xpe)");
    }
    cmd->add_option("--dim", pe.dim, "embedding width D (even)");
    cmd->add_option("--direction", pe.direction, "ipe variant: aware|invariant");
    cmd->add_option("--freq", pe.freq, "frequency schedule: integer|geometric");
    cmd->add_option("--ipe-bands", pe.ipe_bands, "integer-harmonic ipe bands");
    cmd->add_option("--xpe-bands", pe.xpe_bands, "xpe bands K");
    cmd->add_option("--graph-bands", pe.graph_bands, "laplacian/rwse bands");
    cmd->add_option("--rpe-window", pe.rpe_window, "rpe clip window W");
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"routepe: VRP instance generation, heuristic solving and positional-encoding probes"};
    app.require_subcommand(1);

    GenOpts gen_opts;
    auto* gen_cmd = app.add_subcommand("gen", "generate instances");
    gen_cmd->add_option("--variant", gen_opts.variant, "cvrp|vrptw|pcvrp|pdtsp");
    gen_cmd->add_option("--n", gen_opts.n, "customers (pdtsp: requests)");
    gen_cmd->add_option("--layout", gen_opts.layout, "uniform|clustered");
    gen_cmd->add_option("--seed", gen_opts.seed)->required();
    gen_cmd->add_option("--count", gen_opts.count, "instances to generate");
    gen_cmd->add_option("--out", gen_opts.out)->required();
    gen_cmd->add_option("--cluster-count", gen_opts.cluster_count);
    gen_cmd->add_option("--horizon", gen_opts.horizon, "vrptw planning horizon");
    gen_cmd->add_option("--kappa", gen_opts.kappa, "pcvrp prize scale");
    gen_cmd->add_option("--kappa-target", gen_opts.kappa_target,
                        "calibrate kappa to this greedy served fraction");
    gen_cmd->add_option("--jobs", gen_opts.jobs);

    SolveOpts solve_opts;
    auto* solve_cmd = app.add_subcommand("solve", "solve instances");
    solve_cmd->add_option("--in", solve_opts.in)->required();
    solve_cmd->add_option("--out", solve_opts.out)->required();
    solve_cmd->add_option("--budget", solve_opts.budget, "ruin-recreate iterations");
    solve_cmd->add_option("--seed", solve_opts.seed)->required();
    solve_cmd->add_option("--sigma", solve_opts.sigma, "initial SA temperature");
    solve_cmd->add_option("--sigma-decay", solve_opts.sigma_decay);
    solve_cmd->add_option("--ruin-size", solve_opts.ruin_size);
    solve_cmd->add_option("--noise", solve_opts.noise, "recreate noise");
    solve_cmd->add_option("--jobs", solve_opts.jobs);

    EncodeOpts encode_opts;
    auto* encode_cmd = app.add_subcommand("encode", "write embeddings for solved instances");
    encode_cmd->add_option("--in", encode_opts.in, "directory of .sol.json files")->required();
    encode_cmd->add_option("--out", encode_opts.out)->required();
    encode_cmd->add_option("--seed", encode_opts.pe.seed);
    encode_cmd->add_option("--jobs", encode_opts.jobs);
    add_pe_options(encode_cmd, encode_opts.pe, true);

    ProbeOpts probe_opts;
    auto* probe_cmd = app.add_subcommand("probe", "spearman probes of the encodings");
    probe_cmd->add_option("--solutions", probe_opts.solutions)->required();
    probe_cmd->add_option("--methods", probe_opts.methods, "comma list or 'all'");
    probe_cmd->add_option("--pairs", probe_opts.pairs);
    probe_cmd->add_option("--seed", probe_opts.seed)->required();
    probe_cmd->add_option("--out", probe_opts.out);
    probe_cmd->add_option("--format", probe_opts.format, "csv|json");
    probe_cmd->add_option("--jobs", probe_opts.jobs);
    add_pe_options(probe_cmd, probe_opts.pe, false);

    StatsOpts stats_opts;
    auto* stats_cmd = app.add_subcommand("stats", "anisometry and angular-entropy statistics");
    stats_cmd->add_option("--solutions", stats_opts.solutions)->required();
    stats_cmd->add_option("--out", stats_opts.out);
    stats_cmd->add_option("--k-lo", stats_opts.k_lo);
    stats_cmd->add_option("--k-hi", stats_opts.k_hi);
    stats_cmd->add_option("--bins", stats_opts.bins);

    PipelineOpts pipe_opts;
    auto* pipe_cmd = app.add_subcommand("pipeline", "gen -> solve -> probe -> stats");
    pipe_cmd->add_option("--variant", pipe_opts.gen.variant);
    pipe_cmd->add_option("--n", pipe_opts.gen.n);
    pipe_cmd->add_option("--layout", pipe_opts.gen.layout);
    pipe_cmd->add_option("--count", pipe_opts.gen.count);
    pipe_cmd->add_option("--seed", pipe_opts.gen.seed)->required();
    pipe_cmd->add_option("--out", pipe_opts.out)->required();
    pipe_cmd->add_option("--kappa", pipe_opts.gen.kappa);
    pipe_cmd->add_option("--kappa-target", pipe_opts.gen.kappa_target);
    pipe_cmd->add_option("--budget", pipe_opts.solve.budget);
    pipe_cmd->add_option("--pairs", pipe_opts.probe.pairs);
    pipe_cmd->add_option("--methods", pipe_opts.probe.methods);
    pipe_cmd->add_option("--format", pipe_opts.probe.format);
    pipe_cmd->add_option("--jobs", pipe_opts.gen.jobs);
    add_pe_options(pipe_cmd, pipe_opts.probe.pe, false);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());  // CLI11 convention
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: config: " << e.what() << "\n";
        return 2;
    }

    try {
        if (gen_cmd->parsed()) {
            cmd_gen(gen_opts);
        } else if (solve_cmd->parsed()) {
            cmd_solve(solve_opts);
        } else if (encode_cmd->parsed()) {
            cmd_encode(encode_opts);
        } else if (probe_cmd->parsed()) {
            cmd_probe(probe_opts);
        } else if (stats_cmd->parsed()) {
            cmd_stats(stats_opts);
        } else if (pipe_cmd->parsed()) {
            pipe_opts.solve.jobs = pipe_opts.gen.jobs;
            pipe_opts.probe.jobs = pipe_opts.gen.jobs;
            pipe_opts.solve.seed = pipe_opts.gen.seed;
            pipe_opts.probe.seed = pipe_opts.gen.seed;
            cmd_pipeline(pipe_opts);
        }
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "error: config: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "error: io: " << e.what() << "\n";
        return 3;
    } catch (const SchemaError& e) {
        std::cerr << "error: schema: " << e.what() << "\n";
        return 4;
    } catch (const StructureError& e) {
        std::cerr << "error: structure: " << e.what() << "\n";
        return 5;
    } catch (const NumericError& e) {
        std::cerr << "error: numeric: " << e.what() << "\n";
        return 6;
    } catch (const InfeasibleError& e) {
        std::cerr << "error: infeasible: " << e.what() << "\n";
        return 7;
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace routepe::cli
