#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>

#include "routepe/cli.hpp"
#include "routepe/core.hpp"
#include "routepe/json_io.hpp"

using namespace routepe;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("routepe_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) { return read_text_file(p); }

int run_cli(std::initializer_list<std::string> args) {
    return cli::run(std::vector<std::string>(args));
}

std::string dir_fingerprint(const fs::path& dir) {
    std::ostringstream all;
    for (const fs::path& p : list_files(dir, ".json")) all << p.filename().string() << "\n" << slurp(p);
    for (const fs::path& p : list_files(dir, ".csv")) all << p.filename().string() << "\n" << slurp(p);
    return all.str();
}

}  // namespace

TEST_CASE("cli gen is byte-identical across runs") {
    const fs::path a = fresh_dir("gen_a");
    const fs::path b = fresh_dir("gen_b");
    CHECK(run_cli({"gen", "--variant", "cvrp", "--n", "30", "--count", "4", "--seed", "1",
                   "--out", a.string()}) == 0);
    CHECK(run_cli({"gen", "--variant", "cvrp", "--n", "30", "--count", "4", "--seed", "1",
                   "--out", b.string()}) == 0);
    CHECK(dir_fingerprint(a) == dir_fingerprint(b));
    CHECK(list_files(a, ".json").size() == 4);
    // Documented file naming.
    CHECK(fs::exists(a / "cvrp_30_1_0.json"));
}

TEST_CASE("cli solve produces feasible, self-contained solutions") {
    const fs::path in = fresh_dir("solve_in");
    const fs::path out = fresh_dir("solve_out");
    REQUIRE(run_cli({"gen", "--variant", "cvrp", "--n", "30", "--count", "3", "--seed", "2",
                     "--out", in.string()}) == 0);
    REQUIRE(run_cli({"solve", "--in", in.string(), "--out", out.string(), "--budget", "500",
                     "--seed", "2"}) == 0);
    const auto files = list_files(out, ".sol.json");
    REQUIRE(files.size() == 3);
    for (const fs::path& p : files) {
        const SolutionRecord rec = solution_from_json(slurp(p));
        CHECK(check_feasible(rec.instance, rec.solution).empty());
        CHECK(rec.reward_trace_len == 500);
        CHECK(rec.cost.objective ==
              doctest::Approx(solution_cost(rec.instance, rec.solution).objective));
    }
}

TEST_CASE("cli encode writes one embedding per solution") {
    const fs::path in = fresh_dir("enc_in");
    const fs::path solved = fresh_dir("enc_solved");
    const fs::path emb = fresh_dir("enc_emb");
    REQUIRE(run_cli({"gen", "--variant", "cvrp", "--n", "20", "--count", "2", "--seed", "3",
                     "--out", in.string()}) == 0);
    REQUIRE(run_cli({"solve", "--in", in.string(), "--out", solved.string(), "--budget", "200",
                     "--seed", "3"}) == 0);
    REQUIRE(run_cli({"encode", "--method", "ipe+xpe", "--dim", "128", "--direction", "invariant",
                     "--freq", "integer", "--in", solved.string(), "--out", emb.string()}) == 0);
    const auto files = list_files(emb, ".emb.json");
    REQUIRE(files.size() == 2);
    const std::string text = slurp(files[0]);
    CHECK(text.find("\"schema\":1") != std::string::npos);
    CHECK(text.find("\"method\":\"ipe+xpe\"") != std::string::npos);
    CHECK(text.find("\"rows\":21") != std::string::npos);
}

TEST_CASE("cli probe on an empty directory fails with a no-solutions error") {
    const fs::path empty = fresh_dir("probe_empty");
    CHECK(run_cli({"probe", "--solutions", empty.string(), "--seed", "1", "--out",
                   (empty / "r.csv").string()}) == 2);
}

TEST_CASE("cli probe json format carries the supplementary ratio") {
    const fs::path in = fresh_dir("pj_in");
    const fs::path solved = fresh_dir("pj_solved");
    REQUIRE(run_cli({"gen", "--variant", "cvrp", "--n", "30", "--count", "3", "--seed", "5",
                     "--out", in.string()}) == 0);
    REQUIRE(run_cli({"solve", "--in", in.string(), "--out", solved.string(), "--budget", "300",
                     "--seed", "5"}) == 0);
    const fs::path out = solved / "report.json";
    REQUIRE(run_cli({"probe", "--solutions", solved.string(), "--methods", "xpe", "--pairs",
                     "1000", "--seed", "5", "--format", "json", "--out", out.string()}) == 0);
    const std::string text = slurp(out);
    CHECK(text.find("\"schema\": 1") != std::string::npos);
    CHECK(text.find("\"d3_ratio\"") != std::string::npos);
    CHECK(text.find("\"method\": \"xpe\"") != std::string::npos);
}

TEST_CASE("cli gen calibrates kappa on request") {
    const fs::path out = fresh_dir("kappa_gen");
    REQUIRE(run_cli({"gen", "--variant", "pcvrp", "--n", "40", "--count", "1", "--seed", "3",
                     "--kappa-target", "0.5", "--out", out.string()}) == 0);
    const Instance inst = instance_from_json(slurp(out / "pcvrp_40_3_0.json"));
    REQUIRE(!inst.prizes.empty());
    double total = 0.0;
    for (double p : inst.prizes) total += p;
    CHECK(total > 0.0);
    CHECK(inst.meta_json.find("kappa") != std::string::npos);
    // Missing both kappa flags is a configuration error for pcvrp.
    CHECK(run_cli({"gen", "--variant", "pcvrp", "--n", "40", "--count", "1", "--seed", "3",
                   "--out", out.string()}) == 2);
}

TEST_CASE("cli error codes are distinct") {
    CHECK(run_cli({"solve", "--in", "/nonexistent_dir_xyz", "--out", "/tmp/routepe_x", "--seed",
                   "1"}) == 3);  // io
    const fs::path bad = fresh_dir("bad_schema");
    write_text_file(bad / "x.json", "{\"schema\": 9}\n");
    const fs::path out = fresh_dir("bad_schema_out");
    CHECK(run_cli({"solve", "--in", bad.string(), "--out", out.string(), "--seed", "1"}) == 4);
    CHECK(run_cli({"gen", "--variant", "nosuch", "--seed", "1", "--out", out.string()}) == 2);
    CHECK(run_cli({"nosuchcommand"}) == 2);
}

TEST_CASE("cli pipeline: consolidated report with every method row" * doctest::timeout(300)) {
    const fs::path dir = fresh_dir("pipe");
    REQUIRE(run_cli({"pipeline", "--variant", "cvrp", "--n", "40", "--count", "4", "--seed", "7",
                     "--budget", "400", "--pairs", "1500", "--out", dir.string()}) == 0);
    REQUIRE(fs::exists(dir / "report.csv"));
    REQUIRE(fs::exists(dir / "stats.csv"));

    std::istringstream report(slurp(dir / "report.csv"));
    std::string line;
    std::getline(report, line);
    CHECK(line.rfind("# routepe probe schema=1", 0) == 0);
    std::getline(report, line);
    CHECK(line == "method,rho_d1,rho_d2,rho_d3,n_pairs_d1,n_pairs_d3");
    int rows = 0;
    while (std::getline(report, line)) {
        if (line.empty()) continue;
        rows++;
        // rho columns parse as numbers in [-1, 1] or "nan".
        std::stringstream ss(line);
        std::string cell;
        std::getline(ss, cell, ',');  // method
        for (int c = 0; c < 3; ++c) {
            std::getline(ss, cell, ',');
            if (cell == "nan") continue;
            const double v = std::stod(cell);
            CHECK(v >= -1.0);
            CHECK(v <= 1.0);
        }
    }
    CHECK(rows == 14);  // every method
}

TEST_CASE("cli pipeline is deterministic, including across job counts" * doctest::timeout(600)) {
    const fs::path a = fresh_dir("pipe_det_a");
    const fs::path b = fresh_dir("pipe_det_b");
    const fs::path c = fresh_dir("pipe_det_c");
    const std::vector<std::string> base{"pipeline", "--variant", "cvrp",  "--n", "30", "--count",
                                        "4",        "--seed",    "11",    "--budget", "300",
                                        "--pairs",  "1000",      "--methods", "ipe,sin,xpe"};
    auto with_out = [&](const fs::path& dir, const std::string& jobs) {
        std::vector<std::string> args = base;
        args.push_back("--out");
        args.push_back(dir.string());
        args.push_back("--jobs");
        args.push_back(jobs);
        return args;
    };
    REQUIRE(cli::run(with_out(a, "1")) == 0);
    REQUIRE(cli::run(with_out(b, "1")) == 0);
    REQUIRE(cli::run(with_out(c, "2")) == 0);
    auto fingerprint = [](const fs::path& dir) {
        return dir_fingerprint(dir / "instances") + dir_fingerprint(dir / "solutions") +
               dir_fingerprint(dir);
    };
    CHECK(fingerprint(a) == fingerprint(b));
    CHECK(fingerprint(a) == fingerprint(c));
}
