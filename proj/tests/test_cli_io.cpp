#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "vmcs/cli.hpp"
#include "vmcs/config.hpp"
#include "vmcs/io.hpp"

using namespace vmcs;
namespace fs = std::filesystem;

namespace {

std::string tiny_config(const std::string& outdir, int lx = 2, int ly = 1, int n_comp = 2,
                        double t_final = 2.0, double dt = 1e-2) {
    return std::string("{") +
           R"("lattice": {"Lx": )" + std::to_string(lx) + R"(, "Ly": )" + std::to_string(ly) +
           R"(, "periodic": true},)" +
           R"("model": {"g": 2.0, "V": 2.0, "gamma": 1.0},)" +
           R"("ansatz": {"N_c": )" + std::to_string(n_comp) + R"(, "perturbation": 0.01, "seed": 5},)" +
           R"("integration": {"t_final": )" + std::to_string(t_final) + R"(, "dt": )" +
           std::to_string(dt) + R"(, "record_every": 10},)" +
           R"("output": {"directory": ")" + outdir + R"("}})";
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("vmcs_test_" + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("config validation reports field paths") {
    CHECK_THROWS_WITH_AS(
        (void)parse_run_config(R"({"lattice": {"Lx": 2, "Ly": 1}, "model": {"g": 1, "V": 1,
            "gamma": 1}, "ansatz": {"N_c": 2}, "integration": {"dt": 0.01}})"),
        doctest::Contains("config.integration.t_final"), ConfigError);

    CHECK_THROWS_WITH_AS(
        (void)parse_run_config(R"({"lattice": {"Lx": 2, "Ly": 1, "typo": 3}, "model":
            {"g": 1, "V": 1, "gamma": 1}, "ansatz": {"N_c": 2}, "integration":
            {"t_final": 1}})"),
        doctest::Contains("config.lattice.typo"), ConfigError);

    CHECK_THROWS_WITH_AS(
        (void)parse_run_config(R"({"lattice": {"Lx": 2, "Ly": 1}, "model": {"g": 1, "V": 1,
            "gamma": 1}, "ansatz": {"N_c": 2}, "integration": {"t_final": 1},
            "eom": {"gradient_mode": "backward"}})"),
        doctest::Contains("gradient_mode"), ConfigError);

    const RunConfig cfg = parse_run_config(tiny_config("/tmp/unused"));
    CHECK(cfg.lx == 2);
    CHECK(cfg.n_comp == 2);
    CHECK(cfg.eom.epsilon == 1e-10);
    CHECK(cfg.symmetrize);
}

TEST_CASE("simulate produces the full output set and reruns bit-identically") {
    TempDir tmp("simulate");
    const std::string out1 = (tmp.path / "run1").string();
    const RunConfig cfg = parse_run_config(tiny_config(out1));
    CHECK(cmd_simulate(cfg) == kExitOk);
    for (const char* name : {"trajectory.csv", "steady_state.json", "manifest.json",
                             "final_state.json"}) {
        CHECK(fs::exists(fs::path(out1) / name));
    }

    const TrajectoryTable table = read_trajectory_csv(out1 + "/trajectory.csv");
    CHECK(table.schema == kTrajectorySchema);
    CHECK(table.columns.front() == "t");
    CHECK(table.rows.front()[0] == 0.0);

    // rerun straight from the manifest into a second directory
    const RunConfig again = load_run_config(out1 + "/manifest.json");
    const std::string out2 = (tmp.path / "run2").string();
    CHECK(cmd_simulate(again, out2) == kExitOk);
    CHECK(read_text_file(out1 + "/trajectory.csv") == read_text_file(out2 + "/trajectory.csv"));
}

TEST_CASE("exact subcommand shares the trajectory schema") {
    TempDir tmp("exact");
    const std::string outv = (tmp.path / "var").string();
    const std::string oute = (tmp.path / "ex").string();
    const RunConfig cfg = parse_run_config(tiny_config(outv));
    CHECK(cmd_simulate(cfg) == kExitOk);
    CHECK(cmd_exact(cfg, oute) == kExitOk);

    const TrajectoryTable a = read_trajectory_csv(outv + "/trajectory.csv");
    const TrajectoryTable b = read_trajectory_csv(oute + "/trajectory.csv");
    CHECK(a.schema == b.schema);
    CHECK(a.columns == b.columns);

    // identical files: zero deviation
    CHECK(cmd_compare(outv + "/trajectory.csv", outv + "/trajectory.csv", 1e-12) == kExitOk);
    // variational vs oracle on a 2-site chain: nonzero deviation (N_c = 2
    // is deliberately underpowered here; this exercises the exit codes)
    CHECK(cmd_compare(outv + "/trajectory.csv", oute + "/trajectory.csv", 1.0) == kExitOk);
    CHECK(cmd_compare(outv + "/trajectory.csv", oute + "/trajectory.csv", 1e-305) ==
          kExitNumerical);
}

TEST_CASE("exact subcommand runs a single spin and guards large lattices") {
    TempDir tmp("exact1");
    RunConfig cfg = parse_run_config(tiny_config((tmp.path / "one").string(), 1, 1, 1, 1.0));
    cfg.g = 0.0;
    cfg.V = 0.0;
    cfg.perturbation = 0.0;
    cfg.direction = unit_z();
    CHECK(cmd_exact(cfg) == kExitOk);
    const TrajectoryTable t = read_trajectory_csv((tmp.path / "one" / "trajectory.csv").string());
    const int zcol = t.column_index("sz_avg");
    for (const auto& row : t.rows) {
        CHECK(std::abs(row[zcol] - (2.0 * std::exp(-row[0]) - 1.0)) <= 1e-8);
    }

    RunConfig big = parse_run_config(tiny_config((tmp.path / "big").string(), 11, 1, 1, 1.0));
    CHECK(cmd_exact(big) == kExitConfig);
}

TEST_CASE("oversized step aborts with a drift diagnostic") {
    TempDir tmp("unstable");
    RunConfig cfg =
        parse_run_config(tiny_config((tmp.path / "bad").string(), 3, 3, 2, 20.0, 1.0));
    CHECK(cmd_simulate(cfg) == kExitNumerical);
}

TEST_CASE("sweep aggregates steady states") {
    TempDir tmp("sweep");
    RunConfig cfg = parse_run_config(tiny_config((tmp.path / "s").string(), 2, 1, 2, 8.0));
    CHECK(cmd_sweep(cfg, "bogus", {1.0}) == kExitConfig);
    CHECK(cmd_sweep(cfg, "g", {}) == kExitConfig);
    CHECK(cmd_sweep(cfg, "g", {1.0, 2.0}) == kExitOk);

    std::ifstream csv(tmp.path / "s" / "sweep.csv");
    std::string line;
    std::getline(csv, line);
    CHECK(line == "value,sx_ss,sy_ss,sz_ss,converged");
    int rows = 0;
    while (std::getline(csv, line)) {
        if (!line.empty()) ++rows;
    }
    CHECK(rows == 2);
    CHECK(fs::exists(tmp.path / "s" / "point_0" / "trajectory.csv"));
    CHECK(fs::exists(tmp.path / "s" / "point_1" / "manifest.json"));
}

TEST_CASE("compare rejects mismatched schemas and disjoint ranges") {
    TempDir tmp("compare");
    const auto write = [&](const std::string& name, const std::string& body) {
        std::ofstream out(tmp.path / name);
        out << body;
        return (tmp.path / name).string();
    };
    const std::string head = "# vmcs-trajectory-v1 sites=1 site_resolved=0\n"
                             "t,sx_avg,sy_avg,sz_avg,sum_c_drift,max_m_norm,residual\n";
    const std::string a = write("a.csv", head + "0,0,0,1,0,1,0\n1,0,0,0.5,0,1,0\n");
    const std::string b = write("b.csv", head + "2,0,0,0.2,0,1,0\n3,0,0,0.1,0,1,0\n");
    CHECK(cmd_compare(a, b, 1.0) == kExitConfig);  // disjoint time ranges

    const std::string c = write(
        "c.csv", "# vmcs-trajectory-v2 sites=1 site_resolved=0\n"
                 "t,sx_avg,sy_avg,sz_avg,sum_c_drift,max_m_norm,residual\n0,0,0,1,0,1,0\n"
                 "1,0,0,0.5,0,1,0\n");
    CHECK(cmd_compare(a, c, 1.0) == kExitConfig);  // schema token differs
}

TEST_CASE("trajectory row formatting round-trips doubles") {
    CHECK(format_double(1.0 / 3.0) == "0.33333333333333331");
    CHECK(std::stod(format_double(-2.5000000000000004e-7)) == -2.5000000000000004e-7);
}
