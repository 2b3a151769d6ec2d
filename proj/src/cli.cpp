#include "vmcs/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>

#include <json.hpp>

#include "vmcs/exact_oracle.hpp"
#include "vmcs/io.hpp"

namespace vmcs {

namespace fs = std::filesystem;

int thread_budget() {
    const char* env = std::getenv("VMCS_THREADS");
    if (!env) return 1;
    const int v = std::atoi(env);
    return v > 0 ? v : 1;
}

namespace {

struct RunSetup {
    LatticeSpec lattice;
    ModelParams model;
    SymmetryGroup group;
    VariationalState initial;
};

RunSetup prepare(const RunConfig& cfg) {
    RunSetup s;
    s.lattice = cfg.n_sites() == 1 ? single_site_lattice()
                                   : build_lattice(cfg.lx, cfg.ly, cfg.periodic);
    s.model = ModelParams::from_couplings(cfg.g, cfg.V, cfg.gamma, s.lattice.coordination,
                                          cfg.v_eff_override);
    if (!cfg.symmetrize) {
        s.group = identity_group(s.lattice.n_sites());
    } else if (cfg.point_group) {
        s.group = extended_symmetry_group(s.lattice);
    } else {
        s.group = translation_group(s.lattice);
    }
    if (cfg.initial_state_file) {
        s.initial = state_from_json(read_text_file(*cfg.initial_state_file));
        if (s.initial.n_sites != s.lattice.n_sites()) {
            throw ConfigError("initial_state_file: site count does not match the lattice");
        }
    } else {
        s.initial = init_product_state(s.lattice, cfg.n_comp, cfg.direction, cfg.perturbation,
                                       cfg.seed);
    }
    return s;
}

std::string manifest_json(const RunConfig& cfg, const std::string& command, double wall_seconds) {
    nlohmann::json j;
    j["schema"] = "vmcs-manifest-v1";
    j["command"] = command;
    j["code_version"] = kVersion;
    j["wall_time_seconds"] = wall_seconds;
    j["config"] = nlohmann::json::parse(run_config_to_json(cfg));
    return j.dump(2);
}

fs::path ensure_outdir(const RunConfig& cfg, const std::string& out_override) {
    const fs::path dir = out_override.empty() ? fs::path(cfg.directory) : fs::path(out_override);
    fs::create_directories(dir);
    return dir;
}

void write_steady_or_note(const fs::path& dir, const Trajectory& traj, double tail_fraction) {
    try {
        const SteadyState ss = extract_steady_state(traj, tail_fraction);
        write_text_file((dir / "steady_state.json").string(), steady_state_json(ss, tail_fraction));
    } catch (const std::invalid_argument& e) {
        nlohmann::json j;
        j["schema"] = "vmcs-steady-state-v1";
        j["converged"] = false;
        j["error"] = e.what();
        write_text_file((dir / "steady_state.json").string(), j.dump(2));
    }
}

int finish_run(const RunConfig& cfg, const fs::path& dir, const Trajectory& traj,
               const std::string& command, double wall_seconds) {
    write_steady_or_note(dir, traj, cfg.tail_fraction);
    write_text_file((dir / "manifest.json").string(), manifest_json(cfg, command, wall_seconds));
    if (traj.worst_m_norm > 1.0 + 1e-3) {
        std::cerr << "warning: Bloch norm reached " << traj.worst_m_norm
                  << " (monitored, not clamped)\n";
    }
    if (traj.aborted) {
        std::cerr << "numerical failure: " << traj.abort_reason << "\n";
        return kExitNumerical;
    }
    return kExitOk;
}

}  // namespace

int cmd_simulate(const RunConfig& cfg, const std::string& out_override) {
    const auto t0 = std::chrono::steady_clock::now();
    RunSetup setup = prepare(cfg);
    const fs::path dir = ensure_outdir(cfg, out_override);

    EomConfig eom = cfg.eom;
    if (eom.threads <= 1) eom.threads = thread_budget();

    std::ofstream csv(dir / "trajectory.csv");
    if (!csv) throw std::runtime_error("cannot open trajectory.csv for writing");
    csv << trajectory_header_line(setup.lattice.n_sites(), cfg.site_resolved);

    const IntegrationConfig integration{cfg.t_final, cfg.dt, cfg.record_every};
    Trajectory traj = run_dynamics(setup.initial, setup.model, setup.lattice, setup.group,
                                   integration, eom,
                                   [&](const ObservableRecord& rec) {
                                       csv << trajectory_row(rec, cfg.site_resolved);
                                       csv.flush();
                                   });
    csv.close();

    // Final state snapshot for checkpoint/restart.
    if (!traj.aborted && !traj.records.empty()) {
        const VariationalState final_state = traj.final_state;
        write_text_file((dir / "final_state.json").string(),
                        state_to_json(final_state, setup.lattice));
    }

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return finish_run(cfg, dir, traj, "simulate", wall);
}

int cmd_exact(const RunConfig& cfg, const std::string& out_override) {
    const auto t0 = std::chrono::steady_clock::now();
    RunSetup setup = prepare(cfg);
    if (setup.lattice.n_sites() > kOracleMaxSites) {
        std::cerr << "exact: " << setup.lattice.n_sites() << " sites exceed the oracle limit of "
                  << kOracleMaxSites << "\n";
        return kExitConfig;
    }
    const fs::path dir = ensure_outdir(cfg, out_override);

    const DensityMatrix rho0 = vstate_to_density(setup.initial, setup.group);
    const IntegrationConfig integration{cfg.t_final, cfg.dt, cfg.record_every};
    Trajectory traj = run_exact(rho0, setup.model, setup.lattice, integration);

    write_trajectory_csv((dir / "trajectory.csv").string(), traj, cfg.site_resolved);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return finish_run(cfg, dir, traj, "exact", wall);
}

int cmd_sweep(const RunConfig& cfg, const std::string& parameter,
              const std::vector<double>& values, const std::string& out_override) {
    static const std::vector<std::string> kAllowed = {"g", "V", "gamma", "N_c"};
    if (std::find(kAllowed.begin(), kAllowed.end(), parameter) == kAllowed.end()) {
        std::cerr << "sweep: parameter must be one of g, V, gamma, N_c\n";
        return kExitConfig;
    }
    if (values.empty()) {
        std::cerr << "sweep: empty value list\n";
        return kExitConfig;
    }
    const fs::path dir = ensure_outdir(cfg, out_override);

    struct PointResult {
        double value = 0.0;
        SteadyState ss;
        bool ok = false;
        std::string error;
    };

    auto run_point = [&](int index, int eom_threads) {
        PointResult res;
        res.value = values[index];
        RunConfig point = cfg;
        point.seed = cfg.seed + static_cast<std::uint64_t>(index);
        if (parameter == "g") point.g = values[index];
        if (parameter == "V") point.V = values[index];
        if (parameter == "gamma") point.gamma = values[index];
        if (parameter == "N_c") point.n_comp = static_cast<int>(std::lround(values[index]));
        point.directory = (dir / ("point_" + std::to_string(index))).string();
        point.eom.threads = eom_threads;
        try {
            const int code = cmd_simulate(point);
            if (code != kExitOk) {
                res.error = "exit code " + std::to_string(code);
                return res;
            }
            const auto ssj = nlohmann::json::parse(
                read_text_file((fs::path(point.directory) / "steady_state.json").string()));
            if (!ssj.contains("observables")) {
                res.error = ssj.value("error", "no steady state");
                return res;
            }
            res.ss.sx.mean = ssj["observables"]["sx"]["mean"].get<double>();
            res.ss.sy.mean = ssj["observables"]["sy"]["mean"].get<double>();
            res.ss.sz.mean = ssj["observables"]["sz"]["mean"].get<double>();
            res.ss.converged = ssj["converged"].get<bool>();
            res.ok = true;
        } catch (const std::exception& e) {
            res.error = e.what();
        }
        return res;
    };

    const int n_points = static_cast<int>(values.size());
    const int workers = std::min(thread_budget(), n_points);
    const int inner_threads = workers > 1 ? 1 : thread_budget();

    std::vector<PointResult> results(n_points);
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int i = next.fetch_add(1); i < n_points; i = next.fetch_add(1)) {
            results[i] = run_point(i, inner_threads);
        }
    };
    std::vector<std::future<void>> futures;
    for (int w = 1; w < workers; ++w) futures.push_back(std::async(std::launch::async, worker));
    worker();
    for (auto& f : futures) f.get();

    std::ofstream csv(dir / "sweep.csv");
    csv << "value,sx_ss,sy_ss,sz_ss,converged\n";
    for (const auto& res : results) {
        if (res.ok) {
            csv << format_double(res.value) << ',' << format_double(res.ss.sx.mean) << ','
                << format_double(res.ss.sy.mean) << ',' << format_double(res.ss.sz.mean) << ','
                << (res.ss.converged ? 1 : 0) << '\n';
        } else {
            std::cerr << "sweep: point " << res.value << " failed: " << res.error << "\n";
            csv << format_double(res.value) << ",nan,nan,nan,0\n";
        }
    }
    return kExitOk;
}

int cmd_compare(const std::string& path_a, const std::string& path_b, double tol,
                const std::string& report_path) {
    TrajectoryTable a, b;
    try {
        a = read_trajectory_csv(path_a);
        b = read_trajectory_csv(path_b);
    } catch (const std::exception& e) {
        std::cerr << "compare: " << e.what() << "\n";
        return kExitConfig;
    }
    if (a.schema != b.schema) {
        std::cerr << "compare: schema mismatch (" << a.schema << " vs " << b.schema << ")\n";
        return kExitConfig;
    }
    if (a.columns != b.columns) {
        std::cerr << "compare: column sets differ\n";
        return kExitConfig;
    }
    if (a.rows.size() < 2 || b.rows.size() < 2) {
        std::cerr << "compare: need at least two rows per file\n";
        return kExitConfig;
    }

    const double t0 = std::max(a.rows.front()[0], b.rows.front()[0]);
    const double t1 = std::min(a.rows.back()[0], b.rows.back()[0]);
    if (!(t0 < t1)) {
        std::cerr << "compare: time ranges do not overlap\n";
        return kExitConfig;
    }

    // Evaluate both tables on the coarser grid restricted to the overlap.
    const TrajectoryTable& coarse = a.rows.size() <= b.rows.size() ? a : b;
    std::vector<double> grid;
    for (const auto& row : coarse.rows) {
        if (row[0] >= t0 - 1e-12 && row[0] <= t1 + 1e-12) grid.push_back(row[0]);
    }

    auto interp = [](const TrajectoryTable& tab, double t, int col) {
        const auto& rows = tab.rows;
        size_t hi = 1;
        while (hi + 1 < rows.size() && rows[hi][0] < t) ++hi;
        const double ta = rows[hi - 1][0], tb = rows[hi][0];
        const double va = rows[hi - 1][col], vb = rows[hi][col];
        if (tb <= ta) return va;
        const double w = std::clamp((t - ta) / (tb - ta), 0.0, 1.0);
        return va + w * (vb - va);
    };

    static const std::vector<std::string> kDiagnostics = {"t", "sum_c_drift", "max_m_norm",
                                                          "residual"};
    nlohmann::json report;
    double worst = 0.0;
    std::cout << "column,max_dev,rms_dev\n";
    for (size_t col = 0; col < a.columns.size(); ++col) {
        const std::string& name = a.columns[col];
        if (std::find(kDiagnostics.begin(), kDiagnostics.end(), name) != kDiagnostics.end()) {
            continue;
        }
        double max_dev = 0.0, sumsq = 0.0;
        for (double t : grid) {
            const double dv =
                interp(a, t, static_cast<int>(col)) - interp(b, t, static_cast<int>(col));
            max_dev = std::max(max_dev, std::abs(dv));
            sumsq += dv * dv;
        }
        const double rms = std::sqrt(sumsq / grid.size());
        worst = std::max(worst, max_dev);
        report[name] = {{"max_dev", max_dev}, {"rms_dev", rms}};
        std::cout << name << ',' << format_double(max_dev) << ',' << format_double(rms) << "\n";
    }
    report["max_deviation"] = worst;
    report["tolerance"] = tol;
    report["n_grid"] = grid.size();
    if (!report_path.empty()) write_text_file(report_path, report.dump(2));

    std::cout << "max_deviation," << format_double(worst) << "\n";
    return worst < tol ? kExitOk : kExitNumerical;
}

}  // namespace vmcs
