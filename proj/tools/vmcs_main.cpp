#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vmcs/cli.hpp"
#include "vmcs/eom.hpp"
#include "vmcs/io.hpp"

int main(int argc, char** argv) {
    CLI::App app{"vmcs: variational multi-coherent-state dynamics for open spin lattices"};
    app.require_subcommand(1);

    std::string config_path, out_dir, parameter, report_path;
    std::vector<double> values;
    double tol = 1e300;

    auto* simulate = app.add_subcommand("simulate", "variational trajectory run");
    simulate->add_option("--config", config_path, "config or manifest JSON")->required();
    simulate->add_option("--out", out_dir, "output directory (overrides config)");

    auto* exact = app.add_subcommand("exact", "master-equation run (small lattices)");
    exact->add_option("--config", config_path, "config or manifest JSON")->required();
    exact->add_option("--out", out_dir, "output directory (overrides config)");

    auto* sweep = app.add_subcommand("sweep", "one run per parameter value");
    sweep->add_option("--config", config_path, "config or manifest JSON")->required();
    sweep->add_option("--param", parameter, "swept parameter: g, V, gamma or N_c")->required();
    sweep->add_option("--values", values, "values to sweep")->required()->expected(-1);
    sweep->add_option("--out", out_dir, "output directory (overrides config)");

    auto* compare = app.add_subcommand("compare", "diff two trajectory files");
    std::string path_a, path_b;
    compare->add_option("a", path_a, "first trajectory.csv")->required();
    compare->add_option("b", path_b, "second trajectory.csv")->required();
    compare->add_option("--tol", tol, "max deviation for exit code 0");
    compare->add_option("--report", report_path, "write a JSON report here");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*compare) return vmcs::cmd_compare(path_a, path_b, tol, report_path);
        const vmcs::RunConfig cfg = vmcs::load_run_config(config_path);
        if (*simulate) return vmcs::cmd_simulate(cfg, out_dir);
        if (*exact) return vmcs::cmd_exact(cfg, out_dir);
        if (*sweep) return vmcs::cmd_sweep(cfg, parameter, values, out_dir);
    } catch (const vmcs::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return vmcs::kExitConfig;
    } catch (const vmcs::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return vmcs::kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return vmcs::kExitConfig;
    }
    return vmcs::kExitConfig;
}
