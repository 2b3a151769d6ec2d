#pragma once

#include <string>
#include <vector>

#include "vmcs/config.hpp"

namespace vmcs {

/// Exit codes shared by the subcommands: 0 success, 1 configuration or
/// usage error, 2 numerical failure (and, for compare, deviation above
/// the tolerance).
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitNumerical = 2;

/// Worker cap from the VMCS_THREADS environment variable (default 1).
int thread_budget();

/// Variational run: trajectory.csv (streamed row by row), then
/// steady_state.json, final_state.json, and manifest.json.
int cmd_simulate(const RunConfig& config, const std::string& out_override = {});

/// Master-equation run in the same output schema, starting from the
/// density operator of the identical initial state.
int cmd_exact(const RunConfig& config, const std::string& out_override = {});

/// One variational run per value of the swept parameter (g, V, gamma or
/// N_c); per-point seeds are seed + index and points may run
/// concurrently. Failed points are recorded and the sweep continues.
int cmd_sweep(const RunConfig& config, const std::string& parameter,
              const std::vector<double>& values, const std::string& out_override = {});

/// Compares two trajectory files on their overlapping time range,
/// interpolated onto the coarser grid. Prints and writes max and RMS
/// deviation per observable column.
int cmd_compare(const std::string& path_a, const std::string& path_b, double tol,
                const std::string& report_path = {});

}  // namespace vmcs
