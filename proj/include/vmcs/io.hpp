#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "vmcs/integrator.hpp"

namespace vmcs {

inline constexpr const char* kTrajectorySchema = "vmcs-trajectory-v1";
inline constexpr const char* kVersion = "1.0.0";

/// Column header for the trajectory CSV. Site-resolved columns are
/// grouped per observable: sx_0..sx_{N-1}, sy_0.., sz_0..
std::vector<std::string> trajectory_columns(int n_sites, bool site_resolved);

std::string trajectory_header_line(int n_sites, bool site_resolved);
std::string trajectory_row(const ObservableRecord& rec, bool site_resolved);

void write_trajectory_csv(const std::string& path, const Trajectory& traj, bool site_resolved);

/// Parsed trajectory table, schema token included.
struct TrajectoryTable {
    std::string schema;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    int column_index(const std::string& name) const;
};

TrajectoryTable read_trajectory_csv(const std::string& path);

std::string steady_state_json(const SteadyState& ss, double tail_fraction);
void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

/// Serializes a double so that parsing it back returns the same bits.
std::string format_double(double v);

}  // namespace vmcs
