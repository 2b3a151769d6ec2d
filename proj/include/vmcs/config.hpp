#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "vmcs/eom.hpp"
#include "vmcs/vec3.hpp"

namespace vmcs {

/// Invalid or incomplete run configuration; the message names the
/// offending field path.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    // lattice
    int lx = 0;
    int ly = 0;
    bool periodic = true;

    // model
    double g = 0.0;
    double V = 0.0;
    double gamma = 0.0;
    std::optional<double> v_eff_override;

    // ansatz
    int n_comp = 0;
    double perturbation = 1e-2;
    std::uint64_t seed = 0;
    bool symmetrize = true;
    bool point_group = false;
    Vec3 direction = unit_x();
    std::optional<std::string> initial_state_file;

    // integration
    double t_final = 0.0;
    double dt = 1e-2;
    int record_every = 10;
    double tail_fraction = 0.2;

    // eom
    EomConfig eom;

    // output
    std::string directory = "out";
    std::string format = "csv";
    bool site_resolved = false;

    int n_sites() const { return lx * ly; }
};

/// Parses and validates a config JSON document. Unknown keys and missing
/// required fields raise ConfigError naming the field path. A manifest
/// document (with an embedded "config" object) is unwrapped, so a run
/// can be reproduced straight from its manifest.
RunConfig parse_run_config(const std::string& json_text);

RunConfig load_run_config(const std::string& path);

std::string run_config_to_json(const RunConfig& config);

}  // namespace vmcs
