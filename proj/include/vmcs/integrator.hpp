#pragma once

#include <functional>
#include <string>
#include <vector>

#include "vmcs/ansatz.hpp"
#include "vmcs/eom.hpp"
#include "vmcs/kernels.hpp"
#include "vmcs/lattice.hpp"
#include "vmcs/observables.hpp"

namespace vmcs {

/// Time-stamped observable records with run-level diagnostics. Times are
/// strictly increasing and start at zero.
struct Trajectory {
    std::vector<ObservableRecord> records;
    double dt = 0.0;
    int n_sites = 0;
    bool aborted = false;
    std::string abort_reason;
    /// State after the last completed step (for checkpoint/restart).
    VariationalState final_state;
    double worst_sum_c_drift = 0.0;   // max |sum c - 1| per step, before renormalization
    double worst_m_norm = 0.0;        // max Bloch norm seen along the run
    double worst_residual = 0.0;      // max scaled solve residual
    double worst_physicality = 0.0;   // max |<sigma^alpha>| over sites and times
};

struct TailStat {
    double mean = 0.0;
    double stddev = 0.0;
    double drift = 0.0;  // fitted linear change across the tail window
};

struct SteadyState {
    TailStat sx, sy, sz;
    bool converged = false;
    int n_tail = 0;
    double t_start = 0.0;
    double t_end = 0.0;
};

struct IntegrationConfig {
    double t_final = 0.0;
    double dt = 1e-2;
    int record_every = 10;
};

struct StepDiagnostics {
    double sum_c_drift = 0.0;
    double max_m_norm = 0.0;
    double residual = 0.0;
    double epsilon_used = 0.0;
};

/// One classical fourth-order Runge-Kutta step on the parameter vector,
/// with the regularized tangent solve as velocity field, followed by
/// renormalization of the mixture coefficients.
VariationalState rk4_step(const VariationalState& state, const ModelParams& model,
                          const LatticeSpec& lattice, const SymmetryGroup& group, double dt,
                          const EomConfig& eom, StepDiagnostics* diag = nullptr);

/// Fixed-step loop that records observables every record_every steps
/// (plus the initial and final points). Aborts with a partial trajectory
/// if any parameter stops being finite. The optional on_record hook is
/// invoked as each record is produced, so rows can be streamed to disk
/// while the run is still in flight.
using RecordHook = std::function<void(const ObservableRecord&)>;

Trajectory run_dynamics(const VariationalState& initial, const ModelParams& model,
                        const LatticeSpec& lattice, const SymmetryGroup& group,
                        const IntegrationConfig& integration, const EomConfig& eom,
                        const RecordHook& on_record = {});

/// Tail statistics over the final fraction of the recorded times. The
/// run is flagged converged when every tail standard deviation and every
/// fitted drift magnitude stays below 1e-3.
SteadyState extract_steady_state(const Trajectory& traj, double tail_fraction);

}  // namespace vmcs
