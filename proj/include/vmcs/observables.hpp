#pragma once

#include <vector>

#include "vmcs/ansatz.hpp"
#include "vmcs/lattice.hpp"

namespace vmcs {

/// One time slice of a trajectory: site-resolved and lattice-averaged
/// Pauli expectation values plus the integrator diagnostics of the step
/// that produced it.
struct ObservableRecord {
    double t = 0.0;
    std::vector<Vec3> site;  // (<sx_i>, <sy_i>, <sz_i>) per site
    Vec3 avg{};
    double sum_c_drift = 0.0;
    double max_m_norm = 0.0;
    double residual = 0.0;
};

/// Group-averaged <sigma_i^alpha> of the mixture via the P-symbol rule:
/// each component contributes c_k m_{k,tau(i)}.
Vec3 site_magnetization(const VariationalState& state, const SymmetryGroup& group, int i);

/// Group-averaged <sigma_i^alpha sigma_j^beta> for i != j. Same-site
/// products are rejected; they would need ordered operator symbols.
double two_site_correlator(const VariationalState& state, const SymmetryGroup& group, int i,
                           int j, int alpha, int beta);

/// Full record at time t; diagnostics are filled in by the caller.
ObservableRecord record_observables(const VariationalState& state, const SymmetryGroup& group,
                                    double t);

}  // namespace vmcs
