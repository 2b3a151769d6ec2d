#pragma once

#include <Eigen/Dense>
#include <complex>

#include "vmcs/ansatz.hpp"
#include "vmcs/integrator.hpp"
#include "vmcs/kernels.hpp"
#include "vmcs/lattice.hpp"

namespace vmcs {

/// Full density operator of up to ten spins. Basis index bit i holds the
/// state of site i: bit 0 is spin up (sigma^z = +1), bit 1 spin down.
struct DensityMatrix {
    int n_sites = 0;
    Eigen::MatrixXcd rho;

    int dim() const { return 1 << n_sites; }
};

inline constexpr int kOracleMaxSites = 10;

/// Product density operator with one Bloch vector per site.
DensityMatrix product_density(const std::vector<Vec3>& site_bloch);

/// Density operator of a group-averaged mixture of Bloch products; the
/// exact counterpart of the variational state, so oracle runs can start
/// from the identical physical state.
DensityMatrix vstate_to_density(const VariationalState& state, const SymmetryGroup& group);

/// Lindblad right-hand side applied matrix-free: ZZ and decay terms act
/// through diagonal index tables, the transverse field through per-site
/// bit flips. Rejects more than kOracleMaxSites sites.
void lindblad_rhs(const DensityMatrix& rho, const ModelParams& model,
                  const LatticeSpec& lattice, DensityMatrix& out);

DensityMatrix lindblad_rhs(const DensityMatrix& rho, const ModelParams& model,
                           const LatticeSpec& lattice);

/// Deterministic fixed-step RK4 on the density matrix, recording the
/// same observable schema as the variational integrator. Diagnostics
/// map to |Tr rho - 1|, the largest site Bloch norm, and the hermiticity
/// deviation.
Trajectory run_exact(const DensityMatrix& initial, const ModelParams& model,
                     const LatticeSpec& lattice, const IntegrationConfig& integration);

/// Husimi-Q value of rho at a phase point: [(2S+1)/4pi]^N <Omega|rho|Omega>
/// with S = 1/2.
double husimi_q(const DensityMatrix& rho, const PhasePoint& point);

/// Per-site Bloch vector (<sx_i>, <sy_i>, <sz_i>) from the density matrix.
Vec3 oracle_site_bloch(const DensityMatrix& rho, int i);

/// <sigma_i^alpha sigma_j^beta> from the density matrix, i != j.
double oracle_two_site(const DensityMatrix& rho, int i, int j, int alpha, int beta);

}  // namespace vmcs
