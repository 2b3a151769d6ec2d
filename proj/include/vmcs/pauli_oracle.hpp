#pragma once

#include <complex>
#include <vector>

#include "vmcs/ansatz.hpp"
#include "vmcs/kernels.hpp"
#include "vmcs/lattice.hpp"

namespace vmcs {

/// Operator on up to four spins expanded over Pauli strings. The string
/// index is base-4 with digit i holding the letter on site i
/// (0 = identity, 1 = x, 2 = y, 3 = z). This is the independent route
/// used to validate the closed-form kernels: Lindblad action is worked
/// out with the Pauli product table and phase-space integrals collapse
/// to exact sphere moments.
struct PauliPoly {
    int n_sites = 0;
    std::vector<std::complex<double>> coef;  // 4^n_sites entries

    static PauliPoly zero(int n_sites);

    /// Density operator of a group-averaged mixture of Bloch products.
    static PauliPoly from_state(const VariationalState& state, const SymmetryGroup& group);

    /// Density operator c * prod_i (1 + m_i . sigma_i) / 2.
    static PauliPoly from_bloch_product(double c, const std::vector<Vec3>& m);

    PauliPoly& operator+=(const PauliPoly& other);

    /// coeff * sigma^letter(site) * A  and  A * coeff * sigma^letter(site).
    PauliPoly mul_site_left(int site, int letter, std::complex<double> coeff) const;
    PauliPoly mul_site_right(int site, int letter, std::complex<double> coeff) const;

    /// Value of the operator's Q-symbol at a phase point.
    double q_symbol(const PhasePoint& point) const;
};

/// Lindblad superoperator applied in the Pauli basis: commutator with
/// H = sum_i (g/2) x_i + sum_<ij> (V/2chi) z_i z_j plus local decay at
/// rate gamma. Uses the physical couplings, never v_eff.
PauliPoly lindblad_apply_pauli(const PauliPoly& a, const ModelParams& model,
                               const LatticeSpec& lattice);

/// Integral of the product of two Q-symbols over the product of spheres,
/// evaluated from exact sphere moments.
double moment_pair(const PauliPoly& a, const PauliPoly& b);

/// Oracle value of <Q_L, L_Q Q_R> (or plain <Q_L, Q_R> with
/// apply_liouville = false). Rejects more than four sites.
double pauli_oracle_kernel(const VariationalState& state_l, const VariationalState& state_r,
                           const ModelParams& model, const LatticeSpec& lattice,
                           const SymmetryGroup& group, bool apply_liouville = true);

}  // namespace vmcs
