#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vmcs/lattice.hpp"
#include "vmcs/vec3.hpp"

namespace vmcs {

/// Variational parameter vector theta: mixture coefficients c_k (which
/// may be negative but sum to one) and one Bloch vector per component
/// and site. Bloch vectors are kept in Cartesian form throughout; the
/// kernels are polynomial in the components, so nothing is gained by
/// spherical angles and the poles stay regular.
struct VariationalState {
    int n_comp = 0;
    int n_sites = 0;
    std::vector<double> c;   // [n_comp]
    std::vector<Vec3> m;     // [n_comp * n_sites], k-major

    Vec3& bloch(int k, int i) { return m[static_cast<size_t>(k) * n_sites + i]; }
    const Vec3& bloch(int k, int i) const { return m[static_cast<size_t>(k) * n_sites + i]; }

    /// Number of variational parameters, 3*n_comp*n_sites + n_comp.
    int n_params() const { return 3 * n_comp * n_sites + n_comp; }

    double sum_c() const;
    double max_m_norm() const;
};

/// A point on the product of unit spheres, one unit vector per site.
struct PhasePoint {
    std::vector<Vec3> n;

    /// Validates that every vector is unit length to 1e-12.
    static PhasePoint from_directions(std::vector<Vec3> dirs);
};

/// Product state along `direction` with n_comp equal-weight components,
/// each Bloch vector perturbed by independent uniform noise of at most
/// `perturbation` per Cartesian component and rescaled back into the
/// unit ball. Deterministic for a fixed seed.
VariationalState init_product_state(const LatticeSpec& lattice, int n_comp,
                                    const Vec3& direction, double perturbation,
                                    std::uint64_t seed);

/// Ansatz value Q(point; theta) averaged over the symmetry group.
double evaluate_q(const VariationalState& state, const PhasePoint& point,
                  const SymmetryGroup& group);

/// Rescales c so the coefficients sum to one; Bloch vectors unchanged.
/// Throws std::domain_error when |sum c| < 1e-12.
VariationalState renormalize(const VariationalState& state);

/// Flat JSON snapshot {c, m, lattice} for checkpoint/restart.
std::string state_to_json(const VariationalState& state, const LatticeSpec& lattice);
VariationalState state_from_json(const std::string& text, LatticeSpec* lattice_out = nullptr);

}  // namespace vmcs
