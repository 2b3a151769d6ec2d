#pragma once

#include <optional>
#include <vector>

#include "vmcs/ansatz.hpp"
#include "vmcs/lattice.hpp"
#include "vmcs/vec3.hpp"

namespace vmcs {

/// Couplings of the dissipative transverse-field Ising model. The
/// Hamiltonian carries (g/2) sigma^x per site and (V/2 chi) sigma^z
/// sigma^z per bond; each site decays at rate gamma. v_eff is the
/// coefficient the two-local kernel actually uses: the bond term equals
/// (2V/chi) SzSz in spin operators, so v_eff = 2V/chi unless overridden.
struct ModelParams {
    double g = 0.0;
    double V = 0.0;
    double gamma = 0.0;
    double v_eff = 0.0;

    static ModelParams from_couplings(double g, double V, double gamma, int coordination,
                                      std::optional<double> v_eff_override = std::nullopt);
};

// ---------------------------------------------------------------------------
// Closed-form single-sphere integrals. Polynomial in the Bloch vectors,
// valid for any m in R^3. Templated so forward-mode duals can flow through.
// ---------------------------------------------------------------------------

/// <q(mL), q(mR)> = (3 + mL.mR) / 12 pi
template <class S>
inline S pair_overlap(const Vec3T<S>& mL, const Vec3T<S>& mR) {
    return (1.0 / (12.0 * kPi)) * (3.0 + dot(mL, mR));
}

/// <q(mL), L1 q(mR)> for the one-site Liouvillian (transverse field g
/// plus decay gamma):
///   (g/12pi) (mR x mL)_x - (gamma/24pi) [mL.mR + mLz (2 + mRz)]
template <class S>
inline S one_local_kernel(const Vec3T<S>& mL, const Vec3T<S>& mR, const ModelParams& p) {
    const S cross_x = mR.y * mL.z - mR.z * mL.y;
    const S decay = dot(mL, mR) + mL.z * (2.0 + mR.z);
    return (p.g / (12.0 * kPi)) * cross_x - (p.gamma / (24.0 * kPi)) * decay;
}

/// <q(mLi) q(mLj), L2 q(mRi) q(mRj)> for the bond Liouvillian:
///   (v_eff/288pi^2) [ (mLjz + 3 mRjz)(mRi x mLi)_z
///                   + (mLiz + 3 mRiz)(mRj x mLj)_z ]
template <class S>
inline S two_local_kernel(const Vec3T<S>& mLi, const Vec3T<S>& mLj, const Vec3T<S>& mRi,
                          const Vec3T<S>& mRj, const ModelParams& p) {
    const S cross_i = mRi.x * mLi.y - mRi.y * mLi.x;
    const S cross_j = mRj.x * mLj.y - mRj.y * mLj.x;
    return (p.v_eff / (288.0 * kPi * kPi)) *
           ((mLj.z + 3.0 * mRj.z) * cross_i + (mLi.z + 3.0 * mRi.z) * cross_j);
}

// Analytic gradients with respect to the left Bloch vector, used by the
// closed-form tensor/force assembly.

inline Vec3 pair_overlap_grad_left(const Vec3& mR) {
    return (1.0 / (12.0 * kPi)) * mR;
}

inline Vec3 one_local_grad_left(const Vec3& mR, const ModelParams& p) {
    const double cg = p.g / (12.0 * kPi);
    const double cd = p.gamma / (24.0 * kPi);
    return {-cd * mR.x, -cg * mR.z - cd * mR.y, cg * mR.y - cd * (2.0 + 2.0 * mR.z)};
}

/// Gradient of the bond kernel with respect to mLi; call with i and j
/// swapped for the other site.
inline Vec3 two_local_grad_left_i(const Vec3& mLj, const Vec3& mRi, const Vec3& mRj,
                                  const ModelParams& p) {
    const double cv = p.v_eff / (288.0 * kPi * kPi);
    const double wj = mLj.z + 3.0 * mRj.z;
    const double cross_j = mRj.x * mLj.y - mRj.y * mLj.x;
    return {-cv * wj * mRi.y, cv * wj * mRi.x, cv * cross_j};
}

// ---------------------------------------------------------------------------
// Generating functions over full mixtures.
// ---------------------------------------------------------------------------

/// Precomputed per-group data: inverse indices and a factor ordering per
/// permutation that makes the overlap generating function exactly
/// symmetric under exchange of its two states.
struct GroupTables {
    std::vector<std::vector<int>> perms;
    std::vector<int> inverse_index;
    /// Per permutation: factor buckets (site_a, site_b) with site_b == -1
    /// for a single factor; 2-cycles are fused into one bucket so the
    /// product order is invariant under inversion of the permutation.
    std::vector<std::vector<std::pair<int, int>>> buckets;

    static GroupTables build(const SymmetryGroup& group);
    int size() const { return static_cast<int>(perms.size()); }
};

/// L2 inner product <Q_L, Q_R> of two group-averaged mixtures. Exactly
/// symmetric in its two state arguments.
double overlap_generating(const VariationalState& state_l, const VariationalState& state_r,
                          const SymmetryGroup& group);

/// <Q_L, L_Q Q_R>: Liouvillian overlap built from leave-one-out products
/// of pair overlaps with one- and two-local kernel insertions. The
/// leave-one-out form avoids the division in the ratio formula entirely.
double liouville_generating(const VariationalState& state_l, const VariationalState& state_r,
                            const ModelParams& model, const LatticeSpec& lattice,
                            const SymmetryGroup& group);

}  // namespace vmcs
