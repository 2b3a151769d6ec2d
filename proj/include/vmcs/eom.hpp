#pragma once

#include <Eigen/Dense>
#include <stdexcept>

#include "vmcs/ansatz.hpp"
#include "vmcs/kernels.hpp"
#include "vmcs/lattice.hpp"

namespace vmcs {

using GeometricTensor = Eigen::MatrixXd;
using ForceVector = Eigen::VectorXd;

/// Thrown when the regularized solve cannot be completed.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class GradientMode { closed_form, forward_mode };

struct EomConfig {
    /// Tikhonov shift, applied relative to the tensor's diagonal scale.
    double epsilon = 1e-10;
    GradientMode gradient_mode = GradientMode::closed_form;
    /// Restrict the tangent flow to the normalization surface sum c = 1
    /// (the mixture-coefficient velocities sum to zero). The constraint is
    /// part of the ansatz; without it the coefficient sum drifts at the
    /// rate of the variational projection error rather than the
    /// integrator error.
    bool conserve_trace = true;
    /// Worker threads for tensor/force assembly. Results are bit-identical
    /// for any thread count (disjoint row blocks, fixed accumulation order).
    int threads = 1;

    void validate() const {
        if (epsilon < 1e-12 || epsilon > 1e-6) {
            throw std::invalid_argument("EomConfig: epsilon must lie in [1e-12, 1e-6]");
        }
    }
};

/// Fixed parameter ordering: the mixture coefficients first, then Bloch
/// components, Cartesian component fastest, then site, then component
/// index k.
struct ParamLayout {
    int n_comp = 0;
    int n_sites = 0;

    int n_params() const { return n_comp + 3 * n_comp * n_sites; }
    int c_index(int k) const { return k; }
    int m_index(int k, int i, int axis) const {
        return n_comp + 3 * (k * n_sites + i) + axis;
    }
};

Eigen::VectorXd pack_state(const VariationalState& state);
VariationalState unpack_state(const Eigen::VectorXd& theta, int n_comp, int n_sites);

/// Quantum geometric tensor: mixed second derivatives of the overlap
/// generating function at equal left/right parameters.
GeometricTensor assemble_tensor(const VariationalState& state, const SymmetryGroup& group,
                                GradientMode mode = GradientMode::closed_form,
                                int threads = 1);

/// Force vector: left-parameter gradient of the Liouvillian overlap
/// generating function at equal left/right parameters.
ForceVector assemble_force(const VariationalState& state, const ModelParams& model,
                           const LatticeSpec& lattice, const SymmetryGroup& group,
                           GradientMode mode = GradientMode::closed_form, int threads = 1);

struct SolveInfo {
    double residual = 0.0;      // ||(T/s + eps I) x - F/s|| on the scaled system
    double rhs_norm = 0.0;      // ||F/s||
    double epsilon_used = 0.0;  // shift actually applied after escalations
    double scale = 0.0;         // diagonal scale s
    int escalations = 0;
};

/// Solves (T/s + eps I) theta_dot = F/s by Cholesky with iterative
/// refinement, where s is the largest diagonal entry of T. The relative
/// shift keeps the regularization meaningful for any lattice size: the
/// raw tensor entries scale like the product of per-site overlaps and
/// would otherwise be drowned by an absolute shift. On factorization
/// failure the shift escalates tenfold, at most three times.
///
/// With conserve_trace set and n_coeff > 0, the solution additionally
/// satisfies sum of the first n_coeff components = 0, imposed through a
/// bordered (Lagrange) solve on the same factorization.
Eigen::VectorXd solve_theta_dot(const GeometricTensor& tensor, const ForceVector& force,
                                const EomConfig& config, SolveInfo* info = nullptr,
                                int n_coeff = 0);

}  // namespace vmcs
