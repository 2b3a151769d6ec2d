#include "vmcs/eom.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <thread>
#include <vector>

#include "vmcs/dual.hpp"
#include "vmcs/kernels_detail.hpp"

namespace vmcs {

Eigen::VectorXd pack_state(const VariationalState& state) {
    const ParamLayout lay{state.n_comp, state.n_sites};
    Eigen::VectorXd theta(lay.n_params());
    for (int k = 0; k < state.n_comp; ++k) theta[lay.c_index(k)] = state.c[k];
    for (int k = 0; k < state.n_comp; ++k) {
        for (int i = 0; i < state.n_sites; ++i) {
            const Vec3& v = state.bloch(k, i);
            theta[lay.m_index(k, i, 0)] = v.x;
            theta[lay.m_index(k, i, 1)] = v.y;
            theta[lay.m_index(k, i, 2)] = v.z;
        }
    }
    return theta;
}

VariationalState unpack_state(const Eigen::VectorXd& theta, int n_comp, int n_sites) {
    const ParamLayout lay{n_comp, n_sites};
    if (theta.size() != lay.n_params()) {
        throw std::invalid_argument("unpack_state: parameter vector has wrong length");
    }
    VariationalState st;
    st.n_comp = n_comp;
    st.n_sites = n_sites;
    st.c.resize(n_comp);
    st.m.resize(static_cast<size_t>(n_comp) * n_sites);
    for (int k = 0; k < n_comp; ++k) st.c[k] = theta[lay.c_index(k)];
    for (int k = 0; k < n_comp; ++k) {
        for (int i = 0; i < n_sites; ++i) {
            st.bloch(k, i) = Vec3{theta[lay.m_index(k, i, 0)], theta[lay.m_index(k, i, 1)],
                                  theta[lay.m_index(k, i, 2)]};
        }
    }
    return st;
}

namespace {

constexpr double kInv12Pi = 1.0 / (12.0 * kPi);
constexpr double kInv144Pi2 = 1.0 / (144.0 * kPi * kPi);

void run_partitioned(int n, int threads, const std::function<void(int, int)>& body) {
    if (threads <= 1 || n <= 1) {
        body(0, n);
        return;
    }
    const int workers = std::min(threads, n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        const int lo = n * w / workers;
        const int hi = n * (w + 1) / workers;
        pool.emplace_back(body, lo, hi);
    }
    for (auto& t : pool) t.join();
}

// Closed-form tensor assembly. For each (k, l, permutation) the site
// overlaps are combined through prefix/suffix products, so every block
// entry costs O(1) after O(N_s) setup and the whole tensor costs
// O(N_c^2 N_s^2 |G|).
void tensor_rows_closed(const VariationalState& state, const GroupTables& gt, int k_lo,
                        int k_hi, GeometricTensor& t_out) {
    const int ns = state.n_sites;
    const int nc = state.n_comp;
    const ParamLayout lay{nc, ns};
    const double w = 1.0 / gt.size();

    std::vector<double> ov(ns), prefix(ns + 1), suffix(ns + 1);

    for (int k = k_lo; k < k_hi; ++k) {
        for (int g = 0; g < gt.size(); ++g) {
            const auto& perm = gt.perms[g];
            for (int l = 0; l < nc; ++l) {
                for (int i = 0; i < ns; ++i) {
                    ov[i] = pair_overlap(state.bloch(k, i), state.bloch(l, perm[i]));
                }
                prefix[0] = 1.0;
                for (int i = 0; i < ns; ++i) prefix[i + 1] = prefix[i] * ov[i];
                suffix[ns] = 1.0;
                for (int i = ns - 1; i >= 0; --i) suffix[i] = ov[i] * suffix[i + 1];

                const double ck = state.c[k];
                const double cl = state.c[l];

                t_out(lay.c_index(k), lay.c_index(l)) += w * prefix[ns];

                for (int i = 0; i < ns; ++i) {
                    const double loo = prefix[i] * suffix[i + 1];
                    const int row = lay.m_index(k, i, 0);
                    const int col = lay.m_index(l, perm[i], 0);
                    const Vec3& ml_i = state.bloch(k, i);
                    const Vec3& mr_i = state.bloch(l, perm[i]);

                    // d/dc_k d/dm_{l, perm(i)} and the transpose block
                    const double fc = w * loo * kInv12Pi;
                    t_out(lay.c_index(k), col + 0) += cl * fc * ml_i.x;
                    t_out(lay.c_index(k), col + 1) += cl * fc * ml_i.y;
                    t_out(lay.c_index(k), col + 2) += cl * fc * ml_i.z;
                    t_out(row + 0, lay.c_index(l)) += ck * fc * mr_i.x;
                    t_out(row + 1, lay.c_index(l)) += ck * fc * mr_i.y;
                    t_out(row + 2, lay.c_index(l)) += ck * fc * mr_i.z;

                    // same-site mixed second derivative is diagonal
                    const double fd = w * ck * cl * loo * kInv12Pi;
                    t_out(row + 0, col + 0) += fd;
                    t_out(row + 1, col + 1) += fd;
                    t_out(row + 2, col + 2) += fd;
                }

                for (int i = 0; i < ns; ++i) {
                    double inner = 1.0;
                    const Vec3& a1 = state.bloch(l, perm[i]);  // row-gradient at site i
                    const Vec3& b2 = state.bloch(k, i);
                    for (int i2 = i + 1; i2 < ns; ++i2) {
                        const double lto = prefix[i] * inner * suffix[i2 + 1];
                        const double f = w * ck * cl * lto * kInv144Pi2;
                        const Vec3& b1 = state.bloch(k, i2);
                        const Vec3& a2 = state.bloch(l, perm[i2]);
                        const int row_i = lay.m_index(k, i, 0);
                        const int col_i2 = lay.m_index(l, perm[i2], 0);
                        const int row_i2 = lay.m_index(k, i2, 0);
                        const int col_i = lay.m_index(l, perm[i], 0);
                        const double a1v[3] = {a1.x, a1.y, a1.z};
                        const double b1v[3] = {b1.x, b1.y, b1.z};
                        const double a2v[3] = {a2.x, a2.y, a2.z};
                        const double b2v[3] = {b2.x, b2.y, b2.z};
                        for (int al = 0; al < 3; ++al) {
                            const double fa1 = f * a1v[al];
                            const double fa2 = f * a2v[al];
                            for (int be = 0; be < 3; ++be) {
                                t_out(row_i + al, col_i2 + be) += fa1 * b1v[be];
                                t_out(row_i2 + al, col_i + be) += fa2 * b2v[be];
                            }
                        }
                        inner *= ov[i2];
                    }
                }
            }
        }
    }
}

void force_rows_closed(const VariationalState& state, const ModelParams& model,
                       const LatticeSpec& lattice, const GroupTables& gt, int k_lo, int k_hi,
                       ForceVector& f_out) {
    const int ns = state.n_sites;
    const int nc = state.n_comp;
    const ParamLayout lay{nc, ns};
    const double w = 1.0 / gt.size();
    const auto& edges = lattice.edges;

    std::vector<double> ov(ns), prefix(ns + 1), suffix(ns + 1);
    std::vector<double> k1(ns), pw(ns + 1), sw(ns + 1);
    std::vector<double> bsum(ns);          // sum over edges not containing w
    std::vector<Vec3> dk2(ns);             // kernel gradients of edges containing w
    std::vector<int> reduced(ns);          // site list with an edge's endpoints removed
    std::vector<double> rpre(ns + 1), rsuf(ns + 1);

    for (int k = k_lo; k < k_hi; ++k) {
        for (int g = 0; g < gt.size(); ++g) {
            const auto& perm = gt.perms[g];
            for (int l = 0; l < nc; ++l) {
                for (int i = 0; i < ns; ++i) {
                    ov[i] = pair_overlap(state.bloch(k, i), state.bloch(l, perm[i]));
                    k1[i] = one_local_kernel(state.bloch(k, i), state.bloch(l, perm[i]), model);
                }
                prefix[0] = 1.0;
                for (int i = 0; i < ns; ++i) prefix[i + 1] = prefix[i] * ov[i];
                suffix[ns] = 1.0;
                for (int i = ns - 1; i >= 0; --i) suffix[i] = ov[i] * suffix[i + 1];

                // pw[i]: weighted one-local sum over sites < i with one
                // factor removed; sw[i]: the mirrored suffix version.
                pw[0] = 0.0;
                for (int i = 0; i < ns; ++i) pw[i + 1] = pw[i] * ov[i] + k1[i] * prefix[i];
                sw[ns] = 0.0;
                for (int i = ns - 1; i >= 0; --i) sw[i] = k1[i] * suffix[i + 1] + ov[i] * sw[i + 1];

                const double s_one = pw[ns];

                double s_two = 0.0;
                std::fill(bsum.begin(), bsum.end(), 0.0);
                std::fill(dk2.begin(), dk2.end(), Vec3{});
                for (const auto& [ea, eb] : edges) {
                    const Vec3& mla = state.bloch(k, ea);
                    const Vec3& mlb = state.bloch(k, eb);
                    const Vec3& mra = state.bloch(l, perm[ea]);
                    const Vec3& mrb = state.bloch(l, perm[eb]);
                    const double k2 = two_local_kernel(mla, mlb, mra, mrb, model);

                    int nr = 0;
                    for (int i = 0; i < ns; ++i) {
                        if (i != ea && i != eb) reduced[nr++] = i;
                    }
                    rpre[0] = 1.0;
                    for (int r = 0; r < nr; ++r) rpre[r + 1] = rpre[r] * ov[reduced[r]];
                    rsuf[nr] = 1.0;
                    for (int r = nr - 1; r >= 0; --r) rsuf[r] = ov[reduced[r]] * rsuf[r + 1];
                    const double loo_edge = rpre[nr];

                    s_two += k2 * loo_edge;
                    for (int r = 0; r < nr; ++r) {
                        bsum[reduced[r]] += k2 * (rpre[r] * rsuf[r + 1]);
                    }
                    const Vec3 da = two_local_grad_left_i(mlb, mra, mrb, model);
                    const Vec3 db = two_local_grad_left_i(mla, mrb, mra, model);
                    dk2[ea] = dk2[ea] + loo_edge * da;
                    dk2[eb] = dk2[eb] + loo_edge * db;
                }

                const double ck = state.c[k];
                const double cl = state.c[l];
                f_out[lay.c_index(k)] += w * cl * (s_one + s_two);

                const double fkl = w * ck * cl;
                for (int i = 0; i < ns; ++i) {
                    const double loo = prefix[i] * suffix[i + 1];
                    const double u = pw[i] * suffix[i + 1] + prefix[i] * sw[i + 1];
                    const Vec3& mr = state.bloch(l, perm[i]);
                    const Vec3 dk1 = one_local_grad_left(mr, model);
                    const double ov_grad = (u + bsum[i]) * kInv12Pi;
                    const int row = lay.m_index(k, i, 0);
                    f_out[row + 0] += fkl * (dk1.x * loo + ov_grad * mr.x + dk2[i].x);
                    f_out[row + 1] += fkl * (dk1.y * loo + ov_grad * mr.y + dk2[i].y);
                    f_out[row + 2] += fkl * (dk1.z * loo + ov_grad * mr.z + dk2[i].z);
                }
            }
        }
    }
}

// Forward-mode reference assembly: dual numbers seeded per parameter
// flow through the generating functions. Quadratic cost in the parameter
// count for the tensor; used as the cross-check mode.
struct DualViews {
    std::vector<Dual2> c_l, c_r;
    std::vector<Vec3T<Dual2>> m_l, m_r;
};

template <class S>
void seed_param(std::vector<S>& c, std::vector<Vec3T<S>>& m, const ParamLayout& lay, int p,
                double value, double S::*slot) {
    if (p < lay.n_comp) {
        S& target = c[p];
        target.*slot = value;
        return;
    }
    const int rest = p - lay.n_comp;
    const int axis = rest % 3;
    const int site = (rest / 3) % lay.n_sites;
    const int comp = rest / (3 * lay.n_sites);
    Vec3T<S>& v = m[static_cast<size_t>(comp) * lay.n_sites + site];
    S& target = axis == 0 ? v.x : axis == 1 ? v.y : v.z;
    target.*slot = value;
}

template <class S>
void load_views(const VariationalState& st, std::vector<S>& c, std::vector<Vec3T<S>>& m) {
    c.assign(st.c.begin(), st.c.end());
    m.resize(st.m.size());
    for (size_t i = 0; i < st.m.size(); ++i) {
        m[i] = Vec3T<S>{S{st.m[i].x}, S{st.m[i].y}, S{st.m[i].z}};
    }
}

GeometricTensor assemble_tensor_forward(const VariationalState& state, const GroupTables& gt,
                                        int threads) {
    const ParamLayout lay{state.n_comp, state.n_sites};
    const int np = lay.n_params();
    GeometricTensor t(np, np);

    run_partitioned(np, threads, [&](int lo, int hi) {
        std::vector<Dual2> cl, cr;
        std::vector<Vec3T<Dual2>> ml, mr;
        load_views(state, cl, ml);
        load_views(state, cr, mr);
        for (int p = lo; p < hi; ++p) {
            seed_param(cl, ml, lay, p, 1.0, &Dual2::dl);
            for (int q = 0; q < np; ++q) {
                seed_param(cr, mr, lay, q, 1.0, &Dual2::dr);
                const detail::StateView<Dual2> vl{state.n_comp, state.n_sites, cl.data(),
                                                  ml.data()};
                const detail::StateView<Dual2> vr{state.n_comp, state.n_sites, cr.data(),
                                                  mr.data()};
                t(p, q) = detail::overlap_generating_impl(vl, vr, gt).dlr;
                seed_param(cr, mr, lay, q, 0.0, &Dual2::dr);
            }
            seed_param(cl, ml, lay, p, 0.0, &Dual2::dl);
        }
    });
    return t;
}

ForceVector assemble_force_forward(const VariationalState& state, const ModelParams& model,
                                   const LatticeSpec& lattice, const GroupTables& gt,
                                   int threads) {
    const ParamLayout lay{state.n_comp, state.n_sites};
    const int np = lay.n_params();
    ForceVector f(np);

    run_partitioned(np, threads, [&](int lo, int hi) {
        std::vector<Dual> cl, cr;
        std::vector<Vec3T<Dual>> ml, mr;
        load_views(state, cl, ml);
        load_views(state, cr, mr);
        const detail::StateView<Dual> vl{state.n_comp, state.n_sites, cl.data(), ml.data()};
        const detail::StateView<Dual> vr{state.n_comp, state.n_sites, cr.data(), mr.data()};
        for (int p = lo; p < hi; ++p) {
            seed_param(cl, ml, lay, p, 1.0, &Dual::d);
            f[p] = detail::liouville_generating_impl(vl, vr, model, lattice, gt).d;
            seed_param(cl, ml, lay, p, 0.0, &Dual::d);
        }
    });
    return f;
}

}  // namespace

GeometricTensor assemble_tensor(const VariationalState& state, const SymmetryGroup& group,
                                GradientMode mode, int threads) {
    const GroupTables gt = GroupTables::build(group);
    if (mode == GradientMode::forward_mode) {
        return assemble_tensor_forward(state, gt, threads);
    }
    const ParamLayout lay{state.n_comp, state.n_sites};
    GeometricTensor t = GeometricTensor::Zero(lay.n_params(), lay.n_params());
    run_partitioned(state.n_comp, threads,
                    [&](int lo, int hi) { tensor_rows_closed(state, gt, lo, hi, t); });
    return t;
}

ForceVector assemble_force(const VariationalState& state, const ModelParams& model,
                           const LatticeSpec& lattice, const SymmetryGroup& group,
                           GradientMode mode, int threads) {
    if (state.n_sites != lattice.n_sites()) {
        throw std::invalid_argument("assemble_force: state does not match lattice");
    }
    const GroupTables gt = GroupTables::build(group);
    if (mode == GradientMode::forward_mode) {
        return assemble_force_forward(state, model, lattice, gt, threads);
    }
    const ParamLayout lay{state.n_comp, state.n_sites};
    ForceVector f = ForceVector::Zero(lay.n_params());
    run_partitioned(state.n_comp, threads, [&](int lo, int hi) {
        force_rows_closed(state, model, lattice, gt, lo, hi, f);
    });
    return f;
}

Eigen::VectorXd solve_theta_dot(const GeometricTensor& tensor, const ForceVector& force,
                                const EomConfig& config, SolveInfo* info, int n_coeff) {
    config.validate();
    if (tensor.rows() != tensor.cols() || tensor.rows() != force.size()) {
        throw std::invalid_argument("solve_theta_dot: dimension mismatch");
    }
    const int n = static_cast<int>(tensor.rows());
    const bool constrain = config.conserve_trace && n_coeff > 0 && n_coeff <= n;

    double scale = tensor.diagonal().maxCoeff();
    if (!(scale > 0.0)) scale = 1.0;

    const Eigen::MatrixXd a = (0.5 / scale) * (tensor + tensor.transpose());
    const Eigen::VectorXd b = force / scale;

    Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
    for (int k = 0; k < n_coeff; ++k) u[k] = 1.0;

    double eps = config.epsilon;
    for (int attempt = 0; attempt <= 3; ++attempt) {
        Eigen::MatrixXd shifted = a;
        shifted.diagonal().array() += eps;
        Eigen::LLT<Eigen::MatrixXd> llt(shifted);
        if (llt.info() != Eigen::Success) {
            eps *= 10.0;
            continue;
        }
        auto refined_solve = [&](const Eigen::VectorXd& rhs) {
            Eigen::VectorXd x = llt.solve(rhs);
            // Two refinement sweeps push the residual to the rounding floor.
            for (int it = 0; it < 2; ++it) {
                Eigen::VectorXd r = rhs - shifted.selfadjointView<Eigen::Lower>() * x;
                x += llt.solve(r);
            }
            return x;
        };

        Eigen::VectorXd x = refined_solve(b);
        double lambda = 0.0;
        if (constrain) {
            const Eigen::VectorXd y = refined_solve(u);
            const double uy = u.dot(y);
            if (std::abs(uy) > 1e-300) {
                lambda = u.dot(x) / uy;
                x -= lambda * y;
            }
        }
        if (info) {
            Eigen::VectorXd r = b - shifted.selfadjointView<Eigen::Lower>() * x;
            if (constrain) r -= lambda * u;
            info->residual = r.norm();
            info->rhs_norm = b.norm();
            info->epsilon_used = eps;
            info->scale = scale;
            info->escalations = attempt;
        }
        return x;
    }
    throw NumericalError(
        "solve_theta_dot: factorization failed after three shift escalations (epsilon reached " +
        std::to_string(eps) + ")");
}

}  // namespace vmcs
