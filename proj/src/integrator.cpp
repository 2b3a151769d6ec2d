#include "vmcs/integrator.hpp"

#include <cmath>
#include <stdexcept>

namespace vmcs {

namespace {

Eigen::VectorXd theta_dot(const Eigen::VectorXd& theta, int n_comp, int n_sites,
                          const ModelParams& model, const LatticeSpec& lattice,
                          const SymmetryGroup& group, const EomConfig& eom, SolveInfo* info) {
    const VariationalState st = unpack_state(theta, n_comp, n_sites);
    const GeometricTensor t = assemble_tensor(st, group, eom.gradient_mode, eom.threads);
    const ForceVector f = assemble_force(st, model, lattice, group, eom.gradient_mode,
                                         eom.threads);
    return solve_theta_dot(t, f, eom, info, st.n_comp);
}

}  // namespace

VariationalState rk4_step(const VariationalState& state, const ModelParams& model,
                          const LatticeSpec& lattice, const SymmetryGroup& group, double dt,
                          const EomConfig& eom, StepDiagnostics* diag) {
    if (!(dt > 0.0)) throw std::invalid_argument("rk4_step: dt must be positive");

    const int nc = state.n_comp;
    const int ns = state.n_sites;
    const Eigen::VectorXd theta = pack_state(state);

    SolveInfo info[4];
    const Eigen::VectorXd k1 = theta_dot(theta, nc, ns, model, lattice, group, eom, &info[0]);
    const Eigen::VectorXd k2 =
        theta_dot(theta + (0.5 * dt) * k1, nc, ns, model, lattice, group, eom, &info[1]);
    const Eigen::VectorXd k3 =
        theta_dot(theta + (0.5 * dt) * k2, nc, ns, model, lattice, group, eom, &info[2]);
    const Eigen::VectorXd k4 =
        theta_dot(theta + dt * k3, nc, ns, model, lattice, group, eom, &info[3]);

    Eigen::VectorXd next = theta + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    VariationalState out = unpack_state(next, nc, ns);

    if (diag) {
        diag->sum_c_drift = std::abs(out.sum_c() - 1.0);
        diag->max_m_norm = out.max_m_norm();
        diag->residual = 0.0;
        diag->epsilon_used = 0.0;
        for (const SolveInfo& si : info) {
            // residual relative to max(||rhs||, 1) of the scaled system
            diag->residual =
                std::max(diag->residual, si.residual / std::max(si.rhs_norm, 1.0));
            diag->epsilon_used = std::max(diag->epsilon_used, si.epsilon_used);
        }
    }
    return renormalize(out);
}

Trajectory run_dynamics(const VariationalState& initial, const ModelParams& model,
                        const LatticeSpec& lattice, const SymmetryGroup& group,
                        const IntegrationConfig& integration, const EomConfig& eom,
                        const RecordHook& on_record) {
    if (!(integration.t_final > 0.0)) {
        throw std::invalid_argument("run_dynamics: t_final must be positive");
    }
    if (!(integration.dt > 0.0)) {
        throw std::invalid_argument("run_dynamics: dt must be positive");
    }
    const int record_every = std::max(1, integration.record_every);
    const long n_steps = std::lround(integration.t_final / integration.dt);

    Trajectory traj;
    traj.dt = integration.dt;
    traj.n_sites = initial.n_sites;

    auto physicality = [](const ObservableRecord& rec) {
        double worst = 0.0;
        for (const Vec3& v : rec.site) {
            worst = std::max({worst, std::abs(v.x), std::abs(v.y), std::abs(v.z)});
        }
        return worst;
    };

    VariationalState state = initial;
    ObservableRecord rec0 = record_observables(state, group, 0.0);
    rec0.max_m_norm = state.max_m_norm();
    traj.worst_physicality = physicality(rec0);
    traj.worst_m_norm = rec0.max_m_norm;
    if (on_record) on_record(rec0);
    traj.records.push_back(std::move(rec0));

    StepDiagnostics diag;
    for (long step = 1; step <= n_steps; ++step) {
        try {
            state = rk4_step(state, model, lattice, group, integration.dt, eom, &diag);
        } catch (const NumericalError& err) {
            traj.aborted = true;
            traj.abort_reason = err.what();
            break;
        }

        bool finite = true;
        for (double ck : state.c) finite = finite && std::isfinite(ck);
        for (const Vec3& v : state.m) {
            finite = finite && std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
        }
        if (!finite) {
            traj.aborted = true;
            traj.abort_reason =
                "non-finite parameters at t = " + std::to_string(step * integration.dt) +
                " (last per-step |sum c - 1| drift " + std::to_string(traj.worst_sum_c_drift) +
                "); reduce dt";
            break;
        }
        // An order-one trace drift in a single step means the step size is
        // far beyond the stability region; the parameters are garbage even
        // if still finite.
        if (diag.sum_c_drift > 0.5 || diag.max_m_norm > 100.0) {
            traj.aborted = true;
            traj.abort_reason = "unstable step at t = " + std::to_string(step * integration.dt) +
                                ": per-step trace drift |sum c - 1| = " +
                                std::to_string(diag.sum_c_drift) + ", max Bloch norm = " +
                                std::to_string(diag.max_m_norm) + "; reduce dt";
            break;
        }

        traj.worst_sum_c_drift = std::max(traj.worst_sum_c_drift, diag.sum_c_drift);
        traj.worst_m_norm = std::max(traj.worst_m_norm, diag.max_m_norm);
        traj.worst_residual = std::max(traj.worst_residual, diag.residual);

        if (step % record_every == 0 || step == n_steps) {
            ObservableRecord rec = record_observables(state, group, step * integration.dt);
            rec.sum_c_drift = diag.sum_c_drift;
            rec.max_m_norm = diag.max_m_norm;
            rec.residual = diag.residual;
            traj.worst_physicality = std::max(traj.worst_physicality, physicality(rec));
            if (on_record) on_record(rec);
            traj.records.push_back(std::move(rec));
        }
    }
    traj.final_state = std::move(state);
    return traj;
}

SteadyState extract_steady_state(const Trajectory& traj, double tail_fraction) {
    if (!(tail_fraction > 0.0) || tail_fraction > 0.5) {
        throw std::invalid_argument("extract_steady_state: tail_fraction must be in (0, 0.5]");
    }
    const int n = static_cast<int>(traj.records.size());
    const int n_tail = static_cast<int>(std::floor(tail_fraction * n));
    if (n_tail < 10) {
        throw std::invalid_argument("extract_steady_state: fewer than 10 records in the tail");
    }
    const int first = n - n_tail;

    SteadyState ss;
    ss.n_tail = n_tail;
    ss.t_start = traj.records[first].t;
    ss.t_end = traj.records[n - 1].t;

    auto stat = [&](auto getter) {
        TailStat s;
        double mean_t = 0.0, mean_v = 0.0;
        for (int r = first; r < n; ++r) {
            mean_t += traj.records[r].t;
            mean_v += getter(traj.records[r]);
        }
        mean_t /= n_tail;
        mean_v /= n_tail;
        double var = 0.0, cov = 0.0, var_t = 0.0;
        for (int r = first; r < n; ++r) {
            const double dv = getter(traj.records[r]) - mean_v;
            const double dt = traj.records[r].t - mean_t;
            var += dv * dv;
            cov += dv * dt;
            var_t += dt * dt;
        }
        s.mean = mean_v;
        s.stddev = std::sqrt(var / n_tail);
        const double slope = var_t > 0.0 ? cov / var_t : 0.0;
        s.drift = slope * (ss.t_end - ss.t_start);
        return s;
    };
    ss.sx = stat([](const ObservableRecord& r) { return r.avg.x; });
    ss.sy = stat([](const ObservableRecord& r) { return r.avg.y; });
    ss.sz = stat([](const ObservableRecord& r) { return r.avg.z; });

    const double tol = 1e-3;
    ss.converged = !traj.aborted && ss.sx.stddev < tol && ss.sy.stddev < tol &&
                   ss.sz.stddev < tol && std::abs(ss.sx.drift) < tol &&
                   std::abs(ss.sy.drift) < tol && std::abs(ss.sz.drift) < tol;
    return ss;
}

}  // namespace vmcs
