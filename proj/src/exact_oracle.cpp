#include "vmcs/exact_oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace vmcs {

namespace {

using Cx = std::complex<double>;

void check_size(int n_sites) {
    if (n_sites < 1) throw std::invalid_argument("oracle: need at least one site");
    if (n_sites > kOracleMaxSites) {
        throw std::invalid_argument("oracle: limited to " + std::to_string(kOracleMaxSites) +
                                    " sites (density matrix memory guard)");
    }
}

inline int z_of(int index, int site) { return (index >> site) & 1 ? -1 : 1; }

}  // namespace

DensityMatrix product_density(const std::vector<Vec3>& site_bloch) {
    const int n = static_cast<int>(site_bloch.size());
    check_size(n);
    DensityMatrix dm;
    dm.n_sites = n;
    dm.rho = Eigen::MatrixXcd::Zero(1 << n, 1 << n);

    // Expand site by site; site s occupies bit s of the basis index.
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Ones(1, 1);
    for (int s = 0; s < n; ++s) {
        const Vec3& m = site_bloch[s];
        Eigen::Matrix2cd site;
        site << 0.5 * (1.0 + m.z), 0.5 * Cx(m.x, -m.y), 0.5 * Cx(m.x, m.y), 0.5 * (1.0 - m.z);
        const int d = 1 << s;
        Eigen::MatrixXcd next(2 * d, 2 * d);
        for (int rb = 0; rb < 2; ++rb) {
            for (int cb = 0; cb < 2; ++cb) {
                next.block(rb * d, cb * d, d, d) = site(rb, cb) * acc;
            }
        }
        acc = std::move(next);
    }
    dm.rho = std::move(acc);
    return dm;
}

DensityMatrix vstate_to_density(const VariationalState& state, const SymmetryGroup& group) {
    check_size(state.n_sites);
    DensityMatrix dm;
    dm.n_sites = state.n_sites;
    dm.rho = Eigen::MatrixXcd::Zero(1 << state.n_sites, 1 << state.n_sites);
    std::vector<Vec3> m(state.n_sites);
    const double inv_g = 1.0 / group.size();
    for (const auto& tau : group.perms) {
        for (int k = 0; k < state.n_comp; ++k) {
            for (int i = 0; i < state.n_sites; ++i) m[i] = state.bloch(k, tau[i]);
            dm.rho += (state.c[k] * inv_g) * product_density(m).rho;
        }
    }
    return dm;
}

void lindblad_rhs(const DensityMatrix& rho_in, const ModelParams& model,
                  const LatticeSpec& lattice, DensityMatrix& out) {
    check_size(rho_in.n_sites);
    const int n = rho_in.n_sites;
    const int dim = 1 << n;
    const Eigen::MatrixXcd& rho = rho_in.rho;

    out.n_sites = n;
    out.rho.resize(dim, dim);

    // Diagonal of the ZZ part and per-index up-spin count.
    std::vector<double> diag_h(dim), nup(dim);
    const double vbond = model.V / (2.0 * lattice.coordination);
    for (int a = 0; a < dim; ++a) {
        double d = 0.0;
        for (const auto& [i, j] : lattice.edges) d += vbond * z_of(a, i) * z_of(a, j);
        diag_h[a] = d;
        nup[a] = n - __builtin_popcount(static_cast<unsigned>(a));
    }

    // M = H rho; the commutator is -i (M - M^dagger) since rho is Hermitian.
    Eigen::MatrixXcd m(dim, dim);
    const double gh = 0.5 * model.g;
    for (int c = 0; c < dim; ++c) {
        const Cx* col = rho.col(c).data();
        Cx* mcol = m.col(c).data();
        for (int r = 0; r < dim; ++r) {
            Cx acc = diag_h[r] * col[r];
            for (int i = 0; i < n; ++i) acc += gh * col[r ^ (1 << i)];
            mcol[r] = acc;
        }
    }

    const Cx mi(0.0, -1.0);
    const double g2 = 0.5 * model.gamma;
    for (int c = 0; c < dim; ++c) {
        Cx* ocol = out.rho.col(c).data();
        const Cx* col = rho.col(c).data();
        const Cx* mcol = m.col(c).data();
        for (int r = 0; r < dim; ++r) {
            Cx acc = mi * (mcol[r] - std::conj(m(c, r)));
            acc -= g2 * (nup[r] + nup[c]) * col[r];
            ocol[r] = acc;
        }
        // Decay gain: population flows from (r|bit, c|bit) to (r, c).
        for (int i = 0; i < n; ++i) {
            const int bit = 1 << i;
            if (!(c & bit)) continue;
            const Cx* src = rho.col(c & ~bit).data();
            for (int r = 0; r < dim; ++r) {
                if (r & bit) ocol[r] += model.gamma * src[r & ~bit];
            }
        }
    }
}

DensityMatrix lindblad_rhs(const DensityMatrix& rho, const ModelParams& model,
                           const LatticeSpec& lattice) {
    DensityMatrix out;
    lindblad_rhs(rho, model, lattice, out);
    return out;
}

Vec3 oracle_site_bloch(const DensityMatrix& dm, int i) {
    const int dim = dm.dim();
    const int bit = 1 << i;
    double sx = 0.0, sy = 0.0, sz = 0.0;
    for (int a = 0; a < dim; ++a) {
        const Cx off = dm.rho(a, a ^ bit);
        sx += off.real();
        // <b|sy|a> = +i for a spin-up at i, -i for spin-down
        sy += (a & bit) ? off.imag() : -off.imag();
        sz += z_of(a, i) * dm.rho(a, a).real();
    }
    return {sx, sy, sz};
}

double oracle_two_site(const DensityMatrix& dm, int i, int j, int alpha, int beta) {
    if (i == j) throw std::invalid_argument("oracle_two_site: sites must differ");
    const int dim = dm.dim();
    auto weight = [&](int site, int letter, int r, int& cflip) -> Cx {
        const int bit = 1 << site;
        switch (letter) {
            case 0: cflip ^= bit; return 1.0;
            case 1: cflip ^= bit; return (r & bit) ? Cx(0, -1) : Cx(0, 1);
            default: return z_of(r, site);
        }
    };
    Cx total = 0.0;
    for (int r = 0; r < dim; ++r) {
        int c = r;
        Cx w = 1.0;
        w *= weight(i, alpha, r, c);
        w *= weight(j, beta, r, c);
        // sigma(c, r) nonzero only for this c; Tr(rho sigma) = sum rho(r,c) sigma(c,r)
        total += dm.rho(r, c) * w;
    }
    return total.real();
}

namespace {

ObservableRecord record_oracle(const DensityMatrix& dm, double t) {
    ObservableRecord rec;
    rec.t = t;
    rec.site.resize(dm.n_sites);
    Vec3 sum{};
    for (int i = 0; i < dm.n_sites; ++i) {
        rec.site[i] = oracle_site_bloch(dm, i);
        sum = sum + rec.site[i];
    }
    rec.avg = (1.0 / dm.n_sites) * sum;
    const int dim = dm.dim();
    rec.sum_c_drift = std::abs(dm.rho.trace().real() - 1.0) + std::abs(dm.rho.trace().imag());
    double herm = 0.0, mnorm = 0.0;
    for (int c = 0; c < dim; ++c) {
        for (int r = 0; r <= c; ++r) {
            herm = std::max(herm, std::abs(dm.rho(r, c) - std::conj(dm.rho(c, r))));
        }
    }
    for (const Vec3& v : rec.site) mnorm = std::max(mnorm, norm(v));
    rec.residual = herm;
    rec.max_m_norm = mnorm;
    return rec;
}

}  // namespace

Trajectory run_exact(const DensityMatrix& initial, const ModelParams& model,
                     const LatticeSpec& lattice, const IntegrationConfig& integration) {
    check_size(initial.n_sites);
    if (!(integration.t_final > 0.0) || !(integration.dt > 0.0)) {
        throw std::invalid_argument("run_exact: t_final and dt must be positive");
    }
    const int record_every = std::max(1, integration.record_every);
    const long n_steps = std::lround(integration.t_final / integration.dt);
    const double dt = integration.dt;

    Trajectory traj;
    traj.dt = dt;
    traj.n_sites = initial.n_sites;
    traj.records.push_back(record_oracle(initial, 0.0));

    DensityMatrix rho = initial;
    DensityMatrix k1, k2, k3, k4;
    DensityMatrix stage;
    stage.n_sites = rho.n_sites;

    for (long step = 1; step <= n_steps; ++step) {
        lindblad_rhs(rho, model, lattice, k1);
        stage.rho = rho.rho + (0.5 * dt) * k1.rho;
        lindblad_rhs(stage, model, lattice, k2);
        stage.rho = rho.rho + (0.5 * dt) * k2.rho;
        lindblad_rhs(stage, model, lattice, k3);
        stage.rho = rho.rho + dt * k3.rho;
        lindblad_rhs(stage, model, lattice, k4);
        rho.rho += (dt / 6.0) * (k1.rho + 2.0 * k2.rho + 2.0 * k3.rho + k4.rho);

        if (step % record_every == 0 || step == n_steps) {
            ObservableRecord rec = record_oracle(rho, step * dt);
            for (const Vec3& v : rec.site) {
                traj.worst_physicality = std::max(
                    {traj.worst_physicality, std::abs(v.x), std::abs(v.y), std::abs(v.z)});
            }
            traj.worst_sum_c_drift = std::max(traj.worst_sum_c_drift, rec.sum_c_drift);
            traj.worst_m_norm = std::max(traj.worst_m_norm, rec.max_m_norm);
            traj.worst_residual = std::max(traj.worst_residual, rec.residual);
            traj.records.push_back(std::move(rec));
        }
    }
    return traj;
}

double husimi_q(const DensityMatrix& dm, const PhasePoint& point) {
    if (static_cast<int>(point.n.size()) != dm.n_sites) {
        throw std::invalid_argument("husimi_q: phase point has wrong number of sites");
    }
    const int n = dm.n_sites;
    const int dim = dm.dim();

    std::vector<Cx> up(n), down(n);
    for (int i = 0; i < n; ++i) {
        const Vec3& v = point.n[i];
        const double ct = std::sqrt(std::max(0.0, 0.5 * (1.0 + v.z)));
        const double st = std::sqrt(std::max(0.0, 0.5 * (1.0 - v.z)));
        const double sin_theta = std::sqrt(std::max(0.0, 1.0 - v.z * v.z));
        Cx phase(1.0, 0.0);
        if (sin_theta > 1e-300) phase = Cx(v.x, v.y) / sin_theta;
        up[i] = ct;
        down[i] = phase * st;
    }

    Eigen::VectorXcd psi(dim);
    for (int a = 0; a < dim; ++a) {
        Cx amp = 1.0;
        for (int i = 0; i < n; ++i) amp *= (a >> i) & 1 ? down[i] : up[i];
        psi[a] = amp;
    }
    const Cx val = psi.dot(dm.rho * psi);  // conjugates the left argument
    return std::pow(1.0 / (2.0 * kPi), n) * val.real();
}

}  // namespace vmcs
