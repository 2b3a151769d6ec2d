#include "vmcs/pauli_oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace vmcs {

namespace {

using Cx = std::complex<double>;

struct MulEntry {
    int letter;
    Cx phase;
};

// sigma^a sigma^b = table[a][b].phase * sigma^{table[a][b].letter}
const MulEntry kMul[4][4] = {
    {{0, 1.0}, {1, 1.0}, {2, 1.0}, {3, 1.0}},
    {{1, 1.0}, {0, 1.0}, {3, Cx(0, 1)}, {2, Cx(0, -1)}},
    {{2, 1.0}, {3, Cx(0, -1)}, {0, 1.0}, {1, Cx(0, 1)}},
    {{3, 1.0}, {2, Cx(0, 1)}, {1, Cx(0, -1)}, {0, 1.0}},
};

inline int letter_at(size_t string_index, int site) {
    return static_cast<int>((string_index >> (2 * site)) & 3u);
}

inline size_t with_letter(size_t string_index, int site, int letter) {
    const size_t mask = ~(size_t(3) << (2 * site));
    return (string_index & mask) | (size_t(letter) << (2 * site));
}

}  // namespace

PauliPoly PauliPoly::zero(int n_sites) {
    PauliPoly p;
    p.n_sites = n_sites;
    p.coef.assign(size_t(1) << (2 * n_sites), Cx(0.0));
    return p;
}

PauliPoly PauliPoly::from_bloch_product(double c, const std::vector<Vec3>& m) {
    const int n = static_cast<int>(m.size());
    PauliPoly p = zero(n);
    p.coef[0] = c;
    // Expand site by site: (1 + m.sigma)/2 contributes weights
    // {1/2, mx/2, my/2, mz/2} on letters {I, x, y, z}.
    size_t active = 1;
    for (int site = 0; site < n; ++site) {
        const double w[4] = {0.5, 0.5 * m[site].x, 0.5 * m[site].y, 0.5 * m[site].z};
        for (size_t s = active; s-- > 0;) {
            const Cx base = p.coef[s];
            if (base == Cx(0.0)) continue;
            p.coef[s] = base * w[0];
            for (int a = 1; a < 4; ++a) {
                p.coef[with_letter(s, site, a)] = base * w[a];
            }
        }
        active <<= 2;
    }
    return p;
}

PauliPoly PauliPoly::from_state(const VariationalState& state, const SymmetryGroup& group) {
    PauliPoly total = zero(state.n_sites);
    std::vector<Vec3> m(state.n_sites);
    const double inv_g = 1.0 / group.size();
    for (const auto& tau : group.perms) {
        for (int k = 0; k < state.n_comp; ++k) {
            for (int i = 0; i < state.n_sites; ++i) m[i] = state.bloch(k, tau[i]);
            total += from_bloch_product(state.c[k] * inv_g, m);
        }
    }
    return total;
}

PauliPoly& PauliPoly::operator+=(const PauliPoly& other) {
    for (size_t s = 0; s < coef.size(); ++s) coef[s] += other.coef[s];
    return *this;
}

PauliPoly PauliPoly::mul_site_left(int site, int letter, Cx coeff) const {
    PauliPoly out = zero(n_sites);
    for (size_t s = 0; s < coef.size(); ++s) {
        if (coef[s] == Cx(0.0)) continue;
        const MulEntry& e = kMul[letter][letter_at(s, site)];
        out.coef[with_letter(s, site, e.letter)] += coeff * e.phase * coef[s];
    }
    return out;
}

PauliPoly PauliPoly::mul_site_right(int site, int letter, Cx coeff) const {
    PauliPoly out = zero(n_sites);
    for (size_t s = 0; s < coef.size(); ++s) {
        if (coef[s] == Cx(0.0)) continue;
        const MulEntry& e = kMul[letter_at(s, site)][letter];
        out.coef[with_letter(s, site, e.letter)] += coeff * e.phase * coef[s];
    }
    return out;
}

double PauliPoly::q_symbol(const PhasePoint& point) const {
    Cx total = 0.0;
    for (size_t s = 0; s < coef.size(); ++s) {
        if (coef[s] == Cx(0.0)) continue;
        double prod = 1.0;
        for (int i = 0; i < n_sites; ++i) {
            switch (letter_at(s, i)) {
                case 1: prod *= point.n[i].x; break;
                case 2: prod *= point.n[i].y; break;
                case 3: prod *= point.n[i].z; break;
                default: break;
            }
        }
        total += coef[s] * prod;
    }
    const double norm = std::pow(1.0 / (2.0 * kPi), n_sites);
    return total.real() * norm;
}

PauliPoly lindblad_apply_pauli(const PauliPoly& a, const ModelParams& model,
                               const LatticeSpec& lattice) {
    const int n = a.n_sites;
    PauliPoly out = PauliPoly::zero(n);
    const Cx img(0.0, 1.0);

    // -i [H, a] with H = sum_i (g/2) x_i + sum_<ij> (V / 2 chi) z_i z_j.
    for (int i = 0; i < n; ++i) {
        const Cx c = -img * (model.g / 2.0);
        out += a.mul_site_left(i, 1, c);
        out += a.mul_site_right(i, 1, -c);
    }
    const double vbond = model.V / (2.0 * lattice.coordination);
    for (const auto& [i, j] : lattice.edges) {
        const Cx c = -img * vbond;
        out += a.mul_site_left(i, 3, c).mul_site_left(j, 3, 1.0);
        out += a.mul_site_right(i, 3, -c).mul_site_right(j, 3, 1.0);
    }

    // gamma sum_i ( s- a s+ - 1/2 {s+ s-, a} ), with s+- = (x +- i y)/2
    // and s+ s- = (1 + z)/2.
    for (int i = 0; i < n; ++i) {
        const double q = model.gamma / 4.0;
        // s- a s+ = (x - iy) a (x + iy) / 4
        out += a.mul_site_left(i, 1, q).mul_site_right(i, 1, 1.0);
        out += a.mul_site_left(i, 1, q).mul_site_right(i, 2, img);
        out += a.mul_site_left(i, 2, -img * q).mul_site_right(i, 1, 1.0);
        out += a.mul_site_left(i, 2, q).mul_site_right(i, 2, 1.0);
        // -1/2 {(1+z)/2, a} = -a/2 - (z a + a z)/4
        out += a.mul_site_left(i, 0, -model.gamma / 2.0);
        out += a.mul_site_left(i, 3, -q);
        out += a.mul_site_right(i, 3, -q);
    }
    return out;
}

double moment_pair(const PauliPoly& a, const PauliPoly& b) {
    // Per site: identity letters pair to 1, equal letters to 1/3,
    // anything else integrates to zero.
    Cx total = 0.0;
    for (size_t s = 0; s < a.coef.size(); ++s) {
        if (a.coef[s] == Cx(0.0) || b.coef[s] == Cx(0.0)) continue;
        double weight = 1.0;
        for (int i = 0; i < a.n_sites; ++i) {
            if (letter_at(s, i) != 0) weight /= 3.0;
        }
        total += a.coef[s] * b.coef[s] * weight;
    }
    const double norm = std::pow(1.0 / kPi, a.n_sites);
    return total.real() * norm;
}

double pauli_oracle_kernel(const VariationalState& state_l, const VariationalState& state_r,
                           const ModelParams& model, const LatticeSpec& lattice,
                           const SymmetryGroup& group, bool apply_liouville) {
    if (state_l.n_sites > 4) {
        throw std::invalid_argument("pauli_oracle_kernel: limited to four sites");
    }
    if (state_l.n_sites != state_r.n_sites || state_l.n_sites != lattice.n_sites()) {
        throw std::invalid_argument("pauli_oracle_kernel: mismatched site counts");
    }
    const PauliPoly rho_l = PauliPoly::from_state(state_l, group);
    PauliPoly rho_r = PauliPoly::from_state(state_r, group);
    if (apply_liouville) rho_r = lindblad_apply_pauli(rho_r, model, lattice);
    return moment_pair(rho_l, rho_r);
}

}  // namespace vmcs
