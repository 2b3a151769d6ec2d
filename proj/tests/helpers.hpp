#pragma once

#include <cstdint>
#include <random>

#include "vmcs/ansatz.hpp"
#include "vmcs/lattice.hpp"

namespace vmcs::testing {

inline double uniform_pm1(std::mt19937_64& rng) {
    return 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
}

inline Vec3 random_ball_vec(std::mt19937_64& rng, double radius = 1.0) {
    Vec3 v{uniform_pm1(rng), uniform_pm1(rng), uniform_pm1(rng)};
    const double len = norm(v);
    if (len > radius) v = (radius / len) * v;
    return v;
}

inline VariationalState random_state(int n_comp, int n_sites, std::uint64_t seed,
                                     bool normalized_c = true) {
    std::mt19937_64 rng(seed);
    VariationalState st;
    st.n_comp = n_comp;
    st.n_sites = n_sites;
    st.c.resize(n_comp);
    st.m.resize(static_cast<size_t>(n_comp) * n_sites);
    double sum = 0.0;
    for (double& ck : st.c) {
        ck = uniform_pm1(rng);
        sum += ck;
    }
    if (normalized_c) {
        for (double& ck : st.c) ck += (1.0 - sum) / n_comp;
    }
    for (Vec3& v : st.m) v = random_ball_vec(rng, 0.95);
    return st;
}

/// Expands a group-averaged mixture into an equivalent plain mixture
/// with n_comp * |G| components.
inline VariationalState expand_over_group(const VariationalState& st, const SymmetryGroup& g) {
    VariationalState out;
    out.n_sites = st.n_sites;
    out.n_comp = st.n_comp * g.size();
    out.c.reserve(out.n_comp);
    out.m.resize(static_cast<size_t>(out.n_comp) * out.n_sites);
    int kk = 0;
    for (const auto& tau : g.perms) {
        for (int k = 0; k < st.n_comp; ++k, ++kk) {
            out.c.push_back(st.c[k] / g.size());
            for (int i = 0; i < st.n_sites; ++i) {
                out.m[static_cast<size_t>(kk) * out.n_sites + i] = st.bloch(k, tau[i]);
            }
        }
    }
    return out;
}

}  // namespace vmcs::testing
