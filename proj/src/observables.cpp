#include "vmcs/observables.hpp"

#include <stdexcept>

namespace vmcs {

Vec3 site_magnetization(const VariationalState& state, const SymmetryGroup& group, int i) {
    if (i < 0 || i >= state.n_sites) {
        throw std::invalid_argument("site_magnetization: site index out of range");
    }
    Vec3 total{};
    for (const auto& tau : group.perms) {
        for (int k = 0; k < state.n_comp; ++k) {
            total = total + state.c[k] * state.bloch(k, tau[i]);
        }
    }
    return (1.0 / group.size()) * total;
}

double two_site_correlator(const VariationalState& state, const SymmetryGroup& group, int i,
                           int j, int alpha, int beta) {
    if (i == j) {
        throw std::invalid_argument(
            "two_site_correlator: same-site products are not defined for this symbol calculus");
    }
    if (i < 0 || i >= state.n_sites || j < 0 || j >= state.n_sites) {
        throw std::invalid_argument("two_site_correlator: site index out of range");
    }
    auto pick = [](const Vec3& v, int a) { return a == 0 ? v.x : a == 1 ? v.y : v.z; };
    double total = 0.0;
    for (const auto& tau : group.perms) {
        for (int k = 0; k < state.n_comp; ++k) {
            total += state.c[k] * pick(state.bloch(k, tau[i]), alpha) *
                     pick(state.bloch(k, tau[j]), beta);
        }
    }
    return total / group.size();
}

ObservableRecord record_observables(const VariationalState& state, const SymmetryGroup& group,
                                    double t) {
    ObservableRecord rec;
    rec.t = t;
    rec.site.resize(state.n_sites);
    Vec3 sum{};
    for (int i = 0; i < state.n_sites; ++i) {
        rec.site[i] = site_magnetization(state, group, i);
        sum = sum + rec.site[i];
    }
    rec.avg = (1.0 / state.n_sites) * sum;
    return rec;
}

}  // namespace vmcs
