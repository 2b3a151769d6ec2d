#pragma once

#include <vector>

#include "vmcs/kernels.hpp"

namespace vmcs::detail {

/// Lightweight view of a mixture's parameters as arrays of an arbitrary
/// scalar type (double, or dual numbers carrying derivative seeds).
template <class S>
struct StateView {
    int n_comp = 0;
    int n_sites = 0;
    const S* c = nullptr;
    const Vec3T<S>* m = nullptr;  // k-major: [k * n_sites + i]

    const Vec3T<S>& bloch(int k, int i) const {
        return m[static_cast<size_t>(k) * n_sites + i];
    }
};

/// Overlap generating function <Q_L, Q_R>. Terms are reduced in an order
/// invariant under the exchange (L, R) -> (R, L): permutations are
/// paired with their inverses, component pairs (k,l) with (l,k), and
/// 2-cycle site factors are fused, so the result is exactly symmetric.
template <class S>
S overlap_generating_impl(const StateView<S>& L, const StateView<S>& R,
                          const GroupTables& gt) {
    const int ncl = L.n_comp;
    const int ncr = R.n_comp;
    const int ncmax = ncl > ncr ? ncl : ncr;
    const int ng = gt.size();

    std::vector<S> t_a(static_cast<size_t>(ncl) * ncr);
    std::vector<S> t_b;

    auto fill_terms = [&](int gi, std::vector<S>& t) {
        const auto& perm = gt.perms[gi];
        const auto& buckets = gt.buckets[gi];
        for (int k = 0; k < ncl; ++k) {
            for (int l = 0; l < ncr; ++l) {
                S prod = L.c[k] * R.c[l];
                for (const auto& [a, b] : buckets) {
                    S f = pair_overlap(L.bloch(k, a), R.bloch(l, perm[a]));
                    if (b >= 0) f = f * pair_overlap(L.bloch(k, b), R.bloch(l, perm[b]));
                    prod = prod * f;
                }
                t[static_cast<size_t>(k) * ncr + l] = prod;
            }
        }
    };
    auto valid = [&](int k, int l) { return k < ncl && l < ncr; };
    auto at = [&](const std::vector<S>& t, int k, int l) -> const S& {
        return t[static_cast<size_t>(k) * ncr + l];
    };

    S total{};
    for (int gi = 0; gi < ng; ++gi) {
        const int gj = gt.inverse_index[gi];
        if (gj < gi) continue;
        fill_terms(gi, t_a);
        const bool paired = gj != gi;
        if (paired) {
            t_b.resize(t_a.size());
            fill_terms(gj, t_b);
        }
        for (int a = 0; a < ncmax; ++a) {
            if (valid(a, a)) {
                S v = at(t_a, a, a);
                if (paired) v = v + at(t_b, a, a);
                total += v;
            }
            for (int b = a + 1; b < ncmax; ++b) {
                const bool ab = valid(a, b);
                const bool ba = valid(b, a);
                if (!ab && !ba) continue;
                if (!paired) {
                    if (ab && ba) {
                        total += at(t_a, a, b) + at(t_a, b, a);
                    } else {
                        total += ab ? at(t_a, a, b) : at(t_a, b, a);
                    }
                } else {
                    S o1{}, o2{};
                    if (ab && ba) {
                        o1 = at(t_a, a, b) + at(t_b, b, a);
                        o2 = at(t_a, b, a) + at(t_b, a, b);
                    } else if (ab) {
                        o1 = at(t_a, a, b);
                        o2 = at(t_b, a, b);
                    } else {
                        o1 = at(t_b, b, a);
                        o2 = at(t_a, b, a);
                    }
                    total += o1 + o2;
                }
            }
        }
    }
    return total * (1.0 / ng);
}

/// Liouvillian overlap generating function <Q_L, L_Q Q_R> in the
/// division-free leave-one-out form.
template <class S>
S liouville_generating_impl(const StateView<S>& L, const StateView<S>& R,
                            const ModelParams& model, const LatticeSpec& lattice,
                            const GroupTables& gt) {
    const int ns = L.n_sites;
    const int ng = gt.size();

    std::vector<S> ov(ns), prefix(ns + 1), suffix(ns + 1);

    S total{};
    for (int gi = 0; gi < ng; ++gi) {
        const auto& perm = gt.perms[gi];
        for (int k = 0; k < L.n_comp; ++k) {
            for (int l = 0; l < R.n_comp; ++l) {
                for (int i = 0; i < ns; ++i) {
                    ov[i] = pair_overlap(L.bloch(k, i), R.bloch(l, perm[i]));
                }
                prefix[0] = S{1.0};
                for (int i = 0; i < ns; ++i) prefix[i + 1] = prefix[i] * ov[i];
                suffix[ns] = S{1.0};
                for (int i = ns - 1; i >= 0; --i) suffix[i] = ov[i] * suffix[i + 1];

                S acc{};
                for (int i = 0; i < ns; ++i) {
                    const S k1 = one_local_kernel(L.bloch(k, i), R.bloch(l, perm[i]), model);
                    acc += k1 * (prefix[i] * suffix[i + 1]);
                }
                for (const auto& [a, b] : lattice.edges) {
                    const S k2 = two_local_kernel(L.bloch(k, a), L.bloch(k, b),
                                                  R.bloch(l, perm[a]), R.bloch(l, perm[b]),
                                                  model);
                    S mid{1.0};
                    for (int mu = a + 1; mu < b; ++mu) mid = mid * ov[mu];
                    acc += k2 * (prefix[a] * mid * suffix[b + 1]);
                }
                total += (L.c[k] * R.c[l]) * acc;
            }
        }
    }
    return total * (1.0 / ng);
}

}  // namespace vmcs::detail
