#include "vmcs/kernels.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "vmcs/kernels_detail.hpp"

namespace vmcs {

ModelParams ModelParams::from_couplings(double g, double V, double gamma, int coordination,
                                        std::optional<double> v_eff_override) {
    if (gamma < 0.0) throw std::invalid_argument("ModelParams: gamma must be nonnegative");
    if (coordination < 1) throw std::invalid_argument("ModelParams: coordination must be positive");
    ModelParams p;
    p.g = g;
    p.V = V;
    p.gamma = gamma;
    p.v_eff = v_eff_override ? *v_eff_override : 2.0 * V / coordination;
    return p;
}

GroupTables GroupTables::build(const SymmetryGroup& group) {
    GroupTables gt;
    gt.perms = group.perms;
    const int ng = gt.size();
    const int ns = ng > 0 ? static_cast<int>(gt.perms[0].size()) : 0;

    std::map<std::vector<int>, int> index_of;
    for (int g = 0; g < ng; ++g) index_of[gt.perms[g]] = g;

    gt.inverse_index.resize(ng);
    for (int g = 0; g < ng; ++g) {
        std::vector<int> inv(ns);
        for (int i = 0; i < ns; ++i) inv[gt.perms[g][i]] = i;
        auto it = index_of.find(inv);
        if (it == index_of.end()) {
            throw std::invalid_argument("GroupTables: permutation set is not closed under inverse");
        }
        gt.inverse_index[g] = it->second;
    }

    gt.buckets.resize(ng);
    for (int g = 0; g < ng; ++g) {
        const auto& p = gt.perms[g];
        // One bucket per factor, except 2-cycles which fuse into a single
        // bucket; sort by the unordered site pair the factor couples.
        struct Entry {
            int key_a, key_b, a, b;
        };
        std::vector<Entry> entries;
        std::vector<char> consumed(ns, 0);
        for (int i = 0; i < ns; ++i) {
            if (consumed[i]) continue;
            const int pi = p[i];
            if (pi != i && p[pi] == i) {
                consumed[i] = consumed[pi] = 1;
                entries.push_back({std::min(i, pi), std::max(i, pi), std::min(i, pi),
                                   std::max(i, pi)});
            } else {
                consumed[i] = 1;
                entries.push_back({std::min(i, pi), std::max(i, pi), i, -1});
            }
        }
        std::sort(entries.begin(), entries.end(), [](const Entry& x, const Entry& y) {
            return std::tie(x.key_a, x.key_b) < std::tie(y.key_a, y.key_b);
        });
        auto& out = gt.buckets[g];
        out.reserve(entries.size());
        for (const auto& e : entries) out.emplace_back(e.a, e.b);
    }
    return gt;
}

namespace {

detail::StateView<double> view_of(const VariationalState& s) {
    return {s.n_comp, s.n_sites, s.c.data(), s.m.data()};
}

void check_sites(const VariationalState& a, const VariationalState& b) {
    if (a.n_sites != b.n_sites) {
        throw std::invalid_argument("generating function: states have mismatched site counts");
    }
}

}  // namespace

double overlap_generating(const VariationalState& state_l, const VariationalState& state_r,
                          const SymmetryGroup& group) {
    check_sites(state_l, state_r);
    const GroupTables gt = GroupTables::build(group);
    return detail::overlap_generating_impl(view_of(state_l), view_of(state_r), gt);
}

double liouville_generating(const VariationalState& state_l, const VariationalState& state_r,
                            const ModelParams& model, const LatticeSpec& lattice,
                            const SymmetryGroup& group) {
    check_sites(state_l, state_r);
    if (state_l.n_sites != lattice.n_sites()) {
        throw std::invalid_argument("liouville_generating: state does not match lattice");
    }
    const GroupTables gt = GroupTables::build(group);
    return detail::liouville_generating_impl(view_of(state_l), view_of(state_r), model, lattice,
                                             gt);
}

}  // namespace vmcs
