#pragma once

#include <utility>
#include <vector>

namespace vmcs {

/// Site graph of an Lx x Ly lattice. Sites are indexed row-major,
/// site = y*Lx + x. Edges are stored as sorted pairs (i, j) with i < j;
/// wrap-around duplicates on width-2 periodic dimensions are collapsed
/// to a single edge.
struct LatticeSpec {
    int lx = 0;
    int ly = 0;
    bool periodic = false;
    std::vector<std::pair<int, int>> edges;
    int coordination = 1;

    int n_sites() const { return lx * ly; }
    int site(int x, int y) const { return y * lx + x; }
};

/// Group of site permutations that map the edge set onto itself.
/// Each permutation is stored as a full index map p, site i -> p[i].
struct SymmetryGroup {
    std::vector<std::vector<int>> perms;
    /// Set when a translation group was requested for a non-periodic
    /// lattice and only the identity could be returned.
    bool identity_fallback = false;

    int size() const { return static_cast<int>(perms.size()); }
};

/// Nearest-neighbour graph of an Lx x Ly lattice, open or periodic.
/// Throws std::invalid_argument for lattices with fewer than two sites.
LatticeSpec build_lattice(int lx, int ly, bool periodic);

/// Single site with no bonds. Not reachable through build_lattice, which
/// requires at least one bond; used for one-spin runs.
LatticeSpec single_site_lattice();

/// All torus translations of a periodic lattice. For non-periodic
/// lattices returns the identity-only group with identity_fallback set.
SymmetryGroup translation_group(const LatticeSpec& lattice);

/// Identity-only group (the unsymmetrized ansatz).
SymmetryGroup identity_group(int n_sites);

/// Translations extended by the edge-preserving point-group generators
/// (axis reflections, and the diagonal swap on square lattices), closed
/// under composition.
SymmetryGroup extended_symmetry_group(const LatticeSpec& lattice);

/// True if p maps every edge of the lattice onto an edge.
bool preserves_edges(const LatticeSpec& lattice, const std::vector<int>& p);

}  // namespace vmcs
