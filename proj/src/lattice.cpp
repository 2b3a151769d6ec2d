#include "vmcs/lattice.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

namespace vmcs {

namespace {

std::pair<int, int> sorted_edge(int a, int b) {
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

}  // namespace

LatticeSpec build_lattice(int lx, int ly, bool periodic) {
    if (lx < 1 || ly < 1) {
        throw std::invalid_argument("build_lattice: Lx and Ly must be positive");
    }
    if (lx * ly < 2) {
        throw std::invalid_argument("build_lattice: lattice needs at least two sites (no bonds otherwise)");
    }

    LatticeSpec lat;
    lat.lx = lx;
    lat.ly = ly;
    lat.periodic = periodic;

    std::set<std::pair<int, int>> edges;
    for (int y = 0; y < ly; ++y) {
        for (int x = 0; x < lx; ++x) {
            const int s = lat.site(x, y);
            if (x + 1 < lx) {
                edges.insert(sorted_edge(s, lat.site(x + 1, y)));
            } else if (periodic && lx > 1) {
                edges.insert(sorted_edge(s, lat.site(0, y)));
            }
            if (y + 1 < ly) {
                edges.insert(sorted_edge(s, lat.site(x, y + 1)));
            } else if (periodic && ly > 1) {
                edges.insert(sorted_edge(s, lat.site(x, 0)));
            }
        }
    }
    lat.edges.assign(edges.begin(), edges.end());

    std::vector<int> degree(lat.n_sites(), 0);
    for (const auto& [a, b] : lat.edges) {
        ++degree[a];
        ++degree[b];
    }
    lat.coordination = *std::max_element(degree.begin(), degree.end());
    return lat;
}

LatticeSpec single_site_lattice() {
    LatticeSpec lat;
    lat.lx = 1;
    lat.ly = 1;
    lat.periodic = false;
    lat.coordination = 1;
    return lat;
}

bool preserves_edges(const LatticeSpec& lattice, const std::vector<int>& p) {
    std::set<std::pair<int, int>> edges(lattice.edges.begin(), lattice.edges.end());
    for (const auto& [a, b] : lattice.edges) {
        if (!edges.count(sorted_edge(p[a], p[b]))) return false;
    }
    return true;
}

SymmetryGroup identity_group(int n_sites) {
    SymmetryGroup g;
    std::vector<int> id(n_sites);
    for (int i = 0; i < n_sites; ++i) id[i] = i;
    g.perms.push_back(std::move(id));
    return g;
}

SymmetryGroup translation_group(const LatticeSpec& lattice) {
    if (!lattice.periodic) {
        SymmetryGroup g = identity_group(lattice.n_sites());
        g.identity_fallback = true;
        return g;
    }
    SymmetryGroup g;
    const int lx = lattice.lx;
    const int ly = lattice.ly;
    for (int dy = 0; dy < ly; ++dy) {
        for (int dx = 0; dx < lx; ++dx) {
            std::vector<int> p(lattice.n_sites());
            for (int y = 0; y < ly; ++y) {
                for (int x = 0; x < lx; ++x) {
                    p[lattice.site(x, y)] = lattice.site((x + dx) % lx, (y + dy) % ly);
                }
            }
            g.perms.push_back(std::move(p));
        }
    }
    return g;
}

SymmetryGroup extended_symmetry_group(const LatticeSpec& lattice) {
    SymmetryGroup base = translation_group(lattice);
    const int n = lattice.n_sites();
    const int lx = lattice.lx;
    const int ly = lattice.ly;

    std::vector<std::vector<int>> gens;
    {
        std::vector<int> rx(n), ry(n);
        for (int y = 0; y < ly; ++y) {
            for (int x = 0; x < lx; ++x) {
                rx[lattice.site(x, y)] = lattice.site(lx - 1 - x, y);
                ry[lattice.site(x, y)] = lattice.site(x, ly - 1 - y);
            }
        }
        gens.push_back(rx);
        gens.push_back(ry);
        if (lx == ly) {
            std::vector<int> tr(n);
            for (int y = 0; y < ly; ++y) {
                for (int x = 0; x < lx; ++x) tr[lattice.site(x, y)] = lattice.site(y, x);
            }
            gens.push_back(tr);
        }
    }

    std::set<std::vector<int>> elems(base.perms.begin(), base.perms.end());
    for (const auto& gen : gens) {
        if (preserves_edges(lattice, gen)) elems.insert(gen);
    }

    // Close under composition; the element count is bounded by 8 * n.
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<std::vector<int>> current(elems.begin(), elems.end());
        for (const auto& a : current) {
            for (const auto& b : current) {
                std::vector<int> c(n);
                for (int i = 0; i < n; ++i) c[i] = a[b[i]];
                if (elems.insert(std::move(c)).second) grew = true;
            }
        }
    }

    SymmetryGroup g;
    g.identity_fallback = base.identity_fallback;
    g.perms.assign(elems.begin(), elems.end());
    return g;
}

}  // namespace vmcs
