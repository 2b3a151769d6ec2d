#include <doctest.h>

#include <algorithm>
#include <set>

#include "vmcs/lattice.hpp"

using namespace vmcs;

namespace {

std::vector<int> degrees(const LatticeSpec& lat) {
    std::vector<int> deg(lat.n_sites(), 0);
    for (const auto& [a, b] : lat.edges) {
        ++deg[a];
        ++deg[b];
    }
    return deg;
}

void check_group_axioms(const SymmetryGroup& g, const LatticeSpec& lat) {
    const int n = lat.n_sites();
    std::set<std::vector<int>> members(g.perms.begin(), g.perms.end());
    // identity present
    std::vector<int> id(n);
    for (int i = 0; i < n; ++i) id[i] = i;
    CHECK(members.count(id) == 1);
    // closure and inverses, exhaustively
    for (const auto& a : g.perms) {
        std::vector<int> inv(n);
        for (int i = 0; i < n; ++i) inv[a[i]] = i;
        CHECK(members.count(inv) == 1);
        for (const auto& b : g.perms) {
            std::vector<int> ab(n);
            for (int i = 0; i < n; ++i) ab[i] = a[b[i]];
            CHECK(members.count(ab) == 1);
        }
    }
    for (const auto& p : g.perms) CHECK(preserves_edges(lat, p));
}

}  // namespace

TEST_CASE("ring of three sites") {
    const LatticeSpec lat = build_lattice(3, 1, true);
    CHECK(lat.n_sites() == 3);
    const std::vector<std::pair<int, int>> expect = {{0, 1}, {0, 2}, {1, 2}};
    CHECK(lat.edges == expect);
    CHECK(lat.coordination == 2);
}

TEST_CASE("3x3 torus bond count") {
    const LatticeSpec lat = build_lattice(3, 3, true);
    CHECK(lat.n_sites() == 9);
    CHECK(lat.edges.size() == 18);
    for (int d : degrees(lat)) CHECK(d == 4);
    CHECK(lat.coordination == 4);
}

TEST_CASE("16-site chain") {
    const LatticeSpec lat = build_lattice(16, 1, true);
    CHECK(lat.n_sites() == 16);
    CHECK(lat.edges.size() == 16);
    CHECK(lat.coordination == 2);
}

TEST_CASE("width-2 wrap bonds collapse") {
    const LatticeSpec lat = build_lattice(2, 2, true);
    const std::vector<std::pair<int, int>> expect = {{0, 1}, {0, 2}, {1, 3}, {2, 3}};
    CHECK(lat.edges == expect);
    CHECK(lat.coordination == 2);

    const LatticeSpec chain2 = build_lattice(2, 1, true);
    CHECK(chain2.edges.size() == 1);
    CHECK(chain2.coordination == 1);
}

TEST_CASE("open boundaries and degenerate sizes") {
    const LatticeSpec open_chain = build_lattice(4, 1, false);
    CHECK(open_chain.edges.size() == 3);
    CHECK(open_chain.coordination == 2);
    CHECK_THROWS_AS(build_lattice(1, 1, true), std::invalid_argument);
    CHECK_THROWS_AS(build_lattice(0, 3, true), std::invalid_argument);
}

TEST_CASE("translation group of a ring") {
    const LatticeSpec lat = build_lattice(4, 1, true);
    const SymmetryGroup g = translation_group(lat);
    CHECK(g.size() == 4);
    CHECK(!g.identity_fallback);
    check_group_axioms(g, lat);
}

TEST_CASE("translation group of tori") {
    for (auto [lx, ly] : {std::pair{3, 3}, std::pair{2, 2}, std::pair{4, 2}, std::pair{4, 4}}) {
        const LatticeSpec lat = build_lattice(lx, ly, true);
        const SymmetryGroup g = translation_group(lat);
        CHECK(g.size() == lx * ly);
        check_group_axioms(g, lat);
    }
}

TEST_CASE("non-periodic lattice falls back to the identity group") {
    const LatticeSpec lat = build_lattice(3, 1, false);
    const SymmetryGroup g = translation_group(lat);
    CHECK(g.size() == 1);
    CHECK(g.identity_fallback);
}

TEST_CASE("extended group adds point-group elements") {
    const LatticeSpec lat = build_lattice(3, 3, true);
    const SymmetryGroup g = extended_symmetry_group(lat);
    CHECK(g.size() == 72);  // translations times the square point group
    check_group_axioms(g, lat);

    // On a width-2 torus the y-reflection coincides with a translation,
    // so only the x-reflection enlarges the group.
    const LatticeSpec rect = build_lattice(4, 2, true);
    const SymmetryGroup gr = extended_symmetry_group(rect);
    CHECK(gr.size() == 16);
    check_group_axioms(gr, rect);
}
