#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "quadrature.hpp"
#include "vmcs/ansatz.hpp"

using namespace vmcs;

namespace {

PhasePoint point_of(std::initializer_list<Vec3> dirs) {
    return PhasePoint::from_directions(std::vector<Vec3>(dirs));
}

VariationalState random_state(int n_comp, int n_sites, std::uint64_t seed,
                              bool normalized_c = true) {
    std::mt19937_64 rng(seed);
    auto u = [&] { return 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0; };
    VariationalState st;
    st.n_comp = n_comp;
    st.n_sites = n_sites;
    st.c.resize(n_comp);
    st.m.resize(static_cast<size_t>(n_comp) * n_sites);
    double sum = 0.0;
    for (double& ck : st.c) {
        ck = u();
        sum += ck;
    }
    if (normalized_c) {
        // keep coefficients possibly negative but summing to one
        for (double& ck : st.c) ck += (1.0 - sum) / n_comp;
    }
    for (Vec3& v : st.m) {
        v = {u(), u(), u()};
        const double len = norm(v);
        if (len > 1.0) v = (0.95 / len) * v;
    }
    return st;
}

}  // namespace

TEST_CASE("unperturbed product state") {
    const LatticeSpec lat = build_lattice(3, 1, true);
    const VariationalState st = init_product_state(lat, 1, unit_x(), 0.0, 0);
    CHECK(st.c == std::vector<double>{1.0});
    for (const Vec3& v : st.m) {
        CHECK(v.x == 1.0);
        CHECK(v.y == 0.0);
        CHECK(v.z == 0.0);
    }
}

TEST_CASE("parameter counts match the benchmark configurations") {
    const LatticeSpec chain16 = build_lattice(16, 1, true);
    const VariationalState big = init_product_state(chain16, 16, unit_x(), 0.01, 7);
    CHECK(big.n_params() == 784);
    CHECK(big.sum_c() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(big.max_m_norm() <= 1.0 + 1e-15);

    const LatticeSpec square8 = build_lattice(8, 8, true);
    CHECK(init_product_state(square8, 2, unit_x(), 0.01, 1).n_params() == 386);
}

TEST_CASE("seed determinism is bit exact") {
    const LatticeSpec lat = build_lattice(4, 1, true);
    const VariationalState a = init_product_state(lat, 3, unit_x(), 0.05, 42);
    const VariationalState b = init_product_state(lat, 3, unit_x(), 0.05, 42);
    CHECK(a.c == b.c);
    for (size_t i = 0; i < a.m.size(); ++i) {
        CHECK(a.m[i].x == b.m[i].x);
        CHECK(a.m[i].y == b.m[i].y);
        CHECK(a.m[i].z == b.m[i].z);
    }
    const VariationalState c = init_product_state(lat, 3, unit_x(), 0.05, 43);
    CHECK(a.m[0].x != c.m[0].x);
}

TEST_CASE("init rejects bad arguments") {
    const LatticeSpec lat = build_lattice(2, 1, true);
    CHECK_THROWS_AS(init_product_state(lat, 0, unit_x(), 0.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(init_product_state(lat, 1, Vec3{2, 0, 0}, 0.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(init_product_state(lat, 1, unit_x(), 0.6, 0), std::invalid_argument);
}

TEST_CASE("ansatz point values") {
    VariationalState st;
    st.n_comp = 1;
    st.n_sites = 1;
    st.c = {1.0};
    st.m = {unit_z()};
    const SymmetryGroup id = identity_group(1);

    CHECK(evaluate_q(st, point_of({unit_z()}), id) ==
          doctest::Approx(1.0 / (2.0 * kPi)).epsilon(1e-14));

    st.m = {Vec3{0, 0, 0}};
    for (const Vec3& n : {unit_x(), unit_y(), unit_z(), Vec3{-1, 0, 0}}) {
        CHECK(evaluate_q(st, point_of({n}), id) ==
              doctest::Approx(1.0 / (4.0 * kPi)).epsilon(1e-14));
    }

    VariationalState mix;
    mix.n_comp = 2;
    mix.n_sites = 1;
    mix.c = {0.5, 0.5};
    mix.m = {unit_z(), Vec3{0, 0, -1}};
    CHECK(evaluate_q(mix, point_of({Vec3{0.6, 0.8, 0.0}}), id) ==
          doctest::Approx(1.0 / (4.0 * kPi)).epsilon(1e-14));
}

TEST_CASE("quadrature normalization equals the coefficient sum") {
    const SymmetryGroup id1 = identity_group(1);
    VariationalState st = random_state(3, 1, 11, false);
    const double integral = testing::integrate_spheres(
        1, 8, 8, [&](const std::vector<Vec3>& ns) {
            return evaluate_q(st, PhasePoint{ns}, id1);
        });
    CHECK(integral == doctest::Approx(st.sum_c()).epsilon(1e-12));

    const SymmetryGroup id2 = identity_group(2);
    VariationalState st2 = random_state(2, 2, 12, false);
    const double integral2 = testing::integrate_spheres(
        2, 8, 8, [&](const std::vector<Vec3>& ns) {
            return evaluate_q(st2, PhasePoint{ns}, id2);
        });
    CHECK(integral2 == doctest::Approx(st2.sum_c()).epsilon(1e-12));
}

TEST_CASE("symmetrization is idempotent on symmetric states") {
    const LatticeSpec lat = build_lattice(3, 1, true);
    const SymmetryGroup g = translation_group(lat);
    const SymmetryGroup id = identity_group(3);
    VariationalState st = random_state(2, 3, 5);
    // make every component translation invariant
    for (int k = 0; k < st.n_comp; ++k) {
        for (int i = 1; i < st.n_sites; ++i) st.bloch(k, i) = st.bloch(k, 0);
    }
    std::mt19937_64 rng(99);
    auto u = [&] { return 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0; };
    for (int rep = 0; rep < 20; ++rep) {
        Vec3 raw{u(), u(), u()};
        const double len = norm(raw);
        if (len < 1e-6) continue;
        std::vector<Vec3> ns(3, (1.0 / len) * raw);
        const double qs = evaluate_q(st, PhasePoint{ns}, g);
        const double qu = evaluate_q(st, PhasePoint{ns}, id);
        CHECK(qs == doctest::Approx(qu).epsilon(1e-14));
    }
}

TEST_CASE("renormalize") {
    VariationalState st;
    st.n_comp = 2;
    st.n_sites = 1;
    st.m = {unit_z(), unit_z()};

    st.c = {0.5, 0.6};
    const VariationalState out = renormalize(st);
    CHECK(out.c[0] == doctest::Approx(5.0 / 11.0).epsilon(1e-15));
    CHECK(out.c[1] == doctest::Approx(6.0 / 11.0).epsilon(1e-15));

    st.c = {2.0, -1.0};
    const VariationalState same = renormalize(st);
    CHECK(same.c[0] == 2.0);
    CHECK(same.c[1] == -1.0);

    st.c = {1e-13, -1e-13};
    CHECK_THROWS_AS(renormalize(st), std::domain_error);
}

TEST_CASE("phase point validation") {
    std::vector<Vec3> bad = {Vec3{0.5, 0, 0}};
    CHECK_THROWS_AS(PhasePoint::from_directions(bad), std::invalid_argument);
}

TEST_CASE("state snapshot round trip") {
    const LatticeSpec lat = build_lattice(2, 2, true);
    const VariationalState st = init_product_state(lat, 3, unit_x(), 0.1, 9);
    const std::string text = state_to_json(st, lat);
    LatticeSpec lat2;
    const VariationalState back = state_from_json(text, &lat2);
    CHECK(back.n_comp == st.n_comp);
    CHECK(back.n_sites == st.n_sites);
    CHECK(lat2.edges == lat.edges);
    for (size_t i = 0; i < st.m.size(); ++i) {
        CHECK(back.m[i].x == doctest::Approx(st.m[i].x).epsilon(1e-15));
        CHECK(back.m[i].z == doctest::Approx(st.m[i].z).epsilon(1e-15));
    }
}
