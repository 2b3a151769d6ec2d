#include "vmcs/ansatz.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include <json.hpp>

namespace vmcs {

double VariationalState::sum_c() const {
    double s = 0.0;
    for (double ck : c) s += ck;
    return s;
}

double VariationalState::max_m_norm() const {
    double worst = 0.0;
    for (const Vec3& v : m) worst = std::max(worst, norm(v));
    return worst;
}

PhasePoint PhasePoint::from_directions(std::vector<Vec3> dirs) {
    for (const Vec3& v : dirs) {
        if (std::abs(norm(v) - 1.0) > 1e-12) {
            throw std::invalid_argument("PhasePoint: direction is not unit length");
        }
    }
    return PhasePoint{std::move(dirs)};
}

namespace {

// mt19937_64 output mapped to [0, 1) explicitly, so streams are
// bit-identical across standard library implementations.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

VariationalState init_product_state(const LatticeSpec& lattice, int n_comp,
                                    const Vec3& direction, double perturbation,
                                    std::uint64_t seed) {
    if (n_comp < 1) throw std::invalid_argument("init_product_state: N_c must be >= 1");
    if (std::abs(norm(direction) - 1.0) > 1e-12) {
        throw std::invalid_argument("init_product_state: direction must be unit length");
    }
    if (perturbation < 0.0 || perturbation >= 0.5) {
        throw std::invalid_argument("init_product_state: perturbation must lie in [0, 0.5)");
    }

    const int n_sites = lattice.n_sites();
    VariationalState st;
    st.n_comp = n_comp;
    st.n_sites = n_sites;
    st.c.assign(n_comp, 1.0 / n_comp);
    st.m.resize(static_cast<size_t>(n_comp) * n_sites);

    std::mt19937_64 rng(seed);
    for (int k = 0; k < n_comp; ++k) {
        for (int i = 0; i < n_sites; ++i) {
            Vec3 v = direction;
            v.x += perturbation * (2.0 * uniform01(rng) - 1.0);
            v.y += perturbation * (2.0 * uniform01(rng) - 1.0);
            v.z += perturbation * (2.0 * uniform01(rng) - 1.0);
            const double len = norm(v);
            if (len > 1.0) v = (1.0 / len) * v;
            st.bloch(k, i) = v;
        }
    }
    return st;
}

double evaluate_q(const VariationalState& state, const PhasePoint& point,
                  const SymmetryGroup& group) {
    if (static_cast<int>(point.n.size()) != state.n_sites) {
        throw std::invalid_argument("evaluate_q: phase point has wrong number of sites");
    }
    constexpr double kInv4Pi = 1.0 / (4.0 * M_PI);
    double total = 0.0;
    for (const auto& tau : group.perms) {
        for (int k = 0; k < state.n_comp; ++k) {
            double prod = state.c[k];
            for (int i = 0; i < state.n_sites; ++i) {
                prod *= kInv4Pi * (1.0 + dot(point.n[i], state.bloch(k, tau[i])));
            }
            total += prod;
        }
    }
    return total / group.size();
}

VariationalState renormalize(const VariationalState& state) {
    const double s = state.sum_c();
    if (std::abs(s) < 1e-12) {
        throw std::domain_error("renormalize: degenerate state, sum of coefficients is ~0");
    }
    VariationalState out = state;
    for (double& ck : out.c) ck /= s;
    return out;
}

std::string state_to_json(const VariationalState& state, const LatticeSpec& lattice) {
    nlohmann::json j;
    j["c"] = state.c;
    auto& m = j["m"] = nlohmann::json::array();
    for (int k = 0; k < state.n_comp; ++k) {
        nlohmann::json comp = nlohmann::json::array();
        for (int i = 0; i < state.n_sites; ++i) {
            const Vec3& v = state.bloch(k, i);
            comp.push_back({v.x, v.y, v.z});
        }
        m.push_back(std::move(comp));
    }
    j["lattice"] = {{"Lx", lattice.lx}, {"Ly", lattice.ly}, {"periodic", lattice.periodic}};
    return j.dump(2);
}

VariationalState state_from_json(const std::string& text, LatticeSpec* lattice_out) {
    const nlohmann::json j = nlohmann::json::parse(text);
    VariationalState st;
    st.c = j.at("c").get<std::vector<double>>();
    st.n_comp = static_cast<int>(st.c.size());
    const auto& m = j.at("m");
    if (m.size() != st.c.size()) {
        throw std::invalid_argument("state_from_json: c and m disagree on component count");
    }
    st.n_sites = m.empty() ? 0 : static_cast<int>(m[0].size());
    st.m.resize(static_cast<size_t>(st.n_comp) * st.n_sites);
    for (int k = 0; k < st.n_comp; ++k) {
        if (static_cast<int>(m[k].size()) != st.n_sites) {
            throw std::invalid_argument("state_from_json: ragged m array");
        }
        for (int i = 0; i < st.n_sites; ++i) {
            const auto& v = m[k][i];
            st.bloch(k, i) = Vec3{v.at(0).get<double>(), v.at(1).get<double>(),
                                  v.at(2).get<double>()};
        }
    }
    if (lattice_out && j.contains("lattice")) {
        const auto& jl = j["lattice"];
        const int lx = jl.at("Lx").get<int>();
        const int ly = jl.at("Ly").get<int>();
        const bool per = jl.at("periodic").get<bool>();
        *lattice_out = (lx * ly >= 2) ? build_lattice(lx, ly, per) : single_site_lattice();
    }
    return st;
}

}  // namespace vmcs
