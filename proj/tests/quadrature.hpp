#pragma once

// Test-only quadrature oracle: product Gauss-Legendre x midpoint rule on
// one sphere per site. The integrands are low-degree polynomials in the
// Cartesian components, so modest orders are exact to machine precision.
// Kept independent of the closed-form kernels it validates.

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "vmcs/vec3.hpp"

namespace vmcs::testing {

inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double xi = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j - 1.0) * xi * p1 - (j - 1.0) * p2) / j;
            }
            dp = n * (xi * p0 - p1) / (xi * xi - 1.0);
            const double step = p0 / dp;
            xi -= step;
            if (std::abs(step) < 1e-15) break;
        }
        x[i] = -xi;
        x[n - 1 - i] = xi;
        w[i] = w[n - 1 - i] = 2.0 / ((1.0 - xi * xi) * dp * dp);
    }
}

struct SpherePoint {
    Vec3 n;
    double weight;  // includes the full dOmega measure (sums to 4 pi)
};

inline std::vector<SpherePoint> sphere_rule(int n_theta, int n_phi) {
    std::vector<double> x, w;
    gauss_legendre(n_theta, x, w);
    std::vector<SpherePoint> pts;
    pts.reserve(static_cast<size_t>(n_theta) * n_phi);
    for (int it = 0; it < n_theta; ++it) {
        const double ct = x[it];
        const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
        for (int ip = 0; ip < n_phi; ++ip) {
            const double phi = 2.0 * kPi * (ip + 0.5) / n_phi;
            pts.push_back({{st * std::cos(phi), st * std::sin(phi), ct},
                           w[it] * 2.0 * kPi / n_phi});
        }
    }
    return pts;
}

/// Integral over the product of n_sites spheres of f(points).
inline double integrate_spheres(int n_sites, int n_theta, int n_phi,
                                const std::function<double(const std::vector<Vec3>&)>& f) {
    const auto rule = sphere_rule(n_theta, n_phi);
    const size_t p = rule.size();
    std::vector<Vec3> ns(n_sites);
    std::vector<size_t> idx(n_sites, 0);
    double total = 0.0;
    while (true) {
        double weight = 1.0;
        for (int s = 0; s < n_sites; ++s) {
            ns[s] = rule[idx[s]].n;
            weight *= rule[idx[s]].weight;
        }
        total += weight * f(ns);
        int s = 0;
        for (; s < n_sites; ++s) {
            if (++idx[s] < p) break;
            idx[s] = 0;
        }
        if (s == n_sites) break;
    }
    return total;
}

}  // namespace vmcs::testing
