#pragma once

#include <cmath>

namespace vmcs {

inline constexpr double kPi = 3.14159265358979323846;

/// Cartesian 3-vector templated on the scalar type so the same kernel
/// code runs on plain doubles and on forward-mode dual numbers.
template <class S>
struct Vec3T {
    S x{}, y{}, z{};

    friend Vec3T operator+(const Vec3T& a, const Vec3T& b) {
        return {a.x + b.x, a.y + b.y, a.z + b.z};
    }
    friend Vec3T operator-(const Vec3T& a, const Vec3T& b) {
        return {a.x - b.x, a.y - b.y, a.z - b.z};
    }
    template <class T>
    friend Vec3T operator*(const T& s, const Vec3T& v) {
        return {s * v.x, s * v.y, s * v.z};
    }
};

template <class S>
inline S dot(const Vec3T<S>& a, const Vec3T<S>& b) {
    return a.x * b.x + a.y * b.y + a.z * b.z;
}

template <class S>
inline Vec3T<S> cross(const Vec3T<S>& a, const Vec3T<S>& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

using Vec3 = Vec3T<double>;

inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

inline constexpr Vec3 unit_x() { return {1.0, 0.0, 0.0}; }
inline constexpr Vec3 unit_y() { return {0.0, 1.0, 0.0}; }
inline constexpr Vec3 unit_z() { return {0.0, 0.0, 1.0}; }

}  // namespace vmcs
