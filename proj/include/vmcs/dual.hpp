#pragma once

namespace vmcs {

/// First-order forward-mode dual number: value plus one directional
/// derivative. Sufficient for force-vector gradients.
struct Dual {
    double v{0.0};
    double d{0.0};

    Dual() = default;
    Dual(double value) : v(value) {}
    Dual(double value, double deriv) : v(value), d(deriv) {}

    friend Dual operator+(const Dual& a, const Dual& b) { return {a.v + b.v, a.d + b.d}; }
    friend Dual operator-(const Dual& a, const Dual& b) { return {a.v - b.v, a.d - b.d}; }
    friend Dual operator-(const Dual& a) { return {-a.v, -a.d}; }
    friend Dual operator*(const Dual& a, const Dual& b) {
        return {a.v * b.v, a.v * b.d + a.d * b.v};
    }
    friend Dual operator*(double s, const Dual& a) { return {s * a.v, s * a.d}; }
    friend Dual operator*(const Dual& a, double s) { return {a.v * s, a.d * s}; }
    Dual& operator+=(const Dual& b) { v += b.v; d += b.d; return *this; }
    Dual& operator*=(const Dual& b) { *this = *this * b; return *this; }
};

/// Second-order dual carrying one derivative slot for each of two
/// independent seed directions plus the mixed second derivative.
/// Multiplication implements the Leibniz rule through the cross term.
struct Dual2 {
    double v{0.0};
    double dl{0.0};
    double dr{0.0};
    double dlr{0.0};

    Dual2() = default;
    Dual2(double value) : v(value) {}
    Dual2(double value, double l, double r, double lr) : v(value), dl(l), dr(r), dlr(lr) {}

    friend Dual2 operator+(const Dual2& a, const Dual2& b) {
        return {a.v + b.v, a.dl + b.dl, a.dr + b.dr, a.dlr + b.dlr};
    }
    friend Dual2 operator-(const Dual2& a, const Dual2& b) {
        return {a.v - b.v, a.dl - b.dl, a.dr - b.dr, a.dlr - b.dlr};
    }
    friend Dual2 operator-(const Dual2& a) { return {-a.v, -a.dl, -a.dr, -a.dlr}; }
    friend Dual2 operator*(const Dual2& a, const Dual2& b) {
        return {a.v * b.v,
                a.v * b.dl + a.dl * b.v,
                a.v * b.dr + a.dr * b.v,
                a.v * b.dlr + a.dl * b.dr + a.dr * b.dl + a.dlr * b.v};
    }
    friend Dual2 operator*(double s, const Dual2& a) {
        return {s * a.v, s * a.dl, s * a.dr, s * a.dlr};
    }
    friend Dual2 operator*(const Dual2& a, double s) { return s * a; }
    Dual2& operator+=(const Dual2& b) {
        v += b.v; dl += b.dl; dr += b.dr; dlr += b.dlr;
        return *this;
    }
    Dual2& operator*=(const Dual2& b) { *this = *this * b; return *this; }
};

}  // namespace vmcs
