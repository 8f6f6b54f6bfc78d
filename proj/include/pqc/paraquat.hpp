#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>

#include "pqc/errors.hpp"

namespace pqc {

// Element of the split-quaternion algebra: p = t + r3*x + r1*y + r2*z with
// r1^2 = r2^2 = 1, r3^2 = -1, r1*r2 = -r2*r1 = r3.  The coefficient order
// (t, x, y, z) is bound to the basis (1, r3, r1, r2) so that
// norm2 = t^2 + x^2 - y^2 - z^2 reads off position by position.
struct ParaQuaternion {
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr ParaQuaternion() = default;
    constexpr ParaQuaternion(double t_, double x_, double y_, double z_)
        : t(t_), x(x_), y(y_), z(z_) {}

    static constexpr ParaQuaternion one() { return {1, 0, 0, 0}; }
    static constexpr ParaQuaternion r1() { return {0, 0, 1, 0}; }
    static constexpr ParaQuaternion r2() { return {0, 0, 0, 1}; }
    static constexpr ParaQuaternion r3() { return {0, 1, 0, 0}; }

    friend constexpr ParaQuaternion operator+(const ParaQuaternion& a, const ParaQuaternion& b) {
        return {a.t + b.t, a.x + b.x, a.y + b.y, a.z + b.z};
    }
    friend constexpr ParaQuaternion operator-(const ParaQuaternion& a, const ParaQuaternion& b) {
        return {a.t - b.t, a.x - b.x, a.y - b.y, a.z - b.z};
    }
    friend constexpr ParaQuaternion operator-(const ParaQuaternion& a) {
        return {-a.t, -a.x, -a.y, -a.z};
    }
    friend constexpr ParaQuaternion operator*(double s, const ParaQuaternion& a) {
        return {s * a.t, s * a.x, s * a.y, s * a.z};
    }
    friend constexpr ParaQuaternion operator*(const ParaQuaternion& a, double s) { return s * a; }
    friend constexpr ParaQuaternion operator/(const ParaQuaternion& a, double s) {
        return {a.t / s, a.x / s, a.y / s, a.z / s};
    }

    friend std::ostream& operator<<(std::ostream& os, const ParaQuaternion& p) {
        return os << "(" << p.t << " + r3*" << p.x << " + r1*" << p.y << " + r2*" << p.z << ")";
    }
};

// Product from the table r1*r2 = r3, r1*r3 = r2, r3*r2 = r1 (and the
// anti-commuted/ squared consequences).  Bilinear in both arguments.
constexpr ParaQuaternion mul(const ParaQuaternion& p, const ParaQuaternion& q) {
    // basis products, coefficients in (1, r3, r1, r2):
    //   r3*r3 = -1, r1*r1 = 1, r2*r2 = 1
    //   r3*r1 = -r2, r1*r3 =  r2
    //   r3*r2 =  r1, r2*r3 = -r1
    //   r1*r2 =  r3, r2*r1 = -r3
    return {
        p.t * q.t - p.x * q.x + p.y * q.y + p.z * q.z,
        p.t * q.x + p.x * q.t + p.y * q.z - p.z * q.y,
        p.t * q.y + p.y * q.t + p.x * q.z - p.z * q.x,
        p.t * q.z + p.z * q.t - p.x * q.y + p.y * q.x,
    };
}

constexpr ParaQuaternion operator*(const ParaQuaternion& p, const ParaQuaternion& q) {
    return mul(p, q);
}

constexpr ParaQuaternion conj(const ParaQuaternion& p) { return {p.t, -p.x, -p.y, -p.z}; }

// May be negative or zero; never square-rooted here.
constexpr double norm2(const ParaQuaternion& p) {
    return p.t * p.t + p.x * p.x - p.y * p.y - p.z * p.z;
}

constexpr double re(const ParaQuaternion& p) { return p.t; }

constexpr ParaQuaternion im(const ParaQuaternion& p) { return {0, p.x, p.y, p.z}; }

inline double max_abs_coeff(const ParaQuaternion& p) {
    return std::max(std::max(std::abs(p.t), std::abs(p.x)), std::max(std::abs(p.y), std::abs(p.z)));
}

// Scale-aware zero-divisor threshold.
inline double zero_norm_threshold(const ParaQuaternion& p) {
    return 1e-12 * (1.0 + max_abs_coeff(p));
}

// inv(p) = conj(p)/norm2(p).  Throws ZeroNorm on (near) zero divisors; Cayley
// callers map that to the excluded locus.
inline ParaQuaternion inv(const ParaQuaternion& p) {
    const double n = norm2(p);
    if (std::abs(n) <= zero_norm_threshold(p)) {
        throw ZeroNorm("inv: zero-norm split quaternion");
    }
    return conj(p) / n;
}

} // namespace pqc
