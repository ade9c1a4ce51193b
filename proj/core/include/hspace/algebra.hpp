#pragma once

#include <array>
#include <cmath>

#include "hspace/errors.hpp"
#include "hspace/jet.hpp"

namespace hspace {

inline constexpr double kQuaternionSingular = 1e-14;

/// Real quaternion q = a + b i + c j + d k, generic over the scalar type so
/// the same formulas run on plain doubles and on jets.
template <class T>
struct QuaternionT {
    T a{}, b{}, c{}, d{};

    friend QuaternionT operator+(const QuaternionT& p, const QuaternionT& q) {
        return {p.a + q.a, p.b + q.b, p.c + q.c, p.d + q.d};
    }
    friend QuaternionT operator-(const QuaternionT& p, const QuaternionT& q) {
        return {p.a - q.a, p.b - q.b, p.c - q.c, p.d - q.d};
    }
    QuaternionT operator-() const { return {-a, -b, -c, -d}; }

    friend QuaternionT operator*(const QuaternionT& p, const QuaternionT& q) {
        return {p.a * q.a - p.b * q.b - p.c * q.c - p.d * q.d,
                p.a * q.b + p.b * q.a + p.c * q.d - p.d * q.c,
                p.a * q.c - p.b * q.d + p.c * q.a + p.d * q.b,
                p.a * q.d + p.b * q.c - p.c * q.b + p.d * q.a};
    }

    QuaternionT conjugate() const { return {a, -b, -c, -d}; }
    T norm_sq() const { return a * a + b * b + c * c + d * d; }
};

using Quaternion = QuaternionT<double>;

inline Quaternion quat_mul(const Quaternion& p, const Quaternion& q) { return p * q; }

inline double quat_norm(const Quaternion& q) { return std::sqrt(q.norm_sq()); }

/// Inverse q^{-1} = conj(q)/|q|^2. Throws NearZeroQuaternion below the
/// singular threshold.
Quaternion quat_inv(const Quaternion& q);

/// (z1, z2) -> z1 + z2 j, the standard identification C^2 = H.
Quaternion embed_complex_pair(Complex z1, Complex z2);

inline Complex quat_complex_part(const Quaternion& q) { return {q.a, q.b}; }
inline Complex quat_j_part(const Quaternion& q) { return {q.c, q.d}; }

/// Point of CP^3 in homogeneous coordinates.
struct ProjectivePoint {
    std::array<Complex, 4> z{};

    /// Scale-normalizes: divides by the entry of largest modulus, so that
    /// entry becomes 1. Deterministic and continuous near chart boundaries.
    ProjectivePoint normalized() const;
    double max_modulus() const;
};

/// Distance between normalized representatives; zero iff projectively equal.
double projective_distance(const ProjectivePoint& p, const ProjectivePoint& q);

}  // namespace hspace
