#include "hspace/algebra.hpp"

#include <algorithm>

namespace hspace {

Quaternion quat_inv(const Quaternion& q) {
    const double n2 = q.norm_sq();
    if (std::sqrt(n2) <= kQuaternionSingular)
        throw NearZeroQuaternion("quaternion inverse of near-zero element");
    const Quaternion c = q.conjugate();
    return {c.a / n2, c.b / n2, c.c / n2, c.d / n2};
}

Quaternion embed_complex_pair(Complex z1, Complex z2) {
    return {z1.real(), z1.imag(), z2.real(), z2.imag()};
}

double ProjectivePoint::max_modulus() const {
    double m = 0.0;
    for (const auto& zi : z) m = std::max(m, std::abs(zi));
    return m;
}

ProjectivePoint ProjectivePoint::normalized() const {
    int pivot = 0;
    double best = -1.0;
    for (int i = 0; i < 4; ++i) {
        const double m = std::abs(z[static_cast<std::size_t>(i)]);
        if (m > best) {
            best = m;
            pivot = i;
        }
    }
    if (best <= 0.0) throw DomainError("projective point with all-zero coordinates");
    ProjectivePoint out;
    const Complex p = z[static_cast<std::size_t>(pivot)];
    for (int i = 0; i < 4; ++i) out.z[static_cast<std::size_t>(i)] = z[static_cast<std::size_t>(i)] / p;
    return out;
}

double projective_distance(const ProjectivePoint& p, const ProjectivePoint& q) {
    const ProjectivePoint a = p.normalized();
    const ProjectivePoint b = q.normalized();
    double d = 0.0;
    for (int i = 0; i < 4; ++i)
        d = std::max(d, std::abs(a.z[static_cast<std::size_t>(i)] - b.z[static_cast<std::size_t>(i)]));
    return d;
}

}  // namespace hspace
