#include "doctest.h"

#include <cmath>
#include <random>

#include "hspace/algebra.hpp"

using namespace hspace;

namespace {

Quaternion random_quat(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> d(-2.0, 2.0);
    return {d(rng), d(rng), d(rng), d(rng)};
}

double max_component_diff(const Quaternion& p, const Quaternion& q) {
    return std::max({std::abs(p.a - q.a), std::abs(p.b - q.b), std::abs(p.c - q.c),
                     std::abs(p.d - q.d)});
}

}  // namespace

TEST_CASE("defining relations") {
    const Quaternion i{0, 1, 0, 0}, j{0, 0, 1, 0}, k{0, 0, 0, 1};
    CHECK(max_component_diff(quat_mul(i, j), k) == 0.0);
    CHECK(max_component_diff(quat_mul(j, k), i) == 0.0);
    CHECK(max_component_diff(quat_mul(k, i), j) == 0.0);
    CHECK(max_component_diff(quat_mul(j, i), Quaternion{0, 0, 0, -1}) == 0.0);
}

TEST_CASE("identity and a small product") {
    std::mt19937_64 rng(11);
    const Quaternion one{1, 0, 0, 0};
    for (int t = 0; t < 20; ++t) {
        const Quaternion q = random_quat(rng);
        CHECK(max_component_diff(quat_mul(q, one), q) == 0.0);
    }
    // (1 + j)(1 - j) = 2
    const Quaternion p{1, 0, 1, 0}, q{1, 0, -1, 0};
    CHECK(max_component_diff(quat_mul(p, q), Quaternion{2, 0, 0, 0}) == 0.0);
}

TEST_CASE("inverse") {
    const Quaternion one{1, 0, 0, 0};
    CHECK(max_component_diff(quat_inv(one), one) == 0.0);

    // (1 + j)^{-1} = (1 - j)/2
    const Quaternion p{1, 0, 1, 0};
    CHECK(max_component_diff(quat_inv(p), Quaternion{0.5, 0, -0.5, 0}) < 1e-15);

    const Quaternion i{0, 1, 0, 0};
    CHECK(max_component_diff(quat_inv(i), Quaternion{0, -1, 0, 0}) < 1e-15);

    std::mt19937_64 rng(12);
    for (int t = 0; t < 100; ++t) {
        const Quaternion q = random_quat(rng);
        if (quat_norm(q) < 1e-3) continue;
        CHECK(max_component_diff(quat_mul(q, quat_inv(q)), one) < 1e-12);
    }
    CHECK_THROWS_AS(quat_inv(Quaternion{0, 0, 0, 0}), NearZeroQuaternion);
    CHECK_THROWS_AS(quat_inv(Quaternion{1e-15, 0, 0, 0}), NearZeroQuaternion);
}

TEST_CASE("complex pair embedding") {
    CHECK(max_component_diff(embed_complex_pair({1, 0}, {0, 0}), Quaternion{1, 0, 0, 0}) == 0.0);
    CHECK(max_component_diff(embed_complex_pair({0, 1}, {0, 0}), Quaternion{0, 1, 0, 0}) == 0.0);
    // (0, c + d i) -> c j + d k
    CHECK(max_component_diff(embed_complex_pair({0, 0}, {2.5, -1.5}), Quaternion{0, 0, 2.5, -1.5}) ==
          0.0);

    // additivity against multiplication by j from the right
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> d(-2.0, 2.0);
    const Quaternion j{0, 0, 1, 0};
    for (int t = 0; t < 50; ++t) {
        const Complex z1(d(rng), d(rng)), z2(d(rng), d(rng));
        const Quaternion lhs = embed_complex_pair(z1, z2);
        const Quaternion rhs =
            embed_complex_pair(z1, {0, 0}) + quat_mul(embed_complex_pair(z2, {0, 0}), j);
        CHECK(max_component_diff(lhs, rhs) < 1e-15);
    }
}

TEST_CASE("norm multiplicativity and associativity") {
    std::mt19937_64 rng(14);
    for (int t = 0; t < 1000; ++t) {
        const Quaternion p = random_quat(rng), q = random_quat(rng);
        const double lhs = quat_norm(quat_mul(p, q));
        const double rhs = quat_norm(p) * quat_norm(q);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, rhs));
    }
    for (int t = 0; t < 300; ++t) {
        const Quaternion p = random_quat(rng), q = random_quat(rng), r = random_quat(rng);
        const Quaternion lhs = quat_mul(quat_mul(p, q), r);
        const Quaternion rhs = quat_mul(p, quat_mul(q, r));
        CHECK(max_component_diff(lhs, rhs) < 1e-12 * std::max(1.0, quat_norm(lhs)));
    }
}

TEST_CASE("projective normalization is scale invariant") {
    std::mt19937_64 rng(15);
    std::uniform_real_distribution<double> d(-2.0, 2.0);
    for (int t = 0; t < 100; ++t) {
        ProjectivePoint p;
        for (auto& z : p.z) z = Complex(d(rng), d(rng));
        if (p.max_modulus() < 1e-6) continue;
        const Complex lambda(d(rng), d(rng));
        if (std::abs(lambda) < 1e-3) continue;
        ProjectivePoint q;
        for (int i = 0; i < 4; ++i) q.z[static_cast<std::size_t>(i)] = lambda * p.z[static_cast<std::size_t>(i)];
        CHECK(projective_distance(p, q) < 1e-12);
    }
    ProjectivePoint zero;
    CHECK_THROWS_AS(zero.normalized(), DomainError);
}
