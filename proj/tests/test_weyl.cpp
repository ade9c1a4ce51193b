#include "doctest.h"

#include <cmath>

#include "hspace/halton.hpp"
#include "hspace/weyl.hpp"

using namespace hspace;

namespace {

MetricChart flat3() {
    MetricChart m = make_diagonal_metric("flat", {"x1", "x2", "x3"}, {num(1.0), num(1.0), num(1.0)});
    m.domain.lo = {-1.0, -1.0, -1.0};
    m.domain.hi = {1.0, 1.0, 1.0};
    return m;
}

MetricChart round3() {
    ExprPtr norm2 = add(pow(var("x1"), 2), add(pow(var("x2"), 2), pow(var("x3"), 2)));
    const ExprPtr conf = div(num(4.0), pow(add(num(1.0), norm2), 2));
    MetricChart m = make_diagonal_metric("round", {"x1", "x2", "x3"}, {conf, conf, conf});
    m.domain.lo = {-1.0, -1.0, -1.0};
    m.domain.hi = {1.0, 1.0, 1.0};
    return m;
}

MetricChart hyperbolic3() {
    const ExprPtr conf = div(num(1.0), pow(var("x3"), 2));
    MetricChart m = make_diagonal_metric("hyperbolic", {"x1", "x2", "x3"}, {conf, conf, conf});
    m.guard = parse_predicate("x3 > 0.05");
    m.domain.lo = {-1.0, -1.0, 0.1};
    m.domain.hi = {1.0, 1.0, 1.0};
    return m;
}

WeylStructure with_alpha(MetricChart h, std::array<ExprPtr, 3> alpha) {
    WeylStructure w;
    w.h = std::move(h);
    w.alpha = std::move(alpha);
    return w;
}

}  // namespace

TEST_CASE("zero Lee form reduces to Levi-Civita") {
    const WeylStructure w = with_alpha(round3(), {num(0.0), num(0.0), num(0.0)});
    const std::vector<double> p{0.3, -0.4, 0.2};
    const ConnectionJet a = weyl_connection(w, p);
    const ConnectionJet b = christoffel(w.h, p);
    for (std::size_t i = 0; i < a.gamma.size(); ++i) CHECK(a.gamma[i] == doctest::Approx(b.gamma[i]));
    for (std::size_t i = 0; i < a.dgamma.size(); ++i)
        CHECK(a.dgamma[i] == doctest::Approx(b.dgamma[i]));
}

TEST_CASE("flat metric with alpha = dx1") {
    const WeylStructure w = with_alpha(flat3(), {num(1.0), num(0.0), num(0.0)});
    const std::vector<double> p{0.7, -0.1, 0.4};
    const ConnectionJet c = weyl_connection(w, p);
    CHECK(c.G(0, 0, 0) == doctest::Approx(1.0));    // G^1_11
    CHECK(c.G(0, 1, 1) == doctest::Approx(-1.0));   // G^1_22
    CHECK(c.G(1, 0, 1) == doctest::Approx(1.0));    // G^2_12
    CHECK(c.G(1, 1, 0) == doctest::Approx(1.0));    // symmetric lower indices
    CHECK(c.G(2, 2, 2) == doctest::Approx(0.0));
}

TEST_CASE("torsion vanishes identically") {
    const WeylStructure w =
        with_alpha(round3(), {mul(var("x2"), var("x3")), pow(var("x1"), 2), num(0.5)});
    HaltonSampler sampler(w.h.domain, 3);
    for (int trial = 0; trial < 20; ++trial) {
        const std::vector<double> p = sampler.next();
        const ConnectionJet c = weyl_connection(w, p);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k) CHECK(c.G(i, j, k) == c.G(i, k, j));
    }
}

TEST_CASE("the connection is conformal: D h = -2 alpha (x) h") {
    const WeylStructure w =
        with_alpha(round3(), {mul(var("x2"), var("x3")), pow(var("x1"), 2), num(0.5)});
    HaltonSampler sampler(w.h.domain, 9);
    for (int trial = 0; trial < 10; ++trial) {
        const std::vector<double> p = sampler.next();
        const MetricJets hj = eval_metric(w.h, p);
        const ConnectionJet c = weyl_connection(w, p);
        const ValueEnv env = chart_value_env(w.h.coords, p);
        std::array<double, 3> alpha{};
        for (int i = 0; i < 3; ++i)
            alpha[static_cast<std::size_t>(i)] = eval_value(w.alpha[static_cast<std::size_t>(i)], env).real();

        for (int k = 0; k < 3; ++k)
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    double cov = hj.dg(k, i, j);
                    for (int m = 0; m < 3; ++m)
                        cov -= c.G(m, k, i) * hj.g(m, j) + c.G(m, k, j) * hj.g(i, m);
                    CHECK(std::abs(cov - (-2.0 * alpha[static_cast<std::size_t>(k)] * hj.g(i, j))) <
                          1e-8);
                }
    }
}

TEST_CASE("gauge transformation preserves the connection") {
    // (h, alpha) and (e^{2w} h, alpha - dw) share the same Weyl connection
    const ExprPtr omega = add(mul(num(0.3), var("x1")), mul(num(0.2), mul(var("x2"), var("x3"))));
    const std::array<ExprPtr, 3> alpha{num(0.2), mul(num(0.1), var("x1")), num(0.0)};

    const WeylStructure w1 = with_alpha(flat3(), alpha);

    MetricChart scaled = flat3();
    std::vector<ExprPtr> comps;
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j)
            comps.push_back(mul(call("exp", mul(num(2.0), omega)), scaled.at(i, j)));
    MetricChart h2 = make_metric("scaled", scaled.coords, comps);
    h2.domain = scaled.domain;
    std::array<ExprPtr, 3> alpha2;
    for (int i = 0; i < 3; ++i)
        alpha2[static_cast<std::size_t>(i)] =
            sub(alpha[static_cast<std::size_t>(i)], derivative(omega, scaled.coords[static_cast<std::size_t>(i)]));
    const WeylStructure w2 = with_alpha(h2, alpha2);

    HaltonSampler sampler(w1.h.domain, 17);
    for (int trial = 0; trial < 10; ++trial) {
        const std::vector<double> p = sampler.next();
        const ConnectionJet c1 = weyl_connection(w1, p);
        const ConnectionJet c2 = weyl_connection(w2, p);
        for (std::size_t i = 0; i < c1.gamma.size(); ++i)
            CHECK(c1.gamma[i] == doctest::Approx(c2.gamma[i]).epsilon(1e-9));
    }
}

TEST_CASE("scalar curvature of the Weyl connection") {
    const WeylStructure flat = with_alpha(flat3(), {num(0.0), num(0.0), num(0.0)});
    CHECK(std::abs(weyl_scalar(flat, std::vector<double>{0.1, 0.2, 0.3})) < 1e-10);

    const WeylStructure round = with_alpha(round3(), {num(0.0), num(0.0), num(0.0)});
    HaltonSampler rs(round.h.domain, 23);
    for (int k = 0; k < 20; ++k) {
        const std::vector<double> p = rs.next();
        CHECK(weyl_scalar(round, p) == doctest::Approx(6.0).epsilon(1e-8));
    }

    const WeylStructure hyp = with_alpha(hyperbolic3(), {num(0.0), num(0.0), num(0.0)});
    HaltonSampler hs(hyp.h.domain, 23);
    for (int k = 0; k < 20; ++k) {
        const std::vector<double> p = hs.next_in(hyp.h.guard, hyp.h.coords);
        CHECK(weyl_scalar(hyp, p) == doctest::Approx(-6.0).epsilon(1e-8));
    }
}

TEST_CASE("einstein-weyl residual") {
    const WeylStructure flat = with_alpha(flat3(), {num(0.0), num(0.0), num(0.0)});
    CHECK(einstein_weyl_residual(flat, std::vector<double>{0.4, -0.2, 0.9}) < 1e-12);

    const WeylStructure round = with_alpha(round3(), {num(0.0), num(0.0), num(0.0)});
    HaltonSampler rs(round.h.domain, 31);
    for (int k = 0; k < 20; ++k) {
        const std::vector<double> p = rs.next();
        CHECK(einstein_weyl_residual(round, p) < 1e-6);
    }

    // flat metric with alpha = x2 dx1 is not Einstein-Weyl
    const WeylStructure twisted = with_alpha(flat3(), {var("x2"), num(0.0), num(0.0)});
    const std::vector<double> p{0.3, 0.5, -0.2};
    CHECK(einstein_weyl_residual(twisted, p) > 0.1);
}

TEST_CASE("einstein-weyl residual is gauge covariant") {
    const ExprPtr omega = mul(num(0.25), var("x2"));
    const std::array<ExprPtr, 3> alpha{var("x2"), num(0.0), num(0.0)};

    const WeylStructure w1 = with_alpha(flat3(), alpha);
    std::vector<ExprPtr> comps;
    MetricChart base = flat3();
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j)
            comps.push_back(mul(call("exp", mul(num(2.0), omega)), base.at(i, j)));
    MetricChart h2 = make_metric("scaled", base.coords, comps);
    std::array<ExprPtr, 3> alpha2;
    for (int i = 0; i < 3; ++i)
        alpha2[static_cast<std::size_t>(i)] =
            sub(alpha[static_cast<std::size_t>(i)], derivative(omega, base.coords[static_cast<std::size_t>(i)]));
    const WeylStructure w2 = with_alpha(h2, alpha2);

    const std::vector<double> p{0.3, 0.5, -0.2};
    const double om = 0.25 * p[1];
    const double r1 = einstein_weyl_residual(w1, p);
    const double r2 = einstein_weyl_residual(w2, p);
    // the h-norm of a (0,2) tensor carries conformal weight e^{-2w}
    CHECK(std::exp(2.0 * om) * r2 == doctest::Approx(r1).epsilon(1e-6));
}
