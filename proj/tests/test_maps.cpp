#include "doctest.h"

#include <cmath>

#include "hspace/halton.hpp"
#include "hspace/maps.hpp"

using namespace hspace;

namespace {

MetricChart flat_chart(int dim, const std::string& prefix = "x") {
    std::vector<std::string> coords;
    std::vector<ExprPtr> diag;
    for (int i = 0; i < dim; ++i) {
        coords.push_back(prefix + std::to_string(i + 1));
        diag.push_back(num(1.0));
    }
    MetricChart m = make_diagonal_metric("flat", coords, diag);
    m.domain.lo.assign(static_cast<std::size_t>(dim), -1.0);
    m.domain.hi.assign(static_cast<std::size_t>(dim), 1.0);
    return m;
}

MetricChart hyperbolic_chart(int dim) {
    std::vector<std::string> coords;
    for (int i = 0; i < dim; ++i) coords.push_back("x" + std::to_string(i + 1));
    const ExprPtr conf = div(num(1.0), pow(var(coords.back()), 2));
    std::vector<ExprPtr> diag(static_cast<std::size_t>(dim), conf);
    MetricChart m = make_diagonal_metric("hyperbolic", coords, diag);
    m.guard = parse_predicate(coords.back() + " > 0.1");
    m.domain.lo.assign(static_cast<std::size_t>(dim), -1.0);
    m.domain.hi.assign(static_cast<std::size_t>(dim), 1.0);
    m.domain.lo.back() = 0.15;
    return m;
}

MapChart projection_map(int source_dim) {
    std::vector<std::string> coords;
    for (int i = 0; i < source_dim; ++i) coords.push_back("x" + std::to_string(i + 1));
    return make_map("proj", coords, {parse_expression("x1 + i*x2")}, {ComponentKind::ComplexPair});
}

}  // namespace

TEST_CASE("differential shapes and ranks") {
    {
        MapChart ident = make_map("id", {"x1", "x2"}, {var("x1"), var("x2")},
                                  {ComponentKind::Real, ComponentKind::Real});
        const MapJets mj = ident.function()(std::vector<double>{0.3, 0.4});
        const std::vector<double> jac = differential(mj);
        CHECK(jac == std::vector<double>{1.0, 0.0, 0.0, 1.0});
        CHECK(differential_rank(jac, 2, 2) == 2);
    }
    {
        const MapJets mj = projection_map(3).function()(std::vector<double>{0.5, -0.3, 0.8});
        const std::vector<double> jac = differential(mj);
        CHECK(jac == std::vector<double>{1.0, 0.0, 0.0, 0.0, 1.0, 0.0});
    }
    {
        MapChart radial = make_map("radial", {"x1", "x2", "x3"},
                                   {parse_expression("x1 + i*sqrt(x2^2 + x3^2)")},
                                   {ComponentKind::ComplexPair});
        const MapJets mj = radial.function()(std::vector<double>{0.0, 1.0, 0.0});
        const std::vector<double> jac = differential(mj);
        CHECK(jac[0] == doctest::Approx(1.0));
        CHECK(jac[1] == doctest::Approx(0.0));
        CHECK(jac[2] == doctest::Approx(0.0));
        CHECK(jac[3] == doctest::Approx(0.0));
        CHECK(jac[4] == doctest::Approx(1.0));
        CHECK(jac[5] == doctest::Approx(0.0));
    }
}

TEST_CASE("horizontal conformality residuals") {
    const MetricChart source = flat_chart(3);
    const MetricChart target = flat_chart(2, "y");
    const std::vector<double> p{0.2, 0.7, -0.4};

    {
        const MapJets mj = projection_map(3).function()(p);
        const HwcResult r = hwc_residual(mj, source, p, target);
        CHECK(r.dilation == doctest::Approx(1.0));
        CHECK(r.residual < 1e-12);
    }
    {
        MapChart skew = make_map("skew", {"x1", "x2", "x3"}, {parse_expression("x1 + i*2*x2")},
                                 {ComponentKind::ComplexPair});
        const MapJets mj = skew.function()(p);
        const HwcResult r = hwc_residual(mj, source, p, target);
        CHECK(r.dilation == doctest::Approx(2.5));
        CHECK(r.residual == doctest::Approx(std::sqrt(4.5)).epsilon(1e-12));
    }
    {
        MapChart radial = make_map("radial", {"x1", "x2", "x3"},
                                   {parse_expression("x1 + i*sqrt(x2^2 + x3^2)")},
                                   {ComponentKind::ComplexPair});
        const MapJets mj = radial.function()(p);
        const HwcResult r = hwc_residual(mj, source, p, target);
        CHECK(r.dilation == doctest::Approx(1.0));
        CHECK(r.residual < 1e-10);
    }
    {
        // vanishing differential counts as weakly conformal
        MapChart constant = make_map("const", {"x1", "x2", "x3"}, {num(2.0), num(3.0)},
                                     {ComponentKind::Real, ComponentKind::Real});
        const MapJets mj = constant.function()(p);
        const HwcResult r = hwc_residual(mj, source, p, target);
        CHECK(r.dilation == 0.0);
        CHECK(r.residual == 0.0);
    }
}

TEST_CASE("hwc residual scales zero-homogeneously with the source metric") {
    const MetricChart target = flat_chart(2, "y");
    MapChart skew = make_map("skew", {"x1", "x2", "x3"}, {parse_expression("x1 + i*2*x2")},
                             {ComponentKind::ComplexPair});
    const std::vector<double> p{0.2, 0.7, -0.4};
    const MapJets mj = skew.function()(p);

    const double lambda2 = 3.7;
    MetricChart scaled =
        make_diagonal_metric("scaled", {"x1", "x2", "x3"},
                             {num(lambda2), num(lambda2), num(lambda2)});
    const HwcResult a = hwc_residual(mj, flat_chart(3), p, target);
    const HwcResult b = hwc_residual(mj, scaled, p, target);
    CHECK(b.dilation == doctest::Approx(a.dilation / lambda2));
    CHECK(b.residual / b.dilation == doctest::Approx(a.residual / a.dilation).epsilon(1e-12));
}

TEST_CASE("tension field examples") {
    const MetricChart flat3 = flat_chart(3);
    const ConnectionField flat_target = flat_connection_field(2);
    const std::vector<double> p{0.2, 0.7, -0.4};

    {
        const MapJets mj = projection_map(3).function()(p);
        const std::vector<double> tau = tension_field(mj, flat3, p, flat_target);
        CHECK(std::abs(tau[0]) < 1e-12);
        CHECK(std::abs(tau[1]) < 1e-12);
    }
    {
        MapChart sq = make_map("square", {"x1", "x2", "x3"}, {parse_expression("x1^2")},
                               {ComponentKind::Real});
        const MapJets mj = sq.function()(p);
        const std::vector<double> tau = tension_field(mj, flat3, p, flat_connection_field(1));
        CHECK(tau[0] == doctest::Approx(2.0));
    }
}

TEST_CASE("radial extension is tension-free on hyperbolic four-space") {
    const MetricChart hyp = hyperbolic_chart(4);
    MapChart ext = make_map("ext", {"x1", "x2", "x3", "x4"},
                            {parse_expression("x1 + i*sqrt(x2^2 + x3^2 + x4^2)")},
                            {ComponentKind::ComplexPair});
    HaltonSampler sampler(hyp.domain, 41);
    for (int k = 0; k < 25; ++k) {
        const std::vector<double> p = sampler.next_in(hyp.guard, hyp.coords);
        const MapJets mj = ext.function()(p);
        const std::vector<double> tau = tension_field(mj, hyp, p, flat_connection_field(2));
        CHECK(std::abs(tau[0]) < 1e-6);
        CHECK(std::abs(tau[1]) < 1e-6);
    }
}

TEST_CASE("tension agrees with the finite-difference oracle") {
    const MetricChart hyp = hyperbolic_chart(3);
    MapChart f = make_map("f", {"x1", "x2", "x3"},
                          {parse_expression("sin(x1)*x3 + i*(x2^2 - x3)")},
                          {ComponentKind::ComplexPair});
    const std::vector<double> p{0.3, -0.2, 0.8};

    const MapJets mj = f.function()(p);
    const std::vector<double> tau = tension_field(mj, hyp, p, flat_connection_field(2));

    // rebuild the map jets from finite differences only
    auto fd_component = [&](int which) {
        return [&f, which](std::span<const double> q) {
            ValueEnv env = chart_value_env(f.source_coords, q);
            const Complex v = eval_value(f.components[0], env);
            return which == 0 ? Complex(v.real(), 0.0) : Complex(v.imag(), 0.0);
        };
    };
    MapJets fdj;
    fdj.source_dim = 3;
    fdj.target_dim = 2;
    for (int a = 0; a < 2; ++a) {
        const FdDerivatives fd = fd_derivatives(fd_component(a), p);
        ValueEnv env = chart_value_env(f.source_coords, p);
        const Complex v = eval_value(f.components[0], env);
        fdj.t.push_back(Jet2::from_parts(3, a == 0 ? v.real() : v.imag(), fd.grad, fd.hess));
    }
    const std::vector<double> tau_fd = tension_field(fdj, hyp, p, flat_connection_field(2));
    CHECK(std::abs(tau[0] - tau_fd[0]) < 1e-5);
    CHECK(std::abs(tau[1] - tau_fd[1]) < 1e-5);
}

TEST_CASE("harmonic morphism verdict") {
    const MetricChart flat3 = flat_chart(3);
    const MetricChart target = flat_chart(2, "y");
    std::vector<std::vector<double>> samples;
    HaltonSampler sampler(flat3.domain, 51);
    for (int k = 0; k < 40; ++k) samples.push_back(sampler.next());

    {
        const Verdict v = harmonic_morphism_verdict(projection_map(3).function(), flat3,
                                                    flat_connection_field(2), target, samples);
        CHECK(v.pass());
    }
    {
        MapChart sq = make_map("square", {"x1", "x2", "x3"}, {parse_expression("x1^2"), var("x2")},
                               {ComponentKind::Real, ComponentKind::Real});
        const Verdict v = harmonic_morphism_verdict(sq.function(), flat3, flat_connection_field(2),
                                                    target, samples);
        CHECK(!v.pass());
        CHECK(v.max_tension == doctest::Approx(2.0));
    }
}

TEST_CASE("verdict against a conformally rescaled surface target") {
    // target-conformal invariance for horizontally conformal maps
    const MetricChart flat3 = flat_chart(3);
    MetricChart bent_target =
        make_diagonal_metric("bent", {"y1", "y2"},
                             {call("exp", mul(num(0.6), var("y1"))),
                              call("exp", mul(num(0.6), var("y1")))});
    MapChart f = projection_map(3);
    std::vector<std::vector<double>> samples;
    HaltonSampler sampler(flat3.domain, 61);
    for (int k = 0; k < 30; ++k) samples.push_back(sampler.next());

    const ConnectionField bent_conn = levi_civita_field(bent_target);
    const Verdict v =
        harmonic_morphism_verdict(f.function(), flat3, bent_conn, bent_target, samples);
    CHECK(v.pass());
}

TEST_CASE("hermitian structure from a flat projection") {
    const MetricChart flat4 = flat_chart(4);
    MapChart f = projection_map(4);
    const std::vector<double> p{0.2, -0.6, 0.9, 0.1};

    const MatrixFieldJets J = hermitian_from_submersion(f.function()(p), flat4, p, +1.0);
    // J e1 = e2, J e3 = e4 (columns of the matrix are images of basis vectors)
    CHECK(J.value[1 * 4 + 0] == doctest::Approx(1.0));
    CHECK(J.value[0 * 4 + 1] == doctest::Approx(-1.0));
    CHECK(J.value[3 * 4 + 2] == doctest::Approx(1.0));
    CHECK(J.value[2 * 4 + 3] == doctest::Approx(-1.0));
    for (double d : J.deriv) CHECK(std::abs(d) < 1e-12);

    const MatrixFieldJets Jneg = hermitian_from_submersion(f.function()(p), flat4, p, -1.0);
    CHECK(Jneg.value[3 * 4 + 2] == doctest::Approx(-1.0));
    CHECK(Jneg.value[1 * 4 + 0] == doctest::Approx(1.0));
}

TEST_CASE("hermitian structure invariants on curved charts") {
    const MetricChart hyp = hyperbolic_chart(4);
    MapChart radial = make_map("radial", {"x1", "x2", "x3", "x4"},
                               {parse_expression("x1 + i*sqrt(x2^2 + x3^2 + x4^2)")},
                               {ComponentKind::ComplexPair});
    HaltonSampler sampler(hyp.domain, 71);
    for (int trial = 0; trial < 15; ++trial) {
        const std::vector<double> p = sampler.next_in(hyp.guard, hyp.coords);
        for (double orientation : {+1.0, -1.0}) {
            const MatrixFieldJets J =
                hermitian_from_submersion(radial.function()(p), hyp, p, orientation);
            const MetricJets gj = eval_metric(hyp, p);
            // J^2 = -Id
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) {
                    double s = 0.0;
                    for (int k = 0; k < 4; ++k) s += J.value[static_cast<std::size_t>(i * 4 + k)] * J.value[static_cast<std::size_t>(k * 4 + j)];
                    CHECK(std::abs(s + (i == j ? 1.0 : 0.0)) < 1e-9);
                }
            // g(J., J.) = g(.,.)
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b) {
                    double s = 0.0;
                    for (int i = 0; i < 4; ++i)
                        for (int j = 0; j < 4; ++j)
                            s += gj.g(i, j) * J.value[static_cast<std::size_t>(i * 4 + a)] *
                                 J.value[static_cast<std::size_t>(j * 4 + b)];
                    CHECK(std::abs(s - gj.g(a, b)) < 1e-9);
                }
        }
    }
}

TEST_CASE("hermitian structure rejects bad inputs") {
    const MetricChart flat4 = flat_chart(4);
    const std::vector<double> p{0.1, 0.2, 0.3, 0.4};
    {
        MapChart skew = make_map("skew", {"x1", "x2", "x3", "x4"},
                                 {parse_expression("x1 + i*2*x2")}, {ComponentKind::ComplexPair});
        CHECK_THROWS_AS(hermitian_from_submersion(skew.function()(p), flat4, p, +1.0),
                        NotHorizontallyConformal);
    }
    {
        MapChart constant = make_map("const", {"x1", "x2", "x3", "x4"}, {num(1.0), num(2.0)},
                                     {ComponentKind::Real, ComponentKind::Real});
        CHECK_THROWS_AS(hermitian_from_submersion(constant.function()(p), flat4, p, +1.0),
                        NotSubmersive);
    }
}

TEST_CASE("nijenhuis residual of constant and projection structures") {
    const MetricChart flat4 = flat_chart(4);
    MapChart f = projection_map(4);
    const MatrixField J = hermitian_field(f.function(), flat4, +1.0);
    const std::vector<double> p{0.4, -0.2, 0.1, 0.6};
    CHECK(nijenhuis_residual(J, p) < 1e-10);

    MatrixFieldJets broken;
    broken.dim = 4;
    broken.value.assign(16, 0.0);
    broken.deriv.assign(64, 0.0);
    CHECK_THROWS_AS(nijenhuis_residual(broken), NotAlmostComplex);
}

TEST_CASE("nijenhuis detects a twisted non-integrable structure") {
    // standard J conjugated by a point-dependent rotation in the (e1, e3)
    // plane: J(x) = R(x2) J0 R(x2)^T, which is almost complex but not
    // integrable
    auto twisted = [](std::span<const double> p) {
        const double th = p[1];
        const double c = std::cos(th), s = std::sin(th);
        auto J = [&](std::span<const double> q, double dth) {
            (void)q;
            const double cc = std::cos(dth), ss = std::sin(dth);
            const double R[16] = {cc, 0, -ss, 0, 0, 1, 0, 0, ss, 0, cc, 0, 0, 0, 0, 1};
            const double J0[16] = {0, -1, 0, 0, 1, 0, 0, 0, 0, 0, 0, -1, 0, 0, 1, 0};
            std::vector<double> out(16, 0.0);
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) {
                    double acc = 0.0;
                    for (int a = 0; a < 4; ++a)
                        for (int b = 0; b < 4; ++b) acc += R[i * 4 + a] * J0[a * 4 + b] * R[j * 4 + b];
                    out[static_cast<std::size_t>(i * 4 + j)] = acc;
                }
            return out;
        };
        (void)c;
        (void)s;
        MatrixFieldJets out;
        out.dim = 4;
        out.value = J(p, th);
        out.deriv.assign(64, 0.0);
        const double h = 1e-6;
        const std::vector<double> plus = J(p, th + h), minus = J(p, th - h);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                out.deriv[static_cast<std::size_t>((1 * 4 + i) * 4 + j)] =
                    (plus[static_cast<std::size_t>(i * 4 + j)] - minus[static_cast<std::size_t>(i * 4 + j)]) / (2 * h);
        return out;
    };
    const std::vector<double> p{0.2, 0.7, -0.3, 0.4};
    CHECK(nijenhuis_residual(MatrixField(twisted), p) > 0.5);
}

TEST_CASE("radial extension is integrable for both vertical orientations") {
    // the chart is conformally flat and the map is rotationally invariant, so
    // both associated structures are products of complex structures on
    // (half-plane) x (two-sphere); the residual vanishes for each
    const MetricChart hyp = hyperbolic_chart(4);
    MapChart radial = make_map("radial", {"x1", "x2", "x3", "x4"},
                               {parse_expression("x1 + i*sqrt(x2^2 + x3^2 + x4^2)")},
                               {ComponentKind::ComplexPair});
    const MatrixField Jp = hermitian_field(radial.function(), hyp, +1.0);
    const MatrixField Jm = hermitian_field(radial.function(), hyp, -1.0);

    HaltonSampler sampler(hyp.domain, 81);
    double worst_pos = 0.0, worst_neg = 0.0;
    for (int k = 0; k < 20; ++k) {
        const std::vector<double> p = sampler.next_in(hyp.guard, hyp.coords);
        worst_pos = std::max(worst_pos, nijenhuis_residual(Jp, p));
        worst_neg = std::max(worst_neg, nijenhuis_residual(Jm, p));
    }
    CHECK(worst_pos < 1e-6);
    CHECK(worst_neg < 1e-6);
}

