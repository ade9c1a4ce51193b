#include "doctest.h"

#include <cmath>

#include "hspace/calderbank.hpp"
#include "hspace/halton.hpp"

using namespace hspace;

TEST_CASE("flat base gives the constant-curvature chart") {
    const HSpaceChart h = calderbank_metric(builtin_weyl("flat-euclidean"));
    CHECK(h.scalar == doctest::Approx(0.0));

    // components reduce to t^{-2} (dt^2 + delta)
    HaltonSampler sampler(h.g.domain, 3);
    for (int k = 0; k < 20; ++k) {
        const std::vector<double> p = sampler.next();
        const ValueEnv env = chart_value_env(h.g.coords, p);
        const double t = p[0];
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                const double expected = (i == j) ? 1.0 / (t * t) : 0.0;
                CHECK(eval_value(h.g.at(i, j), env).real() == doctest::Approx(expected));
            }
    }

    // curvature of the output
    HaltonSampler s2(h.g.domain, 11);
    for (int k = 0; k < 100; ++k) {
        const std::vector<double> p = s2.next_in(h.g.guard, h.g.coords);
        CHECK(std::abs(scalar_curvature(h.g, p) + 12.0) < 1e-6);
        CHECK(einstein_residual(h.g, p) < 1e-6);
        const WeylNorms wn = weyl_split(h.g, p);
        CHECK(wn.w < 1e-6);
    }
}

TEST_CASE("round base substitutes S = 6") {
    const HSpaceChart h = calderbank_metric(builtin_weyl("round-s3"));
    CHECK(h.scalar == doctest::Approx(6.0).epsilon(1e-8));
    CHECK(h.t_interval.second < 1.0);

    // g_tt = t^{-2} (1 - t^2)^{-1}; spatial block (1 - t^2) h / t^2
    const std::vector<double> p{0.5, 0.2, -0.3, 0.4};
    const ValueEnv env = chart_value_env(h.g.coords, p);
    const double t = p[0];
    const double f = 1.0 - t * t;
    CHECK(eval_value(h.g.at(0, 0), env).real() == doctest::Approx(1.0 / (t * t * f)));
    const std::vector<double> hv =
        eval_metric_values(h.base.h, std::vector<double>{0.2, -0.3, 0.4});
    for (int i = 1; i < 4; ++i)
        for (int j = 1; j < 4; ++j)
            CHECK(eval_value(h.g.at(i, j), env).real() ==
                  doctest::Approx(f * hv[static_cast<std::size_t>((i - 1) * 3 + (j - 1))] / (t * t))
                      .epsilon(1e-10));

    // Einstein and one-sided Weyl flatness at interior samples
    HaltonSampler s2(h.g.domain, 13);
    for (int k = 0; k < 100; ++k) {
        const std::vector<double> q = s2.next_in(h.g.guard, h.g.coords);
        CHECK(einstein_residual(h.g, q) < 1e-6);
        const WeylNorms wn = weyl_split(h.g, q);
        CHECK(std::min(wn.w_plus, wn.w_minus) < 1e-6);
    }
}

TEST_CASE("hyperbolic base") {
    const HSpaceChart h = calderbank_metric(builtin_weyl("hyperbolic-3"));
    CHECK(h.scalar == doctest::Approx(-6.0).epsilon(1e-8));
    HaltonSampler sampler(h.g.domain, 17);
    for (int k = 0; k < 50; ++k) {
        const std::vector<double> p = sampler.next_in(h.g.guard, h.g.coords);
        CHECK(einstein_residual(h.g, p) < 1e-6);
        CHECK(std::min(weyl_split(h.g, p).w_plus, weyl_split(h.g, p).w_minus) < 1e-6);
    }
}

TEST_CASE("pole order: t^2 g extends to the boundary") {
    for (const std::string& name : {"flat-euclidean", "round-s3"}) {
        const HSpaceChart h = calderbank_metric(builtin_weyl(name));
        HaltonSampler sampler(h.base.h.domain, 19);
        for (int k = 0; k < 25; ++k) {
            const std::vector<double> x = sampler.next_in(h.base.h.guard, h.base.h.coords);
            CHECK(pole_check(h, x) < 1e-6);
        }
    }
    const HSpaceChart h = calderbank_metric(builtin_weyl("flat-euclidean"));
    CHECK(pole_check(h, std::vector<double>{0.2, 0.1, -0.4}) < 1e-7);
    CHECK_THROWS_AS(pole_check(h, std::vector<double>{0.2, 0.1, -0.4}, -1.0), IntervalViolation);
}

TEST_CASE("a non-einstein-weyl base warns but still assembles") {
    // a parallel Lee form keeps the scalar constant while breaking the
    // Einstein-Weyl equation
    WeylStructure w = builtin_weyl("flat-euclidean");
    w.alpha = {num(0.4), num(0.0), num(0.0)};
    std::string warning;
    CalderbankOptions opt;
    opt.warn = [&](const std::string& msg) { warning = msg; };
    const HSpaceChart h = calderbank_metric(w, opt);
    CHECK(!warning.empty());
    // the alpha terms enter the mixed components: g_t1 = t^{-2} f^{-1} (t a_1 + ...)
    const std::vector<double> p{0.5, 0.3, 0.7, -0.2};
    const ValueEnv env = chart_value_env(h.g.coords, p);
    CHECK(std::abs(eval_value(h.g.at(0, 1), env).real()) > 1e-3);
}

TEST_CASE("a base with varying scalar is rejected") {
    WeylStructure w = builtin_weyl("flat-euclidean");
    w.alpha = {var("x2"), num(0.0), num(0.0)};
    CHECK_THROWS_AS(calderbank_metric(w), NonConstantScalar);
}

TEST_CASE("retract of the flat chart is a harmonic morphism with dilation t^2") {
    const HSpaceChart h = calderbank_metric(builtin_weyl("flat-euclidean"));
    const MapChart psi = retract(h);
    CHECK(psi.source_dim() == 4);
    CHECK(psi.target_dim() == 3);

    std::vector<std::vector<double>> samples;
    HaltonSampler sampler(h.g.domain, 23);
    for (int k = 0; k < 50; ++k) samples.push_back(sampler.next_in(h.g.guard, h.g.coords));

    VerdictOptions opt;
    opt.tension_tol = 1e-6;
    opt.hwc_tol = 1e-8;
    const Verdict v = harmonic_morphism_verdict(psi.function(), h.g,
                                                weyl_connection_field(h.base), h.base.h, samples, opt);
    CHECK(v.pass());
    for (std::size_t k = 0; k < samples.size(); ++k) {
        const double t = samples[k][0];
        CHECK(std::abs(v.dilations[k] - t * t) < 1e-8);
    }

    // fibres are the t-lines
    const MapJets mj = psi.function()(samples.front());
    const std::vector<double> jac = differential(mj);
    for (int a = 0; a < 3; ++a) CHECK(jac[static_cast<std::size_t>(a * 4 + 0)] == 0.0);
    CHECK(differential_rank(jac, 3, 4) == 3);
}

TEST_CASE("retract of the round chart passes on the inner interval") {
    const HSpaceChart h = calderbank_metric(builtin_weyl("round-s3"));
    const MapChart psi = retract(h);
    std::vector<std::vector<double>> samples;
    HaltonSampler sampler(h.g.domain, 29);
    for (int k = 0; k < 40; ++k) samples.push_back(sampler.next_in(h.g.guard, h.g.coords));
    const Verdict v = harmonic_morphism_verdict(psi.function(), h.g,
                                                weyl_connection_field(h.base), h.base.h, samples);
    CHECK(v.pass());
}

TEST_CASE("composition with a harmonic morphism of the base") {
    const HSpaceChart flat = calderbank_metric(builtin_weyl("flat-euclidean"));
    const MetricChart target = make_diagonal_metric("flat2", {"y1", "y2"}, {num(1.0), num(1.0)});

    MapChart f = make_map("linear", {"x1", "x2", "x3"}, {parse_expression("x1 + i*x2")},
                          {ComponentKind::ComplexPair});
    const MapChart lifted = compose_extension(f, flat);
    CHECK(lifted.source_dim() == 4);

    std::vector<std::vector<double>> samples;
    HaltonSampler sampler(flat.g.domain, 31);
    for (int k = 0; k < 40; ++k) samples.push_back(sampler.next_in(flat.g.guard, flat.g.coords));
    const Verdict v = harmonic_morphism_verdict(lifted.function(), flat.g,
                                                flat_connection_field(2), target, samples);
    CHECK(v.pass());

    // the restriction to t = 0 is f itself
    const std::vector<double> q{0.0, 0.3, -0.5, 0.8};
    const MapJets a = lifted.function()(q);
    const MapJets b = f.function()(std::vector<double>{0.3, -0.5, 0.8});
    CHECK(a.t[0].value() == b.t[0].value());
    CHECK(a.t[1].value() == b.t[1].value());
}

TEST_CASE("radial composition needs the hyperbolic base") {
    const MetricChart target = make_diagonal_metric("flat2", {"y1", "y2"}, {num(1.0), num(1.0)});
    MapChart radial = make_map("radial", {"x1", "x2", "x3"},
                               {parse_expression("x1 + i*sqrt(x2^2 + x3^2)")},
                               {ComponentKind::ComplexPair});
    radial.guard = parse_predicate("x2^2 + x3^2 > 0.04");

    // over the flat base the composite has |tau| = t^2 / r: not harmonic
    {
        const HSpaceChart flat = calderbank_metric(builtin_weyl("flat-euclidean"));
        const MapChart lifted = compose_extension(radial, flat);
        std::vector<std::vector<double>> samples;
        HaltonSampler sampler(flat.g.domain, 37);
        for (int k = 0; k < 20; ++k) samples.push_back(sampler.next_in(lifted.guard, flat.g.coords));
        const Verdict v = harmonic_morphism_verdict(lifted.function(), flat.g,
                                                    flat_connection_field(2), target, samples);
        CHECK(!v.pass());
        CHECK(v.max_hwc < 1e-8);  // still horizontally conformal
        const double t = v.worst_tension_point[0];
        const double r = std::sqrt(v.worst_tension_point[2] * v.worst_tension_point[2] +
                                   v.worst_tension_point[3] * v.worst_tension_point[3]);
        CHECK(v.max_tension == doctest::Approx(t * t / r).epsilon(1e-6));
    }

    // over the hyperbolic-3 base the premise holds and the composite passes
    {
        const HSpaceChart hyp = calderbank_metric(builtin_weyl("hyperbolic-3"));
        // f is a harmonic morphism of the base Weyl space
        std::vector<std::vector<double>> base_samples;
        HaltonSampler bs(hyp.base.h.domain, 41);
        for (int k = 0; k < 20; ++k)
            base_samples.push_back(bs.next_in(radial.guard, hyp.base.h.coords));
        const Verdict base_v =
            harmonic_morphism_verdict(radial.function(), hyp.base.h,
                                      flat_connection_field(2), target, base_samples);
        CHECK(base_v.pass());

        const MapChart lifted = compose_extension(radial, hyp);
        std::vector<std::vector<double>> samples;
        HaltonSampler sampler(hyp.g.domain, 43);
        for (int k = 0; k < 30; ++k) samples.push_back(sampler.next_in(lifted.guard, hyp.g.coords));
        const Verdict v = harmonic_morphism_verdict(lifted.function(), hyp.g,
                                                    flat_connection_field(2), target, samples);
        CHECK(v.pass());
    }
}
