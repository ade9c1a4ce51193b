#include "hspace/runner.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>

#include "hspace/algebra.hpp"
#include "hspace/builtins.hpp"
#include "hspace/halton.hpp"

namespace hspace {

namespace {

struct RunContext {
    const Config& cfg;
    const RunOptions& opt;
    std::map<std::string, std::shared_ptr<SurfaceSubmersion>> submersions;
    std::map<std::string, std::shared_ptr<HSpaceChart>> hspaces;

    std::uint64_t sampler_seed(const CheckSpec& check) const {
        // fold the check name into the stream so adding checks never shifts
        // the samples of existing ones
        return opt.seed * 1000003ull + (fnv1a64(check.name) % 100000ull);
    }

    int samples(const CheckSpec& check, int fallback) const {
        if (opt.samples_override) return *opt.samples_override;
        return check.integer("samples", fallback);
    }

    double tolerance(const CheckSpec& check, const std::string& key, double fallback) const {
        if (opt.tolerance_override) return *opt.tolerance_override;
        return check.number(key, fallback);
    }

    const MetricChart& metric(const CheckSpec& check, const std::string& key = "metric") const {
        const std::string& name = check.require(key);
        auto it = cfg.metrics.find(name);
        if (it == cfg.metrics.end())
            throw ConfigError("check '" + check.name + "' references unknown metric '" + name + "'");
        return it->second;
    }

    const WeylStructure& weyl(const CheckSpec& check) const {
        const std::string& name = check.require("weyl");
        auto it = cfg.weyls.find(name);
        if (it == cfg.weyls.end())
            throw ConfigError("check '" + check.name + "' references unknown weyl '" + name + "'");
        return it->second;
    }

    const SurfacePatch& surface(const CheckSpec& check) const {
        const std::string& name = check.require("surface");
        auto it = cfg.surfaces.find(name);
        if (it == cfg.surfaces.end())
            throw ConfigError("check '" + check.name + "' references unknown surface '" + name + "'");
        return it->second;
    }

    const MapChart& map(const CheckSpec& check, const std::string& key = "map") const {
        const std::string& name = check.require(key);
        auto it = cfg.maps.find(name);
        if (it == cfg.maps.end())
            throw ConfigError("check '" + check.name + "' references unknown map '" + name + "'");
        return it->second;
    }

    const SurfaceSubmersion& submersion(const CheckSpec& check) {
        const std::string& name = check.require("surface");
        auto it = submersions.find(name);
        if (it != submersions.end()) return *it->second;
        const SurfacePatch& patch = surface(check);
        std::vector<SeedEntry> seeds;
        try {
            seeds = builtin_seeds(patch.name);
        } catch (const ConfigError&) {
            SeedEntry fallback;
            fallback.region.lo.assign(4, -1e9);
            fallback.region.hi.assign(4, 1e9);
            const std::vector<double> c = patch.domain.center();
            fallback.guess = {c[0], c[1], c[2], c[3]};
            seeds.push_back(fallback);
        }
        auto sub = std::make_shared<SurfaceSubmersion>(
            SurfaceSubmersion::build(patch, std::move(seeds)));
        submersions.emplace(name, sub);
        return *sub;
    }

    const HSpaceChart& hspace(const CheckSpec& check) {
        const std::string& name = check.require("weyl");
        auto it = hspaces.find(name);
        if (it != hspaces.end()) return *it->second;
        CalderbankOptions copt;
        copt.warn = opt.warn;
        auto h = std::make_shared<HSpaceChart>(calderbank_metric(weyl(check), copt));
        hspaces.emplace(name, h);
        return *h;
    }
};

Box check_box(const CheckSpec& check, const Box& fallback) {
    if (const auto d = check.get("domain"))
        return parse_ranges(*d, "check '" + check.name + "' domain");
    return fallback;
}

Predicate check_guard(const CheckSpec& check, const Predicate& fallback) {
    if (const auto g = check.get("guard")) return parse_predicate(*g);
    return fallback;
}

/// Runs a per-sample residual over a guarded box, collecting the maximum,
/// the worst point and non-fatal evaluation issues.
CheckResult sweep(const std::string& name, double tolerance, const Box& box,
                  const Predicate& guard, const std::vector<std::string>& coords, int count,
                  std::uint64_t seed,
                  const std::function<double(std::span<const double>)>& residual) {
    CheckResult out;
    out.name = name;
    out.tolerance = tolerance;
    out.sample_count = count;
    HaltonSampler sampler(box, seed);
    for (int k = 0; k < count; ++k) {
        const std::vector<double> p = sampler.next_in(guard, coords);
        try {
            const double r = residual(p);
            if (r >= out.max_residual) {
                out.max_residual = r;
                out.worst_point = p;
            }
        } catch (const Error& e) {
            out.errors.push_back({p, e.kind()});
        }
    }
    out.pass = out.errors.empty() && out.max_residual <= out.tolerance;
    return out;
}

CheckResult verdict_result(const std::string& name, const Verdict& v) {
    // normalized residual: max of tension and conformality defects measured
    // in units of their own tolerances; the check tolerance is exactly 1
    CheckResult out;
    out.name = name;
    out.tolerance = 1.0;
    out.sample_count = v.sample_count;
    const double tension_ratio = v.max_tension / v.options.tension_tol;
    const double hwc_ratio = v.max_hwc / v.options.hwc_tol;
    if (tension_ratio >= hwc_ratio) {
        out.max_residual = tension_ratio;
        out.worst_point = v.worst_tension_point;
    } else {
        out.max_residual = hwc_ratio;
        out.worst_point = v.worst_hwc_point;
    }
    for (const auto& issue : v.issues) out.errors.push_back({issue.point, issue.kind});
    out.pass = out.errors.empty() && out.max_residual <= out.tolerance;
    return out;
}

std::vector<std::vector<double>> guarded_samples(const Box& box, const Predicate& guard,
                                                 const std::vector<std::string>& coords, int count,
                                                 std::uint64_t seed) {
    HaltonSampler sampler(box, seed);
    std::vector<std::vector<double>> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) out.push_back(sampler.next_in(guard, coords));
    return out;
}

// -- individual check types ---------------------------------------------------

CheckResult run_contact(RunContext& ctx, const CheckSpec& check) {
    const SurfacePatch& s = ctx.surface(check);
    return sweep(check.name, ctx.tolerance(check, "tolerance", 1e-10), s.domain, {}, {},
                 ctx.samples(check, 500), ctx.sampler_seed(check),
                 [&](std::span<const double> q) {
                     return std::abs(contact_residual(s, Complex(q[0], q[1]), Complex(q[2], q[3])));
                 });
}

CheckResult run_holomorphy(RunContext& ctx, const CheckSpec& check) {
    const SurfacePatch& s = ctx.surface(check);
    return sweep(check.name, ctx.tolerance(check, "tolerance", 1e-8), s.domain, {}, {},
                 ctx.samples(check, 100), ctx.sampler_seed(check),
                 [&](std::span<const double> q) {
                     return cauchy_riemann_residual(s, Complex(q[0], q[1]), Complex(q[2], q[3]));
                 });
}

CheckResult run_roundtrip(RunContext& ctx, const CheckSpec& check) {
    const SurfacePatch& s = ctx.surface(check);
    return sweep(check.name, ctx.tolerance(check, "tolerance", 1e-9), s.domain, {}, {},
                 ctx.samples(check, 200), ctx.sampler_seed(check),
                 [&](std::span<const double> q) {
                     const Complex u(q[0], q[1]), v(q[2], q[3]);
                     const std::array<double, 4> x = incidence_point(s, u, v);
                     const auto [u2, v2] = invert_incidence(
                         s, x, {u + Complex(0.01, -0.01), v + Complex(-0.01, 0.01)});
                     const std::array<double, 4> x2 = incidence_point(s, u2, v2);
                     double err = 0.0;
                     for (int i = 0; i < 4; ++i)
                         err = std::max(err, std::abs(x[static_cast<std::size_t>(i)] -
                                                      x2[static_cast<std::size_t>(i)]));
                     return err;
                 });
}

CheckResult run_formula(RunContext& ctx, const CheckSpec& check) {
    const SurfaceSubmersion& sub = ctx.submersion(check);
    const MapChart& reference = ctx.map(check, "reference");
    const MapFunction phi = sub.map4();
    const MapFunction ref = reference.function();
    Box box;
    box.lo = {-1.0, -1.0, -1.0, 0.1};
    box.hi = {1.0, 1.0, 1.0, 1.0};
    box = check_box(check, box);
    return sweep(check.name, ctx.tolerance(check, "tolerance", 1e-8), box, {}, {},
                 ctx.samples(check, 100), ctx.sampler_seed(check),
                 [&](std::span<const double> x) {
                     const MapJets a = phi(x);
                     const MapJets b = ref(x);
                     double err = 0.0;
                     for (int c = 0; c < 2; ++c)
                         err = std::max(err, std::abs(a.t[static_cast<std::size_t>(c)].value() -
                                                      b.t[static_cast<std::size_t>(c)].value()));
                     return err;
                 });
}

CheckResult run_pipeline_verdict(RunContext& ctx, const CheckSpec& check) {
    const SurfaceSubmersion& sub = ctx.submersion(check);
    const MetricChart& g = ctx.metric(check);
    if (g.dim != 4) throw ConfigError("check '" + check.name + "' needs a 4-dimensional metric");
    VerdictOptions vopt;
    vopt.tension_tol = ctx.tolerance(check, "tension_tolerance", 1e-6);
    vopt.hwc_tol = ctx.tolerance(check, "hwc_tolerance", 1e-8);
    const auto samples = guarded_samples(check_box(check, g.domain), g.guard, g.coords,
                                         ctx.samples(check, 50), ctx.sampler_seed(check));
    const Verdict v = harmonic_morphism_verdict(sub.map4(), g, flat_connection_field(2),
                                                builtin_metric("flat-r2"), samples, vopt);
    return verdict_result(check.name, v);
}

CheckResult run_boundary_hwc(RunContext& ctx, const CheckSpec& check) {
    const SurfaceSubmersion& sub = ctx.submersion(check);
    const MetricChart& g = ctx.metric(check);
    if (g.dim != 3) throw ConfigError("check '" + check.name + "' needs a 3-dimensional metric");
    const MapFunction phi = sub.map3();
    const MetricChart& target = builtin_metric("flat-r2");
    return sweep(check.name, ctx.tolerance(check, "tolerance", 1e-8),
                 check_box(check, g.domain), check_guard(check, g.guard), g.coords,
                 ctx.samples(check, 60), ctx.sampler_seed(check),
                 [&](std::span<const double> p) {
                     return hwc_residual(phi(p), g, p, target).residual;
                 });
}

CheckResult run_nijenhuis(RunContext& ctx, const CheckSpec& check, bool exactly_one) {
    const SurfaceSubmersion& sub = ctx.submersion(check);
    const MetricChart& g = ctx.metric(check);
    const MatrixField Jp = hermitian_field(sub.map4(), g, +1.0);
    const MatrixField Jm = hermitian_field(sub.map4(), g, -1.0);

    CheckResult out;
    out.name = check.name;
    out.tolerance = ctx.tolerance(check, "tolerance", 1e-6);
    out.sample_count = ctx.samples(check, 50);
    double worst_pos = 0.0, worst_neg = 0.0;
    std::vector<double> worst_pos_pt, worst_neg_pt;
    HaltonSampler sampler(check_box(check, g.domain), ctx.sampler_seed(check));
    for (int k = 0; k < out.sample_count; ++k) {
        const std::vector<double> p = sampler.next_in(g.guard, g.coords);
        try {
            const double rp = nijenhuis_residual(Jp, p);
            const double rm = nijenhuis_residual(Jm, p);
            if (rp >= worst_pos) {
                worst_pos = rp;
                worst_pos_pt = p;
            }
            if (rm >= worst_neg) {
                worst_neg = rm;
                worst_neg_pt = p;
            }
        } catch (const Error& e) {
            out.errors.push_back({p, e.kind()});
        }
    }
    if (worst_pos <= worst_neg) {
        out.max_residual = worst_pos;
        out.worst_point = worst_pos_pt;
    } else {
        out.max_residual = worst_neg;
        out.worst_point = worst_neg_pt;
    }
    if (exactly_one && std::max(worst_pos, worst_neg) <= out.tolerance)
        out.errors.push_back({{}, "AmbiguousOrientation"});
    out.pass = out.errors.empty() && out.max_residual <= out.tolerance;
    return out;
}

CheckResult run_isotropic_frobenius(RunContext& ctx, const CheckSpec& check) {
    const SurfaceSubmersion& sub = ctx.submersion(check);
    const MetricChart& g = ctx.metric(check);
    if (g.dim != 3) throw ConfigError("check '" + check.name + "' needs a 3-dimensional metric");
    const MapFunction phi = sub.map3();
    const VectorFieldJets dplus = isotropic_direction_field(phi, g, +1);
    const VectorFieldJets dminus = isotropic_direction_field(phi, g, -1);
    const VectorFieldJets vert = vertical_field_3to2(phi);
    return sweep(check.name, ctx.tolerance(check, "tolerance", 1e-6),
                 check_box(check, g.domain), check_guard(check, g.guard), g.coords,
                 ctx.samples(check, 100), ctx.sampler_seed(check),
                 [&](std::span<const double> p) {
                     return std::max(frobenius_residual({dplus, vert}, p),
                                     frobenius_residual({dminus, vert}, p));
                 });
}

CheckResult run_sky_tangency(RunContext& ctx, const CheckSpec& check) {
    CheckResult out;
    out.name = check.name;
    out.tolerance = ctx.tolerance(check, "tolerance", 1e-10);
    out.sample_count = ctx.samples(check, 100);
    std::mt19937_64 rng(ctx.sampler_seed(check) + 17);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    for (int k = 0; k < out.sample_count; ++k) {
        // boundary points carry the skies; interior twistor lines are
        // transverse to the contact distribution
        const Quaternion x{d(rng), d(rng), d(rng), 0.0};
        Complex sigma(d(rng), d(rng)), tau(d(rng), d(rng));
        if (std::abs(sigma) + std::abs(tau) < 0.1) sigma += 0.5;
        const Complex dsigma(d(rng), d(rng)), dtau(d(rng), d(rng));
        const double r = std::abs(contact_pairing(sky_point(x, sigma, tau),
                                                  sky_tangent(x, dsigma, dtau)));
        if (r >= out.max_residual) {
            out.max_residual = r;
            out.worst_point = {x.a, x.b, x.c, x.d};
        }
    }
    out.pass = out.max_residual <= out.tolerance;
    return out;
}

CheckResult run_einstein(RunContext& ctx, const CheckSpec& check) {
    const MetricChart& g = ctx.metric(check);
    return sweep(check.name, ctx.tolerance(check, "tolerance", 1e-6), check_box(check, g.domain),
                 g.guard, g.coords, ctx.samples(check, 100), ctx.sampler_seed(check),
                 [&](std::span<const double> p) { return einstein_residual(g, p); });
}

CheckResult run_scalar(RunContext& ctx, const CheckSpec& check) {
    const MetricChart& g = ctx.metric(check);
    const double expected = check.number("expected", 0.0);
    return sweep(check.name, ctx.tolerance(check, "tolerance", 1e-6), check_box(check, g.domain),
                 g.guard, g.coords, ctx.samples(check, 100), ctx.sampler_seed(check),
                 [&](std::span<const double> p) {
                     return std::abs(scalar_curvature(g, p) - expected);
                 });
}

CheckResult run_weyl_norm(RunContext& ctx, const CheckSpec& check, bool asd_only) {
    const MetricChart& g = ctx.metric(check);
    return sweep(check.name, ctx.tolerance(check, "tolerance", 1e-6), check_box(check, g.domain),
                 g.guard, g.coords, ctx.samples(check, 100), ctx.sampler_seed(check),
                 [&](std::span<const double> p) {
                     const WeylNorms n = weyl_split(g, p);
                     return asd_only ? std::min(n.w_plus, n.w_minus) : n.w;
                 });
}

CheckResult run_einstein_weyl(RunContext& ctx, const CheckSpec& check) {
    const WeylStructure& w = ctx.weyl(check);
    return sweep(check.name, ctx.tolerance(check, "tolerance", 1e-6), w.h.domain, w.h.guard,
                 w.h.coords, ctx.samples(check, 50), ctx.sampler_seed(check),
                 [&](std::span<const double> p) { return einstein_weyl_residual(w, p); });
}

CheckResult run_weyl_scalar(RunContext& ctx, const CheckSpec& check) {
    const WeylStructure& w = ctx.weyl(check);
    const double expected = check.number("expected", 0.0);
    return sweep(check.name, ctx.tolerance(check, "tolerance", 1e-6), w.h.domain, w.h.guard,
                 w.h.coords, ctx.samples(check, 50), ctx.sampler_seed(check),
                 [&](std::span<const double> p) { return std::abs(weyl_scalar(w, p) - expected); });
}

CheckResult run_calderbank_metric_check(RunContext& ctx, const CheckSpec& check,
                                        const std::string& mode) {
    const HSpaceChart& h = ctx.hspace(check);
    const double expected = check.number("expected", 0.0);
    return sweep(check.name, ctx.tolerance(check, "tolerance", 1e-6), h.g.domain, h.g.guard,
                 h.g.coords, ctx.samples(check, 100), ctx.sampler_seed(check),
                 [&](std::span<const double> p) {
                     if (mode == "einstein") return einstein_residual(h.g, p);
                     if (mode == "scalar") return std::abs(scalar_curvature(h.g, p) - expected);
                     const WeylNorms n = weyl_split(h.g, p);
                     return mode == "asd" ? std::min(n.w_plus, n.w_minus) : n.w;
                 });
}

CheckResult run_pole(RunContext& ctx, const CheckSpec& check) {
    const HSpaceChart& h = ctx.hspace(check);
    const double t_probe = check.number("t_probe", 1e-4);
    return sweep(check.name, ctx.tolerance(check, "tolerance", 1e-6), h.base.h.domain,
                 h.base.h.guard, h.base.h.coords, ctx.samples(check, 25), ctx.sampler_seed(check),
                 [&](std::span<const double> x) { return pole_check(h, x, t_probe); });
}

CheckResult run_retract_verdict(RunContext& ctx, const CheckSpec& check) {
    const HSpaceChart& h = ctx.hspace(check);
    const MapChart psi = retract(h);
    VerdictOptions vopt;
    vopt.tension_tol = ctx.tolerance(check, "tension_tolerance", 1e-6);
    vopt.hwc_tol = ctx.tolerance(check, "hwc_tolerance", 1e-6);
    const auto samples = guarded_samples(h.g.domain, h.g.guard, h.g.coords,
                                         ctx.samples(check, 50), ctx.sampler_seed(check));
    const Verdict v = harmonic_morphism_verdict(psi.function(), h.g,
                                                weyl_connection_field(h.base), h.base.h, samples, vopt);
    return verdict_result(check.name, v);
}

CheckResult run_retract_dilation(RunContext& ctx, const CheckSpec& check) {
    const HSpaceChart& h = ctx.hspace(check);
    const MapChart psi = retract(h);
    const MapFunction fn = psi.function();
    const ExprPtr expected = parse_expression(check.require("expected"));
    return sweep(check.name, ctx.tolerance(check, "tolerance", 1e-8), h.g.domain, h.g.guard,
                 h.g.coords, ctx.samples(check, 50), ctx.sampler_seed(check),
                 [&](std::span<const double> p) {
                     const HwcResult r = hwc_residual(fn(p), h.g, p, h.base.h);
                     const double want =
                         eval_value(expected, chart_value_env(h.g.coords, p)).real();
                     return std::abs(r.dilation - want);
                 });
}

CheckResult run_compose_verdict(RunContext& ctx, const CheckSpec& check) {
    const HSpaceChart& h = ctx.hspace(check);
    const MapChart& f = ctx.map(check);
    const MapChart lifted = compose_extension(f, h);
    VerdictOptions vopt;
    vopt.tension_tol = ctx.tolerance(check, "tension_tolerance", 1e-6);
    vopt.hwc_tol = ctx.tolerance(check, "hwc_tolerance", 1e-8);
    const auto samples = guarded_samples(h.g.domain, lifted.guard, h.g.coords,
                                         ctx.samples(check, 40), ctx.sampler_seed(check));
    const Verdict v = harmonic_morphism_verdict(lifted.function(), h.g, flat_connection_field(2),
                                                builtin_metric("flat-r2"), samples, vopt);
    return verdict_result(check.name, v);
}

// deterministic random expressions over a singularity-free grammar
ExprPtr random_expression(std::mt19937_64& rng, int depth) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 7);
    std::uniform_real_distribution<double> coef(-1.5, 1.5);
    switch (pick(rng)) {
        case 0: return num(coef(rng));
        case 1: {
            std::uniform_int_distribution<int> v(1, 2);
            return var("x" + std::to_string(v(rng)));
        }
        case 2: return add(random_expression(rng, depth - 1), random_expression(rng, depth - 1));
        case 3: return mul(random_expression(rng, depth - 1), random_expression(rng, depth - 1));
        case 4: {
            const char* fn[] = {"sin", "cos", "exp"};
            std::uniform_int_distribution<int> f(0, 2);
            return call(fn[f(rng)], random_expression(rng, depth - 1));
        }
        case 5: {
            const ExprPtr s = random_expression(rng, depth - 1);
            std::uniform_int_distribution<int> f(0, 1);
            return f(rng) == 0 ? call("log", add(num(2.0), mul(s, s)))
                               : call("sqrt", add(num(1.0), mul(s, s)));
        }
        case 6:
            return div(random_expression(rng, depth - 1),
                       add(num(2.0), pow(random_expression(rng, depth - 1), 2)));
        default: {
            std::uniform_int_distribution<int> k(2, 3);
            return pow(random_expression(rng, depth - 1), k(rng));
        }
    }
}

CheckResult run_jet_oracle(RunContext& ctx, const CheckSpec& check) {
    CheckResult out;
    out.name = check.name;
    out.tolerance = 1.0;  // residual is normalized by the per-order tolerances
    out.sample_count = ctx.samples(check, 500);
    const double grad_tol = ctx.tolerance(check, "grad_tolerance", 1e-6);
    const double hess_tol = ctx.tolerance(check, "hess_tolerance", 1e-4);

    std::mt19937_64 rng(ctx.sampler_seed(check) + 99);
    std::uniform_real_distribution<double> pt(-0.8, 0.8);
    int produced = 0;
    while (produced < out.sample_count) {
        const ExprPtr e = random_expression(rng, 4);
        const std::vector<double> p{pt(rng), pt(rng)};
        JetEnv env;
        env.emplace("x1", Jet2::variable(2, 0, p[0]));
        env.emplace("x2", Jet2::variable(2, 1, p[1]));
        Jet2 jet;
        try {
            jet = eval_jet(e, env);
        } catch (const Error&) {
            continue;  // grammar keeps singularities rare; skip if hit
        }
        if (std::abs(jet.value()) > 1e3) continue;  // avoid fd cancellation regimes
        ++produced;
        const FdDerivatives fd = fd_derivatives(
            [&](std::span<const double> q) {
                ValueEnv venv;
                venv.emplace("x1", Complex(q[0], 0.0));
                venv.emplace("x2", Complex(q[1], 0.0));
                return eval_value(e, venv);
            },
            p);
        double ratio = 0.0;
        for (int i = 0; i < 2; ++i) {
            const double scale = std::max(1.0, std::abs(jet.grad(i)));
            ratio = std::max(
                ratio, std::abs(jet.grad(i) - fd.grad[static_cast<std::size_t>(i)]) / scale / grad_tol);
        }
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                const double scale = std::max(1.0, std::abs(jet.hess(i, j)));
                ratio = std::max(ratio,
                                 std::abs(jet.hess(i, j) - fd.hess[static_cast<std::size_t>(i * 2 + j)]) /
                                     scale / hess_tol);
            }
        if (ratio >= out.max_residual) {
            out.max_residual = ratio;
            out.worst_point = p;
        }
    }
    out.pass = out.max_residual <= out.tolerance;
    return out;
}

CheckResult run_quaternion_laws(RunContext& ctx, const CheckSpec& check) {
    CheckResult out;
    out.name = check.name;
    out.tolerance = ctx.tolerance(check, "tolerance", 1e-12);
    out.sample_count = ctx.samples(check, 1000);
    std::mt19937_64 rng(ctx.sampler_seed(check) + 7);
    std::uniform_real_distribution<double> d(-2.0, 2.0);
    for (int k = 0; k < out.sample_count; ++k) {
        const Quaternion p{d(rng), d(rng), d(rng), d(rng)};
        const Quaternion q{d(rng), d(rng), d(rng), d(rng)};
        const Quaternion r{d(rng), d(rng), d(rng), d(rng)};
        double worst = std::abs(quat_norm(quat_mul(p, q)) - quat_norm(p) * quat_norm(q)) /
                       std::max(1.0, quat_norm(p) * quat_norm(q));
        const Quaternion assoc = quat_mul(quat_mul(p, q), r) - quat_mul(p, quat_mul(q, r));
        worst = std::max(worst, quat_norm(assoc) / std::max(1.0, quat_norm(p) * quat_norm(q) *
                                                                     quat_norm(r)));
        if (quat_norm(q) > 1e-3) {
            const Quaternion unit = quat_mul(q, quat_inv(q)) - Quaternion{1, 0, 0, 0};
            worst = std::max(worst, quat_norm(unit));
        }
        if (worst >= out.max_residual) {
            out.max_residual = worst;
            out.worst_point = {p.a, p.b, p.c, p.d};
        }
    }
    out.pass = out.max_residual <= out.tolerance;
    return out;
}

CheckResult dispatch(RunContext& ctx, const CheckSpec& check) {
    if (check.type == "contact") return run_contact(ctx, check);
    if (check.type == "holomorphy") return run_holomorphy(ctx, check);
    if (check.type == "incidence-roundtrip") return run_roundtrip(ctx, check);
    if (check.type == "submersion-formula") return run_formula(ctx, check);
    if (check.type == "pipeline-verdict") return run_pipeline_verdict(ctx, check);
    if (check.type == "boundary-hwc") return run_boundary_hwc(ctx, check);
    if (check.type == "nijenhuis-positivity") return run_nijenhuis(ctx, check, true);
    if (check.type == "nijenhuis-best") return run_nijenhuis(ctx, check, false);
    if (check.type == "isotropic-frobenius") return run_isotropic_frobenius(ctx, check);
    if (check.type == "sky-tangency") return run_sky_tangency(ctx, check);
    if (check.type == "einstein") return run_einstein(ctx, check);
    if (check.type == "scalar-curvature") return run_scalar(ctx, check);
    if (check.type == "weyl-flat") return run_weyl_norm(ctx, check, false);
    if (check.type == "weyl-asd") return run_weyl_norm(ctx, check, true);
    if (check.type == "einstein-weyl") return run_einstein_weyl(ctx, check);
    if (check.type == "weyl-scalar") return run_weyl_scalar(ctx, check);
    if (check.type == "calderbank-einstein") return run_calderbank_metric_check(ctx, check, "einstein");
    if (check.type == "calderbank-scalar") return run_calderbank_metric_check(ctx, check, "scalar");
    if (check.type == "calderbank-asd") return run_calderbank_metric_check(ctx, check, "asd");
    if (check.type == "calderbank-flatness") return run_calderbank_metric_check(ctx, check, "flat");
    if (check.type == "pole") return run_pole(ctx, check);
    if (check.type == "retract-verdict") return run_retract_verdict(ctx, check);
    if (check.type == "retract-dilation") return run_retract_dilation(ctx, check);
    if (check.type == "compose-verdict") return run_compose_verdict(ctx, check);
    if (check.type == "jet-oracle") return run_jet_oracle(ctx, check);
    if (check.type == "quaternion-laws") return run_quaternion_laws(ctx, check);
    throw ConfigError("check '" + check.name + "' has unknown type '" + check.type + "'");
}

void validate_references(const Config& cfg, const RunOptions& options) {
    RunContext probe{cfg, options, {}, {}};
    for (const CheckSpec& check : cfg.checks) {
        for (const auto& [key, value] : check.keys) {
            if (key == "metric") (void)probe.metric(check);
            if (key == "weyl") (void)probe.weyl(check);
            if (key == "surface") (void)probe.surface(check);
            if (key == "map") (void)probe.map(check);
            if (key == "reference") (void)probe.map(check, "reference");
            if (key == "domain") (void)parse_ranges(value, "check '" + check.name + "' domain");
            if (key == "guard") (void)parse_predicate(value);
        }
    }
}

}  // namespace

Report run_suite(const Config& config, const RunOptions& options) {
    validate_references(config, options);

    Report report;
    report.seed = options.seed;
    report.version = kToolVersion;
    report.config_digest = digest_string(config.source_text);

    RunContext ctx{config, options, {}, {}};
    for (const CheckSpec& check : config.checks) {
        try {
            report.checks.push_back(dispatch(ctx, check));
        } catch (const ConfigError&) {
            throw;
        } catch (const Error& e) {
            CheckResult failed;
            failed.name = check.name;
            failed.tolerance = check.number("tolerance", 0.0);
            failed.sample_count = 0;
            failed.pass = false;
            failed.errors.push_back({{}, e.kind()});
            report.checks.push_back(std::move(failed));
        }
    }
    std::sort(report.checks.begin(), report.checks.end(),
              [](const CheckResult& a, const CheckResult& b) { return a.name < b.name; });
    return report;
}

}  // namespace hspace
