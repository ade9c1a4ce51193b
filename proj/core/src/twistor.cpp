#include "hspace/twistor.hpp"

#include <algorithm>
#include <cmath>

#include "hspace/halton.hpp"
#include "linalg.hpp"

namespace hspace {

namespace {

JetEnv parameter_env(Complex u, Complex v) {
    JetEnv env;
    Jet2 ju = Jet2::variable(4, 0, u);
    ju = ju + Jet2(Complex(0.0, 1.0)) * Jet2::variable(4, 1, 0.0);
    Jet2 jv = Jet2::variable(4, 2, v);
    jv = jv + Jet2(Complex(0.0, 1.0)) * Jet2::variable(4, 3, 0.0);
    env.emplace("u", std::move(ju));
    env.emplace("v", std::move(jv));
    return env;
}

}  // namespace

Complex contact_pairing(const std::array<Complex, 4>& z, const std::array<Complex, 4>& w) {
    return z[0] * w[2] - z[2] * w[0] - z[1] * w[3] + z[3] * w[1];
}

std::array<Jet2, 4> eval_patch(const SurfacePatch& s, Complex u, Complex v) {
    const JetEnv env = parameter_env(u, v);
    return {eval_jet(s.z[0], env), eval_jet(s.z[1], env), eval_jet(s.z[2], env),
            eval_jet(s.z[3], env)};
}

Complex contact_residual(const SurfacePatch& s, Complex u, Complex v) {
    const std::array<Jet2, 4> z = eval_patch(s, u, v);
    // holomorphic v-derivative = derivative along the v_re direction
    std::array<Complex, 4> val{}, dv{};
    for (int j = 0; j < 4; ++j) {
        val[static_cast<std::size_t>(j)] = z[static_cast<std::size_t>(j)].value();
        dv[static_cast<std::size_t>(j)] = z[static_cast<std::size_t>(j)].grad(2);
    }
    return contact_pairing(val, dv);
}

double cauchy_riemann_residual(const SurfacePatch& s, Complex u, Complex v) {
    const std::array<Jet2, 4> z = eval_patch(s, u, v);
    double worst = 0.0;
    for (int j = 0; j < 4; ++j) {
        const Complex du_bar =
            0.5 * (z[static_cast<std::size_t>(j)].grad(0) + Complex(0.0, 1.0) * z[static_cast<std::size_t>(j)].grad(1));
        const Complex dv_bar =
            0.5 * (z[static_cast<std::size_t>(j)].grad(2) + Complex(0.0, 1.0) * z[static_cast<std::size_t>(j)].grad(3));
        worst = std::max({worst, std::abs(du_bar), std::abs(dv_bar)});
    }
    return worst;
}

SurfacePatch conjugate_surface(const SurfacePatch& s) {
    const std::map<std::string, ExprPtr> conj_params{{"u", call("conj", var("u"))},
                                                     {"v", call("conj", var("v"))}};
    auto conjugated = [&](const ExprPtr& e) { return call("conj", substitute(e, conj_params)); };
    SurfacePatch out;
    out.name = s.name.empty() ? "conjugate" : s.name + "-conjugate";
    out.z = {neg(conjugated(s.z[1])), conjugated(s.z[0]), neg(conjugated(s.z[3])),
             conjugated(s.z[2])};
    out.domain = s.domain;
    if (out.domain.dim() == 4) {
        // parameters are conjugated: the imaginary-part intervals flip
        std::swap(out.domain.lo[1], out.domain.hi[1]);
        out.domain.lo[1] = -out.domain.lo[1];
        out.domain.hi[1] = -out.domain.hi[1];
        std::swap(out.domain.lo[3], out.domain.hi[3]);
        out.domain.lo[3] = -out.domain.lo[3];
        out.domain.hi[3] = -out.domain.hi[3];
    }
    return out;
}

std::array<Jet2, 4> incidence_jets(const SurfacePatch& s, Complex u, Complex v) {
    const std::array<Jet2, 4> z = eval_patch(s, u, v);
    const QuaternionT<Jet2> q1{real_part(z[0]), imag_part(z[0]), real_part(z[1]), imag_part(z[1])};
    const QuaternionT<Jet2> q2{real_part(z[2]), imag_part(z[2]), real_part(z[3]), imag_part(z[3])};
    const Jet2 n2 = q1.norm_sq();
    if (std::sqrt(std::abs(n2.value())) <= kQuaternionSingular)
        throw IncidenceAtInfinity("z1 + z2 j vanishes at the parameters");
    const QuaternionT<Jet2> q1c = q1.conjugate();
    const QuaternionT<Jet2> prod = q1c * q2;
    return {prod.a / n2, prod.b / n2, prod.c / n2, prod.d / n2};
}

std::array<double, 4> incidence_point(const SurfacePatch& s, Complex u, Complex v) {
    const std::array<Jet2, 4> x = incidence_jets(s, u, v);
    return {x[0].value().real(), x[1].value().real(), x[2].value().real(), x[3].value().real()};
}

namespace {

struct NewtonState {
    std::array<double, 4> w;  // (u_re, u_im, v_re, v_im)
};

std::array<double, 4> newton_solve(const SurfacePatch& s, std::span<const double> x,
                                   std::array<double, 4> w, const NewtonOptions& opt) {
    double last_step = std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < opt.max_iterations; ++iter) {
        const std::array<Jet2, 4> fx = incidence_jets(s, Complex(w[0], w[1]), Complex(w[2], w[3]));
        std::array<double, 4> F{};
        double residual = 0.0;
        for (int i = 0; i < 4; ++i) {
            F[static_cast<std::size_t>(i)] =
                fx[static_cast<std::size_t>(i)].value().real() - x[static_cast<std::size_t>(i)];
            residual = std::max(residual, std::abs(F[static_cast<std::size_t>(i)]));
        }
        if (residual < opt.residual_tol && last_step < opt.step_tol) return w;

        std::vector<double> A(16, 0.0);
        double scale = 0.0;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                A[static_cast<std::size_t>(i * 4 + j)] = fx[static_cast<std::size_t>(i)].grad(j).real();
                scale = std::max(scale, std::abs(A[static_cast<std::size_t>(i * 4 + j)]));
            }
        const double det = linalg::det(A, 4);
        if (std::abs(det) < 1e-13 * std::max(1.0, scale * scale * scale * scale))
            throw SingularJacobian("incidence Jacobian is singular near the iterate");

        std::vector<double> rhs(4);
        for (int i = 0; i < 4; ++i) rhs[static_cast<std::size_t>(i)] = -F[static_cast<std::size_t>(i)];
        linalg::solve_in_place(A, rhs, 4, 1);
        last_step = 0.0;
        for (int i = 0; i < 4; ++i) {
            w[static_cast<std::size_t>(i)] += rhs[static_cast<std::size_t>(i)];
            last_step = std::max(last_step, std::abs(rhs[static_cast<std::size_t>(i)]));
        }
        if (s.domain.dim() == 4 && !s.domain.contains(w, opt.domain_inflation))
            throw OutOfDomain("Newton iterate escaped the inflated parameter domain");
    }
    throw NoConvergence("Newton did not converge within the iteration limit");
}

}  // namespace

std::pair<Complex, Complex> invert_incidence(const SurfacePatch& s, std::span<const double> x,
                                             std::pair<Complex, Complex> guess,
                                             const NewtonOptions& options) {
    const std::array<double, 4> w = newton_solve(
        s, x,
        {guess.first.real(), guess.first.imag(), guess.second.real(), guess.second.imag()},
        options);
    return {Complex(w[0], w[1]), Complex(w[2], w[3])};
}

SurfaceSubmersion SurfaceSubmersion::build(SurfacePatch s, std::vector<SeedEntry> seeds,
                                           int validation_samples, const NewtonOptions& options) {
    if (seeds.empty()) throw ContactViolation("empty seed table");
    HaltonSampler sampler(s.domain, 1);
    for (int k = 0; k < validation_samples; ++k) {
        const std::vector<double> q = sampler.next();
        const Complex u(q[0], q[1]), v(q[2], q[3]);
        const double cr = std::abs(contact_residual(s, u, v));
        if (cr > 1e-10)
            throw ContactViolation("contact residual " + std::to_string(cr) +
                                   " above 1e-10 on the patch domain");
        if (cauchy_riemann_residual(s, u, v) > 1e-8)
            throw ContactViolation("patch components are not holomorphic in the parameters");
    }
    return SurfaceSubmersion(std::move(s), std::move(seeds), options);
}

std::array<double, 4> SurfaceSubmersion::solve(std::span<const double> x) const {
    const SeedEntry* seed = nullptr;
    for (const auto& entry : seeds_)
        if (entry.region.contains(x)) {
            seed = &entry;
            break;
        }
    if (!seed) seed = &seeds_.front();

    // Continuation along the straight path from the seed's image is the only
    // route: Newton straight from the guess can silently land on the wrong
    // inversion branch, while short warm-started steps stay on the branch the
    // seed selects.
    const std::array<double, 4> w0 = seed->guess;
    const std::array<Jet2, 4> fx = incidence_jets(patch_, Complex(w0[0], w0[1]), Complex(w0[2], w0[3]));
    std::array<double, 4> x_ref{};
    double dist = 0.0;
    for (int i = 0; i < 4; ++i) {
        x_ref[static_cast<std::size_t>(i)] = fx[static_cast<std::size_t>(i)].value().real();
        const double d = x[static_cast<std::size_t>(i)] - x_ref[static_cast<std::size_t>(i)];
        dist += d * d;
    }
    dist = std::sqrt(dist);

    constexpr double kMaxStep = 0.25;
    int steps = std::max(1, static_cast<int>(std::ceil(dist / kMaxStep)));
    for (; steps <= 1024; steps *= 2) {
        std::array<double, 4> w = w0;
        bool ok = true;
        for (int k = 1; k <= steps && ok; ++k) {
            const double t = static_cast<double>(k) / steps;
            std::array<double, 4> xt{};
            for (int i = 0; i < 4; ++i)
                xt[static_cast<std::size_t>(i)] =
                    (1.0 - t) * x_ref[static_cast<std::size_t>(i)] + t * x[static_cast<std::size_t>(i)];
            try {
                w = newton_solve(patch_, xt, w, options_);
            } catch (const Error&) {
                ok = false;
            }
        }
        if (ok) return w;
    }
    throw NoConvergence("continuation failed to reach the requested point");
}

std::pair<Complex, Complex> SurfaceSubmersion::parameters_at(std::span<const double> x) const {
    const std::array<double, 4> w = solve(x);
    return {Complex(w[0], w[1]), Complex(w[2], w[3])};
}

namespace {

/// Jets of the inverse parameters w(x) at a solved point, by implicit
/// differentiation of the incidence map.
struct InverseJets {
    std::array<double, 4> w;
    std::vector<double> dw;    // [b][i] = d w_b / d x_i
    std::vector<double> ddw;   // [b][i][j]
};

InverseJets implicit_jets(const SurfacePatch& s, const std::array<double, 4>& w) {
    const std::array<Jet2, 4> fx = incidence_jets(s, Complex(w[0], w[1]), Complex(w[2], w[3]));
    std::vector<double> A(16, 0.0);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) A[static_cast<std::size_t>(i * 4 + j)] = fx[static_cast<std::size_t>(i)].grad(j).real();
    std::vector<double> Ainv;
    try {
        Ainv = linalg::inverse(A, 4);
    } catch (const SingularMetric&) {
        throw SingularJacobian("incidence Jacobian is singular at the solution");
    }

    InverseJets out;
    out.w = w;
    out.dw.assign(16, 0.0);
    out.ddw.assign(64, 0.0);
    // dw_b/dx_i = (A^{-1})_{bi}
    out.dw = Ainv;
    // dd w_b = -Ainv_{ba} H^a_{cd} Ainv_{ci} Ainv_{dj}
    for (int b = 0; b < 4; ++b)
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                double s2 = 0.0;
                for (int a = 0; a < 4; ++a)
                    for (int c = 0; c < 4; ++c)
                        for (int d = 0; d < 4; ++d)
                            s2 += Ainv[static_cast<std::size_t>(b * 4 + a)] *
                                  fx[static_cast<std::size_t>(a)].hess(c, d).real() *
                                  Ainv[static_cast<std::size_t>(c * 4 + i)] *
                                  Ainv[static_cast<std::size_t>(d * 4 + j)];
                out.ddw[static_cast<std::size_t>((b * 4 + i) * 4 + j)] = -s2;
            }
    return out;
}

}  // namespace

MapFunction SurfaceSubmersion::map4() const {
    const SurfaceSubmersion self = *this;
    return [self](std::span<const double> x) {
        if (x.size() != 4) throw DimensionError("expected a 4-dimensional point");
        const std::array<double, 4> w = self.solve(x);
        const InverseJets inv = implicit_jets(self.patch_, w);
        MapJets out;
        out.source_dim = 4;
        out.target_dim = 2;
        for (int b = 0; b < 2; ++b) {
            std::vector<Complex> grad(4), hess(16);
            for (int i = 0; i < 4; ++i) grad[static_cast<std::size_t>(i)] = inv.dw[static_cast<std::size_t>(b * 4 + i)];
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j)
                    hess[static_cast<std::size_t>(i * 4 + j)] = inv.ddw[static_cast<std::size_t>((b * 4 + i) * 4 + j)];
            out.t.push_back(Jet2::from_parts(4, inv.w[static_cast<std::size_t>(b)], grad, hess));
        }
        return out;
    };
}

MapFunction SurfaceSubmersion::map3() const {
    const SurfaceSubmersion self = *this;
    return [self](std::span<const double> p) {
        if (p.size() != 3) throw DimensionError("expected a 3-dimensional point");
        const std::array<double, 4> x{p[0], p[1], p[2], 0.0};
        const std::array<double, 4> w = self.solve(x);
        const InverseJets inv = implicit_jets(self.patch_, w);
        MapJets out;
        out.source_dim = 3;
        out.target_dim = 2;
        for (int b = 0; b < 2; ++b) {
            std::vector<Complex> grad(3), hess(9);
            for (int i = 0; i < 3; ++i) grad[static_cast<std::size_t>(i)] = inv.dw[static_cast<std::size_t>(b * 4 + i)];
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    hess[static_cast<std::size_t>(i * 3 + j)] = inv.ddw[static_cast<std::size_t>((b * 4 + i) * 4 + j)];
            out.t.push_back(Jet2::from_parts(3, inv.w[static_cast<std::size_t>(b)], grad, hess));
        }
        return out;
    };
}

std::array<Complex, 4> sky_point(const Quaternion& x, Complex sigma, Complex tau) {
    const Quaternion lhs = embed_complex_pair(sigma, tau);
    const Quaternion q = lhs * x;
    return {sigma, tau, quat_complex_part(q), quat_j_part(q)};
}

ProjectivePoint sky(const Quaternion& x, Complex sigma, Complex tau) {
    if (std::abs(sigma) + std::abs(tau) < 1e-14)
        throw DomainError("sky parameter (sigma, tau) must be nonzero");
    ProjectivePoint p;
    p.z = sky_point(x, sigma, tau);
    return p;
}

std::array<Complex, 4> sky_tangent(const Quaternion& x, Complex dsigma, Complex dtau) {
    return sky_point(x, dsigma, dtau);
}

IsotropicDirections horizontal_isotropic_directions(const MapJets& mj, const MetricChart& g,
                                                    std::span<const double> p, double hwc_tol) {
    if (mj.source_dim != 3 || mj.target_dim != 2)
        throw DimensionError("isotropic directions require a 3 -> 2 map");
    MetricChart flat = make_diagonal_metric("flat-target", {"y1", "y2"}, {num(1.0), num(1.0)});
    const HwcResult hwc = hwc_residual(mj, g, p, flat);
    if (hwc.residual > hwc_tol * std::max(1.0, hwc.dilation))
        throw NotHorizontallyConformal("isotropic directions need a horizontally conformal map");

    const std::vector<double> gv = eval_metric_values(g, p);
    const std::vector<double> ginv = linalg::inverse(gv, 3);
    const std::vector<double> jac = differential(mj);

    std::array<std::array<double, 3>, 2> h{};
    for (int a = 0; a < 2; ++a)
        for (int i = 0; i < 3; ++i) {
            double s = 0.0;
            for (int j = 0; j < 3; ++j)
                s += ginv[static_cast<std::size_t>(i * 3 + j)] * jac[static_cast<std::size_t>(a * 3 + j)];
            h[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)] = s;
        }
    double n2 = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            n2 += gv[static_cast<std::size_t>(i * 3 + j)] * h[0][static_cast<std::size_t>(i)] * h[0][static_cast<std::size_t>(j)];
    if (n2 < 1e-20) throw NotSubmersive("vanishing horizontal frame");
    const double nrm = std::sqrt(n2);

    IsotropicDirections out;
    for (int i = 0; i < 3; ++i) {
        out.plus[static_cast<std::size_t>(i)] =
            Complex(h[0][static_cast<std::size_t>(i)] / nrm, h[1][static_cast<std::size_t>(i)] / nrm);
        out.minus[static_cast<std::size_t>(i)] =
            Complex(h[0][static_cast<std::size_t>(i)] / nrm, -h[1][static_cast<std::size_t>(i)] / nrm);
    }
    Complex iso = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            iso += gv[static_cast<std::size_t>(i * 3 + j)] * out.plus[static_cast<std::size_t>(i)] *
                   out.plus[static_cast<std::size_t>(j)];
    out.isotropy_residual = std::abs(iso);
    return out;
}

VectorFieldJets isotropic_direction_field(const MapFunction& f, const MetricChart& g, int sign,
                                          double hwc_tol) {
    const Complex unit(0.0, sign >= 0 ? 1.0 : -1.0);
    return [f, g, unit, hwc_tol](std::span<const double> p) {
        const MapJets mj = f(p);
        {
            MetricChart flat = make_diagonal_metric("flat-target", {"y1", "y2"}, {num(1.0), num(1.0)});
            const HwcResult hwc = hwc_residual(mj, g, p, flat);
            if (hwc.residual > hwc_tol * std::max(1.0, hwc.dilation))
                throw NotHorizontallyConformal("isotropic field needs a horizontally conformal map");
        }
        const MetricJets gj = eval_metric(g, p);
        const int n = 3;
        std::vector<Jet2> G(9), df(6);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                std::vector<Complex> grad(3);
                for (int m = 0; m < n; ++m) grad[static_cast<std::size_t>(m)] = gj.dg(m, i, j);
                G[static_cast<std::size_t>(i * 3 + j)] = Jet2::from_parts(3, gj.g(i, j), grad);
            }
        const std::vector<Jet2> Ginv = linalg::inverse(G, 3, Jet2::constant(3, 1.0));
        for (int a = 0; a < 2; ++a)
            for (int i = 0; i < n; ++i) {
                std::vector<Complex> grad(3);
                for (int m = 0; m < n; ++m) grad[static_cast<std::size_t>(m)] = mj.t[static_cast<std::size_t>(a)].hess(m, i);
                df[static_cast<std::size_t>(a * 3 + i)] =
                    Jet2::from_parts(3, mj.t[static_cast<std::size_t>(a)].grad(i), grad);
            }
        std::array<std::vector<Jet2>, 2> h;
        for (int a = 0; a < 2; ++a) {
            h[static_cast<std::size_t>(a)].assign(3, Jet2(0.0));
            for (int i = 0; i < n; ++i) {
                Jet2 s = Jet2(0.0);
                for (int j = 0; j < n; ++j)
                    s = s + Ginv[static_cast<std::size_t>(i * 3 + j)] * df[static_cast<std::size_t>(a * 3 + j)];
                h[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)] = s;
            }
        }
        Jet2 n2 = Jet2(0.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                n2 = n2 + G[static_cast<std::size_t>(i * 3 + j)] * h[0][static_cast<std::size_t>(i)] * h[0][static_cast<std::size_t>(j)];
        const Jet2 nrm = sqrt(n2);
        std::vector<Jet2> d(3);
        for (int i = 0; i < n; ++i)
            d[static_cast<std::size_t>(i)] =
                (h[0][static_cast<std::size_t>(i)] + Jet2(unit) * h[1][static_cast<std::size_t>(i)]) / nrm;
        return d;
    };
}

VectorFieldJets vertical_field_3to2(const MapFunction& f) {
    return [f](std::span<const double> p) {
        const MapJets mj = f(p);
        if (mj.source_dim != 3 || mj.target_dim != 2)
            throw DimensionError("vertical field requires a 3 -> 2 map");
        std::vector<Jet2> df(6);
        for (int a = 0; a < 2; ++a)
            for (int i = 0; i < 3; ++i) {
                std::vector<Complex> grad(3);
                for (int m = 0; m < 3; ++m) grad[static_cast<std::size_t>(m)] = mj.t[static_cast<std::size_t>(a)].hess(m, i);
                df[static_cast<std::size_t>(a * 3 + i)] =
                    Jet2::from_parts(3, mj.t[static_cast<std::size_t>(a)].grad(i), grad);
            }
        std::vector<Jet2> v(3, Jet2(0.0));
        for (int i = 0; i < 3; ++i) {
            const int j = (i + 1) % 3, k = (i + 2) % 3;
            v[static_cast<std::size_t>(i)] = df[static_cast<std::size_t>(0 * 3 + j)] * df[static_cast<std::size_t>(1 * 3 + k)] -
                                             df[static_cast<std::size_t>(0 * 3 + k)] * df[static_cast<std::size_t>(1 * 3 + j)];
        }
        return v;
    };
}

const SurfacePatch& builtin_surface(const std::string& name) {
    static const SurfacePatch model = [] {
        SurfacePatch s;
        s.name = "model-rotational";
        s.z = {num(1.0), var("v"), var("u"), mul(var("u"), var("v"))};
        s.domain.lo = {-1.2, 0.1, -1.2, -1.2};
        s.domain.hi = {1.2, 1.4, 1.2, 1.2};
        return s;
    }();
    static const SurfacePatch degenerate = [] {
        SurfacePatch s;
        s.name = "contact-violating";
        s.z = {num(1.0), var("u"), var("v"), num(0.0)};
        s.domain.lo = {-1.2, -1.2, -1.2, -1.2};
        s.domain.hi = {1.2, 1.2, 1.2, 1.2};
        return s;
    }();
    if (name == "model-rotational") return model;
    if (name == "contact-violating") return degenerate;
    throw ConfigError("unknown built-in surface: " + name);
}

std::vector<SeedEntry> builtin_seeds(const std::string& name) {
    if (name != "model-rotational") throw ConfigError("no built-in seeds for surface: " + name);
    std::vector<SeedEntry> seeds;
    auto box = [](std::vector<double> lo, std::vector<double> hi) {
        Box b;
        b.lo = std::move(lo);
        b.hi = std::move(hi);
        return b;
    };
    // bulk of the upper half-space x_D > 0
    seeds.push_back({box({-1.6, -1.6, -1.6, 0.05}, {1.6, 1.6, 1.6, 1.7}), {0.0, 0.825, 1.0, 0.0}});
    // mirrored bulk
    seeds.push_back({box({-1.6, -1.6, -1.6, -1.7}, {1.6, 1.6, 1.6, -0.05}), {0.0, 0.825, -1.0, 0.0}});
    // boundary slice, one region per (x_B, x_C) quadrant
    seeds.push_back({box({-1.6, -0.02, -0.02, -0.1}, {1.6, 1.6, 1.6, 0.1}), {0.0, 0.85, 0.0, -0.41}});
    seeds.push_back({box({-1.6, -0.02, -1.6, -0.1}, {1.6, 1.6, 0.02, 0.1}), {0.0, 0.85, 0.0, 0.41}});
    seeds.push_back({box({-1.6, -1.6, -0.02, -0.1}, {1.6, 0.02, 1.6, 0.1}), {0.0, 0.85, 0.0, -2.41}});
    seeds.push_back({box({-1.6, -1.6, -1.6, -0.1}, {1.6, 0.02, 0.02, 0.1}), {0.0, 0.85, 0.0, 2.41}});
    return seeds;
}

}  // namespace hspace
