#include "hspace/calderbank.hpp"

#include <cmath>
#include <sstream>

#include "hspace/halton.hpp"

namespace hspace {

namespace {

// expression-level inverse of a symmetric 3x3 matrix via the adjugate
struct SymbolicMetricInverse {
    ExprPtr det;
    std::array<std::array<ExprPtr, 3>, 3> inv;
};

SymbolicMetricInverse symbolic_inverse_3x3(const MetricChart& h) {
    auto at = [&](int i, int j) { return h.at(i, j); };
    auto minor2 = [&](int i0, int i1, int j0, int j1) {
        return sub(mul(at(i0, j0), at(i1, j1)), mul(at(i0, j1), at(i1, j0)));
    };
    SymbolicMetricInverse out;
    out.det = add(sub(mul(at(0, 0), minor2(1, 2, 1, 2)), mul(at(0, 1), minor2(1, 2, 0, 2))),
                  mul(at(0, 2), minor2(1, 2, 0, 1)));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const int r0 = (i + 1) % 3, r1 = (i + 2) % 3;
            const int c0 = (j + 1) % 3, c1 = (j + 2) % 3;
            // cofactor expansion keeps the adjugate sign inside the index cycle
            ExprPtr cof = sub(mul(at(r0, c0), at(r1, c1)), mul(at(r0, c1), at(r1, c0)));
            out.inv[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = hspace::div(cof, out.det);
        }
    return out;
}

// *da as three expression components: (*da)_k = 1/2 (da)^{ij} eps_{ijk}
std::array<ExprPtr, 3> symbolic_star_dalpha(const WeylStructure& w) {
    const SymbolicMetricInverse hinv = symbolic_inverse_3x3(w.h);
    // da_{ij} = d_i a_j - d_j a_i
    std::array<std::array<ExprPtr, 3>, 3> da;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            da[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                sub(derivative(w.alpha[static_cast<std::size_t>(j)], w.h.coords[static_cast<std::size_t>(i)]),
                    derivative(w.alpha[static_cast<std::size_t>(i)], w.h.coords[static_cast<std::size_t>(j)]));

    const ExprPtr vol = mul(num(w.h.orientation), call("sqrt", hinv.det));
    std::array<ExprPtr, 3> out{num(0.0), num(0.0), num(0.0)};
    for (int k = 0; k < 3; ++k) {
        ExprPtr sum = num(0.0);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                const int sign = (i == j || j == k || i == k)
                                     ? 0
                                     : (((j - i + 3) % 3 == 1 && (k - j + 3) % 3 == 1) ? 1 : -1);
                if (sign == 0) continue;
                // raise both indices of da with h^{-1}
                ExprPtr raised = num(0.0);
                for (int a = 0; a < 3; ++a)
                    for (int b = 0; b < 3; ++b)
                        raised = add(raised,
                                     mul(mul(hinv.inv[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)],
                                             hinv.inv[static_cast<std::size_t>(j)][static_cast<std::size_t>(b)]),
                                         da[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]));
                sum = add(sum, mul(num(0.5 * sign), raised));
            }
        out[static_cast<std::size_t>(k)] = mul(vol, sum);
    }
    return out;
}

}  // namespace

HSpaceChart calderbank_metric(const WeylStructure& w, const CalderbankOptions& options) {
    if (w.h.dim != 3) throw DimensionError("the base of an H-space chart must be 3-dimensional");

    // sample the scalar curvature of the Weyl connection; the symbolic
    // assembly needs it constant over the validated region
    Box box = w.h.domain;
    if (box.dim() != 3) throw DomainError("base chart has no sampling domain");
    HaltonSampler sampler(box, 7);
    double s_min = 0.0, s_max = 0.0, ew_worst = 0.0;
    for (int k = 0; k < options.validation_samples; ++k) {
        const std::vector<double> p = sampler.next_in(w.h.guard, w.h.coords);
        const double s = weyl_scalar(w, p);
        ew_worst = std::max(ew_worst, einstein_weyl_residual(w, p));
        if (k == 0) {
            s_min = s_max = s;
        } else {
            s_min = std::min(s_min, s);
            s_max = std::max(s_max, s);
        }
    }
    const double S = 0.5 * (s_min + s_max);
    if (s_max - s_min > options.scalar_spread_tol * std::max(1.0, std::abs(S)))
        throw NonConstantScalar("scalar curvature varies over the base; cannot assemble the chart");
    if (ew_worst > options.einstein_weyl_warn_tol && options.warn)
        options.warn("base is not Einstein-Weyl within tolerance (residual " +
                     std::to_string(ew_worst) + "); the output chart will not be Einstein");

    // conformal factor f(t) = 1 - t^2 S / 6 and the 1-form
    // beta = dt + t a + t^2/2 (*da)
    const ExprPtr t = var("t");
    const ExprPtr f = sub(num(1.0), mul(num(S / 6.0), pow(t, 2)));
    const ExprPtr inv_t2 = hspace::div(num(1.0), pow(t, 2));

    std::array<ExprPtr, 3> beta{num(0.0), num(0.0), num(0.0)};
    const bool with_alpha = !w.flat_lee_form();
    if (with_alpha) {
        const std::array<ExprPtr, 3> star_da = symbolic_star_dalpha(w);
        for (int i = 0; i < 3; ++i)
            beta[static_cast<std::size_t>(i)] =
                add(mul(t, w.alpha[static_cast<std::size_t>(i)]),
                    mul(mul(num(0.5), pow(t, 2)), star_da[static_cast<std::size_t>(i)]));
    }

    // assemble the 4x4 components in coordinates (t, x1, x2, x3):
    //   g_tt = t^{-2} f^{-1},  g_ti = t^{-2} f^{-1} beta_i,
    //   g_ij = t^{-2} (f h_ij + f^{-1} beta_i beta_j)
    std::vector<ExprPtr> upper;
    upper.push_back(mul(inv_t2, hspace::div(num(1.0), f)));              // g_tt
    for (int i = 0; i < 3; ++i)
        upper.push_back(mul(inv_t2, hspace::div(beta[static_cast<std::size_t>(i)], f)));  // g_ti
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
            ExprPtr term = mul(f, w.h.at(i, j));
            if (with_alpha)
                term = add(term, hspace::div(mul(beta[static_cast<std::size_t>(i)],
                                                 beta[static_cast<std::size_t>(j)]),
                                             f));
            upper.push_back(mul(inv_t2, term));
        }

    std::vector<std::string> coords{"t"};
    for (const auto& c : w.h.coords) coords.push_back(c);

    HSpaceChart out;
    out.base = w;
    out.scalar = S;
    out.g = make_metric(w.name.empty() ? "h-space" : "h-space(" + w.name + ")", coords,
                        std::move(upper), /*orientation=*/+1.0);

    // the connected component of {t > 0 : t^2 S - 6 != 0} containing small t
    if (S > 0.0) {
        const double t_cap = std::sqrt(6.0 / S);
        out.t_interval = {0.1 * std::min(1.0, t_cap), 0.9 * std::min(1.0, t_cap)};
    } else {
        out.t_interval = {0.1, 1.0};
    }
    {
        std::ostringstream guard_src;
        guard_src.precision(17);
        guard_src << "t > 0 && t^2*(" << S << ") - 6 != 0";
        out.g.guard = parse_predicate(guard_src.str());
    }
    out.g.domain.lo = {out.t_interval.first};
    out.g.domain.hi = {out.t_interval.second};
    for (int i = 0; i < 3; ++i) {
        out.g.domain.lo.push_back(w.h.domain.lo[static_cast<std::size_t>(i)]);
        out.g.domain.hi.push_back(w.h.domain.hi[static_cast<std::size_t>(i)]);
    }
    return out;
}

double pole_check(const HSpaceChart& h, std::span<const double> base_point, double t_probe) {
    if (base_point.size() != 3) throw DimensionError("pole_check expects a base point of dimension 3");
    const double cap = h.scalar > 0.0 ? std::sqrt(6.0 / h.scalar) : 1.0;
    if (t_probe <= 0.0 || t_probe >= cap)
        throw IntervalViolation("probe value lies outside the admissible t-interval");

    std::vector<double> p{t_probe, base_point[0], base_point[1], base_point[2]};
    const ValueEnv env4 = chart_value_env(h.g.coords, p);
    const std::vector<double> hv = eval_metric_values(h.base.h, base_point);

    double worst = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            const double gij = eval_value(h.g.at(i, j), env4).real();
            double limit = 0.0;
            if (i == 0 && j == 0) {
                limit = 1.0;
            } else if (i > 0 && j > 0) {
                limit = hv[static_cast<std::size_t>((i - 1) * 3 + (j - 1))];
            }
            worst = std::max(worst, std::abs(t_probe * t_probe * gij - limit));
        }
    return worst;
}

MapChart retract(const HSpaceChart& h) {
    MapChart m = make_map("retract", h.g.coords,
                          {var(h.g.coords[1]), var(h.g.coords[2]), var(h.g.coords[3])},
                          {ComponentKind::Real, ComponentKind::Real, ComponentKind::Real});
    m.domain = h.g.domain;
    m.guard = h.g.guard;
    return m;
}

MapChart compose_extension(const MapChart& f, const HSpaceChart& h) {
    if (f.source_dim() != 3) throw DimensionError("compose_extension expects a 3 -> 2 map");
    for (int i = 0; i < 3; ++i)
        if (f.source_coords[static_cast<std::size_t>(i)] != h.g.coords[static_cast<std::size_t>(i + 1)])
            throw DomainError("map coordinates do not match the base chart");
    MapChart m = make_map(f.name.empty() ? "extension" : f.name + "-extension", h.g.coords,
                          f.components, f.kinds);
    m.domain = h.g.domain;
    m.guard = h.g.guard;
    for (const auto& c : f.guard.terms) m.guard.terms.push_back(c);
    return m;
}

const WeylStructure& builtin_weyl(const std::string& name) {
    static const WeylStructure flat = [] {
        WeylStructure w;
        w.name = "flat-euclidean";
        w.h = make_diagonal_metric("flat-r3", {"x1", "x2", "x3"}, {num(1.0), num(1.0), num(1.0)});
        w.h.domain.lo = {-1.0, -1.0, -1.0};
        w.h.domain.hi = {1.0, 1.0, 1.0};
        w.alpha = {num(0.0), num(0.0), num(0.0)};
        return w;
    }();
    static const WeylStructure round = [] {
        WeylStructure w;
        w.name = "round-s3";
        // stereographic chart of the unit sphere: h = 4/(1+|x|^2)^2 delta
        const ExprPtr conf = hspace::div(
            num(4.0),
            pow(add(num(1.0), add(pow(var("x1"), 2), add(pow(var("x2"), 2), pow(var("x3"), 2)))), 2));
        w.h = make_diagonal_metric("round-s3", {"x1", "x2", "x3"}, {conf, conf, conf});
        w.h.domain.lo = {-1.0, -1.0, -1.0};
        w.h.domain.hi = {1.0, 1.0, 1.0};
        w.alpha = {num(0.0), num(0.0), num(0.0)};
        return w;
    }();
    static const WeylStructure hyperbolic = [] {
        WeylStructure w;
        w.name = "hyperbolic-3";
        const ExprPtr conf = hspace::div(num(1.0), pow(var("x3"), 2));
        w.h = make_diagonal_metric("hyperbolic-3", {"x1", "x2", "x3"}, {conf, conf, conf});
        w.h.guard = parse_predicate("x3 > 0.05");
        w.h.domain.lo = {-1.0, -1.0, 0.1};
        w.h.domain.hi = {1.0, 1.0, 1.0};
        w.alpha = {num(0.0), num(0.0), num(0.0)};
        return w;
    }();
    if (name == "flat-euclidean") return flat;
    if (name == "round-s3") return round;
    if (name == "hyperbolic-3") return hyperbolic;
    throw ConfigError("unknown built-in Weyl structure: " + name);
}

std::vector<std::string> builtin_weyl_names() { return {"flat-euclidean", "hyperbolic-3", "round-s3"}; }

}  // namespace hspace
