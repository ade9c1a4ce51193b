#include "hspace/maps.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "linalg.hpp"

namespace hspace {

namespace {
constexpr double kRealnessTol = 1e-8;

double require_real(Complex z, const char* what) {
    if (std::abs(z.imag()) > kRealnessTol * std::max(1.0, std::abs(z.real())))
        throw DomainError(std::string(what) + " has a non-real value");
    return z.real();
}
}  // namespace

int MapChart::target_dim() const {
    int n = 0;
    for (const ComponentKind k : kinds) n += (k == ComponentKind::ComplexPair) ? 2 : 1;
    return n;
}

bool MapChart::in_domain(std::span<const double> p) const {
    if (guard.trivial()) return true;
    return eval_predicate(guard, chart_value_env(source_coords, p));
}

MapFunction MapChart::function() const {
    const MapChart self = *this;
    return [self](std::span<const double> p) {
        const JetEnv env = chart_env(self.source_coords, p);
        MapJets out;
        out.source_dim = self.source_dim();
        for (std::size_t c = 0; c < self.components.size(); ++c) {
            const Jet2 j = eval_jet(self.components[c], env);
            if (self.kinds[c] == ComponentKind::ComplexPair) {
                out.t.push_back(real_part(j));
                out.t.push_back(imag_part(j));
            } else {
                out.t.push_back(real_part(j));
            }
        }
        out.target_dim = static_cast<int>(out.t.size());
        return out;
    };
}

MapChart make_map(std::string name, std::vector<std::string> source_coords,
                  std::vector<ExprPtr> components, std::vector<ComponentKind> kinds) {
    if (components.size() != kinds.size())
        throw DimensionError("component and kind counts disagree");
    MapChart m;
    m.name = std::move(name);
    m.source_coords = std::move(source_coords);
    m.components = std::move(components);
    m.kinds = std::move(kinds);
    return m;
}

ConnectionField flat_connection_field(int dim) {
    return [dim](std::span<const double>) {
        ConnectionJet c;
        c.dim = dim;
        c.gamma.assign(static_cast<std::size_t>(dim) * dim * dim, 0.0);
        c.dgamma.assign(static_cast<std::size_t>(dim) * dim * dim * dim, 0.0);
        return c;
    };
}

std::vector<double> differential(const MapJets& mj) {
    std::vector<double> jac(static_cast<std::size_t>(mj.target_dim) * mj.source_dim, 0.0);
    for (int a = 0; a < mj.target_dim; ++a)
        for (int i = 0; i < mj.source_dim; ++i)
            jac[static_cast<std::size_t>(a * mj.source_dim + i)] =
                require_real(mj.t[static_cast<std::size_t>(a)].grad(i), "map differential");
    return jac;
}

int differential_rank(const std::vector<double>& jac, int rows, int cols, double tol) {
    std::vector<double> A = jac;
    int rank = 0;
    for (int c = 0; c < cols && rank < rows; ++c) {
        int piv = -1;
        double best = tol;
        for (int r = rank; r < rows; ++r) {
            const double m = std::abs(A[static_cast<std::size_t>(r * cols + c)]);
            if (m > best) {
                best = m;
                piv = r;
            }
        }
        if (piv < 0) continue;
        for (int cc = 0; cc < cols; ++cc)
            std::swap(A[static_cast<std::size_t>(rank * cols + cc)], A[static_cast<std::size_t>(piv * cols + cc)]);
        for (int r = 0; r < rows; ++r) {
            if (r == rank) continue;
            const double f = A[static_cast<std::size_t>(r * cols + c)] / A[static_cast<std::size_t>(rank * cols + c)];
            for (int cc = 0; cc < cols; ++cc)
                A[static_cast<std::size_t>(r * cols + cc)] -= f * A[static_cast<std::size_t>(rank * cols + cc)];
        }
        ++rank;
    }
    return rank;
}

HwcResult hwc_residual(const MapJets& mj, const MetricChart& g_source, std::span<const double> p,
                       const MetricChart& g_target) {
    const int n = mj.source_dim;
    const int m = mj.target_dim;
    if (g_source.dim != n || g_target.dim != m)
        throw DimensionError("chart dimensions do not match the map");

    const std::vector<double> jac = differential(mj);
    double dnorm = 0.0;
    for (const double v : jac) dnorm = std::max(dnorm, std::abs(v));
    if (dnorm < 1e-12) return {0.0, 0.0};  // vanishing differential: weakly conformal

    const std::vector<double> gM = eval_metric_values(g_source, p);
    const std::vector<double> gMinv = linalg::inverse(gM, n);

    std::vector<double> image(static_cast<std::size_t>(m), 0.0);
    for (int a = 0; a < m; ++a)
        image[static_cast<std::size_t>(a)] = require_real(mj.t[static_cast<std::size_t>(a)].value(), "map value");
    const std::vector<double> gN = eval_metric_values(g_target, image);
    const std::vector<double> gNinv = linalg::inverse(gN, m);

    // P^{ab} = g_M^{ij} d_i f^a d_j f^b
    std::vector<double> P(static_cast<std::size_t>(m) * m, 0.0);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            double s = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    s += gMinv[static_cast<std::size_t>(i * n + j)] *
                         jac[static_cast<std::size_t>(a * n + i)] * jac[static_cast<std::size_t>(b * n + j)];
            P[static_cast<std::size_t>(a * m + b)] = s;
        }

    double lambda = 0.0;
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            lambda += P[static_cast<std::size_t>(a * m + b)] * gN[static_cast<std::size_t>(a * m + b)];
    lambda /= m;

    // residual = |P - lambda gN^{-1}| in the g_N norm (indices lowered by gN)
    double norm2 = 0.0;
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            const double Tab = P[static_cast<std::size_t>(a * m + b)] - lambda * gNinv[static_cast<std::size_t>(a * m + b)];
            for (int c = 0; c < m; ++c)
                for (int d = 0; d < m; ++d) {
                    const double Tcd =
                        P[static_cast<std::size_t>(c * m + d)] - lambda * gNinv[static_cast<std::size_t>(c * m + d)];
                    norm2 += gN[static_cast<std::size_t>(a * m + c)] * gN[static_cast<std::size_t>(b * m + d)] * Tab * Tcd;
                }
        }
    return {lambda, std::sqrt(std::max(0.0, norm2))};
}

std::vector<double> tension_field(const MapJets& mj, const MetricChart& g_source,
                                  std::span<const double> p, const ConnectionField& target_conn) {
    const int n = mj.source_dim;
    const int m = mj.target_dim;
    const MetricJets gj = eval_metric(g_source, p);
    const std::vector<double> gMinv = linalg::inverse(gj.value, n);
    const ConnectionJet gammaM = christoffel(gj);

    std::vector<double> image(static_cast<std::size_t>(m), 0.0);
    for (int a = 0; a < m; ++a)
        image[static_cast<std::size_t>(a)] = require_real(mj.t[static_cast<std::size_t>(a)].value(), "map value");
    const ConnectionJet gammaN = target_conn(image);
    if (gammaN.dim != m) throw DimensionError("target connection dimension mismatch");

    std::vector<double> tau(static_cast<std::size_t>(m), 0.0);
    for (int a = 0; a < m; ++a) {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double second = require_real(mj.t[static_cast<std::size_t>(a)].hess(i, j), "map Hessian");
                for (int k = 0; k < n; ++k)
                    second -= gammaM.G(k, i, j) *
                              require_real(mj.t[static_cast<std::size_t>(a)].grad(k), "map differential");
                for (int b = 0; b < m; ++b)
                    for (int c = 0; c < m; ++c)
                        second += gammaN.G(a, b, c) *
                                  require_real(mj.t[static_cast<std::size_t>(b)].grad(i), "map differential") *
                                  require_real(mj.t[static_cast<std::size_t>(c)].grad(j), "map differential");
                s += gMinv[static_cast<std::size_t>(i * n + j)] * second;
            }
        tau[static_cast<std::size_t>(a)] = s;
    }
    return tau;
}

Verdict harmonic_morphism_verdict(const MapFunction& f, const MetricChart& g_source,
                                  const ConnectionField& target_conn, const MetricChart& g_target,
                                  std::span<const std::vector<double>> samples,
                                  const VerdictOptions& options) {
    Verdict v;
    v.options = options;
    v.sample_count = static_cast<int>(samples.size());
    for (const auto& p : samples) {
        try {
            const MapJets mj = f(p);
            const std::vector<double> tau = tension_field(mj, g_source, p, target_conn);
            double tnorm = 0.0;
            for (const double c : tau) tnorm += c * c;
            tnorm = std::sqrt(tnorm);
            const HwcResult hwc = hwc_residual(mj, g_source, p, g_target);
            if (tnorm >= v.max_tension) {
                v.max_tension = tnorm;
                v.worst_tension_point = p;
            }
            if (hwc.residual >= v.max_hwc) {
                v.max_hwc = hwc.residual;
                v.worst_hwc_point = p;
            }
            v.dilations.push_back(hwc.dilation);
        } catch (const Error& e) {
            v.issues.push_back({p, e.kind()});
        }
    }
    return v;
}

// -- almost Hermitian structure ------------------------------------------------

namespace {

using JetMat = std::vector<Jet2>;  // row-major

Jet2 jet_dot(const JetMat& G, const std::array<Jet2, 4>& x, const std::array<Jet2, 4>& y) {
    Jet2 s = Jet2(0.0);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) s = s + G[static_cast<std::size_t>(i * 4 + j)] * x[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(j)];
    return s;
}

}  // namespace

MatrixFieldJets hermitian_from_submersion(const MapJets& mj, const MetricChart& g,
                                          std::span<const double> p, double orientation,
                                          double hwc_tol) {
    if (mj.source_dim != 4 || mj.target_dim != 2)
        throw DimensionError("hermitian structure requires a 4 -> 2 map");
    const std::vector<double> jac = differential(mj);
    if (differential_rank(jac, 2, 4) < 2) throw NotSubmersive("differential rank below 2");

    {
        MetricChart flat = make_diagonal_metric("flat-target", {"y1", "y2"}, {num(1.0), num(1.0)});
        const HwcResult hwc = hwc_residual(mj, g, p, flat);
        if (hwc.residual > hwc_tol * std::max(1.0, hwc.dilation))
            throw NotHorizontallyConformal("horizontal conformality residual above tolerance");
    }

    const int n = 4;
    const MetricJets gj = eval_metric(g, p);

    // metric and inverse as first-order-exact jets
    JetMat G(16), Ginv;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            std::vector<Complex> grad(static_cast<std::size_t>(n));
            std::vector<Complex> hess(static_cast<std::size_t>(n) * n);
            for (int m = 0; m < n; ++m) grad[static_cast<std::size_t>(m)] = gj.dg(m, i, j);
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) hess[static_cast<std::size_t>(a * n + b)] = gj.ddg(a, b, i, j);
            G[static_cast<std::size_t>(i * n + j)] = Jet2::from_parts(n, gj.g(i, j), grad, hess);
        }
    Ginv = linalg::inverse(G, n, Jet2::constant(n, 1.0));

    // df rows as jets: value = first derivative, gradient = second derivatives
    std::array<std::array<Jet2, 4>, 2> df;
    for (int a = 0; a < 2; ++a)
        for (int i = 0; i < n; ++i) {
            std::vector<Complex> grad(static_cast<std::size_t>(n));
            for (int m = 0; m < n; ++m) grad[static_cast<std::size_t>(m)] = mj.t[static_cast<std::size_t>(a)].hess(m, i);
            df[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)] =
                Jet2::from_parts(n, mj.t[static_cast<std::size_t>(a)].grad(i), grad);
        }

    // horizontal frame: normalized metric gradients of the two components
    std::array<std::array<Jet2, 4>, 2> h;
    for (int a = 0; a < 2; ++a)
        for (int i = 0; i < n; ++i) {
            Jet2 s = Jet2(0.0);
            for (int j = 0; j < n; ++j)
                s = s + Ginv[static_cast<std::size_t>(i * n + j)] * df[static_cast<std::size_t>(a)][static_cast<std::size_t>(j)];
            h[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)] = s;
        }
    const Jet2 lambda = jet_dot(G, h[0], h[0]);
    if (std::abs(lambda.value()) < 1e-14) throw NotSubmersive("degenerate horizontal frame");
    const Jet2 scale = sqrt(lambda);
    for (int a = 0; a < 2; ++a)
        for (int i = 0; i < n; ++i)
            h[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)] =
                h[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)] / scale;

    // complete to a frame: pick the coordinate pair most transverse to the
    // horizontal plane (pivot choice is locally constant, so jets stay valid)
    int best_c = -1, best_d = -1;
    double best_det = -1.0;
    for (int c = 0; c < n; ++c)
        for (int d = c + 1; d < n; ++d) {
            std::vector<double> B(16, 0.0);
            for (int i = 0; i < n; ++i) {
                B[static_cast<std::size_t>(i * 4 + 0)] = h[0][static_cast<std::size_t>(i)].value().real();
                B[static_cast<std::size_t>(i * 4 + 1)] = h[1][static_cast<std::size_t>(i)].value().real();
                B[static_cast<std::size_t>(i * 4 + 2)] = (i == c) ? 1.0 : 0.0;
                B[static_cast<std::size_t>(i * 4 + 3)] = (i == d) ? 1.0 : 0.0;
            }
            const double det = std::abs(linalg::det(B, 4));
            if (det > best_det) {
                best_det = det;
                best_c = c;
                best_d = d;
            }
        }
    if (best_det < 1e-12) throw NotSubmersive("could not complete a frame");

    // Gram-Schmidt the two coordinate fields against the horizontal frame
    std::array<std::array<Jet2, 4>, 2> v;
    std::array<int, 2> picks{best_c, best_d};
    for (int w = 0; w < 2; ++w) {
        std::array<Jet2, 4> e{Jet2(0.0), Jet2(0.0), Jet2(0.0), Jet2(0.0)};
        e[static_cast<std::size_t>(picks[static_cast<std::size_t>(w)])] = Jet2::constant(n, 1.0);
        for (int a = 0; a < 2; ++a) {
            const Jet2 c = jet_dot(G, e, h[static_cast<std::size_t>(a)]);
            for (int i = 0; i < n; ++i)
                e[static_cast<std::size_t>(i)] =
                    e[static_cast<std::size_t>(i)] - c * h[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)];
        }
        for (int w2 = 0; w2 < w; ++w2) {
            const Jet2 c = jet_dot(G, e, v[static_cast<std::size_t>(w2)]);
            for (int i = 0; i < n; ++i)
                e[static_cast<std::size_t>(i)] =
                    e[static_cast<std::size_t>(i)] - c * v[static_cast<std::size_t>(w2)][static_cast<std::size_t>(i)];
        }
        const Jet2 nrm = sqrt(jet_dot(G, e, e));
        for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(w)][static_cast<std::size_t>(i)] = e[static_cast<std::size_t>(i)] / nrm;
    }

    // assemble J from its action on the frame; try s = +1 first
    auto build = [&](double s) {
        JetMat B(16), JB(16);
        for (int i = 0; i < n; ++i) {
            B[static_cast<std::size_t>(i * 4 + 0)] = h[0][static_cast<std::size_t>(i)];
            B[static_cast<std::size_t>(i * 4 + 1)] = h[1][static_cast<std::size_t>(i)];
            B[static_cast<std::size_t>(i * 4 + 2)] = v[0][static_cast<std::size_t>(i)];
            B[static_cast<std::size_t>(i * 4 + 3)] = v[1][static_cast<std::size_t>(i)];
            JB[static_cast<std::size_t>(i * 4 + 0)] = h[1][static_cast<std::size_t>(i)];
            JB[static_cast<std::size_t>(i * 4 + 1)] = -h[0][static_cast<std::size_t>(i)];
            JB[static_cast<std::size_t>(i * 4 + 2)] = Jet2(s) * v[1][static_cast<std::size_t>(i)];
            JB[static_cast<std::size_t>(i * 4 + 3)] = Jet2(-s) * v[0][static_cast<std::size_t>(i)];
        }
        const JetMat Binv = linalg::inverse(B, 4, Jet2::constant(n, 1.0));
        JetMat J(16, Jet2(0.0));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Jet2 sum = Jet2(0.0);
                for (int k = 0; k < n; ++k)
                    sum = sum + JB[static_cast<std::size_t>(i * 4 + k)] * Binv[static_cast<std::size_t>(k * 4 + j)];
                J[static_cast<std::size_t>(i * 4 + j)] = sum;
            }
        return J;
    };

    auto pfaffian_sign = [&](const JetMat& J) {
        // omega_{ab} = g_{ac} J^c_b; sign of omega ^ omega against the
        // oriented coordinate volume
        std::array<std::array<double, 4>, 4> om{};
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                double s = 0.0;
                for (int c = 0; c < n; ++c) s += gj.g(a, c) * J[static_cast<std::size_t>(c * 4 + b)].value().real();
                om[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = s;
            }
        const double pf = om[0][1] * om[2][3] - om[0][2] * om[1][3] + om[0][3] * om[1][2];
        return pf * gj.orientation;
    };

    JetMat J = build(+1.0);
    if (pfaffian_sign(J) * orientation < 0.0) J = build(-1.0);

    MatrixFieldJets out;
    out.dim = n;
    out.value.assign(16, 0.0);
    out.deriv.assign(64, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const Jet2& e = J[static_cast<std::size_t>(i * 4 + j)];
            out.value[static_cast<std::size_t>(i * 4 + j)] = require_real(e.value(), "hermitian structure");
            for (int m = 0; m < n; ++m)
                out.deriv[static_cast<std::size_t>((m * 4 + i) * 4 + j)] =
                    require_real(e.grad(m), "hermitian structure derivative");
        }
    return out;
}

MatrixField hermitian_field(const MapFunction& f, const MetricChart& g, double orientation,
                            double hwc_tol) {
    return [f, g, orientation, hwc_tol](std::span<const double> p) {
        return hermitian_from_submersion(f(p), g, p, orientation, hwc_tol);
    };
}

double nijenhuis_residual(const MatrixFieldJets& J) {
    const int n = J.dim;
    // require J^2 = -Id
    double defect = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = (i == j) ? 1.0 : 0.0;
            for (int k = 0; k < n; ++k)
                s += J.value[static_cast<std::size_t>(i * n + k)] * J.value[static_cast<std::size_t>(k * n + j)];
            defect = std::max(defect, std::abs(s));
        }
    if (defect > 1e-8) throw NotAlmostComplex("J^2 deviates from -identity");

    auto Jv = [&](int i, int j) { return J.value[static_cast<std::size_t>(i * n + j)]; };
    auto dJ = [&](int m, int i, int j) { return J.deriv[static_cast<std::size_t>((m * n + i) * n + j)]; };

    double norm2 = 0.0;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            for (int i = 0; i < n; ++i) {
                double s = 0.0;
                for (int k = 0; k < n; ++k)
                    s += Jv(k, a) * dJ(k, i, b) - Jv(k, b) * dJ(k, i, a) + Jv(i, k) * dJ(b, k, a) -
                         Jv(i, k) * dJ(a, k, b);
                norm2 += s * s;
            }
    return std::sqrt(norm2);
}

double nijenhuis_residual(const MatrixField& J, std::span<const double> p) {
    return nijenhuis_residual(J(p));
}

}  // namespace hspace
