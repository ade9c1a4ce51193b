#include "hspace/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "linalg.hpp"

namespace hspace {

namespace {

std::vector<double> metric_inverse(const std::vector<double>& g, int n) {
    try {
        return linalg::inverse(g, n);
    } catch (const SingularMetric&) {
        throw SingularMetric("metric is singular at the sample point");
    }
}

// d_m g^{kl} = -g^{ka} (d_m g_ab) g^{bl}
std::vector<double> inverse_derivative(const MetricJets& gj, const std::vector<double>& ginv) {
    const int n = gj.dim;
    std::vector<double> dinv(static_cast<std::size_t>(n) * n * n, 0.0);
    for (int m = 0; m < n; ++m)
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) {
                double s = 0.0;
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b)
                        s += ginv[static_cast<std::size_t>(k * n + a)] * gj.dg(m, a, b) *
                             ginv[static_cast<std::size_t>(b * n + l)];
                dinv[static_cast<std::size_t>((m * n + k) * n + l)] = -s;
            }
    return dinv;
}

}  // namespace

ConnectionJet christoffel(const MetricJets& gj) {
    const int n = gj.dim;
    const std::vector<double> ginv = metric_inverse(gj.value, n);
    const std::vector<double> dinv = inverse_derivative(gj, ginv);

    ConnectionJet out;
    out.dim = n;
    out.gamma.assign(static_cast<std::size_t>(n) * n * n, 0.0);
    out.dgamma.assign(static_cast<std::size_t>(n) * n * n * n, 0.0);

    auto C = [&](int l, int i, int j) { return gj.dg(i, j, l) + gj.dg(j, i, l) - gj.dg(l, i, j); };
    auto dC = [&](int m, int l, int i, int j) {
        return gj.ddg(m, i, j, l) + gj.ddg(m, j, i, l) - gj.ddg(m, l, i, j);
    };

    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double s = 0.0;
                for (int l = 0; l < n; ++l) s += ginv[static_cast<std::size_t>(k * n + l)] * C(l, i, j);
                out.gamma[static_cast<std::size_t>((k * n + i) * n + j)] = 0.5 * s;
                for (int m = 0; m < n; ++m) {
                    double d = 0.0;
                    for (int l = 0; l < n; ++l)
                        d += dinv[static_cast<std::size_t>((m * n + k) * n + l)] * C(l, i, j) +
                             ginv[static_cast<std::size_t>(k * n + l)] * dC(m, l, i, j);
                    out.dgamma[static_cast<std::size_t>(((m * n + k) * n + i) * n + j)] = 0.5 * d;
                }
            }
    return out;
}

ConnectionJet christoffel(const MetricChart& g, std::span<const double> p) {
    return christoffel(eval_metric(g, p));
}

ConnectionField levi_civita_field(const MetricChart& g) {
    return [g](std::span<const double> p) { return christoffel(g, p); };
}

CurvatureData curvature(const ConnectionJet& conn) {
    const int n = conn.dim;
    CurvatureData out;
    out.dim = n;
    out.riemann.assign(static_cast<std::size_t>(n) * n * n * n, 0.0);
    out.ricci.assign(static_cast<std::size_t>(n) * n, 0.0);

    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    double r = conn.dG(k, i, l, j) - conn.dG(l, i, k, j);
                    for (int m = 0; m < n; ++m)
                        r += conn.G(i, k, m) * conn.G(m, l, j) - conn.G(i, l, m) * conn.G(m, k, j);
                    out.riemann[static_cast<std::size_t>(((i * n + j) * n + k) * n + l)] = r;
                }
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += out.R(i, j, i, k);
            out.ricci[static_cast<std::size_t>(j * n + k)] = s;
        }
    return out;
}

double scalar_curvature(const CurvatureData& curv, const std::vector<double>& g_values) {
    const int n = curv.dim;
    const std::vector<double> ginv = metric_inverse(g_values, n);
    double s = 0.0;
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            s += ginv[static_cast<std::size_t>(j * n + k)] * 0.5 * (curv.Ric(j, k) + curv.Ric(k, j));
    return s;
}

double scalar_curvature(const MetricChart& g, std::span<const double> p) {
    const MetricJets gj = eval_metric(g, p);
    return scalar_curvature(curvature(christoffel(gj)), gj.value);
}

double einstein_residual(const MetricChart& g, std::span<const double> p) {
    const MetricJets gj = eval_metric(g, p);
    const int n = gj.dim;
    const CurvatureData curv = curvature(christoffel(gj));
    const std::vector<double> ginv = metric_inverse(gj.value, n);

    double s = 0.0;
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) s += ginv[static_cast<std::size_t>(j * n + k)] * curv.Ric(j, k);

    // trace-free part T = Ric - (s/n) g, measured in the g-norm
    std::vector<double> T(static_cast<std::size_t>(n) * n, 0.0);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            T[static_cast<std::size_t>(j * n + k)] =
                0.5 * (curv.Ric(j, k) + curv.Ric(k, j)) - (s / n) * gj.g(j, k);

    double norm2 = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b)
                    norm2 += ginv[static_cast<std::size_t>(i * n + a)] *
                             ginv[static_cast<std::size_t>(j * n + b)] *
                             T[static_cast<std::size_t>(i * n + j)] * T[static_cast<std::size_t>(a * n + b)];
    return std::sqrt(std::max(0.0, norm2));
}

namespace {

int perm_sign_4(int i, int j, int k, int l) {
    const std::array<int, 4> p{i, j, k, l};
    int sign = 1;
    std::array<int, 4> a = p;
    for (int x = 0; x < 4; ++x)
        for (int y = x + 1; y < 4; ++y) {
            if (a[x] == a[y]) return 0;
            if (a[x] > a[y]) {
                std::swap(a[x], a[y]);
                sign = -sign;
            }
        }
    return sign;
}

int perm_sign_3(int i, int j, int k) {
    if (i == j || j == k || i == k) return 0;
    std::array<int, 3> a{i, j, k};
    int sign = 1;
    for (int x = 0; x < 3; ++x)
        for (int y = x + 1; y < 3; ++y)
            if (a[x] > a[y]) {
                std::swap(a[x], a[y]);
                sign = -sign;
            }
    return sign;
}

using Tensor4 = std::vector<double>;  // n^4 row-major

double t4(const Tensor4& t, int n, int i, int j, int k, int l) {
    return t[static_cast<std::size_t>(((i * n + j) * n + k) * n + l)];
}
double& t4ref(Tensor4& t, int n, int i, int j, int k, int l) {
    return t[static_cast<std::size_t>(((i * n + j) * n + k) * n + l)];
}

// epsilon_{ijkl} with volume normalization
double eps4(int i, int j, int k, int l, double sqrt_det, double orientation) {
    return orientation * sqrt_det * perm_sign_4(i, j, k, l);
}

// star applied to the first two-form slot of a curvature-type tensor
Tensor4 star_left(const Tensor4& T, const std::vector<double>& ginv, double sqrt_det,
                  double orientation) {
    const int n = 4;
    Tensor4 out(T.size(), 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    double s = 0.0;
                    for (int a = 0; a < n; ++a)
                        for (int b = 0; b < n; ++b)
                            for (int c = 0; c < n; ++c)
                                for (int d = 0; d < n; ++d)
                                    s += eps4(i, j, a, b, sqrt_det, orientation) *
                                         ginv[static_cast<std::size_t>(a * n + c)] *
                                         ginv[static_cast<std::size_t>(b * n + d)] * t4(T, n, c, d, k, l);
                    t4ref(out, n, i, j, k, l) = 0.5 * s;
                }
    return out;
}

Tensor4 star_right(const Tensor4& T, const std::vector<double>& ginv, double sqrt_det,
                   double orientation) {
    const int n = 4;
    Tensor4 out(T.size(), 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    double s = 0.0;
                    for (int a = 0; a < n; ++a)
                        for (int b = 0; b < n; ++b)
                            for (int c = 0; c < n; ++c)
                                for (int d = 0; d < n; ++d)
                                    s += t4(T, n, i, j, c, d) *
                                         ginv[static_cast<std::size_t>(c * n + a)] *
                                         ginv[static_cast<std::size_t>(d * n + b)] *
                                         eps4(a, b, k, l, sqrt_det, orientation);
                    t4ref(out, n, i, j, k, l) = 0.5 * s;
                }
    return out;
}

double tensor4_norm(const Tensor4& T, const std::vector<double>& ginv) {
    const int n = 4;
    double norm2 = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    // raise all four indices against the conjugate entry
                    double raised = 0.0;
                    for (int a = 0; a < n; ++a)
                        for (int b = 0; b < n; ++b)
                            for (int c = 0; c < n; ++c)
                                for (int d = 0; d < n; ++d)
                                    raised += ginv[static_cast<std::size_t>(i * n + a)] *
                                              ginv[static_cast<std::size_t>(j * n + b)] *
                                              ginv[static_cast<std::size_t>(k * n + c)] *
                                              ginv[static_cast<std::size_t>(l * n + d)] *
                                              t4(T, n, a, b, c, d);
                    norm2 += raised * t4(T, n, i, j, k, l);
                }
    return std::sqrt(std::max(0.0, norm2));
}

}  // namespace

WeylNorms weyl_split(const MetricChart& g, std::span<const double> p) {
    if (g.dim != 4) throw DimensionError("weyl_split requires a 4-dimensional chart");
    const MetricJets gj = eval_metric(g, p);
    const int n = 4;
    const CurvatureData curv = curvature(christoffel(gj));
    const std::vector<double> ginv = metric_inverse(gj.value, n);

    // fully lowered curvature R_{ijkl} = g_{im} R^m_{jkl}
    Tensor4 R4(static_cast<std::size_t>(n * n * n * n), 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    double s = 0.0;
                    for (int m = 0; m < n; ++m) s += gj.g(i, m) * curv.R(m, j, k, l);
                    t4ref(R4, n, i, j, k, l) = s;
                }

    double scal = 0.0;
    std::vector<double> ric(static_cast<std::size_t>(n) * n, 0.0);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            ric[static_cast<std::size_t>(j * n + k)] = 0.5 * (curv.Ric(j, k) + curv.Ric(k, j));
            scal += ginv[static_cast<std::size_t>(j * n + k)] * ric[static_cast<std::size_t>(j * n + k)];
        }

    // Schouten tensor (n = 4): P = (Ric - s/6 g)/2
    std::vector<double> P(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            P[static_cast<std::size_t>(i * n + j)] =
                0.5 * (ric[static_cast<std::size_t>(i * n + j)] - scal / 6.0 * gj.g(i, j));

    // W = Riem - P (Kulkarni-Nomizu) g
    Tensor4 W(R4.size(), 0.0);
    auto Pm = [&](int a, int b) { return P[static_cast<std::size_t>(a * n + b)]; };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    const double kn = Pm(i, k) * gj.g(j, l) - Pm(i, l) * gj.g(j, k) +
                                      Pm(j, l) * gj.g(i, k) - Pm(j, k) * gj.g(i, l);
                    t4ref(W, n, i, j, k, l) = t4(R4, n, i, j, k, l) - kn;
                }

    const double det = linalg::det(gj.value, n);
    if (det <= 0.0) throw SingularMetric("metric determinant not positive");
    const double sqrt_det = std::sqrt(det);

    const Tensor4 Wl = star_left(W, ginv, sqrt_det, gj.orientation);
    const Tensor4 Wr = star_right(W, ginv, sqrt_det, gj.orientation);
    const Tensor4 Wlr = star_right(Wl, ginv, sqrt_det, gj.orientation);

    Tensor4 Wp(W.size(), 0.0), Wm(W.size(), 0.0);
    for (std::size_t idx = 0; idx < W.size(); ++idx) {
        Wp[idx] = 0.25 * (W[idx] + Wl[idx] + Wr[idx] + Wlr[idx]);
        Wm[idx] = 0.25 * (W[idx] - Wl[idx] - Wr[idx] + Wlr[idx]);
    }

    WeylNorms out;
    out.w = tensor4_norm(W, ginv);
    out.w_plus = tensor4_norm(Wp, ginv);
    out.w_minus = tensor4_norm(Wm, ginv);
    return out;
}

std::vector<double> hodge_star(const MetricChart& g, std::span<const double> p,
                               std::span<const double> form, int degree) {
    const int n = g.dim;
    const std::vector<double> gv = eval_metric_values(g, p);
    const std::vector<double> ginv = metric_inverse(gv, n);
    const double det = linalg::det(gv, n);
    if (det <= 0.0) throw SingularMetric("metric determinant not positive");
    const double vol = g.orientation * std::sqrt(det);

    if (n == 3 && degree == 2) {
        if (form.size() != 9) throw DimensionError("expected a 3x3 two-form array");
        // (*w)_k = 1/2 w^{ij} eps_{ijk}
        std::vector<double> out(3, 0.0);
        for (int k = 0; k < 3; ++k) {
            double s = 0.0;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    double raised = 0.0;
                    for (int a = 0; a < 3; ++a)
                        for (int b = 0; b < 3; ++b)
                            raised += ginv[static_cast<std::size_t>(i * 3 + a)] *
                                      ginv[static_cast<std::size_t>(j * 3 + b)] *
                                      form[static_cast<std::size_t>(a * 3 + b)];
                    s += raised * vol * perm_sign_3(i, j, k);
                }
            out[static_cast<std::size_t>(k)] = 0.5 * s;
        }
        return out;
    }
    if (n == 3 && degree == 1) {
        if (form.size() != 3) throw DimensionError("expected a 1-form array of size 3");
        // (*a)_{jk} = a^i eps_{ijk}
        std::vector<double> out(9, 0.0);
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) {
                double s = 0.0;
                for (int i = 0; i < 3; ++i) {
                    double raised = 0.0;
                    for (int a = 0; a < 3; ++a)
                        raised += ginv[static_cast<std::size_t>(i * 3 + a)] * form[static_cast<std::size_t>(a)];
                    s += raised * vol * perm_sign_3(i, j, k);
                }
                out[static_cast<std::size_t>(j * 3 + k)] = s;
            }
        return out;
    }
    if (n == 4 && degree == 2) {
        if (form.size() != 16) throw DimensionError("expected a 4x4 two-form array");
        std::vector<double> out(16, 0.0);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                double s = 0.0;
                for (int a = 0; a < 4; ++a)
                    for (int b = 0; b < 4; ++b) {
                        double raised = 0.0;
                        for (int c = 0; c < 4; ++c)
                            for (int d = 0; d < 4; ++d)
                                raised += ginv[static_cast<std::size_t>(a * 4 + c)] *
                                          ginv[static_cast<std::size_t>(b * 4 + d)] *
                                          form[static_cast<std::size_t>(c * 4 + d)];
                        s += vol * perm_sign_4(i, j, a, b) * raised;
                    }
                out[static_cast<std::size_t>(i * 4 + j)] = 0.5 * s;
            }
        return out;
    }
    throw DimensionError("unsupported (dimension, degree) for hodge_star");
}

double frobenius_residual(const std::vector<VectorFieldJets>& fields, std::span<const double> p) {
    const int k = static_cast<int>(fields.size());
    if (k < 2) throw DegenerateSpan("need at least two spanning fields");

    // evaluate all fields with first derivatives
    std::vector<std::vector<Jet2>> F;
    F.reserve(fields.size());
    for (const auto& f : fields) F.push_back(f(p));
    const int n = static_cast<int>(F.front().size());
    for (const auto& f : F)
        if (static_cast<int>(f.size()) != n) throw DimensionError("field dimensions disagree");

    // span matrix M (n x k) of values
    std::vector<Complex> M(static_cast<std::size_t>(n) * k);
    for (int c = 0; c < k; ++c)
        for (int r = 0; r < n; ++r)
            M[static_cast<std::size_t>(r * k + c)] = F[static_cast<std::size_t>(c)][static_cast<std::size_t>(r)].value();

    // Gram matrix and degeneracy check
    std::vector<Complex> gram(static_cast<std::size_t>(k) * k, Complex(0.0));
    double scale = 0.0;
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) {
            Complex s = 0.0;
            for (int r = 0; r < n; ++r)
                s += std::conj(M[static_cast<std::size_t>(r * k + a)]) * M[static_cast<std::size_t>(r * k + b)];
            gram[static_cast<std::size_t>(a * k + b)] = s;
            if (a == b) scale = std::max(scale, std::abs(s));
        }
    // determinant magnitude of the Gram matrix via generic elimination
    {
        std::vector<Complex> A = gram;
        double logdet = 0.0;
        bool singular = false;
        for (int col = 0; col < k && !singular; ++col) {
            int piv = col;
            double best = std::abs(A[static_cast<std::size_t>(col * k + col)]);
            for (int r = col + 1; r < k; ++r) {
                const double m = std::abs(A[static_cast<std::size_t>(r * k + col)]);
                if (m > best) {
                    best = m;
                    piv = r;
                }
            }
            if (best < 1e-12 * std::max(1.0, scale)) {
                singular = true;
                break;
            }
            if (piv != col)
                for (int c = 0; c < k; ++c)
                    std::swap(A[static_cast<std::size_t>(col * k + c)], A[static_cast<std::size_t>(piv * k + c)]);
            logdet += std::log(best);
            for (int r = col + 1; r < k; ++r) {
                const Complex f = A[static_cast<std::size_t>(r * k + col)] / A[static_cast<std::size_t>(col * k + col)];
                for (int c = col; c < k; ++c)
                    A[static_cast<std::size_t>(r * k + c)] -= f * A[static_cast<std::size_t>(col * k + c)];
            }
        }
        if (singular) throw DegenerateSpan("spanning fields are linearly dependent at the point");
    }

    // least-squares projector onto the orthogonal complement of the span:
    // P_perp v = v - M (M^H M)^{-1} M^H v
    auto project_out = [&](std::vector<Complex> v) {
        std::vector<Complex> rhs(static_cast<std::size_t>(k), Complex(0.0));
        for (int a = 0; a < k; ++a) {
            Complex s = 0.0;
            for (int r = 0; r < n; ++r)
                s += std::conj(M[static_cast<std::size_t>(r * k + a)]) * v[static_cast<std::size_t>(r)];
            rhs[static_cast<std::size_t>(a)] = s;
        }
        std::vector<Complex> A = gram;
        linalg::solve_in_place(A, rhs, k, 1);
        for (int r = 0; r < n; ++r) {
            Complex s = 0.0;
            for (int a = 0; a < k; ++a) s += M[static_cast<std::size_t>(r * k + a)] * rhs[static_cast<std::size_t>(a)];
            v[static_cast<std::size_t>(r)] -= s;
        }
        return v;
    };

    double residual = 0.0;
    for (int a = 0; a < k; ++a)
        for (int b = a + 1; b < k; ++b) {
            // [X, Y]^i = X^j d_j Y^i - Y^j d_j X^i
            std::vector<Complex> bracket(static_cast<std::size_t>(n), Complex(0.0));
            for (int i = 0; i < n; ++i) {
                Complex s = 0.0;
                for (int j = 0; j < n; ++j)
                    s += F[static_cast<std::size_t>(a)][static_cast<std::size_t>(j)].value() *
                             F[static_cast<std::size_t>(b)][static_cast<std::size_t>(i)].grad(j) -
                         F[static_cast<std::size_t>(b)][static_cast<std::size_t>(j)].value() *
                             F[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)].grad(j);
                bracket[static_cast<std::size_t>(i)] = s;
            }
            const std::vector<Complex> orth = project_out(std::move(bracket));
            double norm2 = 0.0;
            for (const Complex& c : orth) norm2 += std::norm(c);
            residual += std::sqrt(norm2);
        }
    return residual;
}

}  // namespace hspace
