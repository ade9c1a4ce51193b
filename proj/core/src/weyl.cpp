#include "hspace/weyl.hpp"

#include <cmath>

#include "linalg.hpp"

namespace hspace {

namespace {

struct LeeFormJets {
    std::array<double, 3> value{};
    std::array<std::array<double, 3>, 3> grad{};  // grad[m][i] = d_m a_i
};

LeeFormJets eval_lee_form(const WeylStructure& w, std::span<const double> p) {
    const JetEnv env = chart_env(w.h.coords, p);
    LeeFormJets out;
    for (int i = 0; i < 3; ++i) {
        const Jet2 a = eval_jet(w.alpha[static_cast<std::size_t>(i)], env);
        if (std::abs(a.value().imag()) > 1e-9)
            throw DomainError("Lee form component has a non-real value");
        out.value[static_cast<std::size_t>(i)] = a.value().real();
        for (int m = 0; m < 3; ++m) out.grad[static_cast<std::size_t>(m)][static_cast<std::size_t>(i)] = a.grad(m).real();
    }
    return out;
}

}  // namespace

bool WeylStructure::flat_lee_form() const {
    for (const auto& a : alpha)
        if (!(a->kind == ExprKind::Number && a->number == Complex(0.0))) return false;
    return true;
}

ConnectionJet weyl_connection(const WeylStructure& w, std::span<const double> p) {
    const int n = 3;
    const MetricJets hj = eval_metric(w.h, p);
    ConnectionJet out = christoffel(hj);
    if (w.flat_lee_form()) return out;

    const LeeFormJets a = eval_lee_form(w, p);
    const std::vector<double> hinv = linalg::inverse(hj.value, n);

    // a^i and d_m a^i
    std::array<double, 3> araised{};
    std::array<std::array<double, 3>, 3> daraised{};
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int b = 0; b < n; ++b) s += hinv[static_cast<std::size_t>(i * n + b)] * a.value[static_cast<std::size_t>(b)];
        araised[static_cast<std::size_t>(i)] = s;
    }
    // d_m h^{ib} = -h^{ic}(d_m h_cd)h^{db}
    for (int m = 0; m < n; ++m)
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int b = 0; b < n; ++b) {
                double dinv = 0.0;
                for (int c = 0; c < n; ++c)
                    for (int d = 0; d < n; ++d)
                        dinv -= hinv[static_cast<std::size_t>(i * n + c)] * hj.dg(m, c, d) *
                                hinv[static_cast<std::size_t>(d * n + b)];
                s += dinv * a.value[static_cast<std::size_t>(b)] +
                     hinv[static_cast<std::size_t>(i * n + b)] * a.grad[static_cast<std::size_t>(m)][static_cast<std::size_t>(b)];
            }
            daraised[static_cast<std::size_t>(m)][static_cast<std::size_t>(i)] = s;
        }

    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const double extra = (i == j ? a.value[static_cast<std::size_t>(k)] : 0.0) +
                                     (i == k ? a.value[static_cast<std::size_t>(j)] : 0.0) -
                                     hj.g(j, k) * araised[static_cast<std::size_t>(i)];
                out.gamma[static_cast<std::size_t>((i * n + j) * n + k)] += extra;
                for (int m = 0; m < n; ++m) {
                    const double dextra =
                        (i == j ? a.grad[static_cast<std::size_t>(m)][static_cast<std::size_t>(k)] : 0.0) +
                        (i == k ? a.grad[static_cast<std::size_t>(m)][static_cast<std::size_t>(j)] : 0.0) -
                        hj.dg(m, j, k) * araised[static_cast<std::size_t>(i)] -
                        hj.g(j, k) * daraised[static_cast<std::size_t>(m)][static_cast<std::size_t>(i)];
                    out.dgamma[static_cast<std::size_t>(((m * n + i) * n + j) * n + k)] += dextra;
                }
            }
    return out;
}

ConnectionField weyl_connection_field(const WeylStructure& w) {
    return [w](std::span<const double> p) { return weyl_connection(w, p); };
}

double weyl_scalar(const WeylStructure& w, std::span<const double> p) {
    const CurvatureData curv = curvature(weyl_connection(w, p));
    return scalar_curvature(curv, eval_metric_values(w.h, p));
}

double einstein_weyl_residual(const WeylStructure& w, std::span<const double> p) {
    const int n = 3;
    const CurvatureData curv = curvature(weyl_connection(w, p));
    const std::vector<double> h = eval_metric_values(w.h, p);
    const std::vector<double> hinv = linalg::inverse(h, n);

    std::vector<double> ric(static_cast<std::size_t>(n) * n, 0.0);
    double s = 0.0;
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            ric[static_cast<std::size_t>(j * n + k)] = 0.5 * (curv.Ric(j, k) + curv.Ric(k, j));
            s += hinv[static_cast<std::size_t>(j * n + k)] * ric[static_cast<std::size_t>(j * n + k)];
        }

    std::vector<double> T(static_cast<std::size_t>(n) * n, 0.0);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            T[static_cast<std::size_t>(j * n + k)] =
                ric[static_cast<std::size_t>(j * n + k)] - (s / n) * h[static_cast<std::size_t>(j * n + k)];

    double norm2 = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b)
                    norm2 += hinv[static_cast<std::size_t>(i * n + a)] * hinv[static_cast<std::size_t>(j * n + b)] *
                             T[static_cast<std::size_t>(i * n + j)] * T[static_cast<std::size_t>(a * n + b)];
    return std::sqrt(std::max(0.0, norm2));
}

}  // namespace hspace
