#include "hspace/chart.hpp"

#include <cmath>

#include "linalg.hpp"

namespace hspace {

namespace {
constexpr double kRealnessTol = 1e-9;

double require_real(Complex z, const char* what) {
    if (std::abs(z.imag()) > kRealnessTol * std::max(1.0, std::abs(z.real())))
        throw DomainError(std::string(what) + " has a non-real value");
    return z.real();
}
}  // namespace

bool Box::contains(std::span<const double> p, double inflation) const {
    if (static_cast<int>(p.size()) != dim()) return false;
    for (int i = 0; i < dim(); ++i) {
        const double c = 0.5 * (lo[static_cast<std::size_t>(i)] + hi[static_cast<std::size_t>(i)]);
        const double r = 0.5 * (hi[static_cast<std::size_t>(i)] - lo[static_cast<std::size_t>(i)]) * inflation;
        if (p[static_cast<std::size_t>(i)] < c - r || p[static_cast<std::size_t>(i)] > c + r) return false;
    }
    return true;
}

std::vector<double> Box::center() const {
    std::vector<double> c(lo.size());
    for (std::size_t i = 0; i < lo.size(); ++i) c[i] = 0.5 * (lo[i] + hi[i]);
    return c;
}

bool MetricChart::in_domain(std::span<const double> p) const {
    if (guard.trivial()) return true;
    return eval_predicate(guard, chart_value_env(coords, p));
}

MetricChart make_metric(std::string name, std::vector<std::string> coords,
                        std::vector<ExprPtr> upper_triangle, double orientation) {
    MetricChart m;
    m.name = std::move(name);
    m.dim = static_cast<int>(coords.size());
    m.coords = std::move(coords);
    m.orientation = orientation;
    const std::size_t expected = static_cast<std::size_t>(m.dim) * (m.dim + 1) / 2;
    if (upper_triangle.size() != expected)
        throw DimensionError("metric component count does not match the dimension");
    m.comps.assign(static_cast<std::size_t>(m.dim) * m.dim, nullptr);
    std::size_t k = 0;
    for (int i = 0; i < m.dim; ++i)
        for (int j = i; j < m.dim; ++j) {
            m.comps[static_cast<std::size_t>(i * m.dim + j)] = upper_triangle[k];
            m.comps[static_cast<std::size_t>(j * m.dim + i)] = upper_triangle[k];
            ++k;
        }
    return m;
}

MetricChart make_diagonal_metric(std::string name, std::vector<std::string> coords,
                                 std::vector<ExprPtr> diagonal, double orientation) {
    const int dim = static_cast<int>(coords.size());
    std::vector<ExprPtr> upper;
    for (int i = 0; i < dim; ++i)
        for (int j = i; j < dim; ++j)
            upper.push_back(i == j ? diagonal[static_cast<std::size_t>(i)] : num(0.0));
    return make_metric(std::move(name), std::move(coords), std::move(upper), orientation);
}

JetEnv chart_env(const std::vector<std::string>& coords, std::span<const double> p) {
    const int n = static_cast<int>(coords.size());
    JetEnv env;
    for (int i = 0; i < n; ++i)
        env.emplace(coords[static_cast<std::size_t>(i)],
                    Jet2::variable(n, i, Complex(p[static_cast<std::size_t>(i)], 0.0)));
    return env;
}

ValueEnv chart_value_env(const std::vector<std::string>& coords, std::span<const double> p) {
    ValueEnv env;
    for (std::size_t i = 0; i < coords.size(); ++i) env.emplace(coords[i], Complex(p[i], 0.0));
    return env;
}

MetricJets eval_metric(const MetricChart& chart, std::span<const double> p) {
    const int n = chart.dim;
    if (static_cast<int>(p.size()) != n) throw DimensionError("point dimension does not match chart");
    const JetEnv env = chart_env(chart.coords, p);

    MetricJets out;
    out.dim = n;
    out.orientation = chart.orientation;
    out.value.assign(static_cast<std::size_t>(n) * n, 0.0);
    out.grad.assign(static_cast<std::size_t>(n) * n * n, 0.0);
    out.hess.assign(static_cast<std::size_t>(n) * n * n * n, 0.0);

    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            const Jet2 c = eval_jet(chart.at(i, j), env);
            const double v = require_real(c.value(), "metric component");
            out.value[static_cast<std::size_t>(i * n + j)] = v;
            out.value[static_cast<std::size_t>(j * n + i)] = v;
            for (int k = 0; k < n; ++k) {
                const double d = require_real(c.grad(k), "metric derivative");
                out.grad[static_cast<std::size_t>((k * n + i) * n + j)] = d;
                out.grad[static_cast<std::size_t>((k * n + j) * n + i)] = d;
            }
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    const double d = require_real(c.hess(k, l), "metric second derivative");
                    out.hess[static_cast<std::size_t>(((k * n + l) * n + i) * n + j)] = d;
                    out.hess[static_cast<std::size_t>(((k * n + l) * n + j) * n + i)] = d;
                }
        }

    if (!linalg::is_positive_definite(out.value, n))
        throw DomainError("metric is not positive-definite at the sample point");
    return out;
}

std::vector<double> eval_metric_values(const MetricChart& chart, std::span<const double> p) {
    const int n = chart.dim;
    const ValueEnv env = chart_value_env(chart.coords, p);
    std::vector<double> g(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            const double v = require_real(eval_value(chart.at(i, j), env), "metric component");
            g[static_cast<std::size_t>(i * n + j)] = v;
            g[static_cast<std::size_t>(j * n + i)] = v;
        }
    if (!linalg::is_positive_definite(g, n))
        throw DomainError("metric is not positive-definite at the sample point");
    return g;
}

}  // namespace hspace
