#pragma once

#include <span>
#include <string>
#include <vector>

#include "hspace/expr.hpp"

namespace hspace {

/// Axis-aligned sampling box; one [lo, hi] interval per coordinate.
struct Box {
    std::vector<double> lo, hi;
    int dim() const { return static_cast<int>(lo.size()); }
    bool contains(std::span<const double> p, double inflation = 1.0) const;
    std::vector<double> center() const;
};

/// Coordinate chart carrying metric components as expressions in the chart
/// coordinates, an orientation sign for the coordinate volume form, and a
/// domain guard.
struct MetricChart {
    std::string name;
    int dim = 0;
    std::vector<std::string> coords;      // size dim
    std::vector<ExprPtr> comps;           // dim*dim, row-major, symmetric
    double orientation = +1.0;
    Predicate guard;                      // empty predicate = everywhere
    Box domain;                           // default sampling region

    const ExprPtr& at(int i, int j) const { return comps[static_cast<std::size_t>(i * dim + j)]; }
    bool in_domain(std::span<const double> p) const;
};

/// Builds a chart from the upper triangle (row-major g11, g12, ..., g1d,
/// g22, ...); the lower triangle is mirrored.
MetricChart make_metric(std::string name, std::vector<std::string> coords,
                        std::vector<ExprPtr> upper_triangle, double orientation = +1.0);

/// Diagonal helper: every component zero except the given diagonal entries.
MetricChart make_diagonal_metric(std::string name, std::vector<std::string> coords,
                                 std::vector<ExprPtr> diagonal, double orientation = +1.0);

/// Metric components evaluated at a point as order-two jets: values,
/// first and second coordinate derivatives.
struct MetricJets {
    int dim = 0;
    std::vector<double> value;             // dim*dim
    std::vector<double> grad;              // [k][i][j]: d_k g_ij
    std::vector<double> hess;              // [k][l][i][j]: d_k d_l g_ij
    double orientation = +1.0;

    double g(int i, int j) const { return value[static_cast<std::size_t>(i * dim + j)]; }
    double dg(int k, int i, int j) const {
        return grad[static_cast<std::size_t>((k * dim + i) * dim + j)];
    }
    double ddg(int k, int l, int i, int j) const {
        return hess[static_cast<std::size_t>(((k * dim + l) * dim + i) * dim + j)];
    }
};

/// Evaluates the chart at p. Verifies the components are real and the value
/// matrix positive-definite (DomainError otherwise).
MetricJets eval_metric(const MetricChart& chart, std::span<const double> p);

/// Component values only (no derivatives), with the same realness and
/// positivity checks.
std::vector<double> eval_metric_values(const MetricChart& chart, std::span<const double> p);

JetEnv chart_env(const std::vector<std::string>& coords, std::span<const double> p);
ValueEnv chart_value_env(const std::vector<std::string>& coords, std::span<const double> p);

}  // namespace hspace
