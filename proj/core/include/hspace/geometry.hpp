#pragma once

#include <functional>

#include "hspace/chart.hpp"

namespace hspace {

/// Connection coefficients with their first derivatives at a point; enough
/// input for one curvature evaluation. gamma[i][j][k] = G^i_{jk},
/// dgamma[m][i][j][k] = d_m G^i_{jk}.
struct ConnectionJet {
    int dim = 0;
    std::vector<double> gamma;    // dim^3
    std::vector<double> dgamma;   // dim^4

    double G(int i, int j, int k) const {
        return gamma[static_cast<std::size_t>((i * dim + j) * dim + k)];
    }
    double dG(int m, int i, int j, int k) const {
        return dgamma[static_cast<std::size_t>(((m * dim + i) * dim + j) * dim + k)];
    }
};

using ConnectionField = std::function<ConnectionJet(std::span<const double>)>;

/// Levi-Civita coefficients G^k_{ij} = 1/2 g^{kl}(d_i g_jl + d_j g_il - d_l g_ij)
/// together with their first derivatives.
ConnectionJet christoffel(const MetricChart& g, std::span<const double> p);
ConnectionJet christoffel(const MetricJets& gj);
ConnectionField levi_civita_field(const MetricChart& g);

/// Curvature of a connection:
/// R^i_{jkl} = d_k G^i_{lj} - d_l G^i_{kj} + G^i_{km} G^m_{lj} - G^i_{lm} G^m_{kj},
/// Ricci_{jk} = R^i_{jik}.
struct CurvatureData {
    int dim = 0;
    std::vector<double> riemann;   // dim^4, R^i_{jkl}
    std::vector<double> ricci;     // dim^2 (not symmetrized)

    double R(int i, int j, int k, int l) const {
        return riemann[static_cast<std::size_t>(((i * dim + j) * dim + k) * dim + l)];
    }
    double Ric(int j, int k) const { return ricci[static_cast<std::size_t>(j * dim + k)]; }
};

CurvatureData curvature(const ConnectionJet& conn);

/// Trace of the symmetrized Ricci with respect to the supplied metric values.
double scalar_curvature(const CurvatureData& curv, const std::vector<double>& g_values);
double scalar_curvature(const MetricChart& g, std::span<const double> p);

/// g-norm of the trace-free Ricci of the Levi-Civita connection.
double einstein_residual(const MetricChart& g, std::span<const double> p);

struct WeylNorms {
    double w = 0.0;        // |W|
    double w_plus = 0.0;   // |W+|
    double w_minus = 0.0;  // |W-|
};

/// Weyl tensor of a 4-metric by the Ricci decomposition, split into the
/// +/- eigenparts of the Hodge star acting on two-form slots.
WeylNorms weyl_split(const MetricChart& g, std::span<const double> p);

/// Hodge dual with volume form orientation * sqrt(det g) dx^1 ^ ... ^ dx^n.
/// dim 3: degree 2 -> 1-form or degree 1 -> 2-form; dim 4: degree 2 -> 2-form.
/// Forms are row-major antisymmetric arrays (dim entries for degree 1,
/// dim*dim for degree 2).
std::vector<double> hodge_star(const MetricChart& g, std::span<const double> p,
                               std::span<const double> form, int degree);

/// A vector field given with the first derivatives of its components
/// (complex entries allowed).
using VectorFieldJets = std::function<std::vector<Jet2>(std::span<const double>)>;

/// Norm of the components of the pairwise Lie brackets orthogonal to the
/// span of the fields (coordinate projection). Zero iff the distribution is
/// involutive at p, to first order.
double frobenius_residual(const std::vector<VectorFieldJets>& fields, std::span<const double> p);

}  // namespace hspace
