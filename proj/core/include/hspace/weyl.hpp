#pragma once

#include <array>

#include "hspace/geometry.hpp"

namespace hspace {

/// Weyl structure on a 3-dimensional chart: a representative metric h and
/// the Lee form alpha of the Weyl connection with respect to h, with the
/// convention D h = -2 alpha (x) h.
struct WeylStructure {
    std::string name;
    MetricChart h;                     // dim 3
    std::array<ExprPtr, 3> alpha;      // 1-form components in h's coordinates

    bool flat_lee_form() const;
};

/// Coefficients (with first derivatives) of the Weyl connection
/// G^i_{jk} = G(h)^i_{jk} + d^i_j a_k + d^i_k a_j - h_jk a^i.
ConnectionJet weyl_connection(const WeylStructure& w, std::span<const double> p);
ConnectionField weyl_connection_field(const WeylStructure& w);

/// h-trace of the symmetrized Ricci of the Weyl connection, computed through
/// the curvature of the connection field.
double weyl_scalar(const WeylStructure& w, std::span<const double> p);

/// h-norm of the trace-free part of the symmetrized Ricci of the Weyl
/// connection; zero exactly for Einstein-Weyl structures.
double einstein_weyl_residual(const WeylStructure& w, std::span<const double> p);

}  // namespace hspace
