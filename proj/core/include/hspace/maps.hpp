#pragma once

#include "hspace/geometry.hpp"

namespace hspace {

/// Real target components of a map evaluated at a source point, each an
/// order-two jet over the source coordinates. A complex-valued component
/// contributes its real and imaginary parts as consecutive targets.
struct MapJets {
    int source_dim = 0;
    int target_dim = 0;
    std::vector<Jet2> t;  // target_dim entries, real-valued jets
};

using MapFunction = std::function<MapJets(std::span<const double>)>;

enum class ComponentKind { Real, ComplexPair };

/// Expression-backed map between charts.
struct MapChart {
    std::string name;
    std::vector<std::string> source_coords;
    std::vector<ExprPtr> components;
    std::vector<ComponentKind> kinds;     // per expression
    Predicate guard;
    Box domain;                           // default sampling region

    int source_dim() const { return static_cast<int>(source_coords.size()); }
    int target_dim() const;
    bool in_domain(std::span<const double> p) const;
    MapFunction function() const;
};

MapChart make_map(std::string name, std::vector<std::string> source_coords,
                  std::vector<ExprPtr> components, std::vector<ComponentKind> kinds);

/// Zero connection on a flat target chart.
ConnectionField flat_connection_field(int dim);

/// Jacobian, row-major target_dim x source_dim.
std::vector<double> differential(const MapJets& mj);
int differential_rank(const std::vector<double>& jac, int rows, int cols, double tol = 1e-10);

struct HwcResult {
    double dilation = 0.0;   // squared dilation Lambda
    double residual = 0.0;   // g_N-norm of P - Lambda g_N^{-1}
};

/// Horizontal-conformality defect: P^{ab} = g_M^{ij} d_i f^a d_j f^b compared
/// against Lambda g_N^{-1}. The target metric is evaluated at the image point.
HwcResult hwc_residual(const MapJets& mj, const MetricChart& g_source,
                       std::span<const double> p, const MetricChart& g_target);

/// tau^a = g^{ij} (d_i d_j f^a - G^{M,k}_{ij} d_k f^a + G^{N,a}_{bc} d_i f^b d_j f^c),
/// with the target connection evaluated at the image point.
std::vector<double> tension_field(const MapJets& mj, const MetricChart& g_source,
                                  std::span<const double> p, const ConnectionField& target_conn);

struct SampleIssue {
    std::vector<double> point;
    std::string kind;
};

struct VerdictOptions {
    double tension_tol = 1e-6;
    double hwc_tol = 1e-6;
};

/// Aggregated harmonic-morphism check over a fixed sample set: passes iff the
/// maximal tension norm and the maximal horizontal-conformality residual stay
/// below their tolerances and no sample failed to evaluate.
struct Verdict {
    double max_tension = 0.0;
    double max_hwc = 0.0;
    std::vector<double> worst_tension_point;
    std::vector<double> worst_hwc_point;
    std::vector<double> dilations;          // per successful sample
    std::vector<SampleIssue> issues;
    int sample_count = 0;
    VerdictOptions options;

    bool pass() const {
        return issues.empty() && max_tension <= options.tension_tol && max_hwc <= options.hwc_tol;
    }
};

Verdict harmonic_morphism_verdict(const MapFunction& f, const MetricChart& g_source,
                                  const ConnectionField& target_conn, const MetricChart& g_target,
                                  std::span<const std::vector<double>> samples,
                                  const VerdictOptions& options = {});

/// Matrix field value with first derivatives: J (n x n, row-major) and
/// dJ[m][i][j] = d_m J^i_j.
struct MatrixFieldJets {
    int dim = 0;
    std::vector<double> value;
    std::vector<double> deriv;
};

using MatrixField = std::function<MatrixFieldJets(std::span<const double>)>;

/// The almost Hermitian structure associated with a horizontally conformal
/// submersion of a 4-chart over a surface: J rotates the horizontal plane
/// compatibly with the differential and the target's positive structure, and
/// the vertical plane so the total orientation matches the request (+1 agrees
/// with the chart's oriented volume).
MatrixFieldJets hermitian_from_submersion(const MapJets& mj, const MetricChart& g,
                                          std::span<const double> p, double orientation,
                                          double hwc_tol = 1e-6);
MatrixField hermitian_field(const MapFunction& f, const MetricChart& g, double orientation,
                            double hwc_tol = 1e-6);

/// Norm of the Nijenhuis tensor of J over coordinate fields at p.
double nijenhuis_residual(const MatrixFieldJets& J);
double nijenhuis_residual(const MatrixField& J, std::span<const double> p);

}  // namespace hspace
