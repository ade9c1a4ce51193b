#pragma once

#include <functional>
#include <optional>

#include "hspace/maps.hpp"
#include "hspace/weyl.hpp"

namespace hspace {

/// The 4-dimensional chart built from an Einstein-Weyl 3-structure:
/// g = t^{-2} ((1 - t^2 S/6) h + (1 - t^2 S/6)^{-1} (dt + t a + t^2/2 *dα)^2)
/// on the t-interval where t^2 S - 6 stays away from zero.
struct HSpaceChart {
    WeylStructure base;
    double scalar = 0.0;                  // validated-constant scalar of the Weyl connection
    MetricChart g;                        // dim 4, coordinates (t, x1, x2, x3)
    std::pair<double, double> t_interval; // sampling interval for t
};

struct CalderbankOptions {
    int validation_samples = 24;
    double scalar_spread_tol = 1e-6;       // allowed variation of S over the base
    double einstein_weyl_warn_tol = 1e-6;
    std::function<void(const std::string&)> warn;  // optional sink for warnings
};

/// Assembles the metric symbolically from the base charts; the scalar S is
/// sampled, required constant, and substituted as a number. A base that is
/// not Einstein-Weyl within tolerance produces a warning, not an error.
HSpaceChart calderbank_metric(const WeylStructure& w, const CalderbankOptions& options = {});

/// Deviation of t^2 g(t, x) from h(x) (+) dt^2 at a small probe value of t.
double pole_check(const HSpaceChart& h, std::span<const double> base_point, double t_probe = 1e-4);

/// The projection (t, x) -> x as a 4 -> 3 map chart.
MapChart retract(const HSpaceChart& h);

/// f o retract for a 3 -> 2 map defined on the base chart.
MapChart compose_extension(const MapChart& f, const HSpaceChart& h);

/// Built-in Weyl-structure library: "flat-euclidean", "round-s3",
/// "hyperbolic-3".
const WeylStructure& builtin_weyl(const std::string& name);
std::vector<std::string> builtin_weyl_names();

}  // namespace hspace
