#pragma once

#include <string>
#include <vector>

#include "hspace/chart.hpp"

namespace hspace {

/// Metric library: "flat-r2", "flat-r3", "flat-r4", "hyperbolic-3",
/// "hyperbolic-4", "round-s3".
const MetricChart& builtin_metric(const std::string& name);
std::vector<std::string> builtin_metric_names();

/// Ready-made suite configurations: "hspace-flat", "hspace-round-s3",
/// "hspace-hyperbolic3", "surface-model", "infrastructure".
const std::string& builtin_config(const std::string& name);
std::vector<std::string> builtin_config_names();

}  // namespace hspace
