#pragma once

#include <functional>
#include <optional>

#include "hspace/config.hpp"
#include "hspace/report.hpp"

namespace hspace {

struct RunOptions {
    std::uint64_t seed = 0;
    std::optional<int> samples_override;
    std::optional<double> tolerance_override;
    std::function<void(const std::string&)> warn;  // optional diagnostics sink
};

/// Executes every declared check. Configuration problems (dangling
/// references, malformed keys) abort with ConfigError before any check runs;
/// runtime failures inside a check mark that check failed instead.
Report run_suite(const Config& config, const RunOptions& options = {});

}  // namespace hspace
