#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hspace {

struct CheckIssue {
    std::vector<double> point;
    std::string kind;
};

struct CheckResult {
    std::string name;
    double max_residual = 0.0;
    double tolerance = 0.0;
    int sample_count = 0;
    std::vector<double> worst_point;
    bool pass = false;
    std::vector<CheckIssue> errors;
};

struct Report {
    std::vector<CheckResult> checks;
    std::uint64_t seed = 0;
    std::string config_digest;
    std::string version;

    bool all_pass() const;
};

inline constexpr const char* kToolVersion = "hspace 0.1.0";

std::uint64_t fnv1a64(std::string_view bytes);
std::string digest_string(std::string_view bytes);

/// Canonical serialization: object keys sorted, checks ordered by name,
/// reals printed with 17 significant digits. Byte-identical for identical
/// inputs.
std::string to_canonical_json(const Report& report);

/// Inverse of to_canonical_json (used to verify lossless round trips).
Report report_from_json(const std::string& json_text);

/// Writes the canonical serialization; throws IoError on failure.
void emit(const Report& report, const std::string& path);

}  // namespace hspace
