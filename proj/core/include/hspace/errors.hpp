#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace hspace {

/// Base class of every error thrown by the library. `kind()` is a stable
/// machine-readable tag used in check reports.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

class SyntaxError : public Error {
public:
    SyntaxError(std::size_t offset, std::vector<std::string> expected, const std::string& message)
        : Error("SyntaxError", message), offset_(offset), expected_(std::move(expected)) {}
    std::size_t offset() const noexcept { return offset_; }
    const std::vector<std::string>& expected() const noexcept { return expected_; }

private:
    std::size_t offset_;
    std::vector<std::string> expected_;
};

#define HSPACE_DEFINE_ERROR(NAME)                                        \
    class NAME : public Error {                                          \
    public:                                                              \
        explicit NAME(const std::string& message) : Error(#NAME, message) {} \
    }

HSPACE_DEFINE_ERROR(UnboundVariable);
HSPACE_DEFINE_ERROR(DomainError);
HSPACE_DEFINE_ERROR(DimensionError);
HSPACE_DEFINE_ERROR(EvaluationError);
HSPACE_DEFINE_ERROR(NearZeroQuaternion);
HSPACE_DEFINE_ERROR(SingularMetric);
HSPACE_DEFINE_ERROR(DegenerateSpan);
HSPACE_DEFINE_ERROR(NotSubmersive);
HSPACE_DEFINE_ERROR(NotHorizontallyConformal);
HSPACE_DEFINE_ERROR(NotAlmostComplex);
HSPACE_DEFINE_ERROR(IncidenceAtInfinity);
HSPACE_DEFINE_ERROR(SingularJacobian);
HSPACE_DEFINE_ERROR(NoConvergence);
HSPACE_DEFINE_ERROR(OutOfDomain);
HSPACE_DEFINE_ERROR(ContactViolation);
HSPACE_DEFINE_ERROR(IntervalViolation);
HSPACE_DEFINE_ERROR(NonConstantScalar);
HSPACE_DEFINE_ERROR(ConfigError);
HSPACE_DEFINE_ERROR(IoError);

#undef HSPACE_DEFINE_ERROR

}  // namespace hspace
