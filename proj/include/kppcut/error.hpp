#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kppcut {

/// Failure categories shared by every module. The CLI maps them onto exit
/// codes (validation 2, numerical 3, I/O 4).
enum class ErrorKind {
    // validation
    EpsilonOutOfRange,
    KppViolation,
    BadTable,
    DomainError,
    ParameterOutOfRange,
    NonPositiveGrowthRate,
    NonMonotoneTrial,
    TooFewSamples,
    InvalidConfig,
    // numerical
    NoConvergence,
    QuadratureFailure,
    GridTooCoarse,
    NoSignChange,
    StiffIntegration,
    FrontHitBoundary,
    UnstableStep,
    // io
    IoError,
};

std::string_view to_string(ErrorKind kind) noexcept;

bool is_validation(ErrorKind kind) noexcept;
bool is_numerical(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Throws EpsilonOutOfRange unless 0 < eps < 1.
void require_open_unit(double eps, std::string_view name = "epsilon");

}  // namespace kppcut
