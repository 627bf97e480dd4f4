#include "kppcut/error.hpp"

#include <cmath>

namespace kppcut {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::EpsilonOutOfRange: return "EpsilonOutOfRange";
    case ErrorKind::KppViolation: return "KppViolation";
    case ErrorKind::BadTable: return "BadTable";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::ParameterOutOfRange: return "ParameterOutOfRange";
    case ErrorKind::NonPositiveGrowthRate: return "NonPositiveGrowthRate";
    case ErrorKind::NonMonotoneTrial: return "NonMonotoneTrial";
    case ErrorKind::TooFewSamples: return "TooFewSamples";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::GridTooCoarse: return "GridTooCoarse";
    case ErrorKind::NoSignChange: return "NoSignChange";
    case ErrorKind::StiffIntegration: return "StiffIntegration";
    case ErrorKind::FrontHitBoundary: return "FrontHitBoundary";
    case ErrorKind::UnstableStep: return "UnstableStep";
    case ErrorKind::IoError: return "IoError";
    }
    return "Unknown";
}

bool is_validation(ErrorKind kind) noexcept {
    return kind <= ErrorKind::InvalidConfig;
}

bool is_numerical(ErrorKind kind) noexcept {
    return kind >= ErrorKind::NoConvergence && kind <= ErrorKind::UnstableStep;
}

void require_open_unit(double eps, std::string_view name) {
    if (!(eps > 0.0 && eps < 1.0) || !std::isfinite(eps)) {
        throw Error(ErrorKind::EpsilonOutOfRange,
                    std::string(name) + " must lie in (0,1)");
    }
}

}  // namespace kppcut
