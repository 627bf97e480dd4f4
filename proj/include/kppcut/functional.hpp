#pragma once

#include "kppcut/maximizer.hpp"
#include "kppcut/profiles.hpp"

#include <optional>

namespace kppcut {

/// Numerator, denominator and value of a variational functional.
struct FunctionalValue {
    double numerator = 0.0;
    double denominator = 0.0;
    double value = 0.0;
    double abs_error = 0.0;  ///< quadrature error estimate on the numerator and denominator
};

struct FunctionalOptions {
    double rel_tol = 1e-13;
    /// When set, tabulated trials are also evaluated on every other node and
    /// GridTooCoarse is thrown if the estimated interpolation error of the value
    /// exceeds this relative tolerance.
    std::optional<double> grid_tol;
};

/// Relaxed functional G(u) = 1/2 * int [u^2 - eps^2]_+ / s^2 / int u'^2 over the half line,
/// with u = 1 beyond s0.
///
/// Analytic trials are integrated by adaptive Gauss–Kronrod in log s; the
/// segment below eps and the tail beyond s0 are added in closed form.
/// Tabulated trials are integrated exactly for their piecewise-linear interpolant.
/// Throws NonMonotoneTrial, GridTooCoarse.
FunctionalValue eval_G(const TrialFunction& trial, double epsilon,
                       const FunctionalOptions& options = {});

/// General functional 2 [F(1)/s0 + int_0^s0 F(u)/s^2] / int_0^s0 u'^2.
///
/// `s0` defaults to the trial's own end point; a larger s0 extends u by 1.
FunctionalValue eval_F(const TrialFunction& trial, const CutoffProfile& profile,
                       std::optional<double> s0 = std::nullopt,
                       const FunctionalOptions& options = {});

}  // namespace kppcut
