#pragma once

#include "kppcut/profiles.hpp"

#include <optional>
#include <span>
#include <vector>

namespace kppcut {

struct SimConfig {
    double L = 400.0;            ///< domain [0, L]
    double h = 0.1;              ///< grid spacing
    double dt = 0.05;            ///< time step, must not exceed h
    double T = 150.0;            ///< final time
    double ic_front_pos = 20.0;  ///< u = 1 left of this point at t = 0, 0 right of it
    double fit_window = 0.5;     ///< trailing fraction of [0, T] used for the speed fit
    double output_interval = 0.5;
    double boundary_buffer = 20.0;  ///< the front may not come closer to x = L
};

struct FrontSimResult {
    std::vector<double> times;
    std::vector<double> front_positions;  ///< u = 1/2 crossings
    double fitted_speed = 0.0;
    double fit_residual = 0.0;
    std::optional<double> shoot_speed;
    double u_min = 0.0;  ///< extremes of u over the whole run
    double u_max = 0.0;
};

struct SpeedFit {
    double speed = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  ///< max |x - fit|
};

/// Least-squares slope over the trailing `window` fraction of the time span.
/// Throws TooFewSamples with fewer than 10 samples in the window.
SpeedFit fit_speed(std::span<const double> times, std::span<const double> positions, double window);

inline constexpr double kDefaultShootTol = 1e-10;

/// Traveling-wave speed from the phase plane p dp/du = c p - f(u), p = -du/dxi.
///
/// The orbit leaves u = 1 (square-root departure when f(1^-) > 0, saddle
/// direction otherwise) and is integrated down to u = eps with an adaptive
/// Dormand–Prince pair in q = p^2. Below the cutoff f = 0 forces p = c u, so
/// the speed is the root of p_c(eps) - c eps, found by bisection on (0, 2.5].
/// Throws NoSignChange or StiffIntegration.
double shoot_wave_speed(const CutoffProfile& profile, double tol = kDefaultShootTol);

/// Mismatch p_c(eps) - c eps used by the shooting; negative when the orbit
/// reaches p = 0 before the cutoff.
double shooting_mismatch(const CutoffProfile& profile, double c);

/// Semi-implicit finite differences for u_t = u_xx + f(u): reaction explicit and
/// clipped to [0,1] (f vanishes at and beyond 1), diffusion implicit via a
/// tridiagonal solve. Dirichlet u = 1 at x = 0 and u = 0 at x = L.
/// Throws InvalidConfig, FrontHitBoundary, UnstableStep.
FrontSimResult simulate_front(const CutoffProfile& profile, const SimConfig& config = {});

}  // namespace kppcut
