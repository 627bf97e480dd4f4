#pragma once

#include "kppcut/profiles.hpp"

namespace kppcut {

/// Root of phi*tan(phi) = |log eps|/2 on (0, pi/2).
struct PhiStar {
    double phi = 0.0;
    double delta = 0.0;     ///< pi/2 - phi, accurate even when phi is close to pi/2
    double residual = 0.0;  ///< |phi tan phi - |log eps|/2|
    int iterations = 0;
};

inline constexpr double kPhiStarTol = 1e-14;

/// Bisection to width 1e-6, then Newton polish to `tol`. For |log eps| > 10
/// the equation is solved in delta = pi/2 - phi, i.e. (pi/2 - delta) cot(delta) = |log eps|/2.
/// Throws EpsilonOutOfRange or NoConvergence (200 iterations).
PhiStar solve_phi_star_detailed(double epsilon, double tol = kPhiStarTol);
double solve_phi_star(double epsilon, double tol = kPhiStarTol);

/// Closed-form speed quantities for one cutoff, normalized to unit diffusion and f'(0) = 1.
struct SpeedReport {
    double epsilon = 0.0;
    double phi_star = 0.0;
    double c_L = 0.0;          ///< 2 sin(phi*), exact speed for the linear cutoff profile
    double c_BD = 0.0;         ///< 2 - pi^2 / log(eps)^2
    double c_KPP = 0.0;        ///< 2, speed without cutoff
    double c_ZFK = 0.0;        ///< sqrt(1 - eps^2), ZFK estimate for the linear profile
    double M = 0.0;            ///< supremum of the relaxed functional, 2 sin^2(phi*)
    double M_zfk_bound = 0.0;  ///< 2(1 - eps^2)/(1 + eps^2)^2
    double speed_deficit = 0.0;  ///< 2 - c_L, computed without cancellation
};

SpeedReport cutoff_linear_speed(double epsilon);

double brunet_derrida_speed(double epsilon);

/// 2 sqrt(f'(0)); throws NonPositiveGrowthRate for fprime0 <= 0.
double kpp_speed(double fprime0);

/// sqrt(2 F(1)) for the given profile.
double zfk_speed(const CutoffProfile& profile);

/// Upper bound on the relaxed functional, valid for 0 <= eps < 1.
double zfk_functional_bound(double epsilon);

/// (2 - c_L) log(eps)^2 / pi^2, which tends to 1 as eps -> 0.
double bd_ratio(double epsilon);

}  // namespace kppcut
