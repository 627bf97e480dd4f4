#pragma once

#include "kppcut/profiles.hpp"

#include <optional>

namespace kppcut {

/// Error chain for profiles with N(u) <= B (u - eps)^(1+eta).
struct JChain {
    double tan_phi = 0.0;
    double alpha = 0.0;            ///< (tan phi*)^(-(2+eta+r)/(3+eta))
    double I_val = 0.0;            ///< sigma-integral with the eps shift
    double J_val = 0.0;            ///< same integral with eps dropped
    double J1_bound = 0.0;         ///< 2^(eta-1) [alpha^2 + alpha^(3+eta) tan^(1+eta)]
    double J2_bound = 0.0;         ///< (1 + tan)^(1+eta) exp(-alpha eta tan) 2 phi*
    double J1_target = 0.0;        ///< 2^eta tan^-(1+r); dominates J1_bound once tan phi* > 1
    double J_appendix_bound = 0.0; ///< (2/eta)(1 - exp(-2 eta phi* tan phi*))
    double exponent_lhs = 0.0;     ///< 2 (2+eta+r)/(3+eta)
    double exponent_rhs = 0.0;     ///< 1 + r
    double gap_bound_I = 0.0;      ///< 8 B cos sin / (2 phi* + sin 2 phi*) * I
    double gap_bound_J = 0.0;      ///< same prefactor times J
};

struct GapReport {
    double epsilon = 0.0;
    double eta = 0.0;
    double B = 0.0;
    double r = 0.5;
    double phi_star = 0.0;
    double D = 0.0;         ///< closed-form denominator of the optimal trial
    double gap_num = 0.0;   ///< int_eps^(1/eps) N(u) u' / s ds on the optimal trial
    double gap = 0.0;       ///< 2 gap_num / D, bound on c_L^2 - c^2
    double c_upper = 0.0;   ///< c_L
    double c_lower = 0.0;   ///< sqrt(max(c_L^2 - gap, 0))
    std::optional<JChain> chain;  ///< present when the growth hypothesis holds
    bool weak_hypothesis = false; ///< eta <= 1
};

/// int_0^(1/eps) u'^2 for the optimal trial, eps (2 phi* + sin 2 phi*) / (4 cos^3 phi* sin phi*).
double denominator_D(double epsilon);

/// Same integral by adaptive quadrature of the closed-form maximizer's derivative.
double denominator_D_quadrature(double epsilon);

/// Gap numerator int N(u(s)) u'(s) / s ds, integrated in log s.
double gap_numerator_s(const CutoffProfile& profile);

/// Gap numerator after the substitution sigma = phi* - phase(s):
/// eps / cos^2 phi* * int_0^(2 phi*) N(u(sigma)) sin(sigma) exp(sigma tan phi*) dsigma.
double gap_numerator_sigma(const CutoffProfile& profile);

/// 2 gap_numerator_s / D, a rigorous upper bound on c_L^2 - c^2 for any N >= 0.
double gap_quadrature(const CutoffProfile& profile);

/// I, J, alpha and the J1/J2/appendix bounds. Throws ParameterOutOfRange unless
/// eta > 0, B > 0 and 0 < r < 1.
JChain analytic_J_chain(double epsilon, double B, double eta, double r = 0.5);

/// (2/eta)(1 - exp(-2 eta phi* tan phi*)).
double appendix_J_bound(double epsilon, double eta);

/// H(sigma) = sigma tan phi* - log(cos sigma + tan phi* sin sigma) and its derivative.
double appendix_H(double sigma, double tan_phi);
double appendix_H_sigma(double sigma, double tan_phi);

/// True when N(u) <= B (u - eps)^(1+eta) up to rounding on a 10^4-point grid over [eps, 1].
bool satisfies_growth_hypothesis(const CutoffProfile& profile, double B, double eta);

struct SpeedBracket {
    double c_lower = 0.0;
    double c_upper = 0.0;
};

/// [sqrt(max(c_L^2 - gap, 0)), c_L]; the front speed lies inside.
SpeedBracket speed_bracket(const CutoffProfile& profile);

/// Full report. The analytic chain is attached only when the profile satisfies
/// the growth hypothesis with the given B and eta; the quadrature gap is always computed.
GapReport gap_report(const CutoffProfile& profile, double B, double eta, double r = 0.5);

}  // namespace kppcut
