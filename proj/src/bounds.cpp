#include "kppcut/bounds.hpp"

#include "kppcut/error.hpp"
#include "kppcut/maximizer.hpp"
#include "kppcut/quadrature.hpp"
#include "kppcut/speed_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace kppcut {

namespace {

constexpr double kUlp = std::numeric_limits<double>::epsilon();

quad::Options tight() {
    quad::Options q;
    q.rel_tol = 1e-12;
    q.abs_tol = 1e-300;
    q.max_intervals = 20000;
    return q;
}

double checked(const quad::Result& r, const char* what) {
    if (!r.converged && r.abs_error > 1e-9 * std::abs(r.value)) {
        throw Error(ErrorKind::QuadratureFailure, std::string("quadrature failed for ") + what);
    }
    return r.value;
}

void require_chain_params(double B, double eta, double r) {
    if (!(eta > 0.0) || !std::isfinite(eta)) {
        throw Error(ErrorKind::ParameterOutOfRange, "eta must be positive");
    }
    if (!(B > 0.0) || !std::isfinite(B)) {
        throw Error(ErrorKind::ParameterOutOfRange, "B must be positive");
    }
    if (!(r > 0.0 && r < 1.0)) {
        throw Error(ErrorKind::ParameterOutOfRange, "r must lie in (0,1)");
    }
}

// u on the optimal trial as a function of sigma in [0, 2 phi*]
double u_of_sigma(double sigma, double tan_phi) {
    return std::exp(-sigma * tan_phi) * (std::cos(sigma) + tan_phi * std::sin(sigma));
}

}  // namespace

double denominator_D(double epsilon) {
    const double phi = solve_phi_star(epsilon);
    const double c = std::cos(phi), s = std::sin(phi);
    return epsilon * (2.0 * phi + std::sin(2.0 * phi)) / (4.0 * c * c * c * s);
}

double denominator_D_quadrature(double epsilon) {
    const MaximizerParams p = maximizer_params(epsilon);
    const auto r = quad::integrate(
        [&](double t) {
            const double s = std::exp(t);
            const double d = eval_maximizer(p, s).du_ds;
            return d * d * s;
        },
        std::log(epsilon), std::log(p.s0), tight());
    return epsilon + checked(r, "denominator");
}

double gap_numerator_s(const CutoffProfile& profile) {
    const double eps = profile.epsilon();
    const MaximizerParams p = maximizer_params(eps);
    const auto r = quad::integrate(
        [&](double t) {
            const auto v = eval_maximizer(p, std::exp(t));
            return profile.N(std::clamp(v.u, eps, 1.0)) * v.du_ds;
        },
        std::log(eps), std::log(p.s0), tight());
    return checked(r, "gap numerator (s form)");
}

double gap_numerator_sigma(const CutoffProfile& profile) {
    const double eps = profile.epsilon();
    const double phi = solve_phi_star(eps);
    const double t = std::tan(phi), c = std::cos(phi);
    const auto r = quad::integrate(
        [&](double sigma) {
            const double u = std::clamp(u_of_sigma(sigma, t), eps, 1.0);
            return profile.N(u) * std::sin(sigma) * std::exp(sigma * t);
        },
        0.0, 2.0 * phi, tight());
    return eps / (c * c) * checked(r, "gap numerator (sigma form)");
}

double gap_quadrature(const CutoffProfile& profile) {
    return 2.0 * gap_numerator_s(profile) / denominator_D(profile.epsilon());
}

double appendix_H(double sigma, double tan_phi) {
    return sigma * tan_phi - std::log(std::cos(sigma) + tan_phi * std::sin(sigma));
}

double appendix_H_sigma(double sigma, double tan_phi) {
    return std::sin(sigma) * (1.0 + tan_phi * tan_phi) / (std::cos(sigma) + tan_phi * std::sin(sigma));
}

double appendix_J_bound(double epsilon, double eta) {
    if (!(eta > 0.0)) throw Error(ErrorKind::ParameterOutOfRange, "eta must be positive");
    const double phi = solve_phi_star(epsilon);
    // 2 phi* tan phi* = |log eps|
    return 2.0 / eta * -std::expm1(-eta * 2.0 * phi * std::tan(phi));
}

JChain analytic_J_chain(double epsilon, double B, double eta, double r) {
    require_open_unit(epsilon);
    require_chain_params(B, eta, r);
    const double phi = solve_phi_star(epsilon);
    const double t = std::tan(phi);
    const double p = 1.0 + eta;
    JChain out;
    out.tan_phi = t;

    out.I_val = checked(quad::integrate(
                            [&](double sigma) {
                                const double base = std::max(u_of_sigma(sigma, t) - epsilon, 0.0);
                                return std::pow(base, p) * std::sin(sigma) * std::exp(sigma * t);
                            },
                            0.0, 2.0 * phi, tight()),
                        "I");
    out.J_val = checked(quad::integrate(
                            [&](double sigma) {
                                const double base = std::cos(sigma) + t * std::sin(sigma);
                                return std::pow(base, p) * std::sin(sigma) * std::exp(-sigma * eta * t);
                            },
                            0.0, 2.0 * phi, tight()),
                        "J");

    out.alpha = std::pow(t, -(2.0 + eta + r) / (3.0 + eta));
    out.J1_bound = std::pow(2.0, eta - 1.0) *
                   (out.alpha * out.alpha + std::pow(out.alpha, 3.0 + eta) * std::pow(t, p));
    out.J2_bound = std::pow(1.0 + t, p) * std::exp(-out.alpha * eta * t) * 2.0 * phi;
    out.J1_target = std::pow(2.0, eta) * std::pow(t, -(1.0 + r));
    out.J_appendix_bound = appendix_J_bound(epsilon, eta);
    out.exponent_lhs = 2.0 * (2.0 + eta + r) / (3.0 + eta);
    out.exponent_rhs = 1.0 + r;

    const double prefactor = 8.0 * B * std::cos(phi) * std::sin(phi) / (2.0 * phi + std::sin(2.0 * phi));
    out.gap_bound_I = prefactor * out.I_val;
    out.gap_bound_J = prefactor * out.J_val;
    return out;
}

bool satisfies_growth_hypothesis(const CutoffProfile& profile, double B, double eta) {
    const double eps = profile.epsilon();
    for (int i = 0; i <= kKppValidationPoints; ++i) {
        const double u = std::min(1.0, eps + (1.0 - eps) * i / kKppValidationPoints);
        const double cap = B * std::pow(u - eps, 1.0 + eta);
        // N is formed as u - f, so allow a few ulps of u
        if (profile.N(u) > cap * (1.0 + 1e-14) + 8.0 * kUlp * u) return false;
    }
    return true;
}

SpeedBracket speed_bracket(const CutoffProfile& profile) {
    const double c_L = cutoff_linear_speed(profile.epsilon()).c_L;
    const double gap = gap_quadrature(profile);
    return {std::sqrt(std::max(c_L * c_L - gap, 0.0)), c_L};
}

GapReport gap_report(const CutoffProfile& profile, double B, double eta, double r) {
    require_chain_params(B, eta, r);
    GapReport g;
    g.epsilon = profile.epsilon();
    g.B = B;
    g.eta = eta;
    g.r = r;
    g.phi_star = solve_phi_star(g.epsilon);
    g.D = denominator_D(g.epsilon);
    g.gap_num = gap_numerator_s(profile);
    g.gap = 2.0 * g.gap_num / g.D;
    g.c_upper = 2.0 * std::sin(g.phi_star);
    g.c_lower = std::sqrt(std::max(g.c_upper * g.c_upper - g.gap, 0.0));
    g.weak_hypothesis = eta <= 1.0;
    if (satisfies_growth_hypothesis(profile, B, eta)) {
        g.chain = analytic_J_chain(g.epsilon, B, eta, r);
    }
    return g;
}

}  // namespace kppcut
