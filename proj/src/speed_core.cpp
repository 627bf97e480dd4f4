#include "kppcut/speed_core.hpp"

#include "kppcut/error.hpp"

#include <cmath>
#include <numbers>

namespace kppcut {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kBisectionWidth = 1e-6;
constexpr int kMaxIterations = 200;
constexpr double kDeltaBranchLog = 10.0;

// Generic bracketed solve: g decreasing or increasing on [lo, hi] with a sign change.
// Bisection until the bracket is narrower than kBisectionWidth, then safeguarded Newton.
template <typename G, typename DG>
double bracketed_newton(G g, DG dg, double lo, double hi, double tol, int& iterations) {
    const bool increasing = g(hi) > g(lo);
    auto below = [&](double x) { return increasing ? g(x) < 0.0 : g(x) > 0.0; };

    while (hi - lo > kBisectionWidth) {
        if (++iterations > kMaxIterations) {
            throw Error(ErrorKind::NoConvergence, "phi* bisection did not converge");
        }
        const double mid = 0.5 * (lo + hi);
        (below(mid) ? lo : hi) = mid;
    }
    double x = 0.5 * (lo + hi);
    while (true) {
        if (++iterations > kMaxIterations) {
            throw Error(ErrorKind::NoConvergence, "phi* Newton polish did not converge");
        }
        const double gx = g(x);
        if (gx == 0.0) break;
        (below(x) ? lo : hi) = x;
        double next = x - gx / dg(x);
        const bool newton_ok = next > lo && next < hi;
        if (!newton_ok) next = 0.5 * (lo + hi);
        const double moved = std::abs(next - x);
        x = next;
        if ((newton_ok && moved <= tol) || hi - lo <= tol) break;
    }
    return x;
}

}  // namespace

PhiStar solve_phi_star_detailed(double epsilon, double tol) {
    require_open_unit(epsilon);
    if (!(tol > 0.0)) throw Error(ErrorKind::ParameterOutOfRange, "tol must be positive");

    const double abs_log = -std::log(epsilon);
    const double target = 0.5 * abs_log;
    PhiStar out;

    if (abs_log <= kDeltaBranchLog) {
        auto g = [&](double p) { return p * std::tan(p) - target; };
        auto dg = [&](double p) {
            const double c = std::cos(p);
            return std::tan(p) + p / (c * c);
        };
        out.phi = bracketed_newton(g, dg, 0.0, kHalfPi, tol, out.iterations);
        out.delta = kHalfPi - out.phi;
        out.residual = std::abs(g(out.phi));
    } else {
        auto h = [&](double d) { return (kHalfPi - d) / std::tan(d) - target; };
        auto dh = [&](double d) {
            const double s = std::sin(d);
            return -1.0 / std::tan(d) - (kHalfPi - d) / (s * s);
        };
        out.delta = bracketed_newton(h, dh, 0.0, kHalfPi, tol, out.iterations);
        out.phi = kHalfPi - out.delta;
        out.residual = std::abs(h(out.delta));
    }
    return out;
}

double solve_phi_star(double epsilon, double tol) {
    return solve_phi_star_detailed(epsilon, tol).phi;
}

SpeedReport cutoff_linear_speed(double epsilon) {
    const PhiStar root = solve_phi_star_detailed(epsilon);
    const double s = std::sin(root.phi);
    SpeedReport r;
    r.epsilon = epsilon;
    r.phi_star = root.phi;
    r.c_L = 2.0 * s;
    r.c_BD = brunet_derrida_speed(epsilon);
    r.c_KPP = kpp_speed(1.0);
    r.c_ZFK = std::sqrt(1.0 - epsilon * epsilon);
    r.M = 2.0 * s * s;
    r.M_zfk_bound = zfk_functional_bound(epsilon);
    const double half = std::sin(0.5 * root.delta);
    r.speed_deficit = 4.0 * half * half;
    return r;
}

double brunet_derrida_speed(double epsilon) {
    require_open_unit(epsilon);
    const double l = std::log(epsilon);
    return 2.0 - std::numbers::pi * std::numbers::pi / (l * l);
}

double kpp_speed(double fprime0) {
    if (!(fprime0 > 0.0) || !std::isfinite(fprime0)) {
        throw Error(ErrorKind::NonPositiveGrowthRate, "f'(0) must be positive");
    }
    return 2.0 * std::sqrt(fprime0);
}

double zfk_speed(const CutoffProfile& profile) {
    return std::sqrt(2.0 * profile.F(1.0));
}

double zfk_functional_bound(double epsilon) {
    if (!(epsilon >= 0.0 && epsilon < 1.0)) {
        throw Error(ErrorKind::EpsilonOutOfRange, "epsilon must lie in [0,1)");
    }
    const double e2 = epsilon * epsilon;
    return 2.0 * (1.0 - e2) / ((1.0 + e2) * (1.0 + e2));
}

double bd_ratio(double epsilon) {
    const SpeedReport r = cutoff_linear_speed(epsilon);
    const double l = std::log(epsilon);
    return r.speed_deficit * l * l / (std::numbers::pi * std::numbers::pi);
}

}  // namespace kppcut
