#include "kppcut/functional.hpp"

#include "kppcut/error.hpp"
#include "kppcut/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace kppcut {

namespace {

void require_monotone(const TrialFunction& trial) {
    if (!trial.is_monotone()) {
        throw Error(ErrorKind::NonMonotoneTrial, "trial function must be nondecreasing");
    }
}

// int_a^b (alpha + beta s)^2 / s^2 ds for 0 < a < b, written to keep every term O(b - a).
double linear_sq_over_s2(double a, double b, double ua, double ub) {
    const double h = b - a;
    const double beta = (ub - ua) / h;
    const double alpha = ua - beta * a;
    return alpha * alpha * h / (a * b) + 2.0 * alpha * beta * std::log1p(h / a) + beta * beta * h;
}

struct PiecewiseSums {
    double numerator = 0.0;
    double denominator = 0.0;
};

// Exact integrals of the interpolant through (0,0) and the given nodes.
PiecewiseSums piecewise_sums(std::span<const double> s, std::span<const double> u, double eps) {
    PiecewiseSums out;
    const double e2 = eps * eps;
    // first piece u = k s on [0, s[0]]
    const double k = u[0] / s[0];
    out.denominator += k * k * s[0];
    if (u[0] > eps) {
        const double start = eps / k;  // where k s = eps
        out.numerator += k * k * (s[0] - start) - e2 * (s[0] - start) / (start * s[0]);
    }
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        const double a = s[i], b = s[i + 1], ua = u[i], ub = u[i + 1];
        const double du = ub - ua;
        out.denominator += du * du / (b - a);
        if (ub <= eps) continue;
        double lo = a, ulo = ua;
        if (ua < eps) {
            lo = a + (eps - ua) / du * (b - a);
            ulo = eps;
        }
        if (lo >= b) continue;
        out.numerator += linear_sq_over_s2(lo, b, ulo, ub) - e2 * (b - lo) / (lo * b);
    }
    return out;
}

quad::Options quad_options(const FunctionalOptions& opt) {
    quad::Options q;
    q.rel_tol = opt.rel_tol;
    q.abs_tol = 1e-300;
    q.max_intervals = 20000;
    return q;
}

void require_converged(const quad::Result& r, const char* what) {
    if (!r.converged) {
        throw Error(ErrorKind::GridTooCoarse,
                    std::string("quadrature of ") + what + " did not reach the requested tolerance");
    }
}

}  // namespace

FunctionalValue eval_G(const TrialFunction& trial, double epsilon, const FunctionalOptions& options) {
    require_open_unit(epsilon);
    require_monotone(trial);
    const double s0 = trial.s0();
    const double e2 = epsilon * epsilon;
    FunctionalValue out;

    if (const auto& p = trial.analytic()) {
        if (std::abs(p->epsilon - epsilon) > 0.0) {
            throw Error(ErrorKind::DomainError, "analytic trial built for a different epsilon");
        }
        const auto q = quad_options(options);
        const double t0 = std::log(epsilon), t1 = std::log(s0);
        const auto num = quad::integrate(
            [&](double t) {
                const double s = std::exp(t);
                const double u = eval_maximizer(*p, s).u;
                return (u * u - e2) / s;
            },
            t0, t1, q);
        const auto den = quad::integrate(
            [&](double t) {
                const double s = std::exp(t);
                const double d = eval_maximizer(*p, s).du_ds;
                return d * d * s;
            },
            t0, t1, q);
        require_converged(num, "numerator");
        require_converged(den, "denominator");
        out.numerator = num.value + (1.0 - e2) / s0;
        out.denominator = epsilon + den.value;
        out.abs_error = num.abs_error + den.abs_error;
    } else {
        const auto sums = piecewise_sums(trial.s_grid(), trial.u_values(), epsilon);
        out.numerator = sums.numerator + (1.0 - e2) / s0;
        out.denominator = sums.denominator;
        if (options.grid_tol && trial.s_grid().size() >= 3) {
            std::vector<double> cs, cu;
            const auto s = trial.s_grid();
            const auto u = trial.u_values();
            for (std::size_t i = 0; i < s.size(); i += 2) {
                cs.push_back(s[i]);
                cu.push_back(u[i]);
            }
            if (cs.back() != s.back()) {
                cs.push_back(s.back());
                cu.push_back(u.back());
            }
            const auto coarse = piecewise_sums(cs, cu, epsilon);
            const double fine_value = 0.5 * out.numerator / out.denominator;
            const double coarse_value =
                0.5 * (coarse.numerator + (1.0 - e2) / s0) / coarse.denominator;
            // second-order interpolation: error of the fine grid ~ difference / 3
            const double estimate = std::abs(fine_value - coarse_value) / 3.0;
            out.abs_error = estimate;
            if (estimate > *options.grid_tol * std::abs(fine_value)) {
                throw Error(ErrorKind::GridTooCoarse, "trial grid too coarse for the requested tolerance");
            }
        }
    }
    out.value = 0.5 * out.numerator / out.denominator;
    return out;
}

FunctionalValue eval_F(const TrialFunction& trial, const CutoffProfile& profile,
                       std::optional<double> s0_opt, const FunctionalOptions& options) {
    require_monotone(trial);
    const double eps = profile.epsilon();
    const double s_end = trial.s0();
    const double s0 = s0_opt.value_or(s_end);
    if (!(s0 >= s_end * (1.0 - 1e-15))) {
        throw Error(ErrorKind::DomainError, "s0 must not be smaller than the trial's end point");
    }
    const double F1 = profile.F(1.0);
    const auto q = quad_options(options);
    FunctionalValue out;

    auto F_of = [&](double u) { return profile.F(std::clamp(u, 0.0, 1.0)); };

    if (const auto& p = trial.analytic()) {
        // F(u) vanishes while u <= eps; below p->epsilon the trial is u = s.
        double start = eps;
        if (eps > p->epsilon) {
            // locate u = eps on the trial by bisection in log s
            double lo = std::log(p->epsilon), hi = std::log(s_end);
            for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
                const double mid = 0.5 * (lo + hi);
                (eval_maximizer(*p, std::exp(mid)).u < eps ? lo : hi) = mid;
            }
            start = std::exp(hi);
        }
        const auto num = quad::integrate(
            [&](double t) {
                const double s = std::exp(t);
                return F_of(eval_maximizer(*p, s).u) / s;
            },
            std::log(start), std::log(s_end), q);
        const auto den = quad::integrate(
            [&](double t) {
                const double s = std::exp(t);
                const double d = eval_maximizer(*p, s).du_ds;
                return d * d * s;
            },
            std::log(p->epsilon), std::log(s_end), q);
        require_converged(num, "numerator");
        require_converged(den, "denominator");
        out.numerator = num.value;
        out.denominator = p->epsilon + den.value;
        out.abs_error = num.abs_error + den.abs_error;
    } else {
        const auto s = trial.s_grid();
        const auto u = trial.u_values();
        std::vector<double> nodes{0.0};
        std::vector<double> vals{0.0};
        nodes.insert(nodes.end(), s.begin(), s.end());
        vals.insert(vals.end(), u.begin(), u.end());
        double num = 0.0, den = 0.0, err = 0.0;
        for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
            const double a = nodes[i], b = nodes[i + 1], ua = vals[i], ub = vals[i + 1];
            const double du = ub - ua;
            den += du * du / (b - a);
            if (ub <= eps) continue;
            double lo = a;
            if (ua < eps) lo = a + (eps - ua) / du * (b - a);
            if (lo >= b) continue;
            auto integrand = [&](double x) {
                const double w = (x - a) / (b - a);
                return F_of(ua + w * du) / (x * x);
            };
            const auto r = quad::integrate(integrand, lo, b, q);
            require_converged(r, "numerator");
            num += r.value;
            err += r.abs_error;
        }
        out.numerator = num;
        out.denominator = den;
        out.abs_error = err;
    }
    // u = 1 on [s_end, s0] plus the F(1)/s0 boundary term
    out.numerator += F1 * (1.0 / s_end - 1.0 / s0) + F1 / s0;
    out.value = 2.0 * out.numerator / out.denominator;
    return out;
}

}  // namespace kppcut
