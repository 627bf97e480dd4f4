#include "kppcut/wavelab.hpp"

#include "kppcut/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace kppcut {

SpeedFit fit_speed(std::span<const double> times, std::span<const double> positions, double window) {
    if (times.size() != positions.size() || times.empty()) {
        throw Error(ErrorKind::TooFewSamples, "times and positions must be non-empty and equal length");
    }
    if (!(window > 0.0 && window <= 1.0)) {
        throw Error(ErrorKind::ParameterOutOfRange, "fit window must lie in (0,1]");
    }
    const double t_end = times.back();
    const double t_cut = t_end - window * (t_end - times.front());
    std::size_t first = 0;
    while (first < times.size() && times[first] < t_cut) ++first;
    const std::size_t n = times.size() - first;
    if (n < 10) throw Error(ErrorKind::TooFewSamples, "need at least 10 samples in the fit window");

    double mt = 0.0, mx = 0.0;
    for (std::size_t i = first; i < times.size(); ++i) {
        if (!std::isfinite(positions[i])) throw Error(ErrorKind::TooFewSamples, "non-finite position");
        mt += times[i];
        mx += positions[i];
    }
    mt /= static_cast<double>(n);
    mx /= static_cast<double>(n);
    double stt = 0.0, stx = 0.0;
    for (std::size_t i = first; i < times.size(); ++i) {
        stt += (times[i] - mt) * (times[i] - mt);
        stx += (times[i] - mt) * (positions[i] - mx);
    }
    SpeedFit fit;
    fit.speed = stt > 0.0 ? stx / stt : 0.0;
    fit.intercept = mx - fit.speed * mt;
    for (std::size_t i = first; i < times.size(); ++i) {
        fit.residual = std::max(fit.residual, std::abs(positions[i] - fit.intercept - fit.speed * times[i]));
    }
    return fit;
}

namespace {

// Dormand–Prince 5(4) tableau
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

constexpr double kShootRtol = 1e-12;
constexpr double kShootAtol = 1e-16;
constexpr double kDeparture = 1e-8;
constexpr long kMaxSteps = 2000000;

}  // namespace

double shooting_mismatch(const CutoffProfile& profile, double c) {
    const double eps = profile.epsilon();
    const double f1 = profile.f_at_one();
    const double w0 = kDeparture;

    double q;
    if (f1 > 1e-8) {
        const double p = std::sqrt(2.0 * f1 * w0) - 2.0 * c / 3.0 * w0;
        q = p * p;
    } else {
        const double k = std::max(-profile.fprime_at_one(), 0.0);
        const double lambda = std::max(0.5 * (-c + std::sqrt(c * c + 4.0 * k)), 1e-8);
        q = lambda * lambda * w0 * w0;
    }

    // dq/dw = 2 f(1 - w) - 2 c sqrt(q), with w = 1 - u running from w0 to 1 - eps
    auto rhs = [&](double w, double y) {
        const double u = std::clamp(1.0 - w, 0.0, 1.0);
        return 2.0 * profile.f(u) - 2.0 * c * std::sqrt(std::max(y, 0.0));
    };

    const double w_end = 1.0 - eps;
    double w = w0;
    double step = 1e-9;
    double k1 = rhs(w, q);
    for (long n = 0; n < kMaxSteps; ++n) {
        if (w >= w_end) return std::sqrt(std::max(q, 0.0)) - c * eps;
        step = std::min(step, w_end - w);
        const double k2 = rhs(w + c2 * step, q + step * a21 * k1);
        const double k3 = rhs(w + c3 * step, q + step * (a31 * k1 + a32 * k2));
        const double k4 = rhs(w + c4 * step, q + step * (a41 * k1 + a42 * k2 + a43 * k3));
        const double k5 = rhs(w + c5 * step, q + step * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const double k6 = rhs(w + step, q + step * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const double q_new = q + step * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const double k7 = rhs(w + step, q_new);
        const double err = std::abs(step * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7));
        const double scale = kShootAtol + kShootRtol * std::max(std::abs(q), std::abs(q_new));
        const double ratio = err / scale;
        if (ratio <= 1.0) {
            w += step;
            q = q_new;
            k1 = k7;
            if (q <= 0.0) return -c * eps - (w_end - w);  // orbit reached p = 0 above the cutoff
        }
        const double factor = ratio == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(ratio, -0.2), 0.2, 5.0);
        step *= factor;
        if (step < 1e-18) {
            if (q < 1e-20) return -c * eps - (w_end - w);
            throw Error(ErrorKind::StiffIntegration, "phase-plane step size underflow");
        }
    }
    throw Error(ErrorKind::StiffIntegration, "phase-plane integration exceeded the step budget");
}

double shoot_wave_speed(const CutoffProfile& profile, double tol) {
    if (!(tol > 0.0)) throw Error(ErrorKind::ParameterOutOfRange, "tol must be positive");
    double lo = 1e-6, hi = 2.5;
    const double s_lo = shooting_mismatch(profile, lo);
    const double s_hi = shooting_mismatch(profile, hi);
    if (!(s_lo > 0.0) || !(s_hi < 0.0)) {
        std::ostringstream os;
        os << "shooting mismatch has no sign change on [" << lo << ", " << hi << "]: " << s_lo
           << ", " << s_hi;
        throw Error(ErrorKind::NoSignChange, os.str());
    }
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        (shooting_mismatch(profile, mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

namespace {

void validate(const SimConfig& c) {
    const bool ok = c.L > 0 && c.h > 0 && c.dt > 0 && c.T > 0 && c.dt <= c.h &&
                    c.ic_front_pos > 0 && c.ic_front_pos < c.L - c.boundary_buffer &&
                    c.fit_window > 0 && c.fit_window <= 1 && c.output_interval >= c.dt &&
                    c.boundary_buffer >= 0 && c.L / c.h >= 4;
    if (!ok) {
        throw Error(ErrorKind::InvalidConfig,
                    "simulation config needs positive L, h, dt, T with dt <= h, "
                    "0 < ic_front_pos < L - buffer, 0 < fit_window <= 1, output_interval >= dt");
    }
}

double front_position(const std::vector<double>& u, double h) {
    // rightmost crossing of u = 1/2
    for (std::size_t j = u.size() - 1; j-- > 0;) {
        if (u[j] >= 0.5) {
            const double du = u[j] - u[j + 1];
            const double w = du > 0.0 ? (u[j] - 0.5) / du : 0.0;
            return (static_cast<double>(j) + w) * h;
        }
    }
    return 0.0;
}

}  // namespace

FrontSimResult simulate_front(const CutoffProfile& profile, const SimConfig& config) {
    validate(config);
    const auto n = static_cast<std::size_t>(std::llround(config.L / config.h));
    const double h = config.L / static_cast<double>(n);
    const double r = config.dt / (h * h);

    std::vector<double> u(n + 1, 0.0), rhs(n + 1, 0.0), cprime(n + 1, 0.0);
    for (std::size_t j = 0; j <= n; ++j) u[j] = static_cast<double>(j) * h < config.ic_front_pos ? 1.0 : 0.0;
    u[0] = 1.0;
    u[n] = 0.0;

    // constant tridiagonal factors: -r, 1 + 2r, -r on interior nodes 1..n-1
    const double diag = 1.0 + 2.0 * r;
    for (std::size_t j = 1; j < n; ++j) {
        const double denom = diag - (j > 1 ? -r * cprime[j - 1] : 0.0);
        cprime[j] = -r / denom;
    }

    FrontSimResult out;
    out.u_min = 0.0;
    out.u_max = 1.0;
    const auto steps = static_cast<long>(std::llround(config.T / config.dt));
    const auto every = std::max<long>(1, std::llround(config.output_interval / config.dt));

    for (long step = 1; step <= steps; ++step) {
        for (std::size_t j = 1; j < n; ++j) {
            rhs[j] = std::clamp(u[j] + config.dt * profile.f(std::clamp(u[j], 0.0, 1.0)), 0.0, 1.0);
        }
        rhs[1] += r * u[0];
        // forward sweep
        for (std::size_t j = 1; j < n; ++j) {
            const double denom = diag - (j > 1 ? -r * cprime[j - 1] : 0.0);
            rhs[j] = (rhs[j] - (j > 1 ? -r * rhs[j - 1] : 0.0)) / denom;
        }
        u[n - 1] = rhs[n - 1];
        for (std::size_t j = n - 1; j-- > 1;) u[j] = rhs[j] - cprime[j] * u[j + 1];

        if (step % every == 0 || step == steps) {
            for (std::size_t j = 1; j < n; ++j) {
                if (!std::isfinite(u[j])) {
                    throw Error(ErrorKind::UnstableStep, "non-finite value in the front simulation");
                }
                out.u_min = std::min(out.u_min, u[j]);
                out.u_max = std::max(out.u_max, u[j]);
            }
            const double x = front_position(u, h);
            if (x > config.L - config.boundary_buffer) {
                throw Error(ErrorKind::FrontHitBoundary, "front entered the right buffer zone");
            }
            out.times.push_back(static_cast<double>(step) * config.dt);
            out.front_positions.push_back(x);
        }
    }
    const auto fit = fit_speed(out.times, out.front_positions, config.fit_window);
    out.fitted_speed = fit.speed;
    out.fit_residual = fit.residual;
    return out;
}

}  // namespace kppcut
