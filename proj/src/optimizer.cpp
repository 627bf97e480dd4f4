#include "kppcut/optimizer.hpp"

#include "kppcut/error.hpp"
#include "kppcut/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace kppcut {

void isotonic_projection(std::span<double> y) {
    // blocks of (mean, weight) merged while they violate the ordering
    std::vector<double> mean;
    std::vector<std::size_t> count;
    mean.reserve(y.size());
    count.reserve(y.size());
    for (double v : y) {
        mean.push_back(v);
        count.push_back(1);
        while (mean.size() > 1 && mean[mean.size() - 2] > mean.back()) {
            const std::size_t n2 = count.back();
            const double m2 = mean.back();
            mean.pop_back();
            count.pop_back();
            const std::size_t n1 = count.back();
            mean.back() = (mean.back() * static_cast<double>(n1) + m2 * static_cast<double>(n2)) /
                          static_cast<double>(n1 + n2);
            count.back() = n1 + n2;
        }
    }
    std::size_t k = 0;
    for (std::size_t b = 0; b < mean.size(); ++b) {
        for (std::size_t j = 0; j < count[b]; ++j) y[k++] = mean[b];
    }
}

DiscreteRelaxedFunctional::DiscreteRelaxedFunctional(double epsilon, std::vector<double> nodes)
    : eps_(epsilon), s_(std::move(nodes)) {
    const std::size_t n = s_.size();
    w_diag_.assign(n, 0.0);
    w_off_.assign(n - 1, 0.0);
    inv_h_.assign(n - 1, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double a = s_[i], b = s_[i + 1], h = b - a;
        inv_h_[i] = 1.0 / h;
        // hat-function products weighted by 1/s^2; 4-point Gauss is ample on log-spaced segments
        w_diag_[i] += quad::gauss_legendre4([&](double x) { const double l = (b - x) / h; return l * l / (x * x); }, a, b);
        w_diag_[i + 1] += quad::gauss_legendre4([&](double x) { const double r = (x - a) / h; return r * r / (x * x); }, a, b);
        w_off_[i] = quad::gauss_legendre4([&](double x) { return (b - x) * (x - a) / (h * h * x * x); }, a, b);
    }
}

DiscreteRelaxedFunctional::Parts DiscreteRelaxedFunctional::evaluate(std::span<const double> u) const {
    const std::size_t n = s_.size();
    const double e2 = eps_ * eps_;
    double quad_form = 0.0, den = eps_;
    for (std::size_t i = 0; i < n; ++i) {
        quad_form += w_diag_[i] * u[i] * u[i];
        if (i + 1 < n) {
            quad_form += 2.0 * w_off_[i] * u[i] * u[i + 1];
            const double du = u[i + 1] - u[i];
            den += du * du * inv_h_[i];
        }
    }
    const double s0 = s_.back();
    const double num = quad_form - e2 * (1.0 / s_.front() - 1.0 / s0) + (1.0 - e2) / s0;
    return {num, den, 0.5 * num / den};
}

void DiscreteRelaxedFunctional::gradient(std::span<const double> u, const Parts& parts,
                                         std::span<double> out) const {
    const std::size_t n = s_.size();
    const double d2 = parts.denominator * parts.denominator;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double wu = w_off_[i - 1] * u[i - 1] + w_diag_[i] * u[i] + w_off_[i] * u[i + 1];
        const double ku = inv_h_[i - 1] * (u[i] - u[i - 1]) - inv_h_[i] * (u[i + 1] - u[i]);
        out[i - 1] = (wu * parts.denominator - parts.numerator * ku) / d2;
    }
}

void DiscreteRelaxedFunctional::precondition(std::span<double> g) const {
    // Thomas algorithm on the interior stiffness matrix
    const std::size_t m = g.size();
    std::vector<double> c(m, 0.0);
    for (std::size_t k = 0; k < m; ++k) {
        const std::size_t i = k + 1;
        const double diag = inv_h_[i - 1] + inv_h_[i];
        const double lower = k > 0 ? -inv_h_[i - 1] : 0.0;
        const double upper = -inv_h_[i];
        const double denom = diag - (k > 0 ? lower * c[k - 1] : 0.0);
        c[k] = upper / denom;
        g[k] = (g[k] - (k > 0 ? lower * g[k - 1] : 0.0)) / denom;
    }
    for (std::size_t k = m - 1; k-- > 0;) g[k] -= c[k] * g[k + 1];
}

namespace {

void project(std::span<double> u, double eps) {
    for (double& v : u) v = std::clamp(v, eps, 1.0);
    isotonic_projection(u);
    u.front() = eps;
    u.back() = 1.0;
}

}  // namespace

OptimizeResult maximize_G_from(double epsilon, const OptimizerConfig& config,
                               std::vector<double> u, const IterateObserver& observer) {
    require_open_unit(epsilon);
    if (config.n_nodes < 64 || !(config.tol > 0.0) || !(config.step0 > 0.0) || config.max_iters < 1) {
        throw Error(ErrorKind::InvalidConfig, "optimizer needs n_nodes >= 64, tol > 0, step0 > 0");
    }
    if (u.size() != static_cast<std::size_t>(config.n_nodes)) {
        throw Error(ErrorKind::InvalidConfig, "initial values must match n_nodes");
    }
    const DiscreteRelaxedFunctional functional(epsilon, log_grid(epsilon, 1.0 / epsilon, config.n_nodes));
    const std::size_t n = u.size();

    project(u, epsilon);
    auto parts = functional.evaluate(u);
    std::vector<double> direction(n - 2), candidate(n);
    double step = config.step0;
    int iterations = 0;
    int small_gains = 0;
    bool converged = false;

    if (observer) observer({0, parts.value, step, functional.nodes(), u});

    while (iterations < config.max_iters) {
        functional.gradient(u, parts, direction);
        functional.precondition(direction);

        bool accepted = false;
        for (int halvings = 0; halvings < 60; ++halvings) {
            candidate = u;
            for (std::size_t i = 1; i + 1 < n; ++i) candidate[i] += step * direction[i - 1];
            project(candidate, epsilon);
            const auto trial_parts = functional.evaluate(candidate);
            if (trial_parts.value > parts.value) {
                const double gain = (trial_parts.value - parts.value) / std::abs(parts.value);
                u.swap(candidate);
                parts = trial_parts;
                accepted = true;
                ++iterations;
                if (observer) observer({iterations, parts.value, step, functional.nodes(), u});
                step *= 2.0;
                small_gains = gain < config.tol ? small_gains + 1 : 0;
                if (small_gains >= 5) converged = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            // no ascent direction left at machine precision
            converged = true;
        }
        if (converged) break;
    }

    std::vector<double> s(functional.nodes().begin(), functional.nodes().end());
    return {TrialFunction(std::move(s), std::move(u)), parts.value, iterations, converged};
}

OptimizeResult maximize_G(double epsilon, const OptimizerConfig& config, const IterateObserver& observer) {
    require_open_unit(epsilon);
    if (config.n_nodes < 64) throw Error(ErrorKind::InvalidConfig, "optimizer needs n_nodes >= 64");
    const auto s = log_grid(epsilon, 1.0 / epsilon, config.n_nodes);
    std::vector<double> u(s.size());
    const double span = std::log(1.0 / (epsilon * epsilon));
    for (std::size_t i = 0; i < s.size(); ++i) {
        u[i] = std::log(s[i] / epsilon) / span * (1.0 - epsilon) + epsilon;
    }
    return maximize_G_from(epsilon, config, std::move(u), observer);
}

double euler_lagrange_residual(const TrialFunction& trial, double value) {
    const auto s = trial.s_grid();
    const auto u = trial.u_values();
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
        const double h0 = s[i] - s[i - 1], h1 = s[i + 1] - s[i];
        const double d0 = u[i] - u[i - 1], d1 = u[i + 1] - u[i];
        if (d0 <= 0.0 || d1 <= 0.0) continue;  // monotonicity constraint active
        const double second = 2.0 * (d1 / h1 - d0 / h0) / (h0 + h1);
        const double r = std::abs(u[i] / (s[i] * s[i]) + 2.0 * value * second) * s[i] * s[i];
        worst = std::max(worst, r);
    }
    return worst;
}

}  // namespace kppcut
