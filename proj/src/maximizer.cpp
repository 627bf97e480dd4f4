#include "kppcut/maximizer.hpp"

#include "kppcut/error.hpp"
#include "kppcut/speed_core.hpp"

#include <algorithm>
#include <cmath>

namespace kppcut {

TrialFunction::TrialFunction(std::vector<double> s_grid, std::vector<double> u_values,
                             std::optional<MaximizerParams> analytic)
    : s_(std::move(s_grid)), u_(std::move(u_values)), analytic_(analytic) {
    if (s_.empty() || s_.size() != u_.size()) {
        throw Error(ErrorKind::DomainError, "trial grid and values must be non-empty and equal length");
    }
    for (std::size_t i = 0; i < s_.size(); ++i) {
        if (!std::isfinite(s_[i]) || !(s_[i] > 0.0) || (i > 0 && !(s_[i] > s_[i - 1]))) {
            throw Error(ErrorKind::DomainError, "trial grid must be positive and strictly increasing");
        }
        if (!(u_[i] >= 0.0 && u_[i] <= 1.0)) {
            throw Error(ErrorKind::DomainError, "trial values must lie in [0,1]");
        }
    }
    if (std::abs(u_.back() - 1.0) > 1e-12) {
        throw Error(ErrorKind::DomainError, "trial must reach u = 1 at s0");
    }
    u_.back() = 1.0;
}

double TrialFunction::operator()(double s) const {
    if (analytic_) return eval_maximizer(*analytic_, s).u;
    if (s <= 0.0) return 0.0;
    if (s >= s_.back()) return 1.0;
    if (s <= s_.front()) return u_.front() * s / s_.front();
    const auto it = std::upper_bound(s_.begin(), s_.end(), s);
    const std::size_t i = static_cast<std::size_t>(it - s_.begin()) - 1;
    const double w = (s - s_[i]) / (s_[i + 1] - s_[i]);
    return u_[i] + w * (u_[i + 1] - u_[i]);
}

double TrialFunction::derivative(double s) const {
    if (analytic_) return eval_maximizer(*analytic_, s).du_ds;
    if (s < 0.0 || s >= s_.back()) return 0.0;
    if (s < s_.front()) return u_.front() / s_.front();
    const auto it = std::upper_bound(s_.begin(), s_.end(), s);
    const std::size_t i = static_cast<std::size_t>(it - s_.begin()) - 1;
    return (u_[i + 1] - u_[i]) / (s_[i + 1] - s_[i]);
}

bool TrialFunction::is_monotone(double tol) const noexcept {
    for (std::size_t i = 1; i < u_.size(); ++i) {
        if (u_[i] < u_[i - 1] - tol) return false;
    }
    return true;
}

std::vector<double> log_grid(double a, double b, int n) {
    if (n < 2 || !(a > 0.0) || !(b > a)) {
        throw Error(ErrorKind::ParameterOutOfRange, "log grid needs n >= 2 and 0 < a < b");
    }
    std::vector<double> out(static_cast<std::size_t>(n));
    const double la = std::log(a), lb = std::log(b);
    for (int i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] = std::exp(la + (lb - la) * i / (n - 1));
    }
    out.front() = a;
    out.back() = b;
    return out;
}

MaximizerParams maximizer_params(double epsilon) {
    const double phi = solve_phi_star(epsilon);
    MaximizerParams p;
    p.epsilon = epsilon;
    p.phi_star = phi;
    p.A = std::sqrt(epsilon) / std::cos(phi);
    p.s0 = 1.0 / epsilon;
    p.delta = 0.0;
    p.half_cot = 0.5 / std::tan(phi);
    return p;
}

double maximizer_phase(const MaximizerParams& p, double s) {
    return p.half_cot * std::log(s / p.epsilon) - p.phi_star + p.delta;
}

MaximizerValue eval_maximizer(const MaximizerParams& p, double s) {
    if (!(s >= 0.0)) throw Error(ErrorKind::DomainError, "maximizer requires s >= 0");
    if (s <= p.epsilon) return {s, 1.0};
    if (s >= p.s0) return {1.0, 0.0};
    const double phase = maximizer_phase(p, s);
    const double root = std::sqrt(s);
    const double c = std::cos(phase), sn = std::sin(phase);
    return {p.A * root * c, p.A / root * (0.5 * c - p.half_cot * sn)};
}

std::pair<MaximizerParams, TrialFunction> build_maximizer(double epsilon, int grid_points) {
    require_open_unit(epsilon);
    const MaximizerParams p = maximizer_params(epsilon);
    std::vector<double> s = log_grid(epsilon, p.s0, grid_points);
    std::vector<double> u(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        u[i] = std::clamp(eval_maximizer(p, s[i]).u, 0.0, 1.0);
    }
    u.back() = 1.0;
    return {p, TrialFunction(std::move(s), std::move(u), p)};
}

}  // namespace kppcut
