#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace kppcut {

/// Constants of the closed-form maximizer of the relaxed functional.
struct MaximizerParams {
    double epsilon = 0.0;
    double phi_star = 0.0;
    double A = 0.0;         ///< sqrt(eps) / cos(phi*)
    double s0 = 0.0;        ///< 1/eps
    double delta = 0.0;     ///< phase offset, always 0
    double half_cot = 0.0;  ///< cot(phi*)/2, slope of the phase in log s
};

struct MaximizerValue {
    double u = 0.0;
    double du_ds = 0.0;
};

/// Monotone function u(s) on [0, s0] with u(0) = 0, u(s0) = 1 and u = 1 beyond s0.
///
/// Tabulated trials interpolate linearly through (0,0) and the grid nodes.
/// Trials carrying `analytic` evaluate the closed-form maximizer exactly; the
/// grid is then only a sampling for quadrature consumers and CSV output.
class TrialFunction {
public:
    /// Throws DomainError on mismatched sizes, a grid that is not strictly
    /// increasing and positive, values outside [0,1], or u(s0) != 1.
    TrialFunction(std::vector<double> s_grid, std::vector<double> u_values,
                  std::optional<MaximizerParams> analytic = std::nullopt);

    std::span<const double> s_grid() const noexcept { return s_; }
    std::span<const double> u_values() const noexcept { return u_; }
    double s0() const noexcept { return s_.back(); }
    const std::optional<MaximizerParams>& analytic() const noexcept { return analytic_; }

    double operator()(double s) const;
    double derivative(double s) const;

    /// True when no value drops below its predecessor by more than tol.
    bool is_monotone(double tol = 1e-12) const noexcept;

private:
    std::vector<double> s_;
    std::vector<double> u_;
    std::optional<MaximizerParams> analytic_;
};

inline constexpr int kDefaultMaximizerGrid = 2048;

MaximizerParams maximizer_params(double epsilon);

/// Closed-form maximizer: u = s on [0,eps], A sqrt(s) cos(phase(s)) on (eps, 1/eps], 1 beyond.
/// The attached grid is log-spaced on [eps, 1/eps].
std::pair<MaximizerParams, TrialFunction> build_maximizer(double epsilon,
                                                          int grid_points = kDefaultMaximizerGrid);

/// Value and derivative; (1, 0) for s >= s0. Throws DomainError for s < 0.
MaximizerValue eval_maximizer(const MaximizerParams& params, double s);

/// cot(phi*)/2 * log(s/eps) - phi*, running from -phi* at eps to phi* at 1/eps.
double maximizer_phase(const MaximizerParams& params, double s);

/// n log-spaced points from a to b, endpoints exact.
std::vector<double> log_grid(double a, double b, int n);

}  // namespace kppcut
