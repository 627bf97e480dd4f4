#pragma once

#include "kppcut/maximizer.hpp"

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace kppcut {

struct OptimizerConfig {
    int n_nodes = 2048;     ///< log-spaced nodes on [eps, 1/eps], >= 64
    int max_iters = 5000;
    double step0 = 0.1;     ///< initial ascent step
    double tol = 1e-12;     ///< relative improvement below which the run stops
};

struct OptimizeResult {
    TrialFunction trial;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// One accepted iterate, reported to an optional observer.
struct IterateInfo {
    int iteration = 0;
    double value = 0.0;
    double step = 0.0;
    std::span<const double> s;
    std::span<const double> u;
};

using IterateObserver = std::function<void(const IterateInfo&)>;

/// Euclidean projection onto nondecreasing sequences (pool adjacent violators), in place.
void isotonic_projection(std::span<double> values);

/// Discretized relaxed functional on a fixed node set with u(eps) = eps and
/// u(1/eps) = 1 pinned; u is piecewise linear, u = s below eps and 1 beyond 1/eps.
class DiscreteRelaxedFunctional {
public:
    DiscreteRelaxedFunctional(double epsilon, std::vector<double> nodes);

    double epsilon() const noexcept { return eps_; }
    std::span<const double> nodes() const noexcept { return s_; }

    struct Parts {
        double numerator;
        double denominator;
        double value;
    };
    Parts evaluate(std::span<const double> u) const;

    /// Euclidean gradient of the value with respect to the interior nodes (size n-2).
    void gradient(std::span<const double> u, const Parts& parts, std::span<double> out) const;

    /// Solves K d = g for the interior stiffness matrix K (Sobolev gradient).
    void precondition(std::span<double> g) const;

private:
    double eps_;
    std::vector<double> s_;
    // mass matrix with 1/s^2 weight (tridiagonal), stiffness via segment lengths
    std::vector<double> w_diag_, w_off_;
    std::vector<double> inv_h_;
};

/// Projected-gradient ascent of the relaxed functional over monotone piecewise-linear trials.
///
/// Each step moves along the Sobolev (H^1) gradient, restores feasibility by
/// clipping to [eps, 1], pool-adjacent-violators, and re-pinning the end
/// points, and is accepted only if the value increases (step halving on
/// rejection, doubling after acceptance). Throws EpsilonOutOfRange or
/// InvalidConfig; a run that hits max_iters returns converged = false.
OptimizeResult maximize_G(double epsilon, const OptimizerConfig& config = {},
                          const IterateObserver& observer = {});

/// Same, starting from the given nodal values (projected first).
OptimizeResult maximize_G_from(double epsilon, const OptimizerConfig& config,
                               std::vector<double> initial, const IterateObserver& observer = {});

/// Max over interior nodes of |u/s^2 + 2 G u''| s^2, skipping nodes next to flat (pooled) stretches.
double euler_lagrange_residual(const TrialFunction& trial, double value);

}  // namespace kppcut
