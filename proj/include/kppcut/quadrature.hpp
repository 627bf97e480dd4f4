#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <span>
#include <vector>

namespace kppcut::quad {

struct Options {
    double abs_tol = 1e-14;
    double rel_tol = 1e-12;
    int max_intervals = 4000;
};

struct Result {
    double value = 0.0;
    double abs_error = 0.0;
    int evaluations = 0;
    bool converged = false;
};

namespace detail {
// 15-point Kronrod abscissae on [0,1] half-range; odd indices are the 7-point Gauss nodes.
extern const std::array<double, 8> kronrod_nodes;
extern const std::array<double, 8> kronrod_weights;
extern const std::array<double, 4> gauss_weights;

struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& other) const { return error < other.error; }
};

template <typename F>
Panel gk15(F& f, double a, double b, int& evals) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(mid);
    double kronrod = fc * kronrod_weights[7];
    double gauss = fc * gauss_weights[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kronrod_nodes[j];
        const double pair = f(mid - dx) + f(mid + dx);
        kronrod += kronrod_weights[j] * pair;
        if (j % 2 == 1) gauss += gauss_weights[j / 2] * pair;
    }
    evals += 15;
    return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}
}  // namespace detail

/// Globally adaptive Gauss–Kronrod (7/15) integration of f over [a,b].
///
/// Panels with the largest error estimate are bisected until the summed
/// estimate drops below max(abs_tol, rel_tol*|I|). `breaks` are interior
/// points that always become panel boundaries (kinks, table nodes).
template <typename F>
Result integrate(F&& f, double a, double b, const Options& opt = {},
                 std::span<const double> breaks = {}) {
    Result out;
    if (a == b) {
        out.converged = true;
        return out;
    }
    std::vector<double> edges{a};
    for (double x : breaks) {
        if (x > std::min(a, b) && x < std::max(a, b)) edges.push_back(x);
    }
    edges.push_back(b);
    if (a < b) std::sort(edges.begin(), edges.end());
    else std::sort(edges.begin(), edges.end(), std::greater<>());

    std::priority_queue<detail::Panel> heap;
    double total = 0.0, err = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        if (edges[i] == edges[i + 1]) continue;
        auto p = detail::gk15(f, edges[i], edges[i + 1], out.evaluations);
        total += p.value;
        err += p.error;
        heap.push(p);
    }
    int intervals = static_cast<int>(heap.size());
    while (err > std::max(opt.abs_tol, opt.rel_tol * std::abs(total)) &&
           intervals < opt.max_intervals) {
        auto worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid == worst.a || mid == worst.b) break;
        auto left = detail::gk15(f, worst.a, mid, out.evaluations);
        auto right = detail::gk15(f, mid, worst.b, out.evaluations);
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++intervals;
    }
    // Re-sum to shed accumulated cancellation in the running totals.
    total = 0.0;
    err = 0.0;
    while (!heap.empty()) {
        total += heap.top().value;
        err += heap.top().error;
        heap.pop();
    }
    out.value = total;
    out.abs_error = err;
    out.converged = err <= std::max(opt.abs_tol, opt.rel_tol * std::abs(total));
    return out;
}

/// Fixed 4-point Gauss–Legendre rule on [a,b].
template <typename F>
double gauss_legendre4(F&& f, double a, double b) {
    constexpr double x1 = 0.3399810435848562648026658;
    constexpr double x2 = 0.8611363115940525752239465;
    constexpr double w1 = 0.6521451548625461426269361;
    constexpr double w2 = 0.3478548451374538573730639;
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    return half * (w1 * (f(mid - half * x1) + f(mid + half * x1)) +
                   w2 * (f(mid - half * x2) + f(mid + half * x2)));
}

/// Fixed 2-point Gauss–Legendre rule on [a,b].
template <typename F>
double gauss_legendre2(F&& f, double a, double b) {
    constexpr double x = 0.5773502691896257645091488;
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    return half * (f(mid - half * x) + f(mid + half * x));
}

}  // namespace kppcut::quad
