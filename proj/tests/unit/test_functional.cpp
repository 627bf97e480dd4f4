#include "doctest.h"

#include "kppcut/bounds.hpp"
#include "kppcut/error.hpp"
#include "kppcut/functional.hpp"
#include "kppcut/maximizer.hpp"
#include "kppcut/profiles.hpp"
#include "kppcut/speed_core.hpp"

#include <cmath>
#include <numbers>
#include <vector>

using namespace kppcut;

namespace {

// Independent oracle: composite trapezoid in t = log s on a very fine grid.
double trapezoid_G(double eps, int n) {
    const auto p = maximizer_params(eps);
    const double a = std::log(eps), b = std::log(p.s0);
    double num = 0.0, den = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double t = a + (b - a) * i / n;
        const double s = std::exp(t);
        const auto v = eval_maximizer(p, s);
        const double w = (i == 0 || i == n) ? 0.5 : 1.0;
        num += w * (v.u * v.u - eps * eps) / s;
        den += w * v.du_ds * v.du_ds * s;
    }
    const double dt = (b - a) / n;
    num = num * dt + (1.0 - eps * eps) / p.s0;
    den = den * dt + eps;  // u' = 1 on [0, eps]
    return 0.5 * num / den;
}

std::vector<double> sampled(const MaximizerParams& p, const std::vector<double>& s) {
    std::vector<double> u;
    for (double x : s) u.push_back(eval_maximizer(p, x).u);
    u.back() = 1.0;
    return u;
}

}  // namespace

TEST_CASE("G of the closed-form maximizer equals 2 sin^2 phi*") {
    for (double eps : {1e-4, 1e-2, 0.05, std::exp(-std::numbers::pi / 2), 0.5}) {
        const auto [p, trial] = build_maximizer(eps);
        const auto g = eval_G(trial, eps);
        const double M = 2.0 * std::sin(p.phi_star) * std::sin(p.phi_star);
        CHECK(g.value == doctest::Approx(M).epsilon(1e-10));
        CHECK(g.denominator == doctest::Approx(denominator_D(eps)).epsilon(1e-10));
        CHECK(g.abs_error < 1e-9);
    }
}

TEST_CASE("quadrature agrees with a trapezoid oracle") {
    for (double eps : {0.01, 0.1, 0.5}) {
        const auto [p, trial] = build_maximizer(eps);
        CHECK(eval_G(trial, eps).value == doctest::Approx(trapezoid_G(eps, 200000)).epsilon(1e-8));
    }
}

TEST_CASE("tabulated maximizer converges at second order") {
    const double eps = 0.1;
    const auto p = maximizer_params(eps);
    const double M = cutoff_linear_speed(eps).M;
    double prev_err = 0.0;
    for (int n : {64, 128, 256, 512}) {
        const auto s = log_grid(eps, p.s0, n);
        TrialFunction t(s, sampled(p, s));
        const double err = std::abs(eval_G(t, eps).value - M);
        CHECK(eval_G(t, eps).value <= M + 1e-12);
        if (prev_err > 0.0) CHECK(prev_err / err == doctest::Approx(4.0).epsilon(0.1));
        prev_err = err;
    }
}

TEST_CASE("every monotone trial stays below M and the ZFK bound") {
    const double eps = 0.05;
    const double M = cutoff_linear_speed(eps).M;
    const auto s = log_grid(eps, 1.0 / eps, 200);
    for (double power : {0.3, 0.7, 1.0, 2.0}) {
        std::vector<double> u;
        for (double x : s) u.push_back(eps + (1.0 - eps) * std::pow(std::log(x / eps) / std::log(1 / (eps * eps)), power));
        TrialFunction t(s, u);
        const double g = eval_G(t, eps).value;
        CHECK(g < M);
        CHECK(g <= zfk_functional_bound(eps));
    }
}

TEST_CASE("grid tolerance flags coarse tables") {
    const auto p = maximizer_params(0.1);
    const auto coarse = log_grid(0.1, 10.0, 9);
    TrialFunction t(coarse, sampled(p, coarse));
    FunctionalOptions opt;
    opt.grid_tol = 1e-8;
    CHECK_THROWS_AS(eval_G(t, 0.1, opt), Error);
    const auto fine = log_grid(0.1, 10.0, 4097);
    TrialFunction tf(fine, sampled(p, fine));
    opt.grid_tol = 1e-5;
    const auto ok = eval_G(tf, 0.1, opt);
    CHECK(ok.abs_error < 1e-5);
}

TEST_CASE("non-monotone trial is rejected") {
    TrialFunction t({0.1, 1.0, 5.0, 10.0}, {0.1, 0.6, 0.4, 1.0});
    try {
        eval_G(t, 0.1);
        FAIL("expected NonMonotoneTrial");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NonMonotoneTrial);
    }
}

TEST_CASE("general functional") {
    const double eps = 0.05;
    const auto [p, trial] = build_maximizer(eps);
    SUBCASE("linear profile gives 2G = c_L^2") {
        const auto lin = make_profile(LinearFamily{}, eps);
        const double cL = cutoff_linear_speed(eps).c_L;
        CHECK(eval_F(trial, lin).value == doctest::Approx(2.0 * eval_G(trial, eps).value).epsilon(1e-10));
        CHECK(eval_F(trial, lin).value == doctest::Approx(cL * cL).epsilon(1e-10));
    }
    SUBCASE("cubic lies between c_L^2 - gap and c_L^2") {
        const auto cubic = make_profile(CubicFamily{}, eps);
        const double cL = cutoff_linear_speed(eps).c_L;
        const double value = eval_F(trial, cubic).value;
        CHECK(value <= cL * cL);
        CHECK(value >= cL * cL - gap_quadrature(cubic) - 1e-12);
    }
    SUBCASE("tabulated trial agrees with the analytic one") {
        const auto fisher = make_profile(FisherFamily{}, eps);
        const auto s = log_grid(eps, p.s0, 8193);
        TrialFunction t(s, sampled(p, s));
        CHECK(eval_F(t, fisher).value == doctest::Approx(eval_F(trial, fisher).value).epsilon(1e-6));
    }
    SUBCASE("extending s0 with u = 1 changes nothing for the linear profile") {
        const auto lin = make_profile(LinearFamily{}, eps);
        CHECK(eval_F(trial, lin, 3.0 * p.s0).value == doctest::Approx(eval_F(trial, lin).value).epsilon(1e-12));
        CHECK_THROWS_AS(eval_F(trial, lin, 0.5 * p.s0), Error);
    }
}
