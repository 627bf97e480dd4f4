#include "doctest.h"

#include "kppcut/error.hpp"
#include "kppcut/profiles.hpp"
#include "kppcut/quadrature.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

using namespace kppcut;

namespace {

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no kppcut::Error thrown");
    return ErrorKind::IoError;
}

std::filesystem::path write_temp(const std::string& name, const std::string& body) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path) << body;
    return path;
}

}  // namespace

TEST_CASE("f vanishes up to the cutoff and is u - N above it") {
    const auto fisher = make_profile(FisherFamily{}, 0.1);
    CHECK(fisher.f(0.0) == 0.0);
    CHECK(fisher.f(0.05) == 0.0);
    CHECK(fisher.f(0.1) == 0.0);
    CHECK(fisher.f(0.5) == doctest::Approx(0.25));
    CHECK(fisher.f(1.0) == doctest::Approx(0.0));
    CHECK(fisher.N(0.5) == doctest::Approx(0.25));

    const auto cubic = make_profile(CubicFamily{}, 0.1);
    CHECK(cubic.f(0.5) == doctest::Approx(0.375));

    const auto linear = make_profile(LinearFamily{}, 0.1);
    CHECK(linear.is_linear());
    CHECK(linear.f(1.0) == doctest::Approx(1.0));
    CHECK(linear.f(0.3) == doctest::Approx(0.3));
    CHECK(linear.N(0.7) == 0.0);

    const auto pw = make_profile(PowerLawFamily{1.0, 1.5}, 0.1);
    CHECK(pw.f(0.6) == doctest::Approx(0.6 - std::pow(0.5, 2.5)));
    REQUIRE(pw.power_law().has_value());
    CHECK(pw.power_law()->eta == 1.5);
    CHECK_FALSE(fisher.power_law().has_value());
}

TEST_CASE("F closed forms") {
    // half the antiderivative of u minus that of u^3, from eps to 1
    CHECK(make_profile(CubicFamily{}, 0.1).F(1.0) == doctest::Approx(0.245025).epsilon(1e-14));
    CHECK(make_profile(LinearFamily{}, 0.1).F(0.05) == 0.0);
    CHECK(make_profile(LinearFamily{}, 0.2).F(0.6) == doctest::Approx(0.5 * (0.36 - 0.04)));
    CHECK(make_profile(FisherFamily{}, 0.2).F(0.6) ==
          doctest::Approx(0.5 * (0.36 - 0.04) - (0.216 - 0.008) / 3.0));
    CHECK(make_profile(PowerLawFamily{1.0, 1.0}, 0.2).F(0.6) ==
          doctest::Approx(0.5 * (0.36 - 0.04) - std::pow(0.4, 3) / 3.0));
}

TEST_CASE("F agrees with quadrature of f and never exceeds the linear value") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> log_eps(std::log(1e-6), std::log(0.9));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const FamilySpec families[] = {FisherFamily{}, CubicFamily{}, PowerLawFamily{0.8, 0.7},
                                   PowerLawFamily{1.0, 4.0}};
    for (int trial = 0; trial < 50; ++trial) {
        const double eps = std::exp(log_eps(rng));
        for (const auto& fam : families) {
            const auto p = make_profile(fam, eps);
            const double u = unit(rng);
            const double lin = 0.5 * std::max(u * u - eps * eps, 0.0);
            const auto q = quad::integrate([&](double x) { return p.f(x); }, 0.0, u, {},
                                           std::span<const double>(&eps, 1));
            CHECK(p.F(u) == doctest::Approx(q.value).epsilon(1e-10));
            CHECK(p.F(u) <= lin + 1e-15);
        }
    }
}

TEST_CASE("domain and validation errors") {
    CHECK(kind_of([] { make_profile(FisherFamily{}, 0.0); }) == ErrorKind::EpsilonOutOfRange);
    CHECK(kind_of([] { make_profile(FisherFamily{}, 1.0); }) == ErrorKind::EpsilonOutOfRange);
    CHECK(kind_of([] { make_profile(PowerLawFamily{-1.0, 1.0}, 0.1); }) ==
          ErrorKind::ParameterOutOfRange);
    CHECK(kind_of([] { make_profile(PowerLawFamily{1.0, 0.0}, 0.1); }) ==
          ErrorKind::ParameterOutOfRange);
    // f = u - 3 u^2 goes negative above 1/3
    CHECK(kind_of([] { make_profile(PowerLawFamily{3.0, 1.0}, 0.001); }) == ErrorKind::KppViolation);
    const auto p = make_profile(FisherFamily{}, 0.1);
    CHECK(kind_of([&] { p.f(1.5); }) == ErrorKind::DomainError);
    CHECK(kind_of([&] { p.F(-0.1); }) == ErrorKind::DomainError);
}

TEST_CASE("tabulated profiles") {
    SUBCASE("table of the Fisher term reproduces it to interpolation accuracy") {
        TabulatedFamily t;
        for (int i = 0; i <= 400; ++i) {
            const double u = i / 400.0;
            t.u.push_back(u);
            t.f.push_back(u * (1.0 - u));
        }
        const auto tab = make_profile(t, 0.05);
        const auto ref = make_profile(FisherFamily{}, 0.05);
        CHECK(tab.f(0.37) == doctest::Approx(ref.f(0.37)).epsilon(1e-5));
        CHECK(tab.F(1.0) == doctest::Approx(ref.F(1.0)).epsilon(1e-5));
        CHECK(tab.f_at_one() == doctest::Approx(0.0).epsilon(1e-12));
        CHECK_FALSE(tab.kinks().empty());
    }
    SUBCASE("F of a table is the exact integral of its interpolant") {
        TabulatedFamily t{{0.0, 0.5, 1.0}, {0.0, 0.25, 0.0}};
        const auto tab = make_profile(t, 0.1);
        // f = 0.5 u on [0.1,0.5], 0.5(1-u) on [0.5,1]
        CHECK(tab.F(1.0) == doctest::Approx(0.25 * (0.25 - 0.01) + 0.0625).epsilon(1e-14));
    }
    SUBCASE("non-increasing grid") {
        TabulatedFamily t{{0.0, 0.5, 0.5, 1.0}, {0.0, 0.2, 0.2, 0.0}};
        CHECK(kind_of([&] { make_profile(t, 0.1); }) == ErrorKind::BadTable);
    }
    SUBCASE("grid not covering [0,1]") {
        TabulatedFamily t{{0.0, 0.5, 0.9}, {0.0, 0.2, 0.0}};
        CHECK(kind_of([&] { make_profile(t, 0.1); }) == ErrorKind::BadTable);
    }
    SUBCASE("table exceeding u") {
        TabulatedFamily t{{0.0, 0.5, 1.0}, {0.0, 0.6, 0.0}};
        CHECK(kind_of([&] { make_profile(t, 0.1); }) == ErrorKind::KppViolation);
    }
}

TEST_CASE("profile spec grammar") {
    CHECK(std::holds_alternative<LinearFamily>(parse_family("linear")));
    CHECK(std::holds_alternative<FisherFamily>(parse_family("fisher")));
    CHECK(std::holds_alternative<CubicFamily>(parse_family("cubic")));
    CHECK(std::holds_alternative<CubicFamily>(parse_family("bd_cubic")));
    const auto pw = std::get<PowerLawFamily>(parse_family("power:B=0.5,eta=2"));
    CHECK(pw.B == 0.5);
    CHECK(pw.eta == 2.0);
    CHECK(kind_of([] { parse_family("power:B=1"); }) == ErrorKind::InvalidConfig);
    CHECK(kind_of([] { parse_family("power:B=x,eta=1"); }) == ErrorKind::InvalidConfig);
    CHECK(kind_of([] { parse_family("quartic"); }) == ErrorKind::InvalidConfig);
    CHECK(make_profile(pw, 0.1).name() == "power:B=0.5,eta=2");

    const auto good = write_temp("kppcut_good_table.csv", "u,f\n0,0\n0.5,0.25\n1,0\n");
    const auto fam = parse_family("table:" + good.string());
    CHECK(std::get<TabulatedFamily>(fam).u.size() == 3);

    const auto bad_header = write_temp("kppcut_bad_header.csv", "x,y\n0,0\n1,0\n");
    CHECK(kind_of([&] { load_table_csv(bad_header); }) == ErrorKind::BadTable);
    const auto bad_value = write_temp("kppcut_bad_value.csv", "u,f\n0,0\n0.5,abc\n1,0\n");
    CHECK(kind_of([&] { load_table_csv(bad_value); }) == ErrorKind::BadTable);
    CHECK(kind_of([] { load_table_csv("/nonexistent/table.csv"); }) == ErrorKind::IoError);
}

TEST_CASE("derivative data at u = 1") {
    CHECK(make_profile(FisherFamily{}, 0.1).fprime_at_one() == doctest::Approx(-1.0));
    CHECK(make_profile(CubicFamily{}, 0.1).fprime_at_one() == doctest::Approx(-2.0));
    CHECK(make_profile(LinearFamily{}, 0.1).f_at_one() == doctest::Approx(1.0));
    const auto pw = make_profile(PowerLawFamily{1.0, 1.0}, 0.1);
    CHECK(pw.f_at_one() == doctest::Approx(1.0 - 0.81));
}
