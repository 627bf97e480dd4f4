#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace kppcut {

/// Builtin nonlinearities N(u) of f(u) = u - N(u).
struct LinearFamily {};              ///< N = 0, the profile f_L
struct FisherFamily {};              ///< N = u^2
struct CubicFamily {};               ///< N = u^3
struct PowerLawFamily {              ///< N = B (u - eps)^(1+eta) above the cutoff
    double B = 1.0;
    double eta = 1.0;
};
/// Tabulated reaction term f(u) on a grid covering [0,1].
struct TabulatedFamily {
    std::vector<double> u;
    std::vector<double> f;
};

using FamilySpec =
    std::variant<LinearFamily, FisherFamily, CubicFamily, PowerLawFamily, TabulatedFamily>;

/// Reaction term with a hard cutoff: f = 0 on [0, eps], f = u - N(u) on (eps, 1).
///
/// Immutable once built. Copies share the (possibly large) table storage.
class CutoffProfile {
public:
    double epsilon() const noexcept { return eps_; }

    /// Reaction term. u = 1 is evaluated as the limit from the left.
    double f(double u) const;
    /// Nonlinearity of the uncut reaction term, N(u) = u - f_uncut(u).
    double N(double u) const;
    /// F(u) = integral of f over [0,u].
    double F(double u) const;

    /// f(1^-) and its one-sided derivative, used to start the phase-plane orbit.
    double f_at_one() const;
    double fprime_at_one() const;

    bool is_linear() const noexcept;
    std::optional<PowerLawFamily> power_law() const noexcept;
    const FamilySpec& family() const noexcept { return *family_; }

    /// Points in (eps, 1) where f is not smooth (table nodes); eps itself is excluded.
    const std::vector<double>& kinks() const noexcept { return kinks_; }

    /// Short human readable name, e.g. "power:B=1,eta=1".
    std::string name() const;

private:
    friend CutoffProfile make_profile(FamilySpec family, double epsilon);
    CutoffProfile(std::shared_ptr<const FamilySpec> family, double eps);

    double uncut_f(double u) const;
    double uncut_cumulative(double u) const;  // integral of uncut f over [0,u]

    std::shared_ptr<const FamilySpec> family_;
    std::shared_ptr<const std::vector<double>> table_cumulative_;
    std::vector<double> kinks_;
    double eps_;
};

/// Validates and builds a profile.
///
/// Throws EpsilonOutOfRange, ParameterOutOfRange (power law B or eta <= 0),
/// BadTable, or KppViolation (N < 0 or f < 0 somewhere on a 10^4-point grid
/// over (eps, 1]).
CutoffProfile make_profile(FamilySpec family, double epsilon);

/// Free-function form of CutoffProfile::F; throws DomainError outside [0,1].
double eval_F(const CutoffProfile& profile, double u);

/// Parses `linear`, `fisher`, `cubic`, `power:B=<b>,eta=<e>` or `table:<path>`.
FamilySpec parse_family(std::string_view spec);

/// Reads a CSV table with header `u,f`.
TabulatedFamily load_table_csv(const std::filesystem::path& path);

inline constexpr int kKppValidationPoints = 10000;

}  // namespace kppcut
