#include "kppcut/profiles.hpp"

#include "kppcut/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace kppcut {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kValidationTol = 1e-12;

std::size_t segment_of(const std::vector<double>& grid, double u) {
    auto it = std::upper_bound(grid.begin(), grid.end(), u);
    std::size_t i = it == grid.begin() ? 0 : static_cast<std::size_t>(it - grid.begin()) - 1;
    return std::min(i, grid.size() - 2);
}

double parse_double(std::string_view text, std::string_view what) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
        throw Error(ErrorKind::InvalidConfig,
                    "cannot parse " + std::string(what) + " from '" + std::string(text) + "'");
    }
    return value;
}

void validate_table(const TabulatedFamily& t) {
    if (t.u.size() != t.f.size() || t.u.size() < 2) {
        throw Error(ErrorKind::BadTable, "table needs at least two (u,f) rows");
    }
    if (t.u.front() != 0.0 || t.u.back() != 1.0) {
        throw Error(ErrorKind::BadTable, "table u grid must run from 0 to 1");
    }
    for (std::size_t i = 0; i < t.u.size(); ++i) {
        if (!std::isfinite(t.u[i]) || !std::isfinite(t.f[i])) {
            throw Error(ErrorKind::BadTable, "table contains non-finite values");
        }
        if (i > 0 && !(t.u[i] > t.u[i - 1])) {
            throw Error(ErrorKind::BadTable, "table u grid must be strictly increasing");
        }
    }
}

}  // namespace

CutoffProfile::CutoffProfile(std::shared_ptr<const FamilySpec> family, double eps)
    : family_(std::move(family)), eps_(eps) {
    if (const auto* t = std::get_if<TabulatedFamily>(family_.get())) {
        auto cumulative = std::make_shared<std::vector<double>>(t->u.size(), 0.0);
        for (std::size_t i = 1; i < t->u.size(); ++i) {
            (*cumulative)[i] = (*cumulative)[i - 1] +
                               0.5 * (t->u[i] - t->u[i - 1]) * (t->f[i] + t->f[i - 1]);
        }
        table_cumulative_ = std::move(cumulative);
        for (double x : t->u) {
            if (x > eps_ && x < 1.0) kinks_.push_back(x);
        }
    }
}

double CutoffProfile::uncut_f(double u) const {
    return std::visit(
        overloaded{
            [&](const LinearFamily&) { return u; },
            [&](const FisherFamily&) { return u * (1.0 - u); },
            [&](const CubicFamily&) { return u * (1.0 - u * u); },
            [&](const PowerLawFamily& p) {
                return u - p.B * std::pow(std::max(u - eps_, 0.0), 1.0 + p.eta);
            },
            [&](const TabulatedFamily& t) {
                const std::size_t i = segment_of(t.u, u);
                const double w = (u - t.u[i]) / (t.u[i + 1] - t.u[i]);
                return t.f[i] + w * (t.f[i + 1] - t.f[i]);
            },
        },
        *family_);
}

double CutoffProfile::uncut_cumulative(double u) const {
    const auto& t = std::get<TabulatedFamily>(*family_);
    const std::size_t i = segment_of(t.u, u);
    return (*table_cumulative_)[i] + 0.5 * (u - t.u[i]) * (t.f[i] + uncut_f(u));
}

double CutoffProfile::f(double u) const {
    if (!(u >= 0.0 && u <= 1.0)) {
        throw Error(ErrorKind::DomainError, "f(u) requires 0 <= u <= 1");
    }
    return u <= eps_ ? 0.0 : uncut_f(u);
}

double CutoffProfile::N(double u) const {
    if (!(u >= 0.0 && u <= 1.0)) {
        throw Error(ErrorKind::DomainError, "N(u) requires 0 <= u <= 1");
    }
    return u - uncut_f(u);
}

double CutoffProfile::F(double u) const {
    if (!(u >= 0.0 && u <= 1.0)) {
        throw Error(ErrorKind::DomainError, "F(u) requires 0 <= u <= 1");
    }
    if (u <= eps_) return 0.0;
    const double e = eps_;
    const double quadratic = 0.5 * (u * u - e * e);
    return std::visit(
        overloaded{
            [&](const LinearFamily&) { return quadratic; },
            [&](const FisherFamily&) { return quadratic - (u * u * u - e * e * e) / 3.0; },
            [&](const CubicFamily&) {
                return quadratic - (u * u * u * u - e * e * e * e) / 4.0;
            },
            [&](const PowerLawFamily& p) {
                return quadratic - p.B * std::pow(u - e, 2.0 + p.eta) / (2.0 + p.eta);
            },
            [&](const TabulatedFamily&) { return uncut_cumulative(u) - uncut_cumulative(e); },
        },
        *family_);
}

double CutoffProfile::f_at_one() const { return uncut_f(1.0); }

double CutoffProfile::fprime_at_one() const {
    return std::visit(
        overloaded{
            [](const LinearFamily&) { return 1.0; },
            [](const FisherFamily&) { return -1.0; },
            [](const CubicFamily&) { return -2.0; },
            [&](const PowerLawFamily& p) {
                return 1.0 - p.B * (1.0 + p.eta) * std::pow(1.0 - eps_, p.eta);
            },
            [](const TabulatedFamily& t) {
                const std::size_t n = t.u.size();
                return (t.f[n - 1] - t.f[n - 2]) / (t.u[n - 1] - t.u[n - 2]);
            },
        },
        *family_);
}

bool CutoffProfile::is_linear() const noexcept {
    return std::holds_alternative<LinearFamily>(*family_);
}

std::optional<PowerLawFamily> CutoffProfile::power_law() const noexcept {
    if (const auto* p = std::get_if<PowerLawFamily>(family_.get())) return *p;
    return std::nullopt;
}

std::string CutoffProfile::name() const {
    return std::visit(
        overloaded{
            [](const LinearFamily&) -> std::string { return "linear"; },
            [](const FisherFamily&) -> std::string { return "fisher"; },
            [](const CubicFamily&) -> std::string { return "cubic"; },
            [](const PowerLawFamily& p) -> std::string {
                std::ostringstream os;
                os << "power:B=" << p.B << ",eta=" << p.eta;
                return os.str();
            },
            [](const TabulatedFamily& t) -> std::string {
                return "table(" + std::to_string(t.u.size()) + " rows)";
            },
        },
        *family_);
}

CutoffProfile make_profile(FamilySpec family, double epsilon) {
    require_open_unit(epsilon);
    if (const auto* p = std::get_if<PowerLawFamily>(&family)) {
        if (!(p->B > 0.0) || !(p->eta > 0.0) || !std::isfinite(p->B) || !std::isfinite(p->eta)) {
            throw Error(ErrorKind::ParameterOutOfRange, "power law needs B > 0 and eta > 0");
        }
    }
    if (const auto* t = std::get_if<TabulatedFamily>(&family)) validate_table(*t);

    CutoffProfile profile(std::make_shared<const FamilySpec>(std::move(family)), epsilon);

    for (int i = 1; i <= kKppValidationPoints; ++i) {
        const double u = std::min(1.0, epsilon + (1.0 - epsilon) * i / kKppValidationPoints);
        const double n = profile.N(u);
        const double fu = profile.f(u);
        if (n < -kValidationTol) {
            std::ostringstream os;
            os << "KPP condition violated: N(" << u << ") = " << n << " < 0";
            throw Error(ErrorKind::KppViolation, os.str());
        }
        if (fu < -kValidationTol) {
            std::ostringstream os;
            os << "reaction term negative: f(" << u << ") = " << fu;
            throw Error(ErrorKind::KppViolation, os.str());
        }
    }
    return profile;
}

double eval_F(const CutoffProfile& profile, double u) { return profile.F(u); }

FamilySpec parse_family(std::string_view spec) {
    if (spec == "linear") return LinearFamily{};
    if (spec == "fisher") return FisherFamily{};
    if (spec == "cubic" || spec == "bd_cubic") return CubicFamily{};
    if (spec.starts_with("power:")) {
        PowerLawFamily p{};
        bool have_b = false, have_eta = false;
        std::string_view rest = spec.substr(6);
        while (!rest.empty()) {
            const auto comma = rest.find(',');
            std::string_view item = rest.substr(0, comma);
            rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
            const auto eq = item.find('=');
            if (eq == std::string_view::npos) {
                throw Error(ErrorKind::InvalidConfig, "power spec expects key=value pairs");
            }
            const auto key = item.substr(0, eq);
            const double value = parse_double(item.substr(eq + 1), key);
            if (key == "B") {
                p.B = value;
                have_b = true;
            } else if (key == "eta") {
                p.eta = value;
                have_eta = true;
            } else {
                throw Error(ErrorKind::InvalidConfig, "unknown power key '" + std::string(key) + "'");
            }
        }
        if (!have_b || !have_eta) {
            throw Error(ErrorKind::InvalidConfig, "power spec needs both B and eta");
        }
        return p;
    }
    if (spec.starts_with("table:")) return load_table_csv(std::string(spec.substr(6)));
    throw Error(ErrorKind::InvalidConfig, "unknown profile spec '" + std::string(spec) + "'");
}

TabulatedFamily load_table_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::IoError, "cannot open table " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorKind::BadTable, "empty table " + path.string());
    std::string header;
    for (char c : line) {
        if (!std::isspace(static_cast<unsigned char>(c))) header.push_back(c);
    }
    if (header != "u,f") throw Error(ErrorKind::BadTable, "table header must be 'u,f'");

    TabulatedFamily table;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw Error(ErrorKind::BadTable, "line " + std::to_string(lineno) + ": expected 'u,f'");
        }
        try {
            std::string_view view(line);
            table.u.push_back(parse_double(view.substr(0, comma), "u"));
            table.f.push_back(parse_double(view.substr(comma + 1), "f"));
        } catch (const Error& e) {
            throw Error(ErrorKind::BadTable, "line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    validate_table(table);
    return table;
}

}  // namespace kppcut
