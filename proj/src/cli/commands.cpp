#include "commands.hpp"

#include "kppcut/bounds.hpp"
#include "kppcut/error.hpp"
#include "kppcut/functional.hpp"
#include "kppcut/maximizer.hpp"
#include "kppcut/optimizer.hpp"
#include "kppcut/profiles.hpp"
#include "kppcut/speed_core.hpp"
#include "kppcut/wavelab.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace kppcut::cli {

namespace {

// Full round-trip precision for every number that lands in CSV.
std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string short_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

class KeyValueText {
public:
    void add(const std::string& key, const std::string& value) { rows_.emplace_back(key, value); }
    void add(const std::string& key, double value) { add(key, short_num(value)); }

    std::string str() const {
        std::size_t width = 0;
        for (const auto& [k, v] : rows_) width = std::max(width, k.size());
        std::ostringstream os;
        for (const auto& [k, v] : rows_) os << k << std::string(width - k.size() + 2, ' ') << v << '\n';
        return os.str();
    }

private:
    std::vector<std::pair<std::string, std::string>> rows_;
};

struct Sink {
    std::string out_path;
    std::string buffer;
};

void flush(const Sink& sink, std::ostream& out) {
    if (sink.out_path.empty()) {
        out << sink.buffer;
        out.flush();
        return;
    }
    std::ofstream file(sink.out_path, std::ios::binary | std::ios::trunc);
    if (!file) throw Error(ErrorKind::IoError, "cannot open output file " + sink.out_path);
    file << sink.buffer;
    if (!file) throw Error(ErrorKind::IoError, "failed writing " + sink.out_path);
}

std::map<std::string, std::string> read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::IoError, "cannot open config file " + path);
    std::map<std::string, std::string> values;
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorKind::InvalidConfig,
                        path + ":" + std::to_string(lineno) + ": expected key=value");
        }
        values[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return values;
}

// Inserts `--key value` for config keys the chosen subcommand knows and the command line lacks.
std::vector<std::string> merge_config(const std::vector<std::string>& args, CLI::App& app) {
    std::string config_path;
    std::vector<std::string> rest;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            config_path = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            config_path = args[i].substr(9);
        } else {
            rest.push_back(args[i]);
        }
    }
    if (config_path.empty()) return rest;
    const auto values = read_config(config_path);

    std::size_t sub_index = rest.size();
    CLI::App* sub = nullptr;
    for (std::size_t i = 0; i < rest.size(); ++i) {
        if (auto* candidate = app.get_subcommand_no_throw(rest[i])) {
            sub = candidate;
            sub_index = i;
            break;
        }
    }
    if (sub == nullptr) return rest;

    std::vector<std::string> injected;
    for (const auto& [key, value] : values) {
        const std::string flag = "--" + key;
        if (sub->get_option_no_throw(flag) == nullptr) continue;
        bool given = false;
        for (const auto& a : rest) {
            if (a == flag || a.rfind(flag + "=", 0) == 0) given = true;
        }
        if (!given) {
            injected.push_back(flag);
            injected.push_back(value);
        }
    }
    rest.insert(rest.begin() + static_cast<std::ptrdiff_t>(sub_index) + 1, injected.begin(), injected.end());
    return rest;
}

// ---- subcommands ---------------------------------------------------------

std::string speed_output(double epsilon, const std::string& format) {
    const SpeedReport r = cutoff_linear_speed(epsilon);
    if (format == "csv") {
        return "epsilon,phi_star,c_L,c_BD,c_KPP,c_ZFK,M,zfk_bound\n" + num(r.epsilon) + "," +
               num(r.phi_star) + "," + num(r.c_L) + "," + num(r.c_BD) + "," + num(r.c_KPP) + "," +
               num(r.c_ZFK) + "," + num(r.M) + "," + num(r.M_zfk_bound) + "\n";
    }
    if (format == "json") {
        nlohmann::ordered_json j;
        j["epsilon"] = r.epsilon;
        j["phi_star"] = r.phi_star;
        j["c_L"] = r.c_L;
        j["c_BD"] = r.c_BD;
        j["c_KPP"] = r.c_KPP;
        j["c_ZFK"] = r.c_ZFK;
        j["M"] = r.M;
        j["zfk_bound"] = r.M_zfk_bound;
        return j.dump(2) + "\n";
    }
    KeyValueText t;
    t.add("epsilon", r.epsilon);
    t.add("phi_star", r.phi_star);
    t.add("c_L", r.c_L);
    t.add("c_BD", r.c_BD);
    t.add("c_KPP", r.c_KPP);
    t.add("c_ZFK", r.c_ZFK);
    t.add("M", r.M);
    t.add("zfk_bound", r.M_zfk_bound);
    return t.str();
}

const std::vector<std::string> kSweepColumns = {"epsilon", "phi_star", "c_L",       "c_BD",
                                                "c_ZFK",   "M",        "zfk_bound", "bd_ratio"};

struct SweepArgs {
    double start = 1e-12;
    double end = 1e-2;
    int points = 11;
    std::string spacing = "log";
    std::vector<std::string> columns;
};

std::string sweep_output(const SweepArgs& a) {
    if (!(a.start > 0.0 && a.start < a.end && a.end < 1.0)) {
        throw Error(ErrorKind::EpsilonOutOfRange, "sweep needs 0 < start < end < 1");
    }
    if (a.points < 2) throw Error(ErrorKind::InvalidConfig, "sweep needs at least 2 points");
    std::vector<std::string> cols = a.columns.empty() ? kSweepColumns : a.columns;
    for (const auto& c : cols) {
        if (std::find(kSweepColumns.begin(), kSweepColumns.end(), c) == kSweepColumns.end()) {
            throw Error(ErrorKind::InvalidConfig, "unknown sweep column '" + c + "'");
        }
    }
    std::ostringstream os;
    for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
    os << '\n';
    for (int i = 0; i < a.points; ++i) {
        const double frac = static_cast<double>(i) / (a.points - 1);
        double eps = a.spacing == "log"
                         ? std::exp(std::log(a.start) + (std::log(a.end) - std::log(a.start)) * frac)
                         : a.start + (a.end - a.start) * frac;
        if (i == 0) eps = a.start;
        if (i == a.points - 1) eps = a.end;
        const SpeedReport r = cutoff_linear_speed(eps);
        const double l = std::log(eps);
        const double ratio = r.speed_deficit * l * l / (std::numbers::pi * std::numbers::pi);
        const std::map<std::string, double> row = {
            {"epsilon", eps},  {"phi_star", r.phi_star},       {"c_L", r.c_L},    {"c_BD", r.c_BD},
            {"c_ZFK", r.c_ZFK}, {"M", r.M}, {"zfk_bound", r.M_zfk_bound}, {"bd_ratio", ratio}};
        for (std::size_t k = 0; k < cols.size(); ++k) os << (k ? "," : "") << num(row.at(cols[k]));
        os << '\n';
    }
    return os.str();
}

std::string maximize_output(double epsilon, int grid, const std::string& emit) {
    const auto [params, trial] = build_maximizer(epsilon, grid);
    if (emit == "csv") {
        std::ostringstream os;
        os << "s,u,du_ds\n";
        os << num(0.0) << ',' << num(0.0) << ',' << num(1.0) << '\n';
        for (double s : trial.s_grid()) {
            const auto v = eval_maximizer(params, s);
            os << num(s) << ',' << num(v.u) << ',' << num(v.du_ds) << '\n';
        }
        return os.str();
    }
    const auto g = eval_G(trial, epsilon);
    KeyValueText t;
    t.add("epsilon", epsilon);
    t.add("phi_star", params.phi_star);
    t.add("A", params.A);
    t.add("s0", params.s0);
    t.add("delta", params.delta);
    t.add("G_quadrature", g.value);
    t.add("M_closed_form", 2.0 * std::sin(params.phi_star) * std::sin(params.phi_star));
    return t.str();
}

std::string optimize_output(double epsilon, const OptimizerConfig& cfg, const std::string& emit,
                            std::ostream& err) {
    const auto result = maximize_G(epsilon, cfg);
    const double M = cutoff_linear_speed(epsilon).M;
    err << "optimize: value " << short_num(result.value) << " vs closed-form M " << short_num(M)
        << " (relative gap " << short_num((M - result.value) / M) << "), " << result.iterations
        << " iterations" << (result.converged ? "" : ", not converged") << '\n';
    if (emit == "csv") {
        const auto p = maximizer_params(epsilon);
        std::ostringstream os;
        os << "s,u,u_closed_form\n";
        const auto s = result.trial.s_grid();
        const auto u = result.trial.u_values();
        for (std::size_t i = 0; i < s.size(); ++i) {
            os << num(s[i]) << ',' << num(u[i]) << ',' << num(eval_maximizer(p, s[i]).u) << '\n';
        }
        return os.str();
    }
    KeyValueText t;
    t.add("epsilon", epsilon);
    t.add("value", result.value);
    t.add("M_closed_form", M);
    t.add("relative_gap", (M - result.value) / M);
    t.add("iterations", std::to_string(result.iterations));
    t.add("converged", result.converged ? "true" : "false");
    return t.str();
}

struct BoundsArgs {
    std::string profile;
    double epsilon = 0.0;
    std::optional<double> eta, B;
    double r = 0.5;
    bool csv = false;
};

std::string bounds_output(const BoundsArgs& a, std::ostream& err) {
    const auto profile = make_profile(parse_family(a.profile), a.epsilon);
    double B = 1.0, eta = 1.0;
    if (const auto p = profile.power_law()) {
        B = p->B;
        eta = p->eta;
    }
    if (a.B) B = *a.B;
    if (a.eta) eta = *a.eta;
    const GapReport g = gap_report(profile, B, eta, a.r);
    if (!g.chain) {
        err << "bounds: N(u) <= B (u - eps)^(1+eta) fails for " << profile.name()
            << "; analytic chain skipped, quadrature gap still rigorous\n";
    } else if (g.weak_hypothesis) {
        err << "bounds: eta <= 1, chain uses the weaker growth hypothesis\n";
    }
    auto chain_value = [&](double JChain::*field) {
        return g.chain ? (*g.chain).*field : std::nan("");
    };
    if (a.csv) {
        std::ostringstream os;
        os << "profile,epsilon,B,eta,r,phi_star,D,gap_num,gap,c_lower,c_upper,alpha,I,J,J1_bound,"
              "J2_bound,J_appendix_bound\n";
        os << '"' << profile.name() << '"' << ',' << num(g.epsilon) << ',' << num(g.B) << ',' << num(g.eta) << ','
           << num(g.r) << ',' << num(g.phi_star) << ',' << num(g.D) << ',' << num(g.gap_num) << ','
           << num(g.gap) << ',' << num(g.c_lower) << ',' << num(g.c_upper) << ','
           << num(chain_value(&JChain::alpha)) << ',' << num(chain_value(&JChain::I_val)) << ','
           << num(chain_value(&JChain::J_val)) << ',' << num(chain_value(&JChain::J1_bound)) << ','
           << num(chain_value(&JChain::J2_bound)) << ','
           << num(chain_value(&JChain::J_appendix_bound)) << '\n';
        return os.str();
    }
    KeyValueText t;
    t.add("profile", profile.name());
    t.add("epsilon", g.epsilon);
    t.add("B", g.B);
    t.add("eta", g.eta);
    t.add("r", g.r);
    t.add("phi_star", g.phi_star);
    t.add("D", g.D);
    t.add("gap_num", g.gap_num);
    t.add("gap", g.gap);
    t.add("c_lower", g.c_lower);
    t.add("c_upper", g.c_upper);
    if (g.chain) {
        t.add("alpha", g.chain->alpha);
        t.add("I", g.chain->I_val);
        t.add("J", g.chain->J_val);
        t.add("J1_bound", g.chain->J1_bound);
        t.add("J2_bound", g.chain->J2_bound);
        t.add("J_appendix_bound", g.chain->J_appendix_bound);
        t.add("gap_bound_J", g.chain->gap_bound_J);
    } else {
        t.add("chain", "not applicable");
    }
    return t.str();
}

int exit_code_for(ErrorKind kind) {
    if (kind == ErrorKind::IoError) return kIo;
    if (is_numerical(kind)) return kNumerical;
    return kValidation;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Speeds of pulled reaction-diffusion fronts with a cutoff"};
    app.require_subcommand(1);
    std::string config_unused;
    app.add_option("--config", config_unused, "key=value file; command-line flags take precedence");

    Sink sink;
    std::string format = "text", emit = "text";
    double epsilon = 0.0;

    auto* speed = app.add_subcommand("speed", "closed-form speeds for one cutoff");
    speed->add_option("--epsilon", epsilon, "cutoff in (0,1)")->required();
    speed->add_option("--format", format)->check(CLI::IsMember({"text", "csv", "json"}));
    speed->add_option("--out", sink.out_path);

    SweepArgs sweep_args;
    auto* sweep = app.add_subcommand("sweep", "CSV table of speed quantities over a range of cutoffs");
    sweep->add_option("--start", sweep_args.start);
    sweep->add_option("--end", sweep_args.end);
    sweep->add_option("--points", sweep_args.points);
    sweep->add_option("--spacing", sweep_args.spacing)->check(CLI::IsMember({"log", "linear"}));
    sweep->add_option("--columns", sweep_args.columns)->delimiter(',');
    sweep->add_option("--out", sink.out_path);

    int grid = kDefaultMaximizerGrid;
    auto* maximize = app.add_subcommand("maximize", "closed-form maximizer of the relaxed functional");
    maximize->add_option("--epsilon", epsilon)->required();
    maximize->add_option("--grid", grid)->check(CLI::Range(2, 10000000));
    maximize->add_option("--emit", emit)->check(CLI::IsMember({"text", "csv"}));
    maximize->add_option("--out", sink.out_path);

    OptimizerConfig opt_cfg;
    auto* optimize = app.add_subcommand("optimize", "numerical maximization of the relaxed functional");
    optimize->add_option("--epsilon", epsilon)->required();
    optimize->add_option("--nodes", opt_cfg.n_nodes);
    optimize->add_option("--max-iters", opt_cfg.max_iters);
    optimize->add_option("--step0", opt_cfg.step0);
    optimize->add_option("--tol", opt_cfg.tol);
    optimize->add_option("--emit", emit)->check(CLI::IsMember({"text", "csv"}));
    optimize->add_option("--out", sink.out_path);

    BoundsArgs bounds_args;
    auto* bounds = app.add_subcommand("bounds", "rigorous speed bracket for a KPP profile with cutoff");
    bounds->add_option("--profile", bounds_args.profile)->required();
    bounds->add_option("--epsilon", bounds_args.epsilon)->required();
    bounds->add_option("--eta", bounds_args.eta);
    bounds->add_option("--B", bounds_args.B);
    bounds->add_option("--r", bounds_args.r);
    bounds->add_flag("--csv", bounds_args.csv);
    bounds->add_option("--out", sink.out_path);

    std::string profile_spec;
    double shoot_tol = kDefaultShootTol;
    auto* shoot = app.add_subcommand("shoot", "traveling-wave speed by phase-plane shooting");
    shoot->add_option("--profile", profile_spec)->required();
    shoot->add_option("--epsilon", epsilon)->required();
    shoot->add_option("--tol", shoot_tol);
    shoot->add_option("--out", sink.out_path);

    SimConfig sim;
    bool with_shoot = false;
    auto* simulate = app.add_subcommand("simulate", "time-dependent front simulation");
    simulate->set_help_flag("--help", "Print this help message and exit");
    simulate->add_option("--profile", profile_spec)->required();
    simulate->add_option("--epsilon", epsilon)->required();
    simulate->add_option("--L", sim.L);
    simulate->add_option("--h", sim.h);
    simulate->add_option("--dt", sim.dt);
    simulate->add_option("--T", sim.T);
    simulate->add_option("--ic", sim.ic_front_pos);
    simulate->add_option("--fit-window", sim.fit_window);
    simulate->add_option("--output-interval", sim.output_interval);
    simulate->add_flag("--with-shoot", with_shoot);
    simulate->add_option("--emit", emit)->check(CLI::IsMember({"text", "csv"}));
    simulate->add_option("--out", sink.out_path);

    try {
        std::vector<std::string> args(argv + 1, argv + argc);
        args = merge_config(args, app);
        std::reverse(args.begin(), args.end());  // CLI11 consumes the vector from the back
        app.parse(args);

        if (speed->parsed()) {
            sink.buffer = speed_output(epsilon, format);
        } else if (sweep->parsed()) {
            sink.buffer = sweep_output(sweep_args);
        } else if (maximize->parsed()) {
            sink.buffer = maximize_output(epsilon, grid, emit);
        } else if (optimize->parsed()) {
            sink.buffer = optimize_output(epsilon, opt_cfg, emit, err);
        } else if (bounds->parsed()) {
            sink.buffer = bounds_output(bounds_args, err);
        } else if (shoot->parsed()) {
            const auto profile = make_profile(parse_family(profile_spec), epsilon);
            sink.buffer = num(shoot_wave_speed(profile, shoot_tol)) + "\n";
        } else if (simulate->parsed()) {
            const auto profile = make_profile(parse_family(profile_spec), epsilon);
            auto result = simulate_front(profile, sim);
            if (with_shoot) result.shoot_speed = shoot_wave_speed(profile);
            if (emit == "csv") {
                std::ostringstream os;
                os << "t,x_front\n";
                for (std::size_t i = 0; i < result.times.size(); ++i) {
                    os << num(result.times[i]) << ',' << num(result.front_positions[i]) << '\n';
                }
                sink.buffer = os.str();
                err << "simulate: fitted speed " << short_num(result.fitted_speed) << ", residual "
                    << short_num(result.fit_residual) << '\n';
            } else {
                KeyValueText t;
                t.add("profile", profile.name());
                t.add("epsilon", epsilon);
                t.add("fitted_speed", result.fitted_speed);
                t.add("fit_residual", result.fit_residual);
                if (result.shoot_speed) t.add("shoot_speed", *result.shoot_speed);
                t.add("c_L", cutoff_linear_speed(epsilon).c_L);
                sink.buffer = t.str();
            }
        }
        flush(sink, out);
        return kOk;
    } catch (const CLI::ParseError& e) {
        std::ostringstream help_out, help_err;
        const int code = app.exit(e, help_out, help_err);
        out << help_out.str();
        err << help_err.str();
        return code == 0 ? kOk : kValidation;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kNumerical;
    }
}

}  // namespace kppcut::cli
