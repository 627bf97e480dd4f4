#include "doctest.h"

#include "commands.hpp"
#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "kppcut");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = kppcut::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream is(text);
    for (std::string l; std::getline(is, l);) out.push_back(l);
    return out;
}

std::filesystem::path temp(const std::string& name) { return std::filesystem::temp_directory_path() / name; }

}  // namespace

TEST_CASE("speed") {
    const auto r = run_cli({"speed", "--epsilon", "0.01"});
    CHECK(r.code == 0);
    CHECK(r.out.find("c_L") != std::string::npos);
    CHECK(r.out.find("1.798960878") != std::string::npos);

    const auto j = run_cli({"speed", "--epsilon", "0.1", "--format", "json"});
    REQUIRE(j.code == 0);
    const auto parsed = nlohmann::json::parse(j.out);
    CHECK(parsed["M"].get<double>() == doctest::Approx(1.23643005243).epsilon(1e-11));

    const auto bad = run_cli({"speed", "--epsilon", "1.5"});
    CHECK(bad.code == 2);
    CHECK(bad.out.empty());
    CHECK(bad.err.find("epsilon must lie in (0,1)") != std::string::npos);
}

TEST_CASE("sweep writes deterministic full-precision CSV") {
    const auto a = run_cli({"sweep", "--start", "1e-12", "--end", "1e-2", "--points", "6"});
    const auto b = run_cli({"sweep", "--start", "1e-12", "--end", "1e-2", "--points", "6"});
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    const auto ls = lines(a.out);
    REQUIRE(ls.size() == 7);
    CHECK(ls[0] == "epsilon,phi_star,c_L,c_BD,c_ZFK,M,zfk_bound,bd_ratio");
    CHECK(ls[1].rfind("9.9999999999999998e-13,", 0) == 0);
    CHECK(ls[6].rfind("0.01,1.1185790226379", 0) == 0);

    const auto cols = run_cli({"sweep", "--start", "0.1", "--end", "0.5", "--points", "3", "--spacing",
                               "linear", "--columns", "epsilon,c_L"});
    REQUIRE(cols.code == 0);
    CHECK(lines(cols.out)[0] == "epsilon,c_L");
    CHECK(lines(cols.out)[2].rfind("0.30000000000000004,", 0) == 0);

    CHECK(run_cli({"sweep", "--start", "0.5", "--end", "0.1"}).code == 2);
    CHECK(run_cli({"sweep", "--start", "0.1", "--end", "0.5", "--points", "1"}).code == 2);
    CHECK(run_cli({"sweep", "--columns", "bogus"}).code == 2);
}

TEST_CASE("sweep asymptotics") {
    auto column = [](const std::string& text, std::size_t k) {
        std::vector<double> v;
        const auto ls = lines(text);
        for (std::size_t i = 1; i < ls.size(); ++i) {
            std::istringstream row(ls[i]);
            std::string cell;
            for (std::size_t j = 0; j <= k; ++j) std::getline(row, cell, ',');
            v.push_back(std::stod(cell));
        }
        return v;
    };
    const auto small = run_cli({"sweep", "--start", "1e-12", "--end", "1e-2", "--points", "11"});
    REQUIRE(small.code == 0);
    const auto ratio = column(small.out, 7);
    REQUIRE(ratio.size() == 11);
    // rows run toward larger eps, so the ratio climbs toward 1 reading upward
    for (std::size_t i = 1; i < ratio.size(); ++i) CHECK(ratio[i] < ratio[i - 1]);
    CHECK(ratio.front() < 1.0);

    const auto near_one = run_cli({"sweep", "--start", "0.9", "--end", "0.999", "--points", "12", "--spacing", "linear"});
    REQUIRE(near_one.code == 0);
    const auto eps = column(near_one.out, 0), cl = column(near_one.out, 2);
    for (std::size_t i = 0; i < eps.size(); ++i) {
        const double r = cl[i] / std::sqrt(2.0 * (1.0 - eps[i]));
        CHECK(r >= 0.98);
        CHECK(r <= 1.02);
    }

    const auto two = run_cli({"sweep", "--start", "0.2", "--end", "0.3", "--points", "2"});
    CHECK(lines(two.out).size() == 3);
}

TEST_CASE("output file and config precedence") {
    const auto cfg = temp("kppcut_cli_test.cfg");
    std::ofstream(cfg) << "# sweep defaults\nstart = 0.1\nend=0.2\npoints=4\nepsilon=0.3\n";
    const auto out_path = temp("kppcut_cli_sweep.csv");
    std::filesystem::remove(out_path);

    const auto r = run_cli({"--config", cfg.string(), "sweep", "--points", "3", "--out", out_path.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream in(out_path);
    std::stringstream body;
    body << in.rdbuf();
    const auto ls = lines(body.str());
    REQUIRE(ls.size() == 4);  // command line beats config
    CHECK(ls[1].rfind("0.10000000000000001,", 0) == 0);
    CHECK(ls[3].rfind("0.20000000000000001,", 0) == 0);

    const auto spd = run_cli({"speed", "--config", cfg.string()});
    CHECK(spd.code == 0);
    CHECK(spd.out.find("0.3") != std::string::npos);

    CHECK(run_cli({"--config", "/nonexistent/kppcut.cfg", "speed", "--epsilon", "0.1"}).code == 4);
    const auto broken = temp("kppcut_cli_broken.cfg");
    std::ofstream(broken) << "no equals sign here\n";
    CHECK(run_cli({"--config", broken.string(), "speed", "--epsilon", "0.1"}).code == 2);
    CHECK(run_cli({"speed", "--epsilon", "0.1", "--out", "/nonexistent/dir/x.csv"}).code == 4);
}

TEST_CASE("maximize, optimize, bounds, shoot") {
    const auto m = run_cli({"maximize", "--epsilon", "0.1", "--grid", "16", "--emit", "csv"});
    REQUIRE(m.code == 0);
    const auto ml = lines(m.out);
    CHECK(ml[0] == "s,u,du_ds");
    CHECK(ml.size() == 18);
    CHECK(ml.back().rfind("10,1,", 0) == 0);

    const auto o = run_cli({"optimize", "--epsilon", "0.1", "--nodes", "256"});
    CHECK(o.code == 0);
    CHECK(o.out.find("converged      true") != std::string::npos);
    CHECK(o.err.find("closed-form M") != std::string::npos);

    const auto b = run_cli({"bounds", "--profile", "cubic", "--epsilon", "0.05", "--csv"});
    REQUIRE(b.code == 0);
    const auto bl = lines(b.out);
    REQUIRE(bl.size() == 2);
    CHECK(bl[1].rfind("\"cubic\",0.05", 0) == 0);
    CHECK(b.err.find("fails for cubic") != std::string::npos);

    const auto pw = run_cli({"bounds", "--profile", "power:B=1,eta=2", "--epsilon", "0.01"});
    CHECK(pw.code == 0);
    CHECK(pw.out.find("J_appendix_bound") != std::string::npos);

    const auto s = run_cli({"shoot", "--profile", "linear", "--epsilon", "0.1"});
    REQUIRE(s.code == 0);
    CHECK(std::stod(s.out) == doctest::Approx(1.57253302187).epsilon(1e-9));

    CHECK(run_cli({"shoot", "--profile", "quartic", "--epsilon", "0.1"}).code == 2);
    CHECK(run_cli({"shoot", "--profile", "power:B=3,eta=1", "--epsilon", "0.001"}).code == 2);
    CHECK(run_cli({"shoot", "--profile", "table:/nonexistent.csv", "--epsilon", "0.1"}).code == 4);
}

TEST_CASE("simulate") {
    const auto r = run_cli({"simulate", "--profile", "fisher", "--epsilon", "0.1", "--L", "150", "--T",
                            "40", "--emit", "csv"});
    REQUIRE(r.code == 0);
    CHECK(lines(r.out)[0] == "t,x_front");
    CHECK(r.err.find("fitted speed") != std::string::npos);
    const auto hit = run_cli({"simulate", "--profile", "fisher", "--epsilon", "0.1", "--L", "60", "--T", "100"});
    CHECK(hit.code == 3);
    CHECK(hit.out.empty());
    const auto bad = run_cli({"simulate", "--profile", "fisher", "--epsilon", "0.1", "--dt", "1"});
    CHECK(bad.code == 2);
}

TEST_CASE("parse errors and help") {
    CHECK(run_cli({}).code == 2);
    CHECK(run_cli({"nosuch"}).code == 2);
    CHECK(run_cli({"speed"}).code == 2);
    CHECK(run_cli({"speed", "--epsilon", "abc"}).code == 2);
    const auto h = run_cli({"--help"});
    CHECK(h.code == 0);
    CHECK(h.out.find("sweep") != std::string::npos);
    CHECK(run_cli({"simulate", "--help"}).code == 0);
}

TEST_CASE("installed binary") {
    const char* bin = std::getenv("KPPCUT_BIN");
    if (bin == nullptr) return;
    const auto out_path = temp("kppcut_bin_out.txt");
    const std::string cmd = std::string(bin) + " speed --epsilon 0.5 --format csv > " + out_path.string();
    CHECK(std::system(cmd.c_str()) == 0);
    std::ifstream in(out_path);
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    CHECK(header.rfind("epsilon,phi_star,c_L", 0) == 0);
    CHECK(row.rfind("0.5,0.5567750803542", 0) == 0);
    const std::string bad = std::string(bin) + " speed --epsilon 0 2>/dev/null";
    const int status = std::system(bad.c_str());
    CHECK(WEXITSTATUS(status) == 2);
}
