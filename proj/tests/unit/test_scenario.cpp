#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "ptbec/errors.hpp"
#include "ptbec/scenario/compare.hpp"
#include "ptbec/scenario/config.hpp"
#include "ptbec/scenario/records.hpp"
#include "ptbec/scenario/run.hpp"

using namespace ptbec;
using namespace ptbec::scenario;
namespace fs = std::filesystem;

namespace {

const char* kTrap = R"(
[trap]
depths = -60, -45, -45, -60 E0
spacing = 1.8
wx = 4
wy = 4
)";

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("ptbec_test_" + name);
    fs::remove_all(p);
    return p;
}

TimeSeries linear_series(double t0, double t1, int points, double slope, double offset = 0.0) {
    TimeSeries s;
    s.control_names = {"V0"};
    for (int i = 0; i < points; ++i) {
        TimeSeriesRecord r;
        r.t = t0 + (t1 - t0) * i / (points - 1);
        r.n = {0.4, 0.1 + slope * r.t + offset, 0.1, 0.4};
        r.j = {0.0, 1.0, 0.0};
        r.controls = {-60.0 + r.t};
        s.records.push_back(r);
    }
    return s;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(PTBEC_CLI) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("config defaults per scenario") {
    const auto s = parse_config("scenario = stationary\n[run]\nt_end = 5\n");
    CHECK(s.scenario == ScenarioKind::stationary);
    CHECK(s.gamma == 0.5);
    CHECK(s.psi2 == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(s.psi0_real == 2.0);
    CHECK(!s.psi1.has_value());
    CHECK(s.integrator.rel_tol == 1e-10);
    CHECK(s.stride == 0.02);

    const auto c = parse_config("scenario = collapse\n[run]\nt_end = 3\n");
    CHECK(c.c == -1.0);
    CHECK(c.perturbation == 0.5);

    const auto o = parse_config("scenario = oscillatory\n[run]\nt_end = 3\n");
    REQUIRE(o.psi1.has_value());
    CHECK(o.psi1->real() == doctest::Approx(std::sqrt(0.6)));
    CHECK(o.psi3_real == -2.0);
}

TEST_CASE("config reports the position of a misspelled key") {
    try {
        parse_config("scenario = stationary\n[run]\nt_end = 5\n  gama = 0.3\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 4);
        CHECK(e.column() == 3);
    }
    CHECK_THROWS_AS(parse_config("scenario = stationary\n[rnu]\nt_end = 5\n"), ParseError);
    CHECK_THROWS_AS(parse_config("scenario = stationary\n[run]\nt_end = 5\nt_end = 6\n"), ParseError);
    // a trap key does nothing for an abstract run
    CHECK_THROWS_AS(parse_config("scenario = stationary\n[run]\nt_end = 5\n[trap]\nwx = 4\n"), ParseError);
    CHECK_THROWS_AS(parse_config("scenario = warp\n"), ParseError);
    CHECK_THROWS_AS(parse_config("[run]\nt_end = 5\n"), MissingKey);
    CHECK_THROWS_AS(parse_config("scenario = stationary\n"), MissingKey);
}

TEST_CASE("config units") {
    CHECK_THROWS_AS(parse_config("scenario = stationary\n[run]\nt_end = 5 ms\n"), UnitError);
    const auto a = parse_config("scenario = stationary\n[run]\nt_end = 5 hbar/J12\ngamma = 0.25 J12\n");
    CHECK(a.t_end == 5.0);
    CHECK(a.gamma == 0.25);

    const std::string head = "scenario = adiabatic_fewmode\n[run]\nt_end = 70 ms\n";
    const auto p = parse_config(head + kTrap);
    CHECK(p.t_end == doctest::Approx(70e-3 / p.units.t0()).epsilon(1e-12));
    CHECK(p.units.t0() == doctest::Approx(1.3685e-3).epsilon(1e-3));
    CHECK_THROWS_AS(parse_config("scenario = adiabatic_fewmode\n[run]\nt_end = 70\ngamma = 3 Hz\n" + std::string(kTrap)),
                    UnitError);
    const auto hz = parse_config("scenario = adiabatic_fewmode\n[run]\nt_end = 1\n"
                                 "[trap]\ndepths = -6978, -5233.5, -5233.5, -6978 Hz\nspacing = 1.8 um\nwx = 4\nwy = 4\n");
    CHECK(hz.trap.depths(0) == doctest::Approx(-6978.0 / (hz.units.E0() / gauss::UnitSystem::planck)));
    const auto ms = parse_config("scenario = adiabatic_fewmode\n[run]\nt_end = 1\n[units]\nw_z = 2 um\n" +
                                 std::string(kTrap));
    CHECK(ms.units.w_z == doctest::Approx(2e-6));
    CHECK_THROWS_AS(parse_config("scenario = adiabatic_fewmode\n[run]\nt_end = 1\n[units]\nw_z = 2\n" +
                                 std::string(kTrap)),
                    UnitError);
}

TEST_CASE("config trap block") {
    const auto p = parse_config(std::string("scenario = adiabatic_fewmode\n[run]\nt_end = 70\n") + kTrap);
    REQUIRE(p.trap.size() == 4);
    CHECK(p.trap.positions(0) == doctest::Approx(-2.7));
    CHECK(p.trap.positions(2) == doctest::Approx(0.9));
    CHECK(p.trap.depths(1) == -45.0);
    CHECK(p.trap.wx == 4.0);
    CHECK(p.trap.wz == 1.0);
    CHECK(p.units.N == 1e5);
    CHECK_THROWS_AS(parse_config("scenario = adiabatic_fewmode\n[run]\nt_end = 70\n[trap]\ndepths = -60, -45, -45, -60\n"
                                 "spacing = 1.8\nwx = 4\n"),
                    MissingKey);
    CHECK_THROWS_AS(parse_config("scenario = adiabatic_fewmode\n[run]\nt_end = 70\n[trap]\ndepths = -60, -45, -60\n"
                                 "spacing = 1.8\nwx = 4\nwy = 4\n"),
                    ParseError);
    CHECK_THROWS_AS(parse_config("scenario = adiabatic_variational\n[run]\nt_end = 70\n[output]\nstride = 0.015\n" +
                                 std::string(kTrap)),
                    ParseError);
}

TEST_CASE("csv round trip") {
    TimeSeries s = linear_series(0.0, 1.0, 7, 0.1);
    s.records[3].n[0] = 1.0 / 3.0;
    s.records.back().breakdown = true;
    const std::string text = to_csv(s);
    CHECK(text.substr(0, text.find('\n')) == "t,n0,n1,n2,n3,j01,j12,j23,V0,gamma,breakdown");
    const TimeSeries back = parse_csv(text);
    REQUIRE(back.records.size() == s.records.size());
    CHECK(back.control_names == s.control_names);
    CHECK(back.records[3].n[0] == s.records[3].n[0]);
    CHECK(back.records.back().breakdown);
    CHECK(to_csv(back) == text);
    CHECK_THROWS_AS(parse_csv("t,n0\n0,1\n"), ParseError);
    CHECK_THROWS_AS(parse_csv(text + "1,2,3\n"), ParseError);
}

TEST_CASE("compare runs") {
    const TimeSeries a = linear_series(0.0, 1.0, 11, 0.1);
    const auto same = compare_runs(a, a);
    for (const auto& d : same.deviations) CHECK(d.max_abs == 0.0);
    CHECK(same.points == 11);

    // b sampled on a different grid interpolates exactly for linear data
    const auto shifted = compare_runs(a, linear_series(-0.5, 1.5, 9, 0.1, 0.01));
    CHECK(shifted.at("n1").max_abs == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(shifted.at("n1").rms == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(shifted.at("V0").max_abs < 1e-12);
    CHECK(shifted.at("n0").max_abs == 0.0);

    const auto part = compare_runs(a, linear_series(0.45, 2.0, 5, 0.1));
    CHECK(part.t_start == 0.45);
    CHECK(part.points == 6);
    CHECK_THROWS_AS(compare_runs(a, linear_series(2.0, 3.0, 5, 0.1)), NoOverlap);
    CHECK_THROWS_AS(part.at("E0"), InvalidArgument);
}

TEST_CASE("abstract scenarios and exit status") {
    auto s = parse_config("scenario = stationary\n[run]\nt_end = 2\n");
    const auto rs = run_scenario(s);
    CHECK(rs.exit_status == 0);
    CHECK(rs.output.summary["occupations"]["n1"]["max_deviation"].get<double>() < 1e-6);
    CHECK(rs.output.series.records.back().t == doctest::Approx(2.0));

    auto o = parse_config("scenario = oscillatory\n[run]\nt_end = 20\n[integrator]\nrel_tol = 1e-11\n");
    const auto ro = run_scenario(o);
    CHECK(ro.exit_status == 2);
    CHECK(ro.output.series.records.back().breakdown);
    CHECK(ro.output.summary["breakdown"]["occurred"].get<bool>());

    const auto rc = run_scenario(parse_config("scenario = collapse\n[run]\nt_end = 10\n"));
    CHECK(rc.exit_status == 2);
    CHECK(rc.output.summary["n1_growth"]["factor"].get<double>() > 2.0);

    CHECK_THROWS_AS(run_scenario(parse_config("scenario = stationary\n[run]\nt_end = 2\ngamma = 1.2\n")),
                    InvalidArgument);
}

TEST_CASE("outputs are deterministic") {
    const auto c = parse_config("scenario = oscillatory\n[run]\nt_end = 4\n");
    const auto d1 = scratch_dir("det1"), d2 = scratch_dir("det2");
    const auto f1 = write_outputs(run_scenario(c).output, c.scenario, d1, true);
    const auto f2 = write_outputs(run_scenario(c).output, c.scenario, d2, true);
    REQUIRE(f1.size() == 6);
    REQUIRE(f2.size() == 6);
    for (std::size_t i = 0; i < f1.size(); ++i) CHECK(slurp(f1[i]) == slurp(f2[i]));
    CHECK(write_outputs(run_scenario(c).output, c.scenario, d2, false).size() == 2);
    CHECK(plot_scripts(ScenarioKind::adiabatic_variational, true).size() == 5);
    fs::remove_all(d1);
    fs::remove_all(d2);
}

TEST_CASE("physical parameters") {
    const auto c = parse_config(std::string("scenario = adiabatic_fewmode\n[run]\nt_end = 1\n") + kTrap);
    const auto tm = prepare_trap(c);
    CHECK(tm.fit.energy == doctest::Approx(-37.7292059).epsilon(1e-7));
    CHECK(tm.model.tunneling(1) == doctest::Approx(0.0105026).epsilon(1e-4));
    const auto j = describe_trap(tm);
    CHECK(j["units"]["E0_Hz"].get<double>() == doctest::Approx(116.30).epsilon(1e-3));
    CHECK(parameter_table(tm).find("J_k,k+1") != std::string::npos);
    CHECK_THROWS_AS(prepare_trap(parse_config("scenario = stationary\n[run]\nt_end = 1\n")), InvalidArgument);
}

TEST_CASE("command line exit codes") {
    const auto dir = scratch_dir("cli");
    fs::create_directories(dir);
    std::ofstream(dir / "stat.conf") << "scenario = stationary\n[run]\nt_end = 1\n";
    std::ofstream(dir / "coll.conf") << "scenario = collapse\n[run]\nt_end = 10\n";
    std::ofstream(dir / "bad.conf") << "scenario = stationary\n[run]\nt_end = 1\nfoo = 2\n";
    const std::string d = dir.string();
    CHECK(run_cli("run --config " + d + "/stat.conf --out " + d + "/a") == 0);
    CHECK(run_cli("run --config " + d + "/stat.conf --out " + d + "/b --emit-plots") == 0);
    CHECK(slurp(dir / "a/timeseries.csv") == slurp(dir / "b/timeseries.csv"));
    CHECK(fs::exists(dir / "b/panel_a.gp"));
    CHECK(!fs::exists(dir / "a/panel_a.gp"));
    CHECK(run_cli("run --config " + d + "/coll.conf --out " + d + "/c") == 2);
    CHECK(run_cli("run --config " + d + "/bad.conf --out " + d + "/d") == 1);
    CHECK(run_cli("run --config " + d + "/missing.conf") == 1);
    CHECK(run_cli("compare --a " + d + "/a/timeseries.csv --b " + d + "/b/timeseries.csv") == 0);
    CHECK(run_cli("compare --a " + d + "/a/timeseries.csv") == 1);
    CHECK(run_cli("frobnicate") == 1);
    fs::remove_all(dir);
}
