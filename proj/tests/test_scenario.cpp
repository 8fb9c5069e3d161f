// Configuration parsing, scenario runs, CSV output, figures, sweeps and the
// command-line front end.

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "chiraldyn/config.hpp"
#include "chiraldyn/scenario.hpp"

using namespace chiraldyn;
using Catch::Approx;

namespace {

const char* minimal_config = R"(
# published defaults
molecule.delta = 1e-3
molecule.h = 0.1
bath.kind = none
time.max = 1000
time.points = 101
run.path = isolated
)";

std::string dilute_config(const char* path) {
    std::ostringstream s;
    s << "molecule.delta = 1e-3\nmolecule.localization = 1e-5\nmolecule.h = 0.1\n"
      << "bath.kind = gas\nbath.j0 = 1e-3\nbath.lambda = 0.5\n"
      << "time.max = 2000\ntime.points = 101\nrun.path = " << path << "\n";
    return s.str();
}

} // namespace

TEST_CASE("minimal configuration parses with published defaults") {
    const auto parsed = parse_config(minimal_config);
    REQUIRE(parsed.ok());
    CHECK(parsed.config->molecule.tunneling == Approx(1e-3));
    CHECK(parsed.config->molecule.planck == Approx(0.1));
    CHECK(parsed.config->molecule.localization == 0.0);
    CHECK(parsed.config->bath.is_null());
    CHECK(parsed.config->path == EvalPath::isolated);
}

TEST_CASE("empty and malformed documents list their violations") {
    const auto empty = parse_config("");
    CHECK_FALSE(empty.ok());
    bool mentions_time = false;
    for (const auto& e : empty.errors)
        if (e.find("time.max") != std::string::npos) mentions_time = true;
    CHECK(mentions_time);

    const auto multi = parse_config("molecule.delta = -1\nnonsense.key = 2\ntime.points = 1\n");
    CHECK(multi.errors.size() >= 4); // delta, unknown key, points, missing time.max

    const auto dup = parse_config("time.max = 10\ntime.max = 20\n");
    CHECK_FALSE(dup.ok());
    const auto junk = parse_config("time.max = banana\n");
    CHECK_FALSE(junk.ok());
}

TEST_CASE("conflicting bath blocks are rejected") {
    const std::string both = "time.max = 10\nbath.kind = gas\n"
                             "gas.rho = 1e-3\ngas.thermal-energy = 2\ngas.range = 2\n"
                             "debye.dipole = 0.6\n";
    const auto parsed = parse_config(both);
    CHECK_FALSE(parsed.ok());
    bool conflict = false;
    for (const auto& e : parsed.errors)
        if (e.find("mutually exclusive") != std::string::npos) conflict = true;
    CHECK(conflict);

    const auto mixed = parse_config(
        "time.max = 10\nbath.kind = gas\nbath.j0 = 1e-3\nbath.lambda = 0.5\ngas.rho = 1e-3\n");
    CHECK_FALSE(mixed.ok());
}

TEST_CASE("solvent and micro blocks resolve to closed-form parameters") {
    const auto solvent = parse_config(
        "time.max = 10\nbath.kind = debye\ndebye.dipole = 0.6\ndebye.radius = 1\n"
        "debye.eps-static = 78.3\ndebye.eps-highfreq = 4.21\ndebye.tau-d = 8.2e-12\n");
    REQUIRE(solvent.ok());
    CHECK(solvent.config->bath.kind() == SpectralKind::ohmic_debye);
    CHECK(solvent.config->bath.coupling() == Approx(7.92));

    const auto micro = parse_config("time.max = 10\nbath.kind = gas\n"
                                    "gas.rho = 1e-3\ngas.thermal-energy = 2\ngas.range = 2\n");
    REQUIRE(micro.ok());
    CHECK(micro.config->bath.kind() == SpectralKind::sub_ohmic_gas);
    CHECK(micro.config->bath.cutoff() == Approx(2.0 / 3.95).epsilon(1e-6));
}

TEST_CASE("derived molecule block") {
    const auto parsed = parse_config(
        "molecule.omega-well = 1e13\nmolecule.eta = 0.5\ntime.max = 10\nbath.kind = none\n");
    REQUIRE(parsed.ok());
    CHECK(parsed.config->molecule.tunneling == Approx(0.105 * 0.1 / 4.0).epsilon(1e-2));
    const auto conflict = parse_config(
        "molecule.omega-well = 1e13\nmolecule.delta = 1e-3\ntime.max = 10\nbath.kind = none\n");
    CHECK_FALSE(conflict.ok());
}

TEST_CASE("isolated scenario equals the bare oscillation") {
    const auto parsed = parse_config(minimal_config);
    REQUIRE(parsed.ok());
    const auto res = run_scenario(*parsed.config);
    for (std::size_t i = 0; i < res.t.size(); ++i) {
        const double expect = std::sin(0.5e-3 * res.t[i]) * std::sin(0.5e-3 * res.t[i]);
        CHECK(res.p_right[i] == Approx(expect).margin(1e-12));
    }
}

TEST_CASE("deterministic byte-identical output") {
    const auto parsed = parse_config(dilute_config("general"));
    REQUIRE(parsed.ok());
    std::ostringstream a, b;
    write_scenario_csv(a, *parsed.config, run_scenario(*parsed.config));
    write_scenario_csv(b, *parsed.config, run_scenario(*parsed.config));
    CHECK(a.str() == b.str());
    CHECK(a.str().find("# molecule.delta = 0.001") != std::string::npos);
    CHECK(a.str().find("t,P_R,P1,P2,Re_coh,Im_coh") != std::string::npos);
}

TEST_CASE("figure curve sets carry the published parameters") {
    CHECK(figure_curves("fig1a").size() == 3);
    CHECK(figure_curves("fig2a").size() == 2);
    CHECK(figure_curves("fig2b").size() == 6);
    CHECK(figure_curves("fig3a").size() == 3);
    CHECK(figure_curves("fig3b").size() == 3);
    CHECK(figure_curves("fig4a").size() == 3);
    CHECK(figure_curves("fig4b").size() == 3);
    CHECK_THROWS_AS(figure_curves("fig9z"), std::invalid_argument);

    for (const auto& c : figure_curves("fig2b")) {
        CHECK(c.config.bath.coupling() == Approx(10.0));
        CHECK(c.config.bath.cutoff() == Approx(0.01));
        CHECK(c.config.grid.t_max == Approx(2e3));
    }
    const auto f3b = figure_curves("fig3b");
    CHECK(f3b[0].config.bath.coupling() == Approx(10.0));
    CHECK(f3b[2].config.bath.coupling() == Approx(30.0));

    // fig1b: envelope amplitude at eta = 1e-2 is about 1e-2
    const auto csv = figure_1b_csv(11);
    std::istringstream rows(csv);
    std::string line, last;
    while (std::getline(rows, line))
        if (!line.empty() && line[0] != '#' && line[0] != 'e') last = line;
    const auto c1 = last.find(','), c2 = last.find(',', c1 + 1);
    CHECK(std::stod(last.substr(0, c1)) == Approx(1e-2));
    CHECK(std::stod(last.substr(c2 + 1)) == Approx(0.01).epsilon(0.02));
}

TEST_CASE("sweep parsing and the isolated-envelope trend") {
    SweepParse sp = parse_sweep("sweep.parameter = eta\nsweep.values = 1e-4,1e-3,1e-2\n");
    REQUIRE(sp.ok());
    CHECK(sp.sweep.values.size() == 3);

    CHECK_FALSE(parse_sweep("sweep.parameter = eta\n").ok());
    CHECK_FALSE(parse_sweep("sweep.values = 1,2\n").ok());
    CHECK_FALSE(parse_sweep("sweep.parameter = mass\nsweep.values = 1\n").ok());
    CHECK_FALSE(parse_sweep("sweep.parameter = j0\nsweep.values = \n").ok());
    // swept parameter must not be pinned
    CHECK_FALSE(
        parse_sweep("sweep.parameter = delta\nsweep.values = 1\nmolecule.localization = 2\n")
            .ok());

    const std::string base = "molecule.omega-well = 1e13\nbath.kind = none\n"
                             "time.max = 1000\ntime.points = 51\nrun.path = isolated\n"
                             "sweep.parameter = eta\nsweep.values = 1e-4,1e-3,1e-2\n";
    const auto sweep = parse_sweep(base);
    REQUIRE(sweep.ok());
    const auto out = run_sweep_text(base, sweep.sweep);
    REQUIRE(out.rows.size() == 3);
    double prev = 2.0;
    for (const auto& row : out.rows) {
        CHECK(row.ok);
        CHECK(row.envelope_amplitude < prev);
        prev = row.envelope_amplitude;
    }
    CHECK(out.csv.find("value,long_time_mean,fitted_rate,gamma2,envelope_amplitude,status") !=
          std::string::npos);

    // a bad point is recorded, the sweep continues
    const std::string partial = "molecule.delta = 1e-3\nbath.kind = gas\nbath.j0 = 1e-3\n"
                                "time.max = 100\ntime.points = 11\n"
                                "sweep.parameter = lambda\nsweep.values = -1,0.5\n";
    const auto sp2 = parse_sweep(partial);
    REQUIRE(sp2.ok());
    const auto out2 = run_sweep_text(partial, sp2.sweep);
    CHECK_FALSE(out2.rows[0].ok);
    CHECK(out2.rows[1].ok);
}

TEST_CASE("rate fit recovers a synthetic decay") {
    std::vector<double> t, p;
    const double r = 3e-4, w = 1.1e-3;
    for (int i = 0; i <= 4000; ++i) {
        t.push_back(5.0 * i);
        p.push_back(0.5 - 0.5 * std::exp(-r * t.back()) * std::cos(w * t.back()));
    }
    const auto fit = fit_decay_rate(t, p, 0.5, std::numbers::pi / w);
    REQUIRE(fit.ok);
    CHECK(fit.rate == Approx(r).epsilon(0.02));
}

#ifdef CHIRALDYN_CLI_PATH
namespace {

int run_cli(const std::string& args) {
    const std::string cmd = std::string(CHIRALDYN_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

} // namespace

TEST_CASE("command-line exit codes and outputs") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "chiraldyn_cli_test";
    fs::remove_all(dir);
    fs::create_directories(dir);

    const fs::path cfg = dir / "scenario.cfg";
    std::ofstream(cfg) << dilute_config("general");

    CHECK(run_cli("run --config " + cfg.string() + " --out " + dir.string()) == 0);
    CHECK(fs::exists(dir / "scenario.csv"));

    // byte-identical rerun
    std::ifstream first(dir / "scenario.csv");
    std::stringstream out1;
    out1 << first.rdbuf();
    CHECK(run_cli("run --config " + cfg.string() + " --out " + dir.string()) == 0);
    std::ifstream second(dir / "scenario.csv");
    std::stringstream out2;
    out2 << second.rdbuf();
    CHECK(out1.str() == out2.str());

    CHECK(run_cli("isolated --config " + cfg.string() + " --out " + dir.string()) == 0);
    CHECK(fs::exists(dir / "isolated.csv"));

    const fs::path bad = dir / "bad.cfg";
    std::ofstream(bad) << "time.max = banana\n";
    CHECK(run_cli("run --config " + bad.string() + " --out " + dir.string()) == 2);
    CHECK(run_cli("run --out " + dir.string()) == 2);

    CHECK(run_cli("figure fig1b --out " + dir.string()) == 0);
    CHECK(fs::exists(dir / "fig1b.csv"));
    CHECK(run_cli("figure fig9x --out " + dir.string()) == 2);

    CHECK(run_cli("spectral dump --config " + cfg.string() + " --out " + dir.string() +
                  " --points 20") == 0);
    CHECK(fs::exists(dir / "spectral.tsv"));

    const fs::path sweep_cfg = dir / "sweep.cfg";
    std::ofstream(sweep_cfg) << "molecule.omega-well = 1e13\nbath.kind = none\n"
                                "time.max = 500\ntime.points = 21\nrun.path = isolated\n"
                                "sweep.parameter = eta\nsweep.values = 1e-4,1e-3\n";
    CHECK(run_cli("sweep --config " + sweep_cfg.string() + " --out " + dir.string()) == 0);
    CHECK(fs::exists(dir / "sweep.csv"));

    fs::remove_all(dir);
}

TEST_CASE("oracle-compare exit codes", "[slow]") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "chiraldyn_cli_oracle";
    fs::remove_all(dir);
    fs::create_directories(dir);

    // weak coupling over a short horizon: passes the 0.01 gate
    const fs::path weak = dir / "weak.cfg";
    std::ofstream(weak) << "molecule.delta = 1e-3\nmolecule.localization = 1e-5\n"
                           "bath.kind = debye\nbath.j0 = 1e-3\nbath.lambda = 0.01\n"
                           "time.max = 4000\ntime.points = 41\n";
    CHECK(run_cli("oracle-compare --config " + weak.string() + " --out " + dir.string() +
                  " --modes 120 --omega-max 0.05 --omega-min 4e-4") == 0);
    CHECK(fs::exists(dir / "oracle_compare.txt"));

    // strong coupling trips the truncation monitor
    const fs::path strong = dir / "strong.cfg";
    std::ofstream(strong) << "molecule.delta = 1e-3\nmolecule.localization = 1e-3\n"
                             "bath.kind = debye\nbath.j0 = 10\nbath.lambda = 0.01\n"
                             "time.max = 100\ntime.points = 11\n";
    CHECK(run_cli("oracle-compare --config " + strong.string() + " --out " + dir.string() +
                  " --modes 60 --omega-max 0.05 --omega-min 4e-4") == 5);

    fs::remove_all(dir);
}
#endif
