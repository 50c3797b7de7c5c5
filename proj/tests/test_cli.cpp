#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "cli_app.hpp"
#include "sta/constants.hpp"
#include "sta/io.hpp"
#include "sta/sloshing.hpp"

using namespace sta;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    fs::path old;
    TempDir() {
        old = fs::current_path();
        path = fs::temp_directory_path() / ("sta_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
        fs::current_path(path);
    }
    ~TempDir() {
        fs::current_path(old);
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("unit parsing") {
    using cli::Unit;
    CHECK(cli::parse_quantity("1.29mm", Unit::Length) == doctest::Approx(1.29e-3));
    CHECK(cli::parse_quantity("186ms", Unit::Time) == doctest::Approx(0.186));
    CHECK(cli::parse_quantity("7.16", Unit::Frequency) == doctest::Approx(7.16));
    CHECK(cli::parse_quantity("302deg", Unit::Angle) ==
          doctest::Approx(302.0 * constants::pi / 180.0));
    CHECK(cli::parse_quantity("400nK", Unit::Temperature) == doctest::Approx(4e-7));
    CHECK(cli::parse_quantity("12um", Unit::Length) == doctest::Approx(12e-6));
    CHECK_THROWS(cli::parse_quantity("12parsec", Unit::Length));
    CHECK_THROWS(cli::parse_quantity("1.5mm", Unit::Time));

    const auto r = cli::parse_range("0:200um:5", Unit::Length);
    REQUIRE(r.size() == 5);
    CHECK(r[0] == 0.0);
    CHECK(r[4] == doctest::Approx(200e-6));
    CHECK(r[1] == doctest::Approx(50e-6));
}

TEST_CASE("plan command: septic passes, quintic atom-frame trips the gate") {
    TempDir tmp;
    const int rc = cli::run({"plan", "--family", "septic", "--d", "1.29mm", "--tf", "273ms",
                             "--f0", "7.55", "--out", "septic"});
    CHECK(rc == 0);
    CHECK(fs::exists("septic.csv"));
    CHECK(fs::exists("septic.json"));
    CHECK(fs::exists("septic.manifest.json"));

    // The quintic atom-frame plan yields a trap path that starts moving.
    const int rc2 = cli::run({"plan", "--family", "quintic", "--d", "1.29mm", "--tf",
                              "186ms", "--f0", "7.16", "--out", "qatom"});
    CHECK(rc2 == 2);

    // Driving the quintic polynomial as the trap is fine (with sloshing).
    const int rc3 = cli::run({"plan", "--family", "quintic-trap", "--d", "1.29mm", "--tf",
                              "186ms", "--f0", "7.16", "--out", "qtrap"});
    CHECK(rc3 == 0);
}

TEST_CASE("waveform round trip keeps the residual within 1e-4 d") {
    TempDir tmp;
    REQUIRE(cli::run({"plan", "--family", "quintic-trap", "--d", "1.29mm", "--tf", "186ms",
                      "--f0", "7.16", "--out", "qt"}) == 0);
    const auto wf = io::read_waveform_csv("qt.csv");
    CHECK(wf.metadata.at("family") == "quintic");
    const auto custom = io::plan_from_waveform(wf);
    const double w0 = 2 * constants::pi * 7.16;
    const auto direct =
        family_trap_plan(Family::Quintic, 1.29e-3, 7.16, 7.16 * 0.186);
    const auto a = sloshing_residual(custom, w0).amplitude;
    const auto b = sloshing_residual(direct, w0).amplitude;
    CHECK(std::abs(a - b) < 1e-4 * 1.29e-3);
}

TEST_CASE("correct command nulls a sine base") {
    TempDir tmp;
    REQUIRE(cli::run({"plan", "--family", "sine", "--d", "1.29mm", "--tf", "186ms", "--f0",
                      "7.16", "--out", "base"}) == 0);
    const int rc = cli::run({"correct", "--base", "base.csv", "--out", "corr"});
    CHECK(rc == 0);
    CHECK(fs::exists("corr.csv"));
    CHECK(fs::exists("corr_solution.json"));
    const auto json = slurp("corr_solution.json");
    CHECK(json.find("\"A0_m\"") != std::string::npos);
    CHECK(json.find("\"residual_m\"") != std::string::npos);
}

TEST_CASE("sweep commands write the documented columns") {
    TempDir tmp;
    REQUIRE(cli::run({"sweep", "--kind", "duration", "--family", "sine", "--f0", "7.32",
                      "--d", "1.29mm", "--range", "0.5:3:26", "--out", "fig4.csv"}) == 0);
    CHECK(slurp("fig4.csv").rfind("tf_f0,amplitude_over_d,phase_rad\n", 0) == 0);

    REQUIRE(cli::run({"sweep", "--kind", "amplitude", "--family", "quintic-trap", "--d",
                      "1.29mm", "--tf", "186ms", "--f0", "7.16", "--phi0", "300.28deg",
                      "--range", "0:200um:21", "--out", "fig5.csv"}) == 0);
    CHECK(slurp("fig5.csv").substr(0, 28) == "A0_m,amplitude_m,phase_rad\n0");

    REQUIRE(cli::run({"sweep", "--kind", "frequency", "--family", "septic", "--d", "1.29mm",
                      "--tf", "273ms", "--f0", "7.55", "--range", "0.8:1.2:21", "--out",
                      "fig6.csv"}) == 0);
    CHECK(slurp("fig6.csv").rfind("omega1_rad_s,omega1_over_omega0,amplitude_m", 0) == 0);
}

TEST_CASE("simulate then fit reproduces the plan residual") {
    TempDir tmp;
    REQUIRE(cli::run({"plan", "--family", "quintic-trap", "--d", "1.29mm", "--tf", "186ms",
                      "--f0", "7.16", "--out", "qt"}) == 0);
    REQUIRE(cli::run({"simulate", "--plan", "qt.csv", "--model", "harmonic", "--probe",
                      "--waits", "0:300ms:11", "--te", "12ms", "--reps", "3", "--noise",
                      "2um", "--seed", "31", "--out", "probe.csv"}) == 0);
    REQUIRE(cli::run({"fit", "--data", "probe.csv", "--te", "12ms", "--center", "1.29mm",
                      "--out", "fit.json"}) == 0);
    const auto fitjson = slurp("fit.json");
    CHECK(fitjson.find("in_situ_amplitude_m") != std::string::npos);
}

TEST_CASE("manifest reproducibility: identical bytes on re-run") {
    TempDir tmp;
    const std::vector<std::string> args{"plan", "--family", "sine", "--d", "1mm",
                                        "--tf",  "210ms",    "--f0", "7.16", "--out", "p1"};
    REQUIRE(cli::run(args) == 0);
    const auto csv1 = slurp("p1.csv");
    const auto man1 = slurp("p1.manifest.json");
    REQUIRE(cli::run(args) == 0);
    CHECK(slurp("p1.csv") == csv1);
    CHECK(slurp("p1.manifest.json") == man1);

    // Probe datasets are seeded and reproduce bit-identically too.
    REQUIRE(cli::run({"simulate", "--plan", "p1.csv", "--model", "harmonic", "--probe",
                      "--waits", "0:300ms:11", "--te", "12ms", "--reps", "3", "--noise",
                      "2um", "--seed", "77", "--out", "pr.csv"}) == 0);
    const auto pr1 = slurp("pr.csv");
    REQUIRE(cli::run({"simulate", "--plan", "p1.csv", "--model", "harmonic", "--probe",
                      "--waits", "0:300ms:11", "--te", "12ms", "--reps", "3", "--noise",
                      "2um", "--seed", "77", "--out", "pr.csv"}) == 0);
    CHECK(slurp("pr.csv") == pr1);
}

TEST_CASE("kinematic plan CSV round trip") {
    TempDir tmp;
    const double w0 = 2 * constants::pi * 7.16;
    const TransportRequest req{1.29e-3, 186e-3, w0};
    const auto plan = quintic_trap_plan(req);
    io::write_plan_csv("plan4.csv", plan, 1000.0);
    const auto back = io::read_plan_csv("plan4.csv", w0);
    CHECK(back.family == Family::Custom);
    const double a = sloshing_residual(back, w0).amplitude;
    const double b = sloshing_residual(plan, w0).amplitude;
    CHECK(std::abs(a - b) < 1e-4 * req.distance);
}

TEST_CASE("ensemble simulate command writes observables and a manifest") {
    TempDir tmp;
    REQUIRE(cli::run({"plan", "--family", "sine", "--d", "0.2mm", "--tf", "200ms", "--f0",
                      "7.16", "--out", "p"}) == 0);
    const char* cfg = "trap.cfg";
    std::ofstream(cfg) << "omega0_Hz = 7.16\nwaist_um = 19.45\nwavelength_nm = 1064\n"
                          "mass_amu = 39.96399848\nomega_r_Hz = 644.4\n";
    REQUIRE(cli::run({"simulate", "--plan", "p.csv", "--config", cfg, "--model",
                      "full-gaussian", "--spread", "120um", "--n", "400", "--seed", "9",
                      "--hold", "100ms", "--stride", "10", "--out", "obs.csv"}) == 0);
    const auto obs = slurp("obs.csv");
    CHECK(obs.rfind("t_s,com_m,var_m2,e_exc_J,surviving_fraction\n", 0) == 0);
    CHECK(fs::exists("obs.csv.manifest.json"));
}

TEST_CASE("usage errors return a CLI parse code") {
    TempDir tmp;
    CHECK(cli::run({"plan"}) != 0);                       // missing required options
    CHECK(cli::run({"sweep", "--kind", "nope", "--f0", "7", "--range", "1:2:3", "--out",
                    "x.csv"}) != 0);
}
