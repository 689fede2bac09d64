// End-to-end tests of the command-line driver: subcommands, exit codes,
// and the on-disk output contract (CSV headers, summary JSON, binary dumps).
#include "doctest.h"

#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#ifndef ANELASTIC_BIN
#error "ANELASTIC_BIN must point at the CLI executable"
#endif

namespace {

struct CmdResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Unique scratch directory per test; the root is reset once per process.
std::string scratch_dir() {
    static int counter = 0;
    if (counter == 0) {
        std::filesystem::remove_all("cli_scratch");
        mkdir("cli_scratch", 0755);
    }
    std::string d = "cli_scratch/case_" + std::to_string(counter++);
    mkdir(d.c_str(), 0755);
    return d;
}

CmdResult run_cli(const std::string& args) {
    const std::string dir = scratch_dir();
    const std::string out_file = dir + "/stdout.txt";
    const std::string err_file = dir + "/stderr.txt";
    const std::string cmd =
        std::string(ANELASTIC_BIN) + " " + args + " >" + out_file + " 2>" + err_file;
    const int rc = std::system(cmd.c_str());
    CmdResult r;
    r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    r.out = slurp(out_file);
    r.err = slurp(err_file);
    return r;
}

void write_file(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    out << body;
}

long file_size(const std::string& path) {
    struct stat st{};
    if (stat(path.c_str(), &st) != 0) return -1;
    return long(st.st_size);
}

std::string first_line(const std::string& s) {
    const size_t n = s.find('\n');
    return n == std::string::npos ? s : s.substr(0, n);
}

const char* kTinyRunConfig = R"({
  "m": 4,
  "dt": 1e-3,
  "t_end": 5e-3,
  "scheme": "rk4",
  "cadence": 1,
  "density": {"kind": "constant", "constant_value": 1.0},
  "initial": {"type": "taylor_green", "amplitude": 1.0}
})";

}  // namespace

TEST_CASE("cli: missing subcommand and unknown flags exit with code 2") {
    CHECK(run_cli("").exit_code == 2);
    CHECK(run_cli("--definitely-not-a-flag").exit_code == 2);
    CHECK(run_cli("run").exit_code == 2);  // --config is required
}

TEST_CASE("cli: configuration problems exit with code 2") {
    const std::string dir = scratch_dir();
    CmdResult missing = run_cli("run --config " + dir + "/nope.json --out " + dir);
    CHECK(missing.exit_code == 2);

    write_file(dir + "/bad_scheme.json",
               R"({"m": 4, "dt": 1e-3, "t_end": 1e-3, "scheme": "leapfrog"})");
    CmdResult bad = run_cli("run --config " + dir + "/bad_scheme.json --out " + dir);
    CHECK(bad.exit_code == 2);
    CHECK(bad.err.find("configuration error") != std::string::npos);

    write_file(dir + "/not_json.json", "this is { not json");
    CHECK(run_cli("run --config " + dir + "/not_json.json --out " + dir).exit_code == 2);

    write_file(dir + "/unknown_key.json",
               R"({"m": 4, "dt": 1e-3, "t_end": 1e-3, "turbo": true})");
    CHECK(run_cli("run --config " + dir + "/unknown_key.json --out " + dir).exit_code == 2);
}

TEST_CASE("cli run: writes diagnostics, monitors, and a summary") {
    const std::string dir = scratch_dir();
    write_file(dir + "/cfg.json", kTinyRunConfig);
    CmdResult r = run_cli("run --config " + dir + "/cfg.json --out " + dir + "/out");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("run:") != std::string::npos);

    const std::string diag_head = first_line(slurp(dir + "/out/diagnostics.csv"));
    CHECK(diag_head.substr(0, 2) == "t,");
    CHECK(diag_head.find("energy") != std::string::npos);
    CHECK(diag_head.find("constraint_residual") != std::string::npos);
    CHECK(!slurp(dir + "/out/monitors.csv").empty());

    nlohmann::json summary = nlohmann::json::parse(slurp(dir + "/out/summary.json"));
    CHECK(summary.at("result").at("steps").get<int>() == 5);
    CHECK(summary.at("energy_monotone").get<bool>());
    CHECK(summary.at("max_energy_identity_residual").get<double>() >= 0.0);
    CHECK(summary.at("config").at("m").get<int>() == 4);
    // 5 steps + initial emission at cadence 1 -> 7 lines (header + 6 rows).
    std::istringstream diag(slurp(dir + "/out/diagnostics.csv"));
    int lines = 0;
    for (std::string l; std::getline(diag, l);) ++lines;
    CHECK(lines == 7);
}

TEST_CASE("cli run: --dump-pressure-matrix writes a row-major float64 dump") {
    const std::string dir = scratch_dir();
    write_file(dir + "/cfg.json", kTinyRunConfig);
    CmdResult r = run_cli("run --config " + dir + "/cfg.json --out " + dir +
                          "/out --dump-pressure-matrix");
    CHECK(r.exit_code == 0);
    nlohmann::json summary = nlohmann::json::parse(slurp(dir + "/out/summary.json"));
    const long rows = summary.at("pressure_matrix").at("rows").get<long>();
    const long cols = summary.at("pressure_matrix").at("cols").get<long>();
    // m = 4: (m+1)(2m+1) - 1 = 44 real degrees of freedom.
    CHECK(rows == 44);
    CHECK(cols == 44);
    CHECK(file_size(dir + "/out/pressure_matrix.bin") == rows * cols * 8);
}

TEST_CASE("cli run: --seed overrides random initial data deterministically") {
    const std::string dir = scratch_dir();
    write_file(dir + "/cfg.json", R"({
      "m": 4, "dt": 1e-3, "t_end": 2e-3, "scheme": "rk4",
      "density": {"kind": "constant"},
      "initial": {"type": "random", "amplitude": 0.01, "seed": 1}
    })");
    CmdResult a = run_cli("run --config " + dir + "/cfg.json --out " + dir + "/a --seed 7");
    CmdResult b = run_cli("run --config " + dir + "/cfg.json --out " + dir + "/b --seed 7");
    CmdResult c = run_cli("run --config " + dir + "/cfg.json --out " + dir + "/c --seed 8");
    CHECK(a.exit_code == 0);
    CHECK(b.exit_code == 0);
    CHECK(c.exit_code == 0);
    CHECK(slurp(dir + "/a/diagnostics.csv") == slurp(dir + "/b/diagnostics.csv"));
    CHECK(slurp(dir + "/a/diagnostics.csv") != slurp(dir + "/c/diagnostics.csv"));
}

TEST_CASE("cli run: --cadence controls emission density") {
    const std::string dir = scratch_dir();
    write_file(dir + "/cfg.json", kTinyRunConfig);
    CmdResult r = run_cli("run --config " + dir + "/cfg.json --out " + dir +
                          "/out --cadence 5");
    CHECK(r.exit_code == 0);
    std::istringstream diag(slurp(dir + "/out/diagnostics.csv"));
    int lines = 0;
    for (std::string l; std::getline(diag, l);) ++lines;
    CHECK(lines == 3);  // header + t=0 + final step
}

TEST_CASE("cli taylor-green: passes at realistic tolerance, fails at an impossible one") {
    CmdResult ok = run_cli("taylor-green --m 6 --dt 2e-4 --t-end 0.01");
    CHECK(ok.exit_code == 0);
    CHECK(ok.out.find("max_rel_error=") != std::string::npos);

    CmdResult fail = run_cli("taylor-green --m 6 --dt 2e-4 --t-end 0.01 --tol 1e-15");
    CHECK(fail.exit_code == 3);
    CHECK(fail.err.find("numerical error") != std::string::npos);
}

TEST_CASE("cli hardy: emits the full ratio table with exact anchors") {
    const std::string dir = scratch_dir();
    CmdResult r = run_cli("hardy --out " + dir);
    CHECK(r.exit_code == 0);
    CHECK(first_line(slurp(dir + "/hardy.csv")) == "k,epsilon,family,lhs,rhs,ratio");

    nlohmann::json summary = nlohmann::json::parse(slurp(dir + "/summary.json"));
    CHECK(summary.at("anchor_z_k0").get<double>() == doctest::Approx(0.625).epsilon(1e-8));
    CHECK(summary.at("anchor_z_k_minus_3_2").get<double>() ==
          doctest::Approx(1.0).epsilon(1e-8));
    // 4 exponents x 4 families x 9 offsets, minus the inapplicable
    // constant family at k = -3/2 (9 rows).
    CHECK(summary.at("table").size() == 4 * 4 * 9 - 9);
}

TEST_CASE("cli verify-profile: certifies a single epsilon quickly") {
    const std::string dir = scratch_dir();
    CmdResult r = run_cli("verify-profile --epsilon 0.25 --n-grid 512 --out " + dir);
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("eps=0.25 OK") != std::string::npos);
    const std::string head = first_line(slurp(dir + "/profile_properties.csv"));
    CHECK(head.find("derivative_sup") != std::string::npos);
}

TEST_CASE("cli vacuum-sweep: runs a tiny sweep and reports pair metrics") {
    const std::string dir = scratch_dir();
    write_file(dir + "/sweep.json", R"({
      "m": 16, "dt": 1e-3, "t_end": 4e-3, "scheme": "imex-euler", "cadence": 2,
      "density": {"kind": "regularized", "alpha": 2.0},
      "initial": {"type": "stream_bump", "amplitude": 0.05, "delta": 0.2},
      "j_min": 2, "j_max": 3
    })");
    CmdResult r = run_cli("vacuum-sweep --config " + dir + "/sweep.json --out " + dir +
                          "/out");
    CHECK(r.exit_code == 0);
    CHECK(first_line(slurp(dir + "/out/sweep_metrics.csv")) ==
          "eps_hi,eps_lo,sup_weighted_diff,grad_diff_integral");
    CHECK(!slurp(dir + "/out/uniform_bounds.csv").empty());
    nlohmann::json summary = nlohmann::json::parse(slurp(dir + "/out/summary.json"));
    CHECK(summary.at("pairs").size() == 1);

    // Initial data too wide for the largest epsilon: numerical guard, code 3.
    write_file(dir + "/wide.json", R"({
      "m": 16, "dt": 1e-3, "t_end": 4e-3, "scheme": "imex-euler",
      "density": {"kind": "regularized", "alpha": 2.0},
      "initial": {"type": "stream_bump", "amplitude": 0.05, "delta": 0.1},
      "j_min": 2, "j_max": 3
    })");
    CHECK(run_cli("vacuum-sweep --config " + dir + "/wide.json --out " + dir + "/w")
              .exit_code == 3);
}

TEST_CASE("cli stability-probe: envelope audit with halving ratio near 1/2") {
    const std::string dir = scratch_dir();
    write_file(dir + "/probe.json", R"({
      "m": 6, "dt": 1e-3, "t_end": 5e-3, "scheme": "rk4",
      "density": {"kind": "constant", "constant_value": 1.0},
      "initial": {"type": "taylor_green", "amplitude": 0.5},
      "eta": 1e-3, "x_mode2": 2, "delta2": 0.2
    })");
    CmdResult r = run_cli("stability-probe --config " + dir + "/probe.json --out " + dir +
                          "/out");
    CHECK(r.exit_code == 0);
    CHECK(first_line(slurp(dir + "/out/probe.csv")) == "t,diff_sq_eta,diff_sq_eta_half");
    nlohmann::json summary = nlohmann::json::parse(slurp(dir + "/out/summary.json"));
    CHECK(summary.at("within_envelope").get<bool>());
    const double ratio = summary.at("halving_ratio").get<double>();
    CHECK(ratio > 0.45);
    CHECK(ratio < 0.55);
}
