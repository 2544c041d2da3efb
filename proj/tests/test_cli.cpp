#include <catch_amalgamated.hpp>

#include "oracle.hpp"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const fs::path kData = PLAGATE_DATA_DIR;
const std::string kCli = PLAGATE_CLI_PATH;

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::path(PLAGATE_TEST_TMP) / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

struct Run {
    int code;
    std::string out;
};

Run run(const std::string& args, const fs::path& dir) {
    const fs::path log = dir / "stdout.txt";
    const std::string cmd = "'" + kCli + "' " + args + " > '" + log.string() + "' 2>&1";
    const int status = std::system(cmd.c_str());
    Run r{WIFEXITED(status) ? WEXITSTATUS(status) : -1, {}};
    if (fs::exists(log)) r.out = oracle::read_file(log);
    return r;
}

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

std::vector<double> csv_column(const std::string& text, std::size_t col) {
    std::vector<double> out;
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string cell;
        for (std::size_t i = 0; i <= col; ++i) std::getline(ls, cell, ',');
        out.push_back(std::stod(cell));
    }
    return out;
}

}  // namespace

TEST_CASE("vgnd with matched devices lands at vdd/2", "[cli]") {
    const auto dir = scratch("vgnd");
    const auto r = run("vgnd --config " + q(kData / "symmetric.cfg"), dir);
    REQUIRE(r.code == 0);
    CHECK(r.out.find("vgnd_closed_form_raw_V") != std::string::npos);
    CHECK(r.out.find("0.5\n") != std::string::npos);
}

TEST_CASE("bad configuration exits 2 with a named error", "[cli][errors]") {
    const auto dir = scratch("bad_config");
    auto r = run("vgnd --eta 0", dir);
    CHECK(r.code == 2);
    CHECK(r.out.find("eta must be positive") != std::string::npos);

    r = run("vgnd --vdd abc", dir);
    CHECK(r.code == 2);

    r = run("sweep --pla " + q(kData / "missing.pla") + " --out " + q(dir), dir);
    CHECK(r.code == 2);

    r = run("", dir);
    CHECK(r.code == 2);

    r = run("--help", dir);
    CHECK(r.code == 0);
}

TEST_CASE("sweep writes reports and is deterministic", "[cli][sweep]") {
    const auto a = scratch("sweep_a");
    const auto b = scratch("sweep_b");
    const std::string args = "sweep --pla " + q(kData / "example.pla") + " --calibration " +
                             q(kData / "reference_power.csv") + " --out ";
    const auto ra = run(args + q(a / "out"), a);
    const auto rb = run(args + q(b / "out"), b);
    REQUIRE(ra.code == 0);
    REQUIRE(rb.code == 0);
    CHECK(ra.out.find("outlier") != std::string::npos);

    for (const char* name : {"power_report.csv", "conventional.csv", "gated.csv", "summary.csv",
                             "calibration_residuals.csv", "power_report.json", "netlist_gated.json"}) {
        INFO(name);
        REQUIRE(fs::exists(a / "out" / name));
        CHECK(oracle::read_file(a / "out" / name) == oracle::read_file(b / "out" / name));
    }
    const auto report = oracle::read_file(a / "out" / "power_report.csv");
    CHECK(count_lines(report) == 25);
    CHECK(report.rfind("vector,line,conventional_pw,gated_pw,saving_fraction\n", 0) == 0);
    CHECK(count_lines(oracle::read_file(a / "out" / "conventional.csv")) == 25);
}

TEST_CASE("sweep without a calibration falls back to the device model", "[cli][sweep]") {
    const auto dir = scratch("sweep_model");
    const auto r = run("sweep --pla " + q(kData / "example.pla") + " --out " + q(dir / "out"), dir);
    REQUIRE(r.code == 0);
    const auto conv = csv_column(oracle::read_file(dir / "out" / "power_report.csv"), 2);
    const auto gated = csv_column(oracle::read_file(dir / "out" / "power_report.csv"), 3);
    REQUIRE(conv.size() == 24);
    for (std::size_t i = 0; i < conv.size(); ++i) CHECK(gated[i] <= conv[i]);
}

TEST_CASE("sweep on an empty PLA", "[cli][sweep]") {
    const auto dir = scratch("sweep_empty");
    const auto r = run("sweep --pla " + q(kData / "empty.pla") + " --out " + q(dir / "out"), dir);
    REQUIRE(r.code == 0);
    CHECK(fs::exists(dir / "out" / "power_report.csv"));
}

TEST_CASE("compare reproduces the sweep summary", "[cli][compare]") {
    const auto dir = scratch("compare");
    auto r = run("compare --report " + q(kData / "reference_power.csv") + " --out " + q(dir / "out"), dir);
    REQUIRE(r.code == 0);
    CHECK(r.out.find("total saving") != std::string::npos);
    const auto summary = oracle::read_file(dir / "out" / "summary.csv");
    CHECK(summary.find("\nB,") != std::string::npos);
    CHECK(summary.find("\ntotal,") != std::string::npos);

    r = run("compare", dir);
    CHECK(r.code == 2);
}

TEST_CASE("transient step and stability guard", "[cli][transient]") {
    const auto dir = scratch("transient");
    auto r = run("transient --out " + q(dir / "out") + " --duration 1e-6 --timestep 1e-6", dir);
    CHECK(r.code == 2);
    CHECK(r.out.find("required maximum timestep") != std::string::npos);

    r = run("transient --pla " + q(kData / "example.pla") + " --out " + q(dir / "out"), dir);
    REQUIRE(r.code == 0);
    const auto conv = csv_column(oracle::read_file(dir / "out" / "F_conventional.csv"), 1);
    const auto gated = csv_column(oracle::read_file(dir / "out" / "F_gated.csv"), 1);
    REQUIRE(!conv.empty());
    REQUIRE(conv.size() == gated.size());
    CHECK(std::abs(conv.back() - 5.0) <= 0.05);
    // Series footer slows the edge at every point.
    for (std::size_t i = 1; i < conv.size(); ++i) CHECK(gated[i] < conv[i]);
    CHECK(r.out.find("wake") != std::string::npos);
}
