#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "doctest.h"

#include "json.hpp"

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(COVCLONE_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult res;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) res.output.append(buf, n);
    const int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

std::string grab_line(const std::string& text, const std::string& prefix) {
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line))
        if (line.rfind(prefix, 0) == 0) return line;
    return {};
}

}  // namespace

TEST_CASE("curve: analytic three-point table") {
    const auto res = run_cli("curve --variant 2 --steps 3 --mode analytic");
    CHECK(res.exit_code == 0);
    std::stringstream ss(res.output);
    std::string header, r1, r2, r3;
    std::getline(ss, header);
    std::getline(ss, r1);
    std::getline(ss, r2);
    std::getline(ss, r3);
    CHECK(header == "xi,f_analytic");
    CHECK(r1 == "0,1");
    CHECK(r2.rfind("0.785398163,0.75", 0) == 0);
    CHECK(r3.rfind("1.57079633,0.853553391", 0) == 0);
}

TEST_CASE("curve: sdp column tracks the closed form near the minimum") {
    const auto res = run_cli("curve --variant 1 --steps 41 --mode both");
    CHECK(res.exit_code == 0);
    std::stringstream ss(res.output);
    std::string line;
    std::getline(ss, line);
    CHECK(line == "xi,f_analytic,f_sdp,discrepancy");
    bool found = false;
    while (std::getline(ss, line)) {
        std::stringstream row(line);
        std::string cell;
        std::getline(row, cell, ',');
        const double xi = std::stod(cell);
        std::getline(row, cell, ',');
        const double fa = std::stod(cell);
        std::getline(row, cell, ',');
        const double fs = std::stod(cell);
        std::getline(row, cell, ',');
        const double disc = std::stod(cell);
        CHECK(std::abs(fa - fs) <= 1e-6);
        CHECK(disc <= 1e-6);
        if (std::abs(xi - 0.9553) < 0.02) {
            found = true;
            CHECK(fa == doctest::Approx(0.833333).epsilon(1e-4));
        }
    }
    CHECK(found);
}

TEST_CASE("curve: byte-identical across invocations and atomic file output") {
    const auto a = run_cli("curve --variant 2 --steps 9 --mode both");
    const auto b = run_cli("curve --variant 2 --steps 9 --mode both");
    CHECK(a.exit_code == 0);
    CHECK(a.output == b.output);

    const std::string path = "/tmp/covclone_curve_test.csv";
    std::remove(path.c_str());
    const auto c = run_cli("curve --variant 2 --steps 9 --mode both --out " + path);
    CHECK(c.exit_code == 0);
    std::ifstream in(path, std::ios::binary);
    std::stringstream content;
    content << in.rdbuf();
    CHECK(content.str() == a.output);
    std::ifstream tmp(path + ".tmp");
    CHECK_FALSE(tmp.good());  // no partial file left behind
    std::remove(path.c_str());
}

TEST_CASE("curve: invalid flags exit 2") {
    CHECK(run_cli("curve --variant 3 --steps 5").exit_code == 2);
    CHECK(run_cli("curve --variant 1 --steps 1").exit_code == 2);
    CHECK(run_cli("curve --variant 1 --mode nonsense").exit_code == 2);
    CHECK(run_cli("curve --variant 1 --xi-min 1.0 --xi-max 0.5").exit_code == 2);
    CHECK(run_cli("curve --variant 1 --unknown-flag 1").exit_code == 2);
}

TEST_CASE("wigner: rotation about the axis gives minus the angle") {
    const auto res = run_cli("wigner --rotate z,0.7 --p 1,0,0");
    CHECK(res.exit_code == 0);
    const std::string line = grab_line(res.output, "theta_w =");
    REQUIRE(!line.empty());
    const double theta = std::stod(line.substr(line.find('=') + 1));
    CHECK(theta == doctest::Approx(5.58318531).epsilon(1e-8));
    const std::string resid = grab_line(res.output, "stabilizer_residual =");
    REQUIRE(!resid.empty());
    CHECK(std::stod(resid.substr(resid.find('=') + 1)) <= 1e-8);
}

TEST_CASE("wigner: collinear boost gives zero phase") {
    const auto res = run_cli("wigner --boost 0,0,0.5 --p 1,0,0");
    CHECK(res.exit_code == 0);
    const std::string line = grab_line(res.output, "theta_w =");
    const double theta = std::stod(line.substr(line.find('=') + 1));
    CHECK(std::abs(theta) <= 1e-12);
}

TEST_CASE("wigner: composed flags satisfy the cocycle against two invocations") {
    // combined transform applies the rotation first, then the boost
    const auto combined = run_cli("wigner --rotate y,0.8 --boost 0.3,0,0 --p 1,0.7,0.2");
    CHECK(combined.exit_code == 0);
    const double lhs = std::stod(grab_line(combined.output, "theta_w =").substr(9));

    const auto first = run_cli("wigner --rotate y,0.8 --p 1,0.7,0.2");
    const double th1 = std::stod(grab_line(first.output, "theta_w =").substr(9));

    // rotated momentum: direction (0.7, 0.2) rotated by R_y(0.8); compute the
    // new spherical angles from the transformed axis components
    const double st = std::sin(0.7), ct = std::cos(0.7), sp = std::sin(0.2), cp = std::cos(0.2);
    const double x = st * cp, y = st * sp, z = ct;
    const double xr = std::cos(0.8) * x + std::sin(0.8) * z;
    const double zr = -std::sin(0.8) * x + std::cos(0.8) * z;
    const double theta_p = std::atan2(std::hypot(xr, y), zr);
    const double phi_p = std::atan2(y, xr);
    char buf[128];
    std::snprintf(buf, sizeof(buf), "wigner --boost 0.3,0,0 --p 1,%.12f,%.12f", theta_p, phi_p);
    const auto second = run_cli(buf);
    const double th2 = std::stod(grab_line(second.output, "theta_w =").substr(9));

    double diff = std::fmod(th1 + th2 - lhs, 2 * 3.14159265358979323846);
    if (diff < 0) diff += 2 * 3.14159265358979323846;
    diff = std::min(diff, 2 * 3.14159265358979323846 - diff);
    // printed theta_w carries 9 significant digits; parsing limits the residual
    CHECK(diff <= 5e-8);
}

TEST_CASE("wigner: invalid input exits 2") {
    CHECK(run_cli("wigner --boost 0,0,1.5 --p 1,0,0").exit_code == 2);
    CHECK(run_cli("wigner --rotate w,0.2 --p 1,0,0").exit_code == 2);
    CHECK(run_cli("wigner --rotate z,0.2 --p -1,0,0").exit_code == 2);
    CHECK(run_cli("wigner --rotate z,0.2").exit_code == 2);  // missing --p
}

TEST_CASE("clone: minimum-angle fidelities and covariance under theta-w") {
    const auto res = run_cli("clone --xi 0.9553166181245093 --variant 1");
    CHECK(res.exit_code == 0);
    CHECK(grab_line(res.output, "fidelity_1 =") == "fidelity_1 = 0.833333");
    CHECK(grab_line(res.output, "fidelity_2 =") == "fidelity_2 = 0.833333");

    const auto pole = run_cli("clone --xi 0 --variant 2");
    CHECK(pole.exit_code == 0);
    CHECK(grab_line(pole.output, "fidelity_1 =") == "fidelity_1 = 1.000000");

    const auto base = run_cli("clone --xi 0.785398163 --variant 2");
    const auto rotated = run_cli("clone --xi 0.785398163 --variant 2 --theta-w 1.3");
    CHECK(grab_line(base.output, "fidelity_1 =") == grab_line(rotated.output, "fidelity_1 ="));
    CHECK(grab_line(base.output, "fidelity_2 =") == grab_line(rotated.output, "fidelity_2 ="));

    CHECK(run_cli("clone --xi 9.0 --variant 2").exit_code == 2);
}

TEST_CASE("bb84: report content and determinism") {
    const auto res = run_cli("bb84");
    CHECK(res.exit_code == 0);
    const auto j = nlohmann::json::parse(res.output);
    CHECK(j.at("ordering_check").get<bool>());
    bool saw_meridian1 = false, saw_meridian2 = false, saw_mub1 = false;
    for (const auto& row : j.at("results")) {
        const std::string quad = row.at("quadruple").get<std::string>();
        const int variant = row.at("variant").get<int>();
        const double f = row.at("fidelity").get<double>();
        if (quad == "meridian_pi4" && variant == 1) {
            saw_meridian1 = true;
            CHECK(std::abs(f - 0.84150635) <= 1e-6);
        }
        if (quad == "meridian_pi4" && variant == 2) {
            saw_meridian2 = true;
            CHECK(std::abs(f - 0.75) <= 1e-6);
        }
        if (quad == "mub" && variant == 1) {
            saw_mub1 = true;
            CHECK(std::abs(f - 5.0 / 6.0) <= 1e-6);
        }
    }
    CHECK(saw_meridian1);
    CHECK(saw_meridian2);
    CHECK(saw_mub1);

    const auto again = run_cli("bb84");
    CHECK(again.output == res.output);
}

TEST_CASE("top-level: bad subcommand or none exits 2") {
    CHECK(run_cli("frobnicate").exit_code == 2);
    CHECK(run_cli("").exit_code == 2);
}
