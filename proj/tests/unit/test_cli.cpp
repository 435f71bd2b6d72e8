#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"
#include "stacharge/io.hpp"

using doctest::Approx;

namespace {

struct Outcome {
    int status;
    std::string out;
    std::string err;
};

Outcome run(std::vector<std::string> args) {
    args.insert(args.begin(), "stacharge");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int status = stacharge::cli::dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
    return {status, out.str(), err.str()};
}

std::filesystem::path tmp(const std::string& name) { return std::filesystem::path(STACHARGE_TEST_TMP) / name; }

std::filesystem::path write_config(const std::string& name, const std::string& body) {
    const auto p = tmp(name);
    std::ofstream(p) << body;
    return p;
}

}  // namespace

TEST_CASE("usage and unknown commands") {
    CHECK(run({}).status == 1);
    const auto bad = run({"teleport"});
    CHECK(bad.status == 1);
    CHECK(bad.err.find("usage") != std::string::npos);
    CHECK(run({"--help"}).status == 0);
    CHECK(run({"sweep-tau", "--points", "many"}).status == 1);
}

TEST_CASE("simulate") {
    const auto cfg = write_config("sta.yaml", "protocol: STA\nfamily: Gaussian\nomega0_tau_c: 7.2\nsamples: 200\n");
    const auto csv = tmp("sta.csv");
    const auto r = run({"simulate", "--config", cfg.string(), "--output", csv.string()});
    REQUIRE(r.status == 0);
    const auto summary = nlohmann::json::parse(r.out);
    CHECK(summary["W_norm_final"].get<double>() >= 0.99);
    CHECK(std::filesystem::exists(csv));
    CHECK(std::filesystem::exists(stacharge::summary_path_for(csv)));
    CHECK(stacharge::read_csv(csv).rows.size() == 200);

    CHECK(run({"simulate"}).status == 1);
    const auto broken = write_config("broken.yaml", "protocol: STA\nfamily: Gaussian\nomega0_tau_c: 7.2\nsigma: -1\n");
    const auto b = run({"simulate", "--config", broken.string()});
    CHECK(b.status == 1);
    CHECK(b.err.find("sigma") != std::string::npos);
}

TEST_CASE("numerical failure exits with status 2") {
    const auto cfg = write_config("rot.yaml", "protocol: STA_Rotated\nfamily: Ramp\nomega0_tau_c: 7.2\n");
    const auto r = run({"simulate", "--config", cfg.string()});
    CHECK(r.status == 2);
    CHECK_FALSE(r.err.empty());
}

TEST_CASE("check-cd and check-frame") {
    const auto cd = run({"check-cd"});
    CHECK(cd.status == 0);
    CHECK(cd.out.find("result = PASS") != std::string::npos);
    const auto frame = run({"check-frame"});
    CHECK(frame.status == 0);
    CHECK(frame.out.find("result = PASS") != std::string::npos);
    CHECK(run({"check-frame", "--family", "Ramp"}).status == 2);
}

TEST_CASE("sweep-gamma dissipation table") {
    const auto r = run({"sweep-gamma", "--channel", "dissipation", "--points", "4"});
    REQUIRE(r.status == 0);
    std::istringstream in(r.out);
    const auto table = stacharge::read_csv(in);
    REQUIRE(table.rows.size() == 4);
    CHECK(table.number(2, "gamma_over_omega0") == Approx(0.01));
    CHECK(table.text(2, "status") == "ok");
    CHECK(run({"sweep-gamma", "--channel", "sideways"}).status == 1);
}

TEST_CASE("sweep-tau serial and parallel output are byte-identical") {
    const auto a = run({"sweep-tau", "--points", "6", "--serial"});
    const auto b = run({"sweep-tau", "--points", "6"});
    REQUIRE(a.status == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.rfind("omega0_tau_c,", 0) == 0);
}

TEST_CASE("emit-pulses") {
    const auto out = tmp("pulses.csv");
    const auto r = run({"emit-pulses", "--family", "Ramp", "--samples", "11", "--output", out.string()});
    REQUIRE(r.status == 0);
    const auto table = stacharge::read_csv(out);
    CHECK(table.rows.size() == 11);
    CHECK(table.text(0, "phi") == "nan");
    CHECK(table.number(5, "omega1") == Approx(1.0));
}
