#include "delayctl/trace_io.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(DELAYCTL_BIN) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    while (const std::size_t n = fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("delayctl_cli_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const std::string configs = CONFIG_DIR;

}  // namespace

TEST_CASE("norm on the identity line") {
    const Run r = run("norm --tau 0.1 --tau-hat 0.1 --k 25");
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(std::abs(j["g"].get<double>() - 1.0) <= 1e-5);
    CHECK(j["stable"].get<bool>());

    const auto m = nlohmann::json::parse(run("norm --tau 0.212 --tau-hat 0.212 --k 25").out);
    CHECK(std::abs(m["f"].get<double>() - 0.5) <= 0.05);
}

TEST_CASE("invalid arguments exit with 1") {
    CHECK(run("norm --tau -1").code == 1);
    CHECK(run("chart --level 0 --out " + scratch("lvl").string()).code == 1);
    CHECK(run("frobnicate").code == 1);
    CHECK(run("norm --config /nonexistent.json").code == 1);
}

TEST_CASE("malformed config writes nothing") {
    const fs::path dir = scratch("bad");
    const fs::path cfg = fs::temp_directory_path() / "delayctl_cli_bad.json";
    std::ofstream(cfg) << "{\"tau\": 0.1,";
    CHECK(run("simulate --config " + cfg.string() + " --out " + dir.string()).code == 1);
    CHECK_FALSE(fs::exists(dir));
}

TEST_CASE("simulate writes a reproducible trace and metrics") {
    const fs::path cfg = fs::temp_directory_path() / "delayctl_cli_short.json";
    std::ofstream(cfg) << R"({"tau": 0.06, "tau_hat": 0.0, "Gamma": 1e5, "t_final": 1.0})";
    const fs::path a = scratch("sim_a"), b = scratch("sim_b");
    REQUIRE(run("simulate --config " + cfg.string() + " --t-start 0.5 --gnuplot --out " + a.string()).code == 0);
    REQUIRE(run("simulate --config " + cfg.string() + " --t-start 0.5 --gnuplot --out " + b.string()).code == 0);
    CHECK(slurp(a / "trace.csv") == slurp(b / "trace.csv"));
    CHECK(fs::exists(a / "trace.gp"));

    std::ifstream in(a / "trace.csv");
    const delayctl::CsvTable table = delayctl::read_csv(in);
    CHECK(table.rows.size() == 1001);
    const auto m = nlohmann::json::parse(slurp(a / "metrics.json"));
    CHECK_FALSE(m["diverged"].get<bool>());
    CHECK(m["max_err"].get<double>() >= 0.0);

    CHECK(run("simulate --config " + cfg.string() + " --t-start 0.5 --out " + a.string()).code == 1);
    CHECK(run("simulate --config " + cfg.string() + " --t-start 0.5 --force --out " + a.string()).code == 0);
}

TEST_CASE("simulate reports divergence with exit code 2") {
    const fs::path cfg = fs::temp_directory_path() / "delayctl_cli_div.json";
    std::ofstream(cfg) << R"({"theta_signal": [{"offset": 50, "terms": []}, {"offset": 0, "terms": []}], "Gamma": 1e5})";
    const fs::path dir = scratch("div");
    CHECK(run("simulate --config " + cfg.string() + " --out " + dir.string()).code == 2);
    CHECK(fs::exists(dir / "trace.csv"));
    CHECK(nlohmann::json::parse(slurp(dir / "metrics.json"))["diverged"].get<bool>());
}

TEST_CASE("tau-s and bounds") {
    const auto j = nlohmann::json::parse(run("tau-s --k 25").out);
    CHECK(std::abs(j["tau_s"].get<double>() - 0.212) <= 0.02);

    const Run ok = run("bounds --config " + configs + "/fig1_tau006.json --tau-hat 0.06 --gamma 1e6");
    REQUIRE(ok.code == 0);
    const auto b1 = nlohmann::json::parse(ok.out);
    const auto b4 = nlohmann::json::parse(run("bounds --tau 0.06 --tau-hat 0.06 --gamma 4e6").out);
    CHECK(b4["transient"]["est_error_bound"].get<double>() ==
          doctest::Approx(0.5 * b1["transient"]["est_error_bound"].get<double>()).epsilon(1e-12));

    const Run bad = run("bounds --tau 0.3 --tau-hat 0.3");
    CHECK(bad.code == 3);
    CHECK(nlohmann::json::parse(bad.out)["diverged"].get<bool>());
}
