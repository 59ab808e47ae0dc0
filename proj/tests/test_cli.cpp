#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <string>

#include <sys/wait.h>

#include <json.hpp>

// End-to-end checks against the installed binary; the test runner exports
// GWP_BIN.  Without it the cases report themselves as skipped.

using Json = nlohmann::json;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output; // stdout and stderr merged
};

RunResult run_cli(const std::string& bin, const std::string& args) {
    RunResult r;
    std::string cmd = bin + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe)
        return r;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0)
        r.output.append(buf, got);
    int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -2;
    return r;
}

const char* cli_bin() { return std::getenv("GWP_BIN"); }

#define NEED_CLI_BIN()                                                                             \
    const char* bin = cli_bin();                                                                   \
    if (!bin) {                                                                                    \
        MESSAGE("GWP_BIN not set; skipping CLI end-to-end case");                                  \
        return;                                                                                    \
    }

} // namespace

TEST_CASE("cli: --help exits 0 and lists the verbs") {
    NEED_CLI_BIN();
    RunResult r = run_cli(bin, "--help");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("certify") != std::string::npos);
    CHECK(r.output.find("simulate") != std::string::npos);
}

TEST_CASE("cli: certify emits a replayable JSON envelope") {
    NEED_CLI_BIN();
    RunResult r = run_cli(bin, "certify --b 3 --n-max 10");
    REQUIRE(r.exit_code == 0);
    Json j = Json::parse(r.output);
    CHECK(j["command"] == "certify");
    CHECK(j["config"]["b"] == "3");
    CHECK(j["config"]["n_max"] == 10);
    CHECK(j["result"]["first_negative"] == 6);
    CHECK(j["result"]["value"] == "-1/27");
    CHECK(j["result"]["structural_certificate"] == false);
}

TEST_CASE("cli: certify --csv marks a clean prefix with -1") {
    NEED_CLI_BIN();
    RunResult r = run_cli(bin, "certify --b 3/2 --n-max 12 --csv");
    REQUIRE(r.exit_code == 0);
    CHECK(r.output.substr(0, 36) == "b,first_negative,value,elapsed_ms\n3/");
    CHECK(r.output.find("\n3/2,-1,,") != std::string::npos);
}

TEST_CASE("cli: GWP_FORMAT env sets the default format") {
    NEED_CLI_BIN();
    RunResult r = run_cli("GWP_FORMAT=csv " + std::string(bin), "certify --b 3/2 --n-max 6");
    REQUIRE(r.exit_code == 0);
    CHECK(r.output.substr(0, 34) == "b,first_negative,value,elapsed_ms\n");
}

TEST_CASE("cli: decimal flags bounce with the exact rational named") {
    NEED_CLI_BIN();
    RunResult r = run_cli(bin, "certify --b 2.5 --n-max 10");
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("ParseError") != std::string::npos);
    CHECK(r.output.find("5/2") != std::string::npos);
}

TEST_CASE("cli: domain errors exit 2 with a structured type") {
    NEED_CLI_BIN();
    RunResult r = run_cli(bin, "tilt check --family geometric --alpha 1/2 --r 3/2");
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("SupercriticalTilt") != std::string::npos);
}

TEST_CASE("cli: unknown options are usage errors") {
    NEED_CLI_BIN();
    RunResult r = run_cli(bin, "certify --b 3/2 --bogus");
    CHECK(r.exit_code == 1);
}

TEST_CASE("cli: JSON and CSV report identical exact numbers") {
    NEED_CLI_BIN();
    RunResult js = run_cli(bin, "sibuya pmf --a 1/2 --n-max 4");
    REQUIRE(js.exit_code == 0);
    Json j = Json::parse(js.output);
    CHECK(j["result"]["rows"][2]["n"] == 2);
    CHECK(j["result"]["rows"][2]["mass"] == "1/8");

    RunResult csv = run_cli(bin, "sibuya pmf --a 1/2 --n-max 4 --format csv");
    REQUIRE(csv.exit_code == 0);
    CHECK(csv.output.substr(0, 18) == "n,mass,mass_float\n");
    CHECK(csv.output.find("\n2,1/8,0.125\n") != std::string::npos);
}

TEST_CASE("cli: simulate ties the histogram back to the exact law") {
    NEED_CLI_BIN();
    RunResult r = run_cli(
        bin, "simulate --family geometric --alpha 2/5 --replicas 50000 --seed 4 --k-max 8");
    REQUIRE(r.exit_code == 0);
    Json j = Json::parse(r.output);
    CHECK(j["result"]["histogram"]["total"] == 50000);
    CHECK(j["result"]["censored_fraction"] == 0.0);
    REQUIRE(!j["result"]["tv_vs_exact"].is_null());
    CHECK(j["result"]["tv_vs_exact"]["tv"].get<double>() < 0.01);
}

TEST_CASE("cli: simulate --per-replica writes one row per replica") {
    NEED_CLI_BIN();
    const std::string path = "/tmp/gw_cli_replicas.csv";
    std::remove(path.c_str());
    RunResult r = run_cli(bin, "simulate --family geometric --alpha 1/3 --replicas 50 --seed 9 "
                               "--k-max 5 --per-replica " +
                                   path);
    REQUIRE(r.exit_code == 0);
    FILE* f = std::fopen(path.c_str(), "r");
    REQUIRE(f != nullptr);
    char line[256];
    REQUIRE(std::fgets(line, sizeof(line), f) != nullptr);
    CHECK(std::string(line) == "replica,total,generations,censored\n");
    int rows = 0;
    while (std::fgets(line, sizeof(line), f))
        ++rows;
    std::fclose(f);
    std::remove(path.c_str());
    CHECK(rows == 50);
}

TEST_CASE("cli: --out writes the envelope to a file") {
    NEED_CLI_BIN();
    const std::string path = "/tmp/gw_cli_out.json";
    std::remove(path.c_str());
    RunResult r = run_cli(bin, "certify --b 3/2 --n-max 6 --out " + path);
    REQUIRE(r.exit_code == 0);
    CHECK(r.output.empty());
    FILE* f = std::fopen(path.c_str(), "r");
    REQUIRE(f != nullptr);
    std::string content;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof(buf), f)) > 0)
        content.append(buf, got);
    std::fclose(f);
    std::remove(path.c_str());
    Json j = Json::parse(content);
    CHECK(j["command"] == "certify");
}
