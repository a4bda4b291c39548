#include "doctest.h"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "json.hpp"
#include "support.hpp"

namespace {

int run(const std::string& args, const std::filesystem::path& out) {
    const std::string cmd = std::string(MEMSTEER_CLI_PATH) + " " + args + " > " + out.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

const std::string configs = MEMSTEER_CONFIG_DIR;

} // namespace

TEST_SUITE("cli") {

TEST_CASE("synthesize succeeds and writes artifacts") {
    test_support::TempDir dir("cli");
    const auto control = dir / "control.csv";
    const int rc = run("synthesize --config " + configs + "/string_sine.cfg --out-control " + control.string() +
                           " --report " + (dir / "report.json").string(),
                       dir / "log");
    CHECK(rc == 0);
    const auto report = nlohmann::json::parse(slurp(dir / "report.json"));
    CHECK(report["pass"] == true);
    CHECK(std::filesystem::exists(control));

    CHECK(run("simulate --config " + configs + "/string_sine.cfg --control " + control.string(), dir / "log2") == 0);
    CHECK(run("simulate --config " + configs + "/string_sine.cfg --set grid.K=2048 --control " + control.string(),
              dir / "log3") == 2);
}

TEST_CASE("exit codes") {
    test_support::TempDir dir("cli_codes");
    const std::string sine = "--config " + configs + "/string_sine.cfg ";
    CHECK(run("synthesize " + sine + "--set grid.T=3", dir / "a") == 3);
    CHECK(slurp(dir / "a").find("ill-conditioned") != std::string::npos);
    CHECK(run("synthesize " + sine + "--set no.such.key=1", dir / "b") == 2);
    CHECK(run("synthesize --config /no/such.cfg", dir / "c") == 2);
    CHECK(run("synthesize " + sine + "--set tol.pipeline=1e-9", dir / "d") == 4);
    CHECK(run("synthesize " + sine + "--set target.kind=zero", dir / "e") == 0);
    CHECK(run("diagnose " + sine + "--set grid.T=3 --set solve.n_max=4", dir / "f") == 0);
    CHECK(run("frobnicate", dir / "g") == 2);
    CHECK(run("--version", dir / "h") == 0);
}

}
