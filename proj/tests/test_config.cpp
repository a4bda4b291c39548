#include "doctest.h"

#include <fstream>

#include "memsteer/config.hpp"
#include "memsteer/errors.hpp"
#include "support.hpp"

using namespace memsteer;

namespace {

Errc code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return Errc::internal_consistency;
}

} // namespace

TEST_SUITE("config") {

TEST_CASE("defaults") {
    const RunConfig cfg = resolve({});
    CHECK(cfg.horizon == 7.0);
    CHECK(cfg.steps == 4096);
    CHECK(cfg.n_max == 16);
    CHECK(cfg.tol_T == 1e-6);
    CHECK(cfg.tol_pipeline == 1e-2);
    CHECK(cfg.ridge == 0.0);
    CHECK(cfg.kernel.kind == "zero");
    CHECK(cfg.target.kind == "zero");
}

TEST_CASE("parsing key = value text") {
    const ConfigEntries e = parse_entries("# comment\n\ngrid.T = 6.5\n  kernel.kind=exponential \ntarget.xi = 1, 0 2\n");
    CHECK(e.size() == 3);
    CHECK(e.at("grid.T") == "6.5");
    CHECK(e.at("kernel.kind") == "exponential");
    const RunConfig cfg = resolve(e);
    CHECK(cfg.horizon == 6.5);
    CHECK(cfg.kernel.kind == "exponential");
    CHECK(cfg.target.xi == std::vector<double>{1.0, 0.0, 2.0});
}

TEST_CASE("malformed text and values") {
    CHECK(code_of([] { parse_entries("grid.T 7\n"); }) == Errc::invalid_config);
    CHECK(code_of([] { parse_entries("grid.T = 7\ngrid.T = 8\n"); }) == Errc::invalid_config);
    CHECK(code_of([] { resolve({{"grid.T", "seven"}}); }) == Errc::invalid_config);
    CHECK(code_of([] { resolve({{"grid.T", "-1"}}); }) == Errc::invalid_config);
    CHECK(code_of([] { resolve({{"grid.K", "1"}}); }) == Errc::invalid_config);
    CHECK(code_of([] { resolve({{"solve.n_max", "0"}}); }) == Errc::invalid_config);
    CHECK(code_of([] { resolve({{"tol.pipeline", "0"}}); }) == Errc::invalid_config);
    CHECK(code_of([] { resolve({{"kernel.kind", "power"}}); }) == Errc::invalid_config);
    CHECK(code_of([] { resolve({{"grid.horizon", "7"}}); }) == Errc::invalid_config);
    CHECK(code_of([] { resolve({{"kernel.kind", "file"}, {"kernel.file", "/no/such/file.csv"}}); }) ==
          Errc::invalid_config);
    CHECK(code_of([] { resolve({{"solve.n_max", "2"}, {"target.kind", "coefficients"}, {"target.xi", "1 2 3"}}); }) ==
          Errc::invalid_config);
    CHECK(code_of([] { resolve({{"run.simd", "sse"}}); }) == Errc::invalid_config);
    CHECK(code_of([] { resolve({{"solve.n_max", "8"}, {"verify.n_max", "4"}}); }) == Errc::invalid_config);
}

TEST_CASE("overrides replace entries") {
    ConfigEntries e{{"grid.T", "7"}};
    apply_override(e, "grid.T=9");
    apply_override(e, " solve.n_max = 4 ");
    CHECK(e.at("grid.T") == "9");
    CHECK(e.at("solve.n_max") == "4");
    CHECK(code_of([&] { apply_override(e, "grid.T"); }) == Errc::invalid_config);
}

TEST_CASE("files load relative to the config and the hash is FNV-1a") {
    test_support::TempDir dir("config");
    {
        std::ofstream(dir / "kernel.csv") << "t,M\n0,1\n1,0.5\n";
        std::ofstream(dir / "run.cfg") << "grid.T = 7\ngrid.K = 4096\nkernel.file = kernel.csv\n";
    }
    const RunConfig cfg = load_config(dir / "run.cfg", {"grid.T=8"});
    CHECK(cfg.horizon == 8.0);
    CHECK(cfg.kernel.kind == "file");
    CHECK(cfg.kernel.file == dir / "kernel.csv");
    CHECK(code_of([&] { load_config(dir / "missing.cfg"); }) == Errc::invalid_config);

    // Reference digest of "grid.K=4096\ngrid.T=7\n" computed independently.
    CHECK(config_hash_hex({{"grid.T", "7"}, {"grid.K", "4096"}}) == "0390edf6a2bf3114");
    CHECK(config_hash({}) == 14695981039346656037ull);
    CHECK(config_hash({{"grid.T", "7"}}) != config_hash({{"grid.T", "7.0"}}));
    CHECK(config_hash({{"grid.T", "7"}, {"run.threads", "4"}}) == config_hash({{"grid.T", "7"}}));
}

}
