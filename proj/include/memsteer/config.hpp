#pragma once
// Flat `key = value` run configuration with dotted sections, e.g.
//
//   grid.T = 7
//   grid.K = 4096
//   kernel.kind = exponential
//   kernel.alpha = 1
//   target.kind = mode
//
// Lines starting with '#' are comments. Lists are whitespace separated.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace memsteer {

using ConfigEntries = std::map<std::string, std::string>;

struct KernelConfig {
    std::string kind = "zero";  // zero | exponential | file
    double alpha = 0.0;
    double beta = 1.0;
    std::filesystem::path file;
};

struct TargetConfig {
    std::string kind = "zero";  // zero | mode | coefficients | polynomial | csv
    int m = 1;
    double amp_xi = 0.0;
    double amp_eta = 0.0;
    std::vector<double> xi;   // coefficients xi_n, or polynomial coefficients of xi(x)
    std::vector<double> eta;
    std::filesystem::path file;
    int quadrature = 0;  // 0: max(8 n_max, 4096)
};

struct OutputConfig {
    std::filesystem::path control;
    std::filesystem::path state;
    std::filesystem::path report;
    std::filesystem::path gram;
    std::filesystem::path modes_dir;
    std::filesystem::path snapshots_file;
    int snapshots = 0;
    int snapshot_resolution = 129;
};

struct RunConfig {
    double horizon = 7.0;
    int steps = 4096;
    KernelConfig kernel;
    TargetConfig target;
    int n_max = 16;
    int verify_n_max = 0;  // modes checked by the simulator; 0 means n_max
    double ridge = 0.0;
    double singular_ratio = 1e-13;
    double tol_T = 1e-6;
    double tol_pipeline = 1e-2;
    bool hard_zero_end = false;
    std::string velocity_form = "derivative";  // derivative | density
    OutputConfig output;
    std::vector<int> sweep_steps;
    std::vector<int> sweep_n_max;
    std::vector<int> diagnose_n_max;
    std::vector<int> convergence_modes{1, 3, 5};
    unsigned threads = 1;
    std::string simd = "auto";

    ConfigEntries entries;  // as given, after overrides; echoed into artifacts
};

ConfigEntries parse_entries(std::string_view text);
// Applies `key=value`.
void apply_override(ConfigEntries& entries, std::string_view assignment);
// Validates keys and values; relative paths resolve against base_dir.
RunConfig resolve(const ConfigEntries& entries, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});

// FNV-1a over the canonical `key=value\n` listing.
std::uint64_t config_hash(const ConfigEntries& entries);
std::string config_hash_hex(const ConfigEntries& entries);

} // namespace memsteer
