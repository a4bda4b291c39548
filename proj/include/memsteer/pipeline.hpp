#pragma once
// End-to-end drivers behind the CLI subcommands:
// kernel -> volterra -> spectral -> moment -> control -> simulator.

#include <string>
#include <vector>

#include "json.hpp"

#include "memsteer/config.hpp"
#include "memsteer/control.hpp"
#include "memsteer/errors.hpp"
#include "memsteer/kernel.hpp"
#include "memsteer/moment.hpp"
#include "memsteer/simulator.hpp"
#include "memsteer/spectral.hpp"
#include "memsteer/volterra.hpp"

namespace memsteer {

inline constexpr const char* tool_name = "memsteer";
const char* tool_version() noexcept;

// Exit codes: 0 success, 2 invalid config, 3 numerical failure, 4 verification failure.
enum class ExitCode : int { ok = 0, invalid_config = 2, numerical_failure = 3, verification_failure = 4 };
ExitCode exit_code_for(Errc code) noexcept;

KernelKind kernel_from_config(const RunConfig& cfg);
Target target_from_config(const RunConfig& cfg, int n_max);

// Selects the SIMD backend named in the config; "auto" leaves the startup
// choice (best available, or MEMSTEER_SIMD) in place.
void apply_runtime(const RunConfig& cfg);

struct SynthesisOutcome {
    TimeGrid grid;
    KernelSpec kernel;
    Target target;          // verification cutoff
    std::vector<ModeSolution> modes;
    RieszFamily family;
    MomentSystem system;
    Density density;
    RieszSpectrum spectrum;
    ControlSignal control;
    CascadeReport cascade;
    SimulationResult stepped;
    SimulationResult formula;
    VerificationReport verification;          // stepping
    VerificationReport formula_verification;
    double formula_gap = 0.0;                 // formula vs stepping, relative
    double density_form_gap = 0.0;            // same with the density (g-form) velocity
    double target_norm = 0.0;
    double threshold = 0.0;                   // tol_pipeline * ||target||
    bool pass = false;
    std::vector<std::string> warnings;
};

SynthesisOutcome synthesize(const RunConfig& cfg, bool keep_trajectories = false);
nlohmann::json synthesis_report(const RunConfig& cfg, const SynthesisOutcome& outcome);
void write_synthesis_artifacts(const RunConfig& cfg, const SynthesisOutcome& outcome);

// Control CSV: `t,g,f,f_phys`; the grid must match cfg.
ControlSignal load_control_csv(const std::filesystem::path& path, const TimeGrid& grid);
std::string control_csv(const RunConfig& cfg, const ControlSignal& control);
std::string state_csv(const RunConfig& cfg, const SimulationResult& result, const Target& target);

struct SimulationOutcome {
    TimeGrid grid;
    KernelSpec kernel;
    Target target;
    ControlSignal control;
    SimulationResult stepped;
    VerificationReport verification;
    double target_norm = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

SimulationOutcome simulate(const RunConfig& cfg, const std::filesystem::path& control_path,
                           bool keep_trajectories = false);
nlohmann::json simulation_report(const RunConfig& cfg, const SimulationOutcome& outcome);

nlohmann::json diagnose(const RunConfig& cfg);

struct ConvergenceCell {
    int steps = 0;
    int n_max = 0;
    double e_total = 0.0;
    double relative = 0.0;
    std::string error;  // empty on success
};

struct ConvergenceTable {
    std::vector<ConvergenceCell> cells;
    int verify_n_max = 0;
    bool monotone_in_steps = true;  // e_total non-increasing in K at every n_max
    bool monotone_in_n_max = true;
};

ConvergenceTable convergence(const RunConfig& cfg);
nlohmann::json convergence_report(const RunConfig& cfg, const ConvergenceTable& table);

// Artifacts header line: `# memsteer <version> config <hash>`.
std::string artifact_banner(const RunConfig& cfg);

} // namespace memsteer
