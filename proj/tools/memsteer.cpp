// memsteer: boundary steering controls for a string with memory.
//
//   memsteer synthesize  --config run.cfg [--set key=value ...]
//   memsteer simulate    --config run.cfg --control control.csv
//   memsteer diagnose    --config run.cfg
//   memsteer convergence --config run.cfg

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "memsteer/io.hpp"
#include "memsteer/pipeline.hpp"

namespace {

using memsteer::ExitCode;

struct Common {
    std::string config;
    std::vector<std::string> sets;
    std::optional<unsigned> threads;
    std::string simd;
    std::string report;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--config,-c", c.config, "key = value run configuration")->check(CLI::ExistingFile);
    cmd->add_option("--set,-s", c.sets, "override a config entry, key=value (repeatable)");
    cmd->add_option("--threads,-j", c.threads, "worker threads (results do not depend on it)");
    cmd->add_option("--simd", c.simd, "kernel backend: auto, scalar or avx2");
    cmd->add_option("--report", c.report, "write the JSON report here instead of stdout");
}

// Paths given on the command line are relative to the working directory, not
// to the config file.
std::string absolute(const std::string& path) { return std::filesystem::absolute(path).string(); }

memsteer::RunConfig load(const Common& c, std::vector<std::string> extra) {
    std::vector<std::string> overrides = c.sets;
    if (!c.simd.empty()) overrides.push_back("run.simd=" + c.simd);
    if (!c.report.empty()) overrides.push_back("output.report=" + absolute(c.report));
    overrides.insert(overrides.end(), extra.begin(), extra.end());
    memsteer::RunConfig cfg;
    if (c.config.empty()) {
        memsteer::ConfigEntries entries;
        for (const auto& o : overrides) memsteer::apply_override(entries, o);
        cfg = memsteer::resolve(entries, std::filesystem::current_path());
    } else {
        cfg = memsteer::load_config(c.config, overrides);
    }
    if (c.threads) cfg.threads = std::max(1u, *c.threads);
    memsteer::apply_runtime(cfg);
    return cfg;
}

void emit(const memsteer::RunConfig& cfg, const nlohmann::json& report) {
    const std::string text = report.dump(2) + "\n";
    if (cfg.output.report.empty())
        std::cout << text;
    else
        memsteer::io::write_text(cfg.output.report, text);
}

int code(ExitCode c) { return static_cast<int>(c); }


} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Boundary steering control synthesis for a wave equation with memory"};
    app.set_version_flag("--version", std::string(memsteer::tool_name) + " " + memsteer::tool_version());
    app.require_subcommand(1);

    Common common;

    auto* synth = app.add_subcommand("synthesize", "solve the moment problem and verify the control");
    add_common(synth, common);
    std::string out_control, out_state, dump_modes, dump_gram, out_snapshots;
    int snapshots = 0;
    bool hard_zero_end = false;
    synth->add_option("--out-control", out_control, "control CSV t,g,f,f_phys");
    synth->add_option("--out-state", out_state, "final state CSV");
    synth->add_option("--dump-modes", dump_modes, "directory for mode_<n>.csv files");
    synth->add_option("--dump-gram", dump_gram, "Gram matrix CSV");
    synth->add_option("--snapshots", snapshots, "number of reconstructed w(x,t) snapshots")->check(CLI::NonNegativeNumber);
    synth->add_option("--out-snapshots", out_snapshots, "snapshot CSV t,x,w");
    synth->add_flag("--hard-zero-end", hard_zero_end, "force f(T)=0 by a linear correction");

    auto* sim = app.add_subcommand("simulate", "re-run a stored control through the stepping simulator");
    add_common(sim, common);
    std::string control_path;
    sim->add_option("--control", control_path, "control CSV from synthesize")->required()->check(CLI::ExistingFile);

    auto* diag = app.add_subcommand("diagnose", "Gram spectrum, closeness sums and Volterra convergence orders");
    add_common(diag, common);

    auto* conv = app.add_subcommand("convergence", "sweep K and n_max and check monotone improvement");
    add_common(conv, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : code(ExitCode::invalid_config);
    }

    try {
        if (synth->parsed()) {
            std::vector<std::string> extra;
            if (!out_control.empty()) extra.push_back("output.control=" + absolute(out_control));
            if (!out_state.empty()) extra.push_back("output.state=" + absolute(out_state));
            if (!dump_modes.empty()) extra.push_back("output.modes=" + absolute(dump_modes));
            if (!dump_gram.empty()) extra.push_back("output.gram=" + absolute(dump_gram));
            if (snapshots > 0) extra.push_back("output.snapshots=" + std::to_string(snapshots));
            if (!out_snapshots.empty()) extra.push_back("output.snapshots_file=" + absolute(out_snapshots));
            if (hard_zero_end) extra.push_back("control.hard_zero_end=true");
            const memsteer::RunConfig cfg = load(common, extra);
            const auto outcome = memsteer::synthesize(cfg, cfg.output.snapshots > 0);
            memsteer::write_synthesis_artifacts(cfg, outcome);
            if (cfg.output.report.empty()) std::cout << memsteer::synthesis_report(cfg, outcome).dump(2) << "\n";
            for (const auto& w : outcome.warnings) std::cerr << "warning: " << w << "\n";
            if (!outcome.pass) {
                std::cerr << "verification: e_total " << outcome.verification.error.total << " exceeds "
                          << outcome.threshold << "\n";
                return code(ExitCode::verification_failure);
            }
            return 0;
        }
        if (sim->parsed()) {
            const memsteer::RunConfig cfg = load(common, {});
            const auto outcome = memsteer::simulate(cfg, control_path);
            if (!cfg.output.state.empty())
                memsteer::io::write_text(cfg.output.state,
                                         memsteer::state_csv(cfg, outcome.stepped, outcome.target));
            emit(cfg, memsteer::simulation_report(cfg, outcome));
            if (!outcome.pass) {
                std::cerr << "verification: e_total " << outcome.verification.error.total << " exceeds "
                          << outcome.threshold << "\n";
                return code(ExitCode::verification_failure);
            }
            return 0;
        }
        if (diag->parsed()) {
            const memsteer::RunConfig cfg = load(common, {});
            emit(cfg, memsteer::diagnose(cfg));
            return 0;
        }
        const memsteer::RunConfig cfg = load(common, {});
        const auto table = memsteer::convergence(cfg);
        emit(cfg, memsteer::convergence_report(cfg, table));
        if (!table.monotone_in_steps) {
            std::cerr << "convergence: e_total is not non-increasing in K\n";
            return code(ExitCode::verification_failure);
        }
        return 0;
    } catch (const memsteer::Error& e) {
        std::cerr << "error [" << memsteer::errc_name(e.code()) << "] " << e.what() << "\n";
        return code(memsteer::exit_code_for(e.code()));
    } catch (const std::exception& e) {
        std::cerr << "error " << e.what() << "\n";
        return code(ExitCode::numerical_failure);
    }
}
