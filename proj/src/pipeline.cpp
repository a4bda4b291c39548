#include "memsteer/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>

#include "memsteer/io.hpp"
#include "memsteer/simd/kernels.hpp"

namespace memsteer {

using nlohmann::json;

const char* tool_version() noexcept { return MEMSTEER_VERSION; }

ExitCode exit_code_for(Errc code) noexcept {
    switch (code) {
    case Errc::invalid_argument:
    case Errc::grid_mismatch:
    case Errc::not_in_h10:
    case Errc::aliasing:
    case Errc::invalid_config:
    case Errc::io:
        return ExitCode::invalid_config;
    case Errc::instability:
    case Errc::ill_conditioned:
    case Errc::mean_zero_violation:
    case Errc::internal_consistency:
        return ExitCode::numerical_failure;
    }
    return ExitCode::numerical_failure;
}

void apply_runtime(const RunConfig& cfg) {
    // "auto" keeps the startup choice, which honours MEMSTEER_SIMD.
    if (cfg.simd != "auto") simd::set_backend(simd::parse_backend(cfg.simd));
}

KernelKind kernel_from_config(const RunConfig& cfg) {
    if (cfg.kernel.kind == "exponential") return ExponentialKernel{cfg.kernel.alpha, cfg.kernel.beta};
    if (cfg.kernel.kind == "file") return load_kernel_csv(cfg.kernel.file);
    return ZeroKernel{};
}

namespace {

double polynomial(const std::vector<double>& c, double x) {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return acc;
}

double interpolate(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - xs.begin());
    const double w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
    return (1.0 - w) * ys[i - 1] + w * ys[i];
}

Target truncate(const Target& t, int n_max) {
    Target out = t;
    out.n_max = n_max;
    out.xi.resize(static_cast<std::size_t>(n_max));
    out.eta.resize(static_cast<std::size_t>(n_max));
    return out;
}

void run_self_test_once() {
    static std::once_flag once;
    std::call_once(once, [] { formula_sign_self_test(); });
}

json spectrum_json(const RieszSpectrum& s) {
    return json{{"min_eig", s.min_eig},       {"max_eig", s.max_eig},
                {"cond", s.cond},             {"direct_min_eig", s.direct_min_eig},
                {"direct_max_eig", s.direct_max_eig}};
}

json header_json(const RunConfig& cfg) {
    return json{{"tool", tool_name},
                {"version", tool_version()},
                {"config_hash", config_hash_hex(cfg.entries)},
                {"config", cfg.entries}};
}

std::string csv_number(double v) { return io::format_double(v); }

} // namespace

Target target_from_config(const RunConfig& cfg, int n_max) {
    const TargetConfig& t = cfg.target;
    const int quadrature = t.quadrature > 0 ? t.quadrature : std::max(8 * n_max, 4096);
    if (t.kind == "zero") return Target::zero(n_max);
    if (t.kind == "mode") {
        const int m = t.m;
        return coefficients_from_function([&](double x) { return t.amp_xi * std::sin(m * x); },
                                          [&](double x) { return t.amp_eta * std::sin(m * x); }, n_max, quadrature);
    }
    if (t.kind == "coefficients") {
        Target target = Target::zero(n_max);
        for (std::size_t i = 0; i < t.xi.size() && static_cast<int>(i) < n_max; ++i) target.xi[i] = t.xi[i];
        for (std::size_t i = 0; i < t.eta.size() && static_cast<int>(i) < n_max; ++i) target.eta[i] = t.eta[i];
        return target;
    }
    if (t.kind == "polynomial") {
        return coefficients_from_function([&](double x) { return polynomial(t.xi, x); },
                                          [&](double x) { return polynomial(t.eta, x); }, n_max, quadrature);
    }
    // csv: columns x,xi,eta
    const io::CsvTable table = io::read_csv(t.file);
    int cx = table.column("x"), cxi = table.column("xi"), ceta = table.column("eta");
    if (table.header.empty()) cx = 0, cxi = 1, ceta = 2;
    if (cx < 0 || cxi < 0 || ceta < 0 || table.rows.size() < 2 || table.rows.front().size() < 3)
        throw Error(Errc::invalid_config, "spectral", "target CSV must have columns x,xi,eta");
    std::vector<double> xs, xis, etas;
    for (const auto& row : table.rows) {
        xs.push_back(row[cx]);
        xis.push_back(row[cxi]);
        etas.push_back(row[ceta]);
    }
    if (!std::is_sorted(xs.begin(), xs.end()))
        throw Error(Errc::invalid_config, "spectral", "target CSV x column must be increasing");
    std::vector<double> xi(static_cast<std::size_t>(quadrature) + 1), eta(xi.size());
    for (int j = 0; j <= quadrature; ++j) {
        const double x = j == quadrature ? pi : j * (pi / quadrature);
        xi[j] = interpolate(xs, xis, x);
        eta[j] = interpolate(xs, etas, x);
    }
    return coefficients_from_samples(xi, eta, n_max);
}

SynthesisOutcome synthesize(const RunConfig& cfg, bool keep_trajectories) {
    run_self_test_once();

    SynthesisOutcome out;
    out.grid = make_grid(cfg.horizon, cfg.steps);
    if (!out.grid.exceeds_critical_horizon())
        out.warnings.push_back("horizon T <= 2*pi: the family {Z_n} need not be a Riesz sequence");
    out.kernel = build_kernel(kernel_from_config(cfg), out.grid);

    const int n_ver = std::max(cfg.n_max, cfg.verify_n_max);
    out.modes = solve_all_modes(n_ver, out.kernel, out.grid, cfg.threads);
    out.target = target_from_config(cfg, n_ver);
    const Target control_target = truncate(out.target, cfg.n_max);

    out.family = build_family(out.modes, out.grid, cfg.n_max);
    out.system = gram(out.family, out.grid, cfg.threads);
    out.system.rhs = rhs_from_target(control_target);
    SolveOptions options;
    options.ridge = cfg.ridge;
    options.singular_ratio = cfg.singular_ratio;
    out.density = solve_min_norm(out.system, out.family, out.grid, options);
    for (const auto& w : out.density.warnings) out.warnings.push_back(w);
    out.spectrum = riesz_diagnostics(out.system, out.family, out.grid);
    if (out.density.imag_ratio > 1e-8)
        throw Error(Errc::internal_consistency, "moment",
                    "density for a real target has relative imaginary part " +
                        std::to_string(out.density.imag_ratio));

    out.control = integrate_density(out.density.re, out.grid, cfg.tol_T);
    if (cfg.hard_zero_end) {
        apply_hard_zero_end(out.control);
        out.warnings.push_back("hard zero end applied: f shifted by -(f(T)/T) t, moments move by O(f(T))");
    }
    out.cascade = cascade_check(out.control, cfg.tol_T);

    out.stepped = step_modes(out.control, out.kernel, out.grid, n_ver, keep_trajectories, cfg.threads);
    const VelocityForm form = cfg.velocity_form == "density" ? VelocityForm::density : VelocityForm::derivative;
    out.formula = formula_modes(out.control, out.modes, out.grid, form);
    const SimulationResult density_form = formula_modes(out.control, out.modes, out.grid, VelocityForm::density);
    out.verification = verify(out.target, out.stepped);
    out.formula_verification = verify(out.target, out.formula);
    out.formula_gap = relative_discrepancy(out.formula.final_state, out.stepped.final_state);
    out.density_form_gap = relative_discrepancy(density_form.final_state, out.stepped.final_state);

    out.target_norm = out.target.norm();
    out.threshold = cfg.tol_pipeline * out.target_norm;
    out.pass = out.verification.error.total <= out.threshold;
    return out;
}

json synthesis_report(const RunConfig& cfg, const SynthesisOutcome& o) {
    json report = header_json(cfg);
    report["command"] = "synthesize";
    report["simd"] = std::string(simd::backend_name(simd::active_backend()));
    report["kernel"] = {{"kind", kernel_kind_name(o.kernel.kind)}, {"gamma", o.kernel.gamma}};
    report["grid"] = {{"T", o.grid.horizon}, {"K", o.grid.steps}, {"h", o.grid.step},
                      {"T_exceeds_2pi", o.grid.exceeds_critical_horizon()}};
    report["n_max"] = cfg.n_max;
    report["verify_n_max"] = o.target.n_max;
    report["e_H1"] = o.verification.error.h1;
    report["e_L2"] = o.verification.error.l2;
    report["e_total"] = o.verification.error.total;
    report["target_norm"] = o.target_norm;
    report["target_tail_estimate"] = o.target.tail_estimate;
    report["relative_error"] = o.target_norm > 0.0 ? o.verification.error.total / o.target_norm : 0.0;
    report["threshold"] = o.threshold;
    report["pass"] = o.pass;
    report["g_L2"] = o.control.g_l2;
    report["f_L2"] = o.control.f_l2;
    report["f_H1"] = o.control.f_h1;
    report["f_T"] = o.control.end_value;
    report["f_T_ratio"] = o.cascade.end_ratio;
    report["g_mean"] = o.control.mean;
    report["hard_zero_end"] = o.control.hard_zero_end;
    report["gram"] = spectrum_json(o.spectrum);
    report["gram_cond"] = o.spectrum.cond;
    report["moment"] = {{"residual", o.density.residual},
                        {"max_moment_error", o.density.max_moment_error},
                        {"imag_ratio", o.density.imag_ratio},
                        {"ridge", o.density.ridge}};
    report["formula"] = {{"velocity_form", cfg.velocity_form},
                         {"gap_vs_stepping", o.formula_gap},
                         {"density_form_gap_vs_stepping", o.density_form_gap},
                         {"e_total", o.formula_verification.error.total}};
    report["cascade"] = {{"pass", o.cascade.pass},
                         {"mean_zero", o.cascade.mean_zero},
                         {"end_zero", o.cascade.end_zero},
                         {"max_residual", o.cascade.max_residual},
                         {"interpretation", o.cascade.interpretation}};
    json modes = json::array();
    for (const auto& r : o.verification.residuals)
        modes.push_back({{"n", r.n}, {"res_pos", r.position}, {"res_vel", r.velocity}});
    report["residuals"] = modes;
    report["warnings"] = o.warnings;
    return report;
}

std::string artifact_banner(const RunConfig& cfg) {
    return std::string("# ") + tool_name + " " + tool_version() + " config " + config_hash_hex(cfg.entries) + "\n";
}

std::string control_csv(const RunConfig& cfg, const ControlSignal& c) {
    std::string out = artifact_banner(cfg) + "t,g,f,f_phys\n";
    for (std::size_t k = 0; k < c.t.size(); ++k)
        out += csv_number(c.t[k]) + "," + csv_number(c.g[k]) + "," + csv_number(c.f[k]) + "," +
               csv_number(c.f_phys[k]) + "\n";
    return out;
}

std::string state_csv(const RunConfig& cfg, const SimulationResult& result, const Target& target) {
    std::string out = artifact_banner(cfg) + "n,a_n,b_n,xi_n_over_n,eta_n,res_pos,res_vel\n";
    const StateSnapshot& s = result.final_state;
    for (int i = 0; i < s.n_max; ++i) {
        const int n = i + 1;
        out += std::to_string(n) + "," + csv_number(s.a[i]) + "," + csv_number(s.b[i]) + "," +
               csv_number(target.xi[i] / n) + "," + csv_number(target.eta[i]) + "," +
               csv_number(n * s.a[i] - target.xi[i]) + "," + csv_number(s.b[i] - target.eta[i]) + "\n";
    }
    return out;
}

namespace {

std::string snapshots_csv(const RunConfig& cfg, const TimeGrid& grid, const std::vector<ModeState>& traj, int count) {
    std::string out = artifact_banner(cfg) + "t,x,w\n";
    for (int j = 0; j < count; ++j) {
        const std::size_t k =
            count == 1 ? grid.size() - 1
                       : static_cast<std::size_t>(std::llround(static_cast<double>(j) * grid.steps / (count - 1)));
        StateSnapshot snap;
        snap.n_max = static_cast<int>(traj.size());
        for (const auto& m : traj) {
            snap.a.push_back(m.w[k]);
            snap.b.push_back(m.dw[k]);
        }
        const std::vector<double> w = reconstruct(snap, cfg.output.snapshot_resolution);
        for (std::size_t i = 0; i < w.size(); ++i)
            out += csv_number(grid[k]) + "," + csv_number(i * (pi / (w.size() - 1))) + "," + csv_number(w[i]) + "\n";
    }
    return out;
}

std::string gram_csv(const RunConfig& cfg, const MomentSystem& system) {
    std::string out = artifact_banner(cfg) + "# rows/cols n = -" + std::to_string(system.n_max) + "..." +
                      std::to_string(system.n_max) + ", re,im interleaved\n";
    for (Eigen::Index p = 0; p < system.gram.rows(); ++p) {
        for (Eigen::Index q = 0; q < system.gram.cols(); ++q) {
            if (q > 0) out += ",";
            out += csv_number(system.gram(p, q).real()) + "," + csv_number(system.gram(p, q).imag());
        }
        out += "\n";
    }
    return out;
}

void write_modes(const RunConfig& cfg, const TimeGrid& grid, const std::vector<ModeSolution>& modes) {
    for (const auto& m : modes) {
        std::string out = artifact_banner(cfg) + "t,z,dz,ddz\n";
        for (std::size_t k = 0; k < grid.size(); ++k)
            out += csv_number(grid[k]) + "," + csv_number(m.z[k]) + "," + csv_number(m.dz[k]) + "," +
                   csv_number(m.ddz[k]) + "\n";
        io::write_text(cfg.output.modes_dir / ("mode_" + std::to_string(m.n) + ".csv"), out);
    }
}

} // namespace

void write_synthesis_artifacts(const RunConfig& cfg, const SynthesisOutcome& o) {
    const OutputConfig& out = cfg.output;
    if (!out.control.empty()) io::write_text(out.control, control_csv(cfg, o.control));
    if (!out.state.empty()) io::write_text(out.state, state_csv(cfg, o.stepped, o.target));
    if (!out.gram.empty()) io::write_text(out.gram, gram_csv(cfg, o.system));
    if (!out.modes_dir.empty()) write_modes(cfg, o.grid, o.modes);
    if (out.snapshots > 0 && !o.stepped.trajectories.empty())
        io::write_text(out.snapshots_file.empty() ? std::filesystem::path("snapshots.csv") : out.snapshots_file,
                       snapshots_csv(cfg, o.grid, o.stepped.trajectories, out.snapshots));
    if (!out.report.empty()) io::write_text(out.report, synthesis_report(cfg, o).dump(2) + "\n");
}

ControlSignal load_control_csv(const std::filesystem::path& path, const TimeGrid& grid) {
    const io::CsvTable table = io::read_csv(path);
    const int ct = table.column("t"), cg = table.column("g"), cf = table.column("f");
    if (ct < 0 || cg < 0 || cf < 0)
        throw Error(Errc::invalid_config, "control", "control CSV must have columns t,g,f");
    if (table.rows.size() != grid.size())
        throw Error(Errc::grid_mismatch, "control",
                    "control CSV has " + std::to_string(table.rows.size()) + " rows, grid has " +
                        std::to_string(grid.size()) + " nodes");
    ControlSignal c;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const auto& row = table.rows[k];
        if (std::abs(row[ct] - grid[k]) > 1e-9 * grid.horizon)
            throw Error(Errc::grid_mismatch, "control", "control CSV time column does not match the grid");
        c.t.push_back(grid[k]);
        c.g.push_back(row[cg]);
        c.f.push_back(row[cf]);
    }
    refresh_norms(c);
    return c;
}

SimulationOutcome simulate(const RunConfig& cfg, const std::filesystem::path& control_path, bool keep_trajectories) {
    SimulationOutcome out;
    out.grid = make_grid(cfg.horizon, cfg.steps);
    out.kernel = build_kernel(kernel_from_config(cfg), out.grid);
    const int n_ver = std::max(cfg.n_max, cfg.verify_n_max);
    out.target = target_from_config(cfg, n_ver);
    out.control = load_control_csv(control_path, out.grid);
    out.stepped = step_modes(out.control, out.kernel, out.grid, n_ver, keep_trajectories, cfg.threads);
    out.verification = verify(out.target, out.stepped);
    out.target_norm = out.target.norm();
    out.threshold = cfg.tol_pipeline * out.target_norm;
    out.pass = out.verification.error.total <= out.threshold;
    return out;
}

json simulation_report(const RunConfig& cfg, const SimulationOutcome& o) {
    json report = header_json(cfg);
    report["command"] = "simulate";
    report["e_H1"] = o.verification.error.h1;
    report["e_L2"] = o.verification.error.l2;
    report["e_total"] = o.verification.error.total;
    report["target_norm"] = o.target_norm;
    report["threshold"] = o.threshold;
    report["pass"] = o.pass;
    report["g_L2"] = o.control.g_l2;
    report["f_H1"] = o.control.f_h1;
    report["f_T"] = o.control.end_value;
    json modes = json::array();
    for (const auto& r : o.verification.residuals)
        modes.push_back({{"n", r.n}, {"res_pos", r.position}, {"res_vel", r.velocity}});
    report["residuals"] = modes;
    return report;
}

json diagnose(const RunConfig& cfg) {
    const TimeGrid grid = make_grid(cfg.horizon, cfg.steps);
    const KernelKind kind = kernel_from_config(cfg);
    const KernelSpec kernel = build_kernel(kind, grid);

    std::vector<int> sweep = cfg.diagnose_n_max;
    const int top = std::max(cfg.n_max, sweep.empty() ? cfg.n_max : *std::max_element(sweep.begin(), sweep.end()));
    const std::vector<ModeSolution> modes = solve_all_modes(top, kernel, grid, cfg.threads);

    const RieszFamily family = build_family(modes, grid, cfg.n_max);
    const MomentSystem system = gram(family, grid, cfg.threads);
    const RieszSpectrum spectrum = riesz_diagnostics(system, family, grid);
    const Closeness closeness = quadratic_closeness(family, kernel, grid);

    json report = header_json(cfg);
    report["command"] = "diagnose";
    report["grid"] = {{"T", grid.horizon}, {"K", grid.steps}, {"T_exceeds_2pi", grid.exceeds_critical_horizon()}};
    report["gamma"] = kernel.gamma;
    report["n_max"] = cfg.n_max;
    report["min_eig"] = spectrum.min_eig;
    report["max_eig"] = spectrum.max_eig;
    report["cond"] = spectrum.cond;
    report["direct_min_eig"] = spectrum.direct_min_eig;
    report["eigenvalues"] = spectrum.eigenvalues;
    report["frame_bounds"] = spectrum.frame_bounds;
    report["S_N"] = closeness.literal.partial_sums;
    auto pairing = [](const ClosenessPairing& p) {
        return json{{"terms", p.terms},
                    {"S_N", p.partial_sums},
                    {"normalized_tail", p.normalized_tail},
                    {"saturates", p.saturates}};
    };
    std::string saturating = closeness.literal.saturates ? (closeness.swapped.saturates ? "both" : "literal")
                                                         : (closeness.swapped.saturates ? "swapped" : "none");
    report["closeness"] = {{"literal", pairing(closeness.literal)},
                           {"swapped", pairing(closeness.swapped)},
                           {"saturating", saturating}};

    if (!sweep.empty()) {
        json rows = json::array();
        std::vector<double> mins;
        for (int n : sweep) {
            const RieszFamily sub = build_family(modes, grid, n);
            const MomentSystem sys = gram(sub, grid, cfg.threads);
            const RieszSpectrum s = riesz_diagnostics(sys, sub, grid);
            mins.push_back(s.min_eig);
            json row = spectrum_json(s);
            row["n_max"] = n;
            rows.push_back(row);
        }
        bool decreasing = true;
        for (std::size_t i = 1; i < mins.size(); ++i) decreasing = decreasing && mins[i] < mins[i - 1];
        report["sweep"] = rows;
        report["min_eig_decreasing"] = decreasing;
        report["min_eig_floor"] = *std::min_element(mins.begin(), mins.end());
    }

    json mode_bounds = json::array();
    for (const auto& m : modes) {
        double peak = 0.0;
        for (double v : m.z) peak = std::max(peak, std::abs(v));
        mode_bounds.push_back({{"n", m.n}, {"max_abs_z", peak}});
    }
    report["modes"] = mode_bounds;

    json conv = json::array();
    if (!std::holds_alternative<TabulatedKernel>(kind)) {
        for (int n : cfg.convergence_modes) {
            const ConvergenceStudy study = convergence_order(n, kind, cfg.horizon);
            conv.push_back({{"n", n}, {"K", study.steps}, {"max_errors", study.max_errors}, {"orders", study.orders}});
        }
    }
    report["convergence"] = conv;
    return report;
}

ConvergenceTable convergence(const RunConfig& cfg) {
    std::vector<int> steps = cfg.sweep_steps.empty() ? std::vector<int>{cfg.steps} : cfg.sweep_steps;
    std::vector<int> cutoffs = cfg.sweep_n_max.empty() ? std::vector<int>{cfg.n_max} : cfg.sweep_n_max;
    std::sort(steps.begin(), steps.end());
    std::sort(cutoffs.begin(), cutoffs.end());

    ConvergenceTable table;
    // Every cell is checked on the same modes so errors are comparable across n_max.
    table.verify_n_max = std::max(cfg.verify_n_max, cutoffs.back());
    for (int n : cutoffs) {
        for (int k : steps) {
            RunConfig cell = cfg;
            cell.steps = k;
            cell.n_max = n;
            cell.verify_n_max = table.verify_n_max;
            ConvergenceCell row;
            row.steps = k;
            row.n_max = n;
            try {
                const SynthesisOutcome o = synthesize(cell);
                row.e_total = o.verification.error.total;
                row.relative = o.target_norm > 0.0 ? row.e_total / o.target_norm : row.e_total;
            } catch (const Error& e) {
                row.error = e.what();
                row.e_total = NAN;
                row.relative = NAN;
            }
            table.cells.push_back(row);
        }
    }
    auto cell_at = [&](std::size_t ni, std::size_t ki) -> const ConvergenceCell& {
        return table.cells[ni * steps.size() + ki];
    };
    for (std::size_t ni = 0; ni < cutoffs.size(); ++ni)
        for (std::size_t ki = 1; ki < steps.size(); ++ki)
            table.monotone_in_steps = table.monotone_in_steps &&
                                      cell_at(ni, ki).e_total <= cell_at(ni, ki - 1).e_total;
    for (std::size_t ki = 0; ki < steps.size(); ++ki)
        for (std::size_t ni = 1; ni < cutoffs.size(); ++ni)
            table.monotone_in_n_max = table.monotone_in_n_max &&
                                      cell_at(ni, ki).e_total <= cell_at(ni - 1, ki).e_total;
    return table;
}

json convergence_report(const RunConfig& cfg, const ConvergenceTable& table) {
    json report = header_json(cfg);
    report["command"] = "convergence";
    report["verify_n_max"] = table.verify_n_max;
    json cells = json::array();
    for (const auto& c : table.cells) {
        json row{{"K", c.steps}, {"n_max", c.n_max}};
        if (c.error.empty()) {
            row["e_total"] = c.e_total;
            row["relative"] = c.relative;
        } else {
            row["error"] = c.error;
        }
        cells.push_back(row);
    }
    report["cells"] = cells;
    report["monotone_in_K"] = table.monotone_in_steps;
    report["monotone_in_n_max"] = table.monotone_in_n_max;
    return report;
}

} // namespace memsteer
