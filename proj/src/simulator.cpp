#include "memsteer/simulator.hpp"

#include <cmath>
#include <string>

#include "memsteer/errors.hpp"
#include "memsteer/parallel.hpp"
#include "memsteer/simd/kernels.hpp"

namespace memsteer {

namespace {

ModeState step_one(int n, const std::vector<double>& n_rev, const std::vector<double>& nk,
                   const std::vector<double>& forcing, const TimeGrid& grid) {
    const auto& dot = simd::active().dot;
    const std::size_t size = grid.size();
    const std::size_t last = size - 1;
    const double h = grid.step;
    const double n2 = static_cast<double>(n) * n;
    const double implicit = 1.0 + 0.25 * n2 * h * h * nk[0];

    ModeState state;
    state.n = n;
    state.w.assign(size, 0.0);
    state.dw.assign(size, 0.0);
    state.dw[0] = n * forcing[0];
    for (std::size_t k = 1; k < size; ++k) {
        const double known = h * (dot(n_rev.data() + (last - k), state.w.data(), k) - 0.5 * nk[k] * state.w[0]);
        const double drive = n * forcing[k];
        const double wk =
            (state.w[k - 1] + 0.5 * h * state.dw[k - 1] + 0.5 * h * (drive - n2 * known)) / implicit;
        state.w[k] = wk;
        state.dw[k] = drive - n2 * (known + 0.5 * h * nk[0] * wk);
        if (!(std::abs(wk) <= overflow_guard))
            throw Error(Errc::instability, "simulator",
                        "mode n=" + std::to_string(n) + " diverged at step " + std::to_string(k) +
                            " with h=" + std::to_string(h) + "; try a smaller step (larger K)");
    }
    return state;
}

// Trapezoidal int_0^T a(T - s) b(s) ds = h * (sum_j a_{K-j} b_j - ends / 2)
double trapezoid_reverse(const std::vector<double>& a, const std::vector<double>& b, double h) {
    const std::vector<double> a_rev = detail::reversed(a);
    const double full = simd::active().dot(a_rev.data(), b.data(), b.size());
    return h * (full - 0.5 * (a.back() * b.front() + a.front() * b.back()));
}

} // namespace

SimulationResult step_modes(const ControlSignal& control, const KernelSpec& kernel, const TimeGrid& grid,
                            int n_max, bool keep_trajectories, unsigned threads) {
    if (n_max < 1) throw Error(Errc::invalid_argument, "simulator", "n_max must be at least 1");
    if (control.f.size() != grid.size() || kernel.n.size() != grid.size())
        throw Error(Errc::grid_mismatch, "simulator", "control, kernel and grid sizes differ");

    const std::vector<double> forcing = detail::trapezoid_convolution(kernel.n, control.f, grid.step);
    const std::vector<double> n_rev = detail::reversed(kernel.n);

    std::vector<ModeState> states(static_cast<std::size_t>(n_max));
    parallel_for(states.size(), threads, [&](std::size_t i) {
        states[i] = step_one(static_cast<int>(i) + 1, n_rev, kernel.n, forcing, grid);
    });

    SimulationResult result;
    result.method = SimulationMethod::stepping;
    result.final_state.n_max = n_max;
    result.final_state.time = grid.horizon;
    for (const ModeState& s : states) {
        result.final_state.a.push_back(s.w.back());
        result.final_state.b.push_back(s.dw.back());
    }
    if (keep_trajectories) result.trajectories = std::move(states);
    return result;
}

SimulationResult formula_modes(const ControlSignal& control, std::span<const ModeSolution> modes,
                               const TimeGrid& grid, VelocityForm velocity) {
    if (control.g.size() != grid.size() || control.f.size() != grid.size())
        throw Error(Errc::invalid_argument, "simulator", "formula method needs both f and g on the grid");
    SimulationResult result;
    result.method = SimulationMethod::formula;
    result.final_state.n_max = static_cast<int>(modes.size());
    result.final_state.time = grid.horizon;
    for (const ModeSolution& mode : modes) {
        if (mode.dz.size() != grid.size() || mode.ddz.size() != grid.size())
            throw Error(Errc::grid_mismatch, "simulator", "mode solution is on another grid");
        const double inv_n = 1.0 / mode.n;
        result.final_state.a.push_back(-inv_n * trapezoid_reverse(mode.dz, control.f, grid.step));
        const double vel = velocity == VelocityForm::derivative
                               ? trapezoid_reverse(mode.ddz, control.f, grid.step)
                               : trapezoid_reverse(control.g, mode.dz, grid.step);
        result.final_state.b.push_back(-inv_n * vel);
    }
    return result;
}

VerificationReport verify(const Target& target, const SimulationResult& result) {
    VerificationReport report;
    report.error = state_error(result.final_state, target);
    for (int i = 0; i < target.n_max; ++i)
        report.residuals.push_back({i + 1, (i + 1) * result.final_state.a[i] - target.xi[i],
                                    result.final_state.b[i] - target.eta[i]});
    return report;
}

double relative_discrepancy(const StateSnapshot& a, const StateSnapshot& reference) {
    if (a.n_max != reference.n_max)
        throw Error(Errc::invalid_argument, "simulator", "snapshots have different cutoffs");
    double diff = 0.0;
    double norm = 0.0;
    for (int i = 0; i < a.n_max; ++i) {
        const double n = i + 1;
        diff += n * n * (a.a[i] - reference.a[i]) * (a.a[i] - reference.a[i]) +
                (a.b[i] - reference.b[i]) * (a.b[i] - reference.b[i]);
        norm += n * n * reference.a[i] * reference.a[i] + reference.b[i] * reference.b[i];
    }
    return norm > 0.0 ? std::sqrt(diff / norm) : std::sqrt(diff);
}

void formula_sign_self_test() {
    const TimeGrid grid = make_grid(two_pi, 1024);
    const KernelSpec kernel = build_kernel(ZeroKernel{}, grid);
    std::vector<double> g(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) g[k] = std::cos(grid[k]) / pi;
    const ControlSignal control = integrate_density(g, grid);
    const std::vector<ModeSolution> modes = solve_all_modes(4, kernel, grid);
    const SimulationResult stepped = step_modes(control, kernel, grid, 4);
    const SimulationResult formula = formula_modes(control, modes, grid);
    const double gap = relative_discrepancy(formula.final_state, stepped.final_state);
    if (!(gap <= 1e-4))
        throw Error(Errc::internal_consistency, "simulator",
                    "formula and stepping disagree on the zero-kernel self-test (relative gap " +
                        std::to_string(gap) + ")");
}

} // namespace memsteer
