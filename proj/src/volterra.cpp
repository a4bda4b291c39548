#include "memsteer/volterra.hpp"

#include <cmath>
#include <string>

#include "memsteer/errors.hpp"
#include "memsteer/parallel.hpp"
#include "memsteer/simd/kernels.hpp"

namespace memsteer {

namespace detail {

std::vector<double> reversed(const std::vector<double>& values) {
    return {values.rbegin(), values.rend()};
}

std::vector<double> trapezoid_convolution(const std::vector<double>& n_samples,
                                          const std::vector<double>& u, double step) {
    const auto& dot = simd::active().dot;
    const std::size_t last = n_samples.size() - 1;
    const std::vector<double> n_rev = reversed(n_samples);
    std::vector<double> out(u.size());
    for (std::size_t k = 0; k < u.size(); ++k) {
        // sum_{j=0}^{k} N_{k-j} u_j with N_{k-j} = n_rev[last - k + j]
        const double full = dot(n_rev.data() + (last - k), u.data(), k + 1);
        out[k] = step * (full - 0.5 * n_samples[k] * u[0] - 0.5 * n_samples[0] * u[k]);
    }
    return out;
}

} // namespace detail

namespace {

[[noreturn]] void report_instability(int n, double step, std::size_t k) {
    throw Error(Errc::instability, "volterra",
                "mode n=" + std::to_string(n) + " exceeded |z| > 1e12 at step " + std::to_string(k) +
                    " with h=" + std::to_string(step) + "; try a smaller step (larger K)");
}

} // namespace

ModeSolution solve_mode(int n, const KernelSpec& kernel, const TimeGrid& grid) {
    if (n < 1) throw Error(Errc::invalid_argument, "volterra", "mode index must be positive");
    if (kernel.n.size() != grid.size())
        throw Error(Errc::grid_mismatch, "volterra", "kernel was built on a different grid");

    const auto& dot = simd::active().dot;
    const std::size_t size = grid.size();
    const std::size_t last = size - 1;
    const double h = grid.step;
    const double n2 = static_cast<double>(n) * n;
    const std::vector<double>& nk = kernel.n;
    const std::vector<double> n_rev = detail::reversed(nk);
    const double implicit = 1.0 + 0.25 * n2 * h * h * nk[0];

    ModeSolution mode;
    mode.n = n;
    mode.z.assign(size, 0.0);
    mode.dz.assign(size, 0.0);
    mode.ddz.assign(size, 0.0);
    mode.z[0] = 1.0;

    for (std::size_t k = 1; k < size; ++k) {
        // Convolution without the unknown z_k term.
        const double known = h * (dot(n_rev.data() + (last - k), mode.z.data(), k) - 0.5 * nk[k] * mode.z[0]);
        const double zk = (mode.z[k - 1] + 0.5 * h * mode.dz[k - 1] - 0.5 * h * n2 * known) / implicit;
        mode.z[k] = zk;
        mode.dz[k] = -n2 * (known + 0.5 * h * nk[0] * zk);
        if (!(std::abs(zk) <= overflow_guard)) report_instability(n, h, k);
    }

    const std::vector<double> conv_dz = detail::trapezoid_convolution(nk, mode.dz, h);
    for (std::size_t k = 0; k < size; ++k) mode.ddz[k] = -n2 * nk[k] - n2 * conv_dz[k];
    mode.dz[0] = 0.0;
    mode.ddz[0] = -n2 * nk[0];
    return mode;
}

std::vector<ModeSolution> solve_all_modes(int n_max, const KernelSpec& kernel, const TimeGrid& grid,
                                          unsigned threads) {
    if (n_max < 1) throw Error(Errc::invalid_argument, "volterra", "n_max must be at least 1");
    std::vector<ModeSolution> modes(static_cast<std::size_t>(n_max));
    parallel_for(modes.size(), threads, [&](std::size_t i) {
        modes[i] = solve_mode(static_cast<int>(i) + 1, kernel, grid);
    });
    return modes;
}

std::vector<double> reference_mode(int n, const KernelKind& kind, const TimeGrid& grid, long fine_steps) {
    std::vector<double> z(grid.size());
    if (std::holds_alternative<ZeroKernel>(kind)) {
        for (std::size_t k = 0; k < grid.size(); ++k) z[k] = std::cos(n * grid[k]);
        return z;
    }
    const auto* exp_kernel = std::get_if<ExponentialKernel>(&kind);
    if (exp_kernel == nullptr)
        throw Error(Errc::invalid_argument, "volterra", "no reference solution for tabulated kernels");

    // N(t) = 1 + r (1 - e^{-b t}), r = a / b. With Q = int z and
    // y = int e^{-b(t-s)} z(s) ds: z' = -n^2 ((1 + r) Q - r y), Q' = z, y' = z - b y.
    const double b = exp_kernel->rate;
    const double r = exp_kernel->amplitude / b;
    const double n2 = static_cast<double>(n) * n;
    struct State { double z, q, y; };
    auto rhs = [&](const State& s) {
        return State{-n2 * ((1.0 + r) * s.q - r * s.y), s.z, s.z - b * s.y};
    };
    auto axpy = [](const State& s, double a, const State& d) {
        return State{s.z + a * d.z, s.q + a * d.q, s.y + a * d.y};
    };

    const long sub = std::max<long>(1, (fine_steps + grid.steps - 1) / grid.steps);
    const double dt = grid.step / static_cast<double>(sub);
    State s{1.0, 0.0, 0.0};
    z[0] = 1.0;
    for (std::size_t k = 1; k < grid.size(); ++k) {
        for (long i = 0; i < sub; ++i) {
            const State k1 = rhs(s);
            const State k2 = rhs(axpy(s, 0.5 * dt, k1));
            const State k3 = rhs(axpy(s, 0.5 * dt, k2));
            const State k4 = rhs(axpy(s, dt, k3));
            s.z += dt / 6.0 * (k1.z + 2.0 * k2.z + 2.0 * k3.z + k4.z);
            s.q += dt / 6.0 * (k1.q + 2.0 * k2.q + 2.0 * k3.q + k4.q);
            s.y += dt / 6.0 * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y);
        }
        z[k] = s.z;
    }
    return z;
}

ConvergenceStudy convergence_order(int n, const KernelKind& kind, double horizon, const std::vector<int>& steps) {
    ConvergenceStudy study;
    study.steps = steps;
    for (int k : steps) {
        const TimeGrid grid = make_grid(horizon, k);
        const KernelSpec kernel = build_kernel(kind, grid);
        const ModeSolution mode = solve_mode(n, kernel, grid);
        const std::vector<double> ref = reference_mode(n, kind, grid);
        double err = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) err = std::max(err, std::abs(mode.z[i] - ref[i]));
        study.max_errors.push_back(err);
    }
    for (std::size_t i = 0; i + 1 < study.max_errors.size(); ++i)
        study.orders.push_back(std::log2(study.max_errors[i] / study.max_errors[i + 1]));
    return study;
}

} // namespace memsteer
