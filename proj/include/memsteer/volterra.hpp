#pragma once
// Mode equation z_n'(t) = -n^2 int_0^t N(t - s) z_n(s) ds, z_n(0) = 1.

#include <vector>

#include "memsteer/kernel.hpp"

namespace memsteer {

struct ModeSolution {
    int n = 0;
    std::vector<double> z;    // z_n(t_k)
    std::vector<double> dz;   // z_n'(t_k), from the right-hand side
    std::vector<double> ddz;  // z_n''(t_k) = -n^2 N(t_k) - n^2 (N * z_n')(t_k)
};

inline constexpr double overflow_guard = 1e12;

// Product-trapezoidal convolution with a trapezoidal (Crank-Nicolson) update
// that is implicit in the newest value. Second order in h.
ModeSolution solve_mode(int n, const KernelSpec& kernel, const TimeGrid& grid);

// Modes 1..n_max in index order; bit-identical to independent solve_mode calls.
std::vector<ModeSolution> solve_all_modes(int n_max, const KernelSpec& kernel, const TimeGrid& grid,
                                          unsigned threads = 1);

// Reference z_n at the grid nodes for kernels with an exact finite-dimensional
// reduction: cos(nt) for M = 0, and an RK4 solve of the equivalent linear ODE
// system on ~fine_steps substeps for exponential kernels.
std::vector<double> reference_mode(int n, const KernelKind& kind, const TimeGrid& grid,
                                   long fine_steps = 1'000'000);

struct ConvergenceStudy {
    std::vector<int> steps;
    std::vector<double> max_errors;
    std::vector<double> orders;  // log2(err_i / err_{i+1})
};

ConvergenceStudy convergence_order(int n, const KernelKind& kind, double horizon,
                                   const std::vector<int>& steps = {512, 1024, 2048});

namespace detail {
// h * (sum_{j<=k} N_{k-j} u_j - N_k u_0 / 2 - N_0 u_k / 2) for every k, using a
// reversed copy of N so each row is a contiguous dot product.
std::vector<double> trapezoid_convolution(const std::vector<double>& n_samples,
                                          const std::vector<double>& u, double step);
std::vector<double> reversed(const std::vector<double>& values);
} // namespace detail

} // namespace memsteer
