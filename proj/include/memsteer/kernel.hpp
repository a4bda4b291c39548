#pragma once
// Memory kernel M, relaxation function N(t) = 1 + int_0^t M, and the uniform
// time grid every other module samples on.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <variant>
#include <vector>

namespace memsteer {

inline constexpr double two_pi = 6.283185307179586476925286766559;

struct TimeGrid {
    double horizon = 0.0;  // T
    int steps = 0;         // K
    double step = 0.0;     // h = T / K
    std::vector<double> nodes;

    std::size_t size() const noexcept { return nodes.size(); }
    double operator[](std::size_t k) const { return nodes[k]; }
    // Controllability needs T > 2 pi; shorter horizons are allowed for diagnostics.
    bool exceeds_critical_horizon() const noexcept { return horizon > two_pi; }
};

TimeGrid make_grid(double horizon, int steps);

struct ZeroKernel {};

// M(t) = amplitude * exp(-rate * t)
struct ExponentialKernel {
    double amplitude = 0.0;
    double rate = 1.0;
};

// Samples of M and (optionally) M' on the nodes of a grid.
struct TabulatedKernel {
    std::vector<double> times;
    std::vector<double> m;
    std::vector<double> m_prime;
};

using KernelKind = std::variant<ZeroKernel, ExponentialKernel, TabulatedKernel>;

struct KernelSpec {
    KernelKind kind;
    std::vector<double> m;  // M(t_k)
    std::vector<double> n;  // N(t_k), n[0] == 1
    double gamma = 0.0;     // N'(0) = M(0)
};

KernelSpec build_kernel(const KernelKind& kind, const TimeGrid& grid);

// Cumulative trapezoidal N from M samples; used for tabulated kernels.
std::vector<double> relaxation_by_trapezoid(const std::vector<double>& m, double step);

// Reads a `t,M[,Mprime]` CSV (header optional, '#' comments skipped).
TabulatedKernel load_kernel_csv(const std::filesystem::path& path);

const char* kernel_kind_name(const KernelKind& kind) noexcept;

} // namespace memsteer
