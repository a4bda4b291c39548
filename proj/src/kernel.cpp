#include "memsteer/kernel.hpp"

#include <cmath>
#include <string>

#include "memsteer/errors.hpp"
#include "memsteer/io.hpp"

namespace memsteer {

TimeGrid make_grid(double horizon, int steps) {
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw Error(Errc::invalid_argument, "kernel", "grid horizon T must be positive and finite");
    if (steps < 2)
        throw Error(Errc::invalid_argument, "kernel", "grid needs at least K = 2 steps");
    TimeGrid grid;
    grid.horizon = horizon;
    grid.steps = steps;
    grid.step = horizon / steps;
    grid.nodes.resize(static_cast<std::size_t>(steps) + 1);
    for (int k = 0; k < steps; ++k) grid.nodes[k] = k * grid.step;
    grid.nodes.back() = horizon;
    return grid;
}

std::vector<double> relaxation_by_trapezoid(const std::vector<double>& m, double step) {
    std::vector<double> n(m.size());
    if (m.empty()) return n;
    n[0] = 1.0;
    for (std::size_t k = 1; k < m.size(); ++k) n[k] = n[k - 1] + 0.5 * step * (m[k - 1] + m[k]);
    return n;
}

namespace {

struct Builder {
    const TimeGrid& grid;
    KernelSpec& out;

    void operator()(const ZeroKernel&) const {
        out.m.assign(grid.size(), 0.0);
        out.n.assign(grid.size(), 1.0);
    }

    void operator()(const ExponentialKernel& e) const {
        if (!(e.rate > 0.0))
            throw Error(Errc::invalid_argument, "kernel", "exponential kernel needs rate beta > 0");
        out.m.resize(grid.size());
        out.n.resize(grid.size());
        for (std::size_t k = 0; k < grid.size(); ++k) {
            const double decay = std::exp(-e.rate * grid[k]);
            out.m[k] = e.amplitude * decay;
            // -expm1 keeps 1 - e^{-bt} accurate for small t
            out.n[k] = 1.0 + (e.amplitude / e.rate) * -std::expm1(-e.rate * grid[k]);
        }
        out.n[0] = 1.0;
    }

    void operator()(const TabulatedKernel& t) const {
        const double tol = 1e-9 * grid.horizon;
        if (t.times.size() != grid.size() || t.m.size() != grid.size())
            throw Error(Errc::grid_mismatch, "kernel",
                        "tabulated kernel has " + std::to_string(t.m.size()) + " samples, grid has " +
                            std::to_string(grid.size()) + " nodes");
        if (!t.m_prime.empty() && t.m_prime.size() != grid.size())
            throw Error(Errc::grid_mismatch, "kernel", "M' samples do not match the grid");
        for (std::size_t k = 0; k < grid.size(); ++k)
            if (std::abs(t.times[k] - grid[k]) > tol)
                throw Error(Errc::grid_mismatch, "kernel",
                            "tabulated time " + std::to_string(t.times[k]) + " does not match node t_" +
                                std::to_string(k) + " = " + std::to_string(grid[k]));
        out.m = t.m;
        out.n = relaxation_by_trapezoid(t.m, grid.step);
    }
};

} // namespace

KernelSpec build_kernel(const KernelKind& kind, const TimeGrid& grid) {
    KernelSpec spec;
    spec.kind = kind;
    std::visit(Builder{grid, spec}, kind);
    for (std::size_t k = 0; k < spec.m.size(); ++k)
        if (!std::isfinite(spec.m[k]) || !std::isfinite(spec.n[k]))
            throw Error(Errc::invalid_argument, "kernel", "kernel samples must be finite");
    spec.gamma = spec.m[0];
    return spec;
}

TabulatedKernel load_kernel_csv(const std::filesystem::path& path) {
    const io::CsvTable table = io::read_csv(path);
    if (table.rows.empty()) throw Error(Errc::invalid_config, "kernel", "kernel file has no samples");
    const std::size_t columns = table.rows.front().size();
    if (columns < 2 || columns > 3)
        throw Error(Errc::invalid_config, "kernel", "kernel file must have columns t,M[,Mprime]");
    TabulatedKernel kernel;
    for (const auto& row : table.rows) {
        kernel.times.push_back(row[0]);
        kernel.m.push_back(row[1]);
        if (columns == 3) kernel.m_prime.push_back(row[2]);
    }
    return kernel;
}

const char* kernel_kind_name(const KernelKind& kind) noexcept {
    switch (kind.index()) {
    case 0: return "zero";
    case 1: return "exponential";
    default: return "tabulated";
    }
}

} // namespace memsteer
