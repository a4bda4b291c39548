#include "memsteer/control.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "memsteer/errors.hpp"
#include "memsteer/spectral.hpp"

namespace memsteer {

double physical_scale() { return std::sqrt(2.0 / pi); }

double l2_norm(std::span<const double> values, double step) {
    if (values.empty()) return 0.0;
    double acc = 0.0;
    for (double v : values) acc += v * v;
    acc -= 0.5 * (values.front() * values.front() + values.back() * values.back());
    return std::sqrt(std::max(0.0, acc * step));
}

namespace {

double max_abs(std::span<const double> values) {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

} // namespace

void refresh_norms(ControlSignal& signal) {
    const double h = signal.t.size() > 1 ? signal.t[1] - signal.t[0] : 0.0;
    const double scale = physical_scale();
    signal.f_phys.resize(signal.f.size());
    for (std::size_t k = 0; k < signal.f.size(); ++k) signal.f_phys[k] = signal.f[k] / scale;
    double mean = 0.0;
    for (std::size_t k = 1; k < signal.g.size(); ++k) mean += 0.5 * h * (signal.g[k - 1] + signal.g[k]);
    signal.mean = mean;
    signal.g_l2 = l2_norm(signal.g, h);
    signal.f_l2 = l2_norm(signal.f, h);
    signal.f_h1 = std::sqrt(signal.f_l2 * signal.f_l2 + signal.g_l2 * signal.g_l2);
    signal.end_value = signal.f.empty() ? 0.0 : signal.f.back();
}

ControlSignal integrate_density(std::span<const double> g, const TimeGrid& grid, double tol_T) {
    if (g.size() != grid.size())
        throw Error(Errc::grid_mismatch, "control", "density has " + std::to_string(g.size()) +
                                                        " samples, grid has " + std::to_string(grid.size()));
    ControlSignal signal;
    signal.t = grid.nodes;
    signal.g.assign(g.begin(), g.end());
    signal.f.assign(grid.size(), 0.0);
    for (std::size_t k = 1; k < grid.size(); ++k)
        signal.f[k] = signal.f[k - 1] + 0.5 * grid.step * (signal.g[k - 1] + signal.g[k]);
    refresh_norms(signal);
    if (std::abs(signal.mean) > tol_T * signal.g_l2 * grid.horizon) {
        std::ostringstream msg;
        msg << "density has nonzero mean " << signal.mean << " (||g|| = " << signal.g_l2
            << "); the n = 0 moment row was dropped or the solve failed";
        throw Error(Errc::mean_zero_violation, "control", msg.str());
    }
    return signal;
}

void apply_hard_zero_end(ControlSignal& signal) {
    const double horizon = signal.t.back();
    const double slope = signal.f.back() / horizon;
    for (std::size_t k = 0; k < signal.f.size(); ++k) {
        signal.f[k] -= slope * signal.t[k];
        signal.g[k] -= slope;
    }
    signal.f.back() = 0.0;
    signal.hard_zero_end = true;
    refresh_norms(signal);
}

CascadeReport cascade_check(const ControlSignal& signal, double tol) {
    CascadeReport report;
    const double h = signal.t.size() > 1 ? signal.t[1] - signal.t[0] : 0.0;
    const double horizon = signal.t.empty() ? 0.0 : signal.t.back();
    double mean = 0.0;
    for (std::size_t k = 1; k < signal.g.size(); ++k) mean += 0.5 * h * (signal.g[k - 1] + signal.g[k]);
    report.mean = mean;
    report.mean_zero = std::abs(mean) <= tol * l2_norm(signal.g, h) * horizon;

    const double f_max = max_abs(signal.f);
    report.end_ratio = f_max > 0.0 ? std::abs(signal.f.back()) / f_max : 0.0;
    report.end_zero = report.end_ratio <= tol;

    for (std::size_t k = 1; k + 1 < signal.f.size(); ++k)
        report.max_residual =
            std::max(report.max_residual, std::abs((signal.f[k + 1] - signal.f[k - 1]) / (2.0 * h) - signal.g[k]));

    report.pass = report.mean_zero && report.end_zero && signal.f.front() == 0.0;
    std::ostringstream text;
    text << "integrator cascade y' = g, w(0,t) = y(t): g " << (report.mean_zero ? "is" : "is not")
         << " in L_0(0,T) (mean " << mean << "), y(T)/max|y| = " << report.end_ratio
         << ", max |y' - g| = " << report.max_residual;
    report.interpretation = text.str();
    return report;
}

} // namespace memsteer
