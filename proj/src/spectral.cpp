#include "memsteer/spectral.hpp"

#include <cmath>
#include <string>

#include "memsteer/errors.hpp"

namespace memsteer {

namespace {

const double basis_scale = std::sqrt(2.0 / pi);

// Projection of uniform samples u_j = u(j pi / q) onto Phi_1..Phi_count.
std::vector<double> project(const std::vector<double>& samples, int count) {
    const int q = static_cast<int>(samples.size()) - 1;
    const double dx = pi / q;
    std::vector<double> out(static_cast<std::size_t>(count), 0.0);
    for (int n = 1; n <= count; ++n) {
        double acc = 0.5 * (samples.front() * basis(n, 0.0) + samples.back() * basis(n, pi));
        for (int j = 1; j < q; ++j) acc += samples[j] * basis(n, j * dx);
        out[n - 1] = acc * dx;
    }
    return out;
}

std::vector<double> sample(const SpatialFunction& fn, int q) {
    std::vector<double> values(static_cast<std::size_t>(q) + 1);
    for (int j = 0; j <= q; ++j) values[j] = fn(j == q ? pi : j * (pi / q));
    return values;
}

Target from_samples(const std::vector<double>& xi, const std::vector<double>& eta, int n_max,
                    Provenance provenance) {
    if (n_max < 1) throw Error(Errc::invalid_argument, "spectral", "n_max must be at least 1");
    const int q = static_cast<int>(xi.size()) - 1;
    if (q < 8 * n_max)
        throw Error(Errc::aliasing, "spectral",
                    "quadrature resolution " + std::to_string(q) + " < 8 * n_max = " + std::to_string(8 * n_max));
    if (eta.size() != xi.size())
        throw Error(Errc::invalid_argument, "spectral", "xi and eta sample counts differ");
    if (std::abs(xi.front()) > 1e-8 || std::abs(xi.back()) > 1e-8)
        throw Error(Errc::not_in_h10, "spectral", "xi must vanish at x = 0 and x = pi");

    // Coefficients beyond n_max (up to what the quadrature resolves) estimate the tail.
    const int extended = std::max(n_max, q / 8);
    const std::vector<double> a = project(xi, extended);
    const std::vector<double> e = project(eta, extended);
    Target target;
    target.n_max = n_max;
    target.provenance = provenance;
    target.xi.resize(n_max);
    target.eta.resize(n_max);
    for (int n = 1; n <= extended; ++n) {
        const double xi_n = n * a[n - 1];
        if (n <= n_max) {
            target.xi[n - 1] = xi_n;
            target.eta[n - 1] = e[n - 1];
        } else {
            target.tail_estimate += xi_n * xi_n + e[n - 1] * e[n - 1];
        }
    }
    return target;
}

} // namespace

double basis(int n, double x) { return basis_scale * std::sin(n * x); }

Target Target::zero(int n_max) {
    Target t;
    t.n_max = n_max;
    t.xi.assign(static_cast<std::size_t>(n_max), 0.0);
    t.eta.assign(static_cast<std::size_t>(n_max), 0.0);
    return t;
}

double Target::norm() const {
    double acc = 0.0;
    for (int i = 0; i < n_max; ++i) acc += xi[i] * xi[i] + eta[i] * eta[i];
    return std::sqrt(acc);
}

Target coefficients_from_function(const SpatialFunction& xi, const SpatialFunction& eta, int n_max,
                                  int quadrature) {
    if (quadrature < 8 * n_max)
        throw Error(Errc::aliasing, "spectral",
                    "quadrature resolution " + std::to_string(quadrature) + " < 8 * n_max = " +
                        std::to_string(8 * n_max));
    return from_samples(sample(xi, quadrature), sample(eta, quadrature), n_max, Provenance::analytic);
}

Target coefficients_from_samples(const std::vector<double>& xi, const std::vector<double>& eta, int n_max) {
    return from_samples(xi, eta, n_max, Provenance::sampled);
}

StateError state_error(const StateSnapshot& state, const Target& target) {
    if (state.n_max != target.n_max || state.a.size() != target.xi.size() || state.b.size() != target.eta.size())
        throw Error(Errc::invalid_argument, "spectral", "state and target cutoffs differ");
    StateError err;
    double h1 = 0.0;
    double l2 = 0.0;
    for (int i = 0; i < state.n_max; ++i) {
        const double dp = (i + 1) * state.a[i] - target.xi[i];
        const double dv = state.b[i] - target.eta[i];
        h1 += dp * dp;
        l2 += dv * dv;
    }
    err.h1 = std::sqrt(h1);
    err.l2 = std::sqrt(l2);
    err.total = std::sqrt(h1 + l2);
    return err;
}

std::vector<double> reconstruct(const StateSnapshot& state, int resolution) {
    if (resolution < 2) throw Error(Errc::invalid_argument, "spectral", "reconstruction needs at least 2 points");
    std::vector<double> values(static_cast<std::size_t>(resolution), 0.0);
    const double dx = pi / (resolution - 1);
    for (int j = 0; j < resolution; ++j) {
        const double x = j * dx;
        double acc = 0.0;
        for (int i = 0; i < state.n_max; ++i) acc += state.a[i] * basis(i + 1, x);
        values[j] = acc;
    }
    return values;
}

} // namespace memsteer
