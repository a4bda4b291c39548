#pragma once
// Sine basis Phi_n(x) = sqrt(2/pi) sin(nx) on (0, pi), target coefficients and
// the H^1_0 x L^2 error norms, all computed in coefficient space.

#include <functional>
#include <vector>

namespace memsteer {

inline constexpr double pi = 3.14159265358979323846264338327950288;

double basis(int n, double x);

enum class Provenance { analytic, sampled };

// xi = sum (xi_n / n) Phi_n and eta = sum eta_n Phi_n. Entry i holds n = i + 1.
struct Target {
    int n_max = 0;
    std::vector<double> xi;
    std::vector<double> eta;
    Provenance provenance = Provenance::analytic;
    // Estimate of sum_{n > n_max} (xi_n^2 + eta_n^2); irreducible truncation error.
    double tail_estimate = 0.0;

    static Target zero(int n_max);
    // sqrt(sum xi_n^2 + eta_n^2) = ||(xi, eta)|| in H^1_0 x L^2 up to truncation.
    double norm() const;
};

// Coefficients of w(., t) and w'(., t) in the basis Phi_n.
struct StateSnapshot {
    int n_max = 0;
    std::vector<double> a;
    std::vector<double> b;
    double time = 0.0;
};

using SpatialFunction = std::function<double(double)>;

// Projects (xi, eta) onto Phi_1..Phi_{n_max} with the composite trapezoid rule
// on `quadrature` intervals. Requires xi(0) = xi(pi) = 0 (to 1e-8) and
// quadrature >= 8 n_max.
Target coefficients_from_function(const SpatialFunction& xi, const SpatialFunction& eta, int n_max,
                                  int quadrature);

// Same projection for samples on a uniform grid of (0, pi) including both ends.
Target coefficients_from_samples(const std::vector<double>& xi, const std::vector<double>& eta, int n_max);

struct StateError {
    double h1 = 0.0;
    double l2 = 0.0;
    double total = 0.0;
};

StateError state_error(const StateSnapshot& state, const Target& target);

// sum a_n Phi_n(x_j) on x_j = j pi / (resolution - 1).
std::vector<double> reconstruct(const StateSnapshot& state, int resolution);

} // namespace memsteer
