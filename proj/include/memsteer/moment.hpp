#pragma once
// Moment problem  int_0^T Z_n(s) g(T - s) ds = c_n,  |n| <= n_max, with
// Z_0 = 1, Z_n = z_n + (i/n) z_n' for n > 0 and Z_{-n} = conj(Z_n).
// The minimum-norm density lies in the span of conj(Z_n(T - .)) and is found
// from the Gram system G beta = c.

#include <complex>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "memsteer/kernel.hpp"
#include "memsteer/spectral.hpp"
#include "memsteer/volterra.hpp"

namespace memsteer {

struct RieszElement {
    int index = 0;
    std::vector<double> re;
    std::vector<double> im;
};

struct RieszFamily {
    int n_max = 0;
    std::vector<RieszElement> elements;  // indices -n_max..n_max in order

    std::size_t size() const noexcept { return elements.size(); }
    const RieszElement& at(int n) const { return elements.at(static_cast<std::size_t>(n + n_max)); }
};

// Uses modes 1..n_max (n_max = 0 means all supplied modes).
RieszFamily build_family(std::span<const ModeSolution> modes, const TimeGrid& grid, int n_max = 0);

// Trapezoidal int_0^T a(s) conj(b(s)) ds.
std::complex<double> inner_product(const RieszElement& a, const RieszElement& b, double step);

struct MomentSystem {
    int n_max = 0;
    Eigen::MatrixXcd gram;    // G_{nm} = int Z_n conj(Z_m), rows/cols ordered -n_max..n_max
    Eigen::VectorXcd rhs;     // c
    Eigen::VectorXcd coeffs;  // beta after solve_min_norm

    std::size_t position(int n) const { return static_cast<std::size_t>(n + n_max); }
};

MomentSystem gram(const RieszFamily& family, const TimeGrid& grid, unsigned threads = 1);

// How target coefficients map onto c.
//  steering:   c_n = -(xi_n + i eta_n). This is what the rest state reaches
//              when f = int g and g has zero mean, for Z_n = z_n + (i/n) z_n'.
//  as_written: c_n = xi_n - i eta_n, the literal textbook right-hand side
//              (same moment equations up to g -> -g and n -> -n).
// In both cases c_{-n} = conj(c_n) and c_0 = 0.
enum class RhsConvention { steering, as_written };

Eigen::VectorXcd rhs_from_target(const Target& target, RhsConvention convention = RhsConvention::steering);

struct SolveOptions {
    double ridge = 0.0;
    // G is treated as numerically singular when lambda_min <= singular_ratio * lambda_max.
    double singular_ratio = 1e-13;
    double residual_tol = 1e-8;
    double moment_tol = 1e-6;
};

struct Density {
    std::vector<double> re;  // g(t_k)
    std::vector<double> im;
    double residual = 0.0;            // ||G beta - c|| / max(||c||, tiny)
    double max_moment_error = 0.0;    // max_n |moment_n(g) - c_n| / (1 + |c_n|)
    double imag_ratio = 0.0;          // max|Im g| / max|Re g|
    double min_eig = 0.0;
    double max_eig = 0.0;
    double ridge = 0.0;
    std::vector<std::string> warnings;
};

Density solve_min_norm(MomentSystem& system, const RieszFamily& family, const TimeGrid& grid,
                       const SolveOptions& options = {});

// Direct trapezoidal moments int_0^T Z_n(s) g(T - s) ds of a complex density.
Eigen::VectorXcd moments_of(std::span<const double> g_re, std::span<const double> g_im,
                            const RieszFamily& family, const TimeGrid& grid);

struct RieszSpectrum {
    double min_eig = 0.0;
    double max_eig = 0.0;
    double cond = 0.0;
    std::vector<double> eigenvalues;   // ascending
    std::vector<double> frame_bounds;  // eigenvalues / T
    double direct_min_eig = 0.0;       // from a Hermitian eigensolve of G itself
    double direct_max_eig = 0.0;
};

// Eigenvalues of G as squared singular values of A with A_{kp} = sqrt(w_k) conj(Z_p(t_k)),
// so G = A^H A. This resolves eigenvalues far below eps * ||G||, which a
// direct eigensolve of G cannot.
RieszSpectrum riesz_diagnostics(const MomentSystem& system, const RieszFamily& family, const TimeGrid& grid);

// Ascending eigenvalues of G from a Hermitian eigensolve.
std::vector<double> gram_eigenvalues(const MomentSystem& system);

// Partial sums of ||Z_n - e^{gamma t} e^{+-int}||^2 over 1 <= |n| <= N.
struct ClosenessPairing {
    std::vector<double> terms;         // entry N-1: ||Z_N - e_N||^2 (equal for -N by conjugation)
    std::vector<double> partial_sums;  // entry N-1: S_N, both signs of n included
    // (S_N - S_{N/2}) over the family energy at those indices
    double normalized_tail = 0.0;
    bool saturates = false;
};

struct Closeness {
    double gamma = 0.0;
    ClosenessPairing literal;  // Z_n against e^{gamma t} e^{+int}
    ClosenessPairing swapped;  // Z_n against e^{gamma t} e^{-int}
};

inline constexpr double saturation_threshold = 1e-2;

Closeness quadratic_closeness(const RieszFamily& family, const KernelSpec& kernel, const TimeGrid& grid);

} // namespace memsteer
