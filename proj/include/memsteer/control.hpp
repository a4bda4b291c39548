#pragma once
// Steering control f(t) = int_0^t g(s) ds from a zero-mean density g.
//
// Internally f is the "renamed" control sqrt(2/pi) * (boundary value); the
// value actually imposed at x = 0 is f_phys = f / sqrt(2/pi).

#include <span>
#include <string>
#include <vector>

#include "memsteer/kernel.hpp"

namespace memsteer {

struct ControlSignal {
    std::vector<double> t;
    std::vector<double> g;
    std::vector<double> f;
    std::vector<double> f_phys;

    double mean = 0.0;     // trapezoidal int_0^T g
    double g_l2 = 0.0;     // ||g||_{L^2}
    double f_l2 = 0.0;
    double f_h1 = 0.0;     // (||f||^2 + ||g||^2)^{1/2}
    double end_value = 0.0;
    bool hard_zero_end = false;
};

double physical_scale();  // sqrt(2/pi)

// Trapezoidal cumulative integral. Throws mean-zero-violation when
// |int g| > tol_T * ||g|| * T.
ControlSignal integrate_density(std::span<const double> g, const TimeGrid& grid, double tol_T = 1e-6);

// Subtracts (f_K / T) t so that f(T) = 0 exactly; g shifts by the constant
// -f_K / T. Moves every moment by O(f_K).
void apply_hard_zero_end(ControlSignal& signal);

// Rebuilds norms and f_phys after f and g were edited by hand.
void refresh_norms(ControlSignal& signal);

struct CascadeReport {
    bool mean_zero = false;       // g in L_0(0, T)
    bool end_zero = false;        // |f(T)| <= tol * max|f|
    double mean = 0.0;
    double end_ratio = 0.0;       // |f(T)| / max|f|
    double max_residual = 0.0;    // max interior |(f_{k+1} - f_{k-1}) / 2h - g_k|
    bool pass = false;
    std::string interpretation;
};

CascadeReport cascade_check(const ControlSignal& signal, double tol = 1e-6);

// Trapezoidal L^2(0, T) norm of samples on a uniform grid.
double l2_norm(std::span<const double> values, double step);

} // namespace memsteer
