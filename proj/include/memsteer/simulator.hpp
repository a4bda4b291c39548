#pragma once
// Independent verification of a control: the modal coefficients of the state
// obey  w_n' = -n^2 (N * w_n) + n (N * f),  w_n(0) = 0,  with f the renamed control.

#include <span>
#include <vector>

#include "memsteer/control.hpp"
#include "memsteer/kernel.hpp"
#include "memsteer/spectral.hpp"
#include "memsteer/volterra.hpp"

namespace memsteer {

struct ModeState {
    int n = 0;
    std::vector<double> w;
    std::vector<double> dw;
};

enum class SimulationMethod { stepping, formula };

struct SimulationResult {
    SimulationMethod method = SimulationMethod::stepping;
    StateSnapshot final_state;
    std::vector<ModeState> trajectories;  // filled by step_modes when requested
};

// Time-steps every mode with the product-trapezoidal scheme.
SimulationResult step_modes(const ControlSignal& control, const KernelSpec& kernel, const TimeGrid& grid,
                            int n_max, bool keep_trajectories = false, unsigned threads = 1);

// Velocity formula used by formula_modes.
//  derivative: w_n'(T) = -(1/n) int_0^T z_n''(T - s) f(s) ds
//  density:    w_n'(T) = -(1/n) int_0^T z_n'(s) g(T - s) ds  (after integrating
//              by parts; this is the moment equation itself, so it agrees with
//              the Gram solve by construction)
enum class VelocityForm { derivative, density };

// Closed convolution formulas, with w_n(T) = -(1/n) int_0^T z_n'(T - s) f(s) ds.
SimulationResult formula_modes(const ControlSignal& control, std::span<const ModeSolution> modes,
                               const TimeGrid& grid, VelocityForm velocity = VelocityForm::derivative);

struct ModeResidual {
    int n = 0;
    double position = 0.0;  // n a_n - xi_n
    double velocity = 0.0;  // b_n - eta_n
};

struct VerificationReport {
    StateError error;
    std::vector<ModeResidual> residuals;
};

VerificationReport verify(const Target& target, const SimulationResult& result);

// ||a - b|| / ||b|| in the weighted norm sqrt(sum n^2 a_n^2 + b_n^2).
double relative_discrepancy(const StateSnapshot& a, const StateSnapshot& reference);

// Runs both methods for M = 0, T = 2 pi, f = sin(t)/pi on modes 1..4 and throws
// internal-consistency if they disagree; guards the sign of the formula method.
void formula_sign_self_test();

} // namespace memsteer
