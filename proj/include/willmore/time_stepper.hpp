#pragma once

// Backward-Euler outer loop with the Newton inner loop and the three
// L-infinity stopping criteria (increments of X, V, kappa all below tol).

#include "willmore/initial_data.hpp"
#include "willmore/newton_assembly.hpp"

#include <optional>

namespace willmore {

struct NewtonDivergence : std::runtime_error {
    explicit NewtonDivergence(const std::string& what) : std::runtime_error(what) {}
};
struct EnergyViolation : std::runtime_error {
    explicit EnergyViolation(const std::string& what) : std::runtime_error(what) {}
};
struct ZeroInitialEnergy : std::runtime_error {
    explicit ZeroInitialEnergy(const std::string& what) : std::runtime_error(what) {}
};

struct StepReport {
    FlowState state;
    int newton_iterations = 0;
    double increment_X = 0.0;      // final L-inf increments
    double increment_V = 0.0;
    double increment_kappa = 0.0;
    double energy = 0.0;           // W^{m+1} on the new curve
    double nonlinear_residual = 0.0;
};

struct Trajectory {
    explicit Trajectory(FlowState init) : initial(std::move(init)) {}

    FlowState initial;
    double initial_energy = 0.0;  // W^0
    double tau = 0.0;
    double tol = 0.0;
    std::vector<double> times;            // t_1 .. t_M
    std::vector<StepReport> steps;        // aligned with times
    std::optional<std::string> error;     // set if the run aborted early

    const FlowState& final_state() const { return steps.empty() ? initial : steps.back().state; }
};

inline constexpr double kDefaultNewtonTol = 1e-12;
inline constexpr int kDefaultMaxNewtonIter = 50;

StepReport newton_step(const FlowState& prev, double tau, double tol = kDefaultNewtonTol,
                       int max_iter = kDefaultMaxNewtonIter);

// M = T_final / tau backward-Euler steps; T_final must be an integer multiple
// of tau. Energy monotonicity W^{m+1} <= W^m + 1e-10 max(1, W^0) is monitored
// every step; a violation aborts the run (it would contradict the scheme's
// stability guarantee and indicates a bug). On failure the trajectory up to
// the failure point is returned, with `error` set.
Trajectory run_flow(const InitialState& initial, double tau, double T_final,
                    double tol = kDefaultNewtonTol);

struct EnergySample {
    double t;
    double energy;
    double normalized;  // W^m / W^0
};

std::vector<EnergySample> energy_history(const Trajectory& trajectory);

}  // namespace willmore
