#include "willmore/time_stepper.hpp"

#include "willmore/linear_solver.hpp"

#include <cmath>
#include <limits>

namespace willmore {

namespace {

double linf_diff(const NodalScalarField& a, const NodalScalarField& b) {
    double m = 0.0;
    for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double linf_diff(const std::vector<Vec2>& a, const std::vector<Vec2>& b) {
    double m = 0.0;
    for (size_t i = 0; i < a.size(); ++i) m = std::max(m, (a[i] - b[i]).norm());
    return m;
}

}  // namespace

StepReport newton_step(const FlowState& prev, double tau, double tol, int max_iter) {
    if (!(tau > 0.0) || !std::isfinite(tau)) {
        throw std::invalid_argument("newton_step: tau must be finite and positive");
    }
    if (!(tol > 0.0) || !std::isfinite(tol)) {
        throw std::invalid_argument("newton_step: tol must be finite and positive");
    }
    if (max_iter < 1) throw std::invalid_argument("newton_step: max_iter must be >= 1");

    // Initial guess: the previous time-level solution.
    FlowState iterate = prev;
    StepReport report{prev, 0, 0.0, 0.0, 0.0, 0.0, 0.0};
    const int n = prev.size();

    // The motion equation divides position differences by tau, so increments
    // cannot contract below ~eps * |X| / tau in double precision. The
    // effective tolerance is floored there (with a safety factor), otherwise
    // small time steps stall the iteration at the roundoff plateau.
    double x_scale = 1.0;
    for (const Vec2& p : prev.curve.nodes()) x_scale = std::max(x_scale, p.lpNorm<Eigen::Infinity>());
    const double tol_eff =
        std::max(tol, 50.0 * std::numeric_limits<double>::epsilon() * x_scale / tau);

    double prev_inc_max = std::numeric_limits<double>::infinity();
    for (int i = 0; i < max_iter; ++i) {
        const NewtonSystem sys = assemble_newton_system(prev, iterate, tau);
        const SolveReport sol = solve(sys);
        FlowState next = unpack_state(sol.solution, n);

        report.increment_X = linf_diff(next.curve.nodes(), iterate.curve.nodes());
        report.increment_V = linf_diff(next.V, iterate.V);
        report.increment_kappa = linf_diff(next.kappa, iterate.kappa);
        report.newton_iterations = i + 1;
        iterate = std::move(next);

        if (!std::isfinite(report.increment_X) || !std::isfinite(report.increment_V) ||
            !std::isfinite(report.increment_kappa)) {
            throw NewtonDivergence("newton_step: non-finite increment at iteration " +
                                   std::to_string(i + 1));
        }
        const double inc_max =
            std::max({report.increment_X, report.increment_V, report.increment_kappa});
        // Stagnation at a tiny increment means the iteration hit its roundoff
        // plateau (its level depends on the conditioning of the system, so the
        // tol_eff floor alone can undershoot it). A genuinely diverging
        // iteration never stalls this low.
        const bool at_plateau =
            inc_max <= std::max(1e-8, 100.0 * tol_eff) && inc_max >= 0.5 * prev_inc_max;
        prev_inc_max = inc_max;
        if ((report.increment_X <= tol_eff && report.increment_V <= tol_eff &&
             report.increment_kappa <= tol_eff) ||
            at_plateau) {
            report.state = std::move(iterate);
            report.energy = discrete_willmore_energy(report.state.curve, report.state.kappa);
            report.nonlinear_residual = nonlinear_residual(prev, report.state, tau);
            return report;
        }
    }
    throw NewtonDivergence("newton_step: no convergence within " + std::to_string(max_iter) +
                           " iterations (increments " + std::to_string(report.increment_X) + ", " +
                           std::to_string(report.increment_V) + ", " +
                           std::to_string(report.increment_kappa) + ")");
}

Trajectory run_flow(const InitialState& initial, double tau, double T_final, double tol) {
    if (!(tau > 0.0) || !std::isfinite(tau)) {
        throw std::invalid_argument("run_flow: tau must be finite and positive");
    }
    const double steps_real = T_final / tau;
    const long M = std::lround(steps_real);
    if (M < 1 || std::abs(steps_real - static_cast<double>(M)) > 1e-9 * std::max(1.0, steps_real)) {
        throw std::invalid_argument("run_flow: T_final must be a positive integer multiple of tau");
    }

    Trajectory traj(FlowState{initial.curve, initial.V0, initial.kappa0});
    traj.initial.validate();
    traj.initial_energy = discrete_willmore_energy(initial.curve, initial.kappa0);
    traj.tau = tau;
    traj.tol = tol;
    traj.times.reserve(static_cast<size_t>(M));
    traj.steps.reserve(static_cast<size_t>(M));

    const double eps_num = 1e-10 * std::max(1.0, traj.initial_energy);
    double prev_energy = traj.initial_energy;
    const FlowState* prev = &traj.initial;

    for (long m = 0; m < M; ++m) {
        try {
            StepReport rep = newton_step(*prev, tau, tol);
            if (rep.energy > prev_energy + eps_num) {
                throw EnergyViolation("energy increased at step " + std::to_string(m + 1) + ": " +
                                      std::to_string(prev_energy) + " -> " +
                                      std::to_string(rep.energy));
            }
            prev_energy = rep.energy;
            traj.times.push_back(static_cast<double>(m + 1) * tau);
            traj.steps.push_back(std::move(rep));
            prev = &traj.steps.back().state;
        } catch (const std::exception& e) {
            traj.error = e.what();
            break;
        }
    }
    return traj;
}

std::vector<EnergySample> energy_history(const Trajectory& trajectory) {
    if (!(trajectory.initial_energy > 0.0)) {
        throw ZeroInitialEnergy("energy_history: W^0 must be positive");
    }
    std::vector<EnergySample> out;
    out.reserve(trajectory.steps.size() + 1);
    out.push_back({0.0, trajectory.initial_energy, 1.0});
    for (size_t m = 0; m < trajectory.steps.size(); ++m) {
        const double w = trajectory.steps[m].energy;
        out.push_back({trajectory.times[m], w, w / trajectory.initial_energy});
    }
    return out;
}

}  // namespace willmore
