#pragma once

// Error metrics and experiment measurements: exact circle solution, L-inf
// field errors, manifold distance (symmetric-difference area), convergence
// orders, reference solutions on a fine mesh, roundness diagnostic.

#include "willmore/initial_data.hpp"
#include "willmore/time_stepper.hpp"

namespace willmore {

struct SelfIntersectingInput : std::runtime_error {
    explicit SelfIntersectingInput(const std::string& what) : std::runtime_error(what) {}
};
struct NonPositiveError : std::runtime_error {
    explicit NonPositiveError(const std::string& what) : std::runtime_error(what) {}
};

// Expanding circle under the flow: R(t) = (1+2t)^{1/4}, kappa = 1/R,
// V = (1/2) R^{-3}, X(rho,t) = R(t) X_0(rho).
struct ExactCircleSolution {
    static double radius(double t) { return std::pow(1.0 + 2.0 * t, 0.25); }
    static double curvature(double t) { return 1.0 / radius(t); }
    static double velocity(double t) {
        const double r = radius(t);
        return 0.5 / (r * r * r);
    }
    // Pure dilation of the initial nodes (valid for any parameterization X_0
    // of the unit circle, uniform or perturbed).
    static PolygonalCurve curve_at(const PolygonalCurve& initial, double t);
};

double linf_field_error(const NodalScalarField& numerical, const NodalScalarField& exact);
double linf_field_error(const NodalScalarField& numerical, double exact_constant);

// Area of the symmetric difference of the regions enclosed by two simple
// closed counterclockwise polygons: M = 2|O1 u O2| - |O1| - |O2|.
double manifold_distance(const PolygonalCurve& curve1, const PolygonalCurve& curve2);

struct OrderRow {
    double h;
    double error;
    double order;  // NaN on the first row
};

// order_i = log(e_{i-1}/e_i) / log(h_{i-1}/h_i) between consecutive rows.
std::vector<OrderRow> estimate_orders(const std::vector<std::pair<double, double>>& table);

struct ReferenceConfig {
    std::string preset;
    int N = 512;            // h_e = 2^{-9}
    double tau = 0.0;       // explicit time step (0 -> h_e^2/2)
    double T_final = 1.0;
    double tol = kDefaultNewtonTol;
    std::string cache_dir = "ref_cache";
    PresetParams params{};
};

// Surrogate exact curve at T_final: the analytic dilation for the circle
// presets, otherwise a fine-mesh run (tau_e = h_e^2/2) cached on disk.
PolygonalCurve reference_solution(const ReferenceConfig& config);

// (max_j |X_j - c|) / (min_j |X_j - c|) around the node centroid.
double roundness(const PolygonalCurve& curve);

}  // namespace willmore
