#pragma once

// Finite-difference verification of the continuous-level geometric identities
// behind the scheme, evaluated on analytic flows. Works purely at the
// continuous level; never touches the discrete operators.

#include "willmore/initial_data.hpp"

#include <functional>

namespace willmore {

// Extended-precision point type for the oracle. The residual checks nest up
// to four finite-difference levels; double-precision position samples would
// cap the achievable residual near 1e-8, so flows supply positions in long
// double and all stencil arithmetic stays in long double.
using Vec2L = Eigen::Matrix<long double, 2, 1>;

// Smooth family of closed curves (rho, t) -> R^2, regular in rho.
struct AnalyticFlow {
    std::string name;
    std::function<Vec2L(long double rho, long double t)> position;
};

// Dilating circle R(t) X_0 obeying the flow law exactly:
// R(t) = (R0^4 + 2t)^{1/4}.
AnalyticFlow exact_willmore_circle_flow(double initial_radius = 1.0);
// Dilating circle with user-chosen radius law (not necessarily a flow solution).
AnalyticFlow dilating_circle_flow(const std::function<long double(long double)>& radius);

// Residual of V n = d_s(d_s kappa n - (1/2) kappa^2 d_s X) at grid_M sample
// points (valid when the flow obeys V = d_ss kappa + (1/2) kappa^3).
double check_normal_velocity_identity(const AnalyticFlow& flow, double t, int grid_M);

// Residual of d_t kappa = -d_s(n . d_s(d_t X)) - (d_s X . d_s(d_t X)) kappa
// (holds for arbitrary smooth flows).
double check_curvature_evolution_identity(const AnalyticFlow& flow, double t, int grid_M);

// Residual of d_t kappa + (d_ss + kappa^2) V (valid for purely normal motion).
double check_huisken_equivalence(const AnalyticFlow& flow, double t, int grid_M);

}  // namespace willmore
