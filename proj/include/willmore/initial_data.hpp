#pragma once

// Analytic initial curves and consistent initial data (X^0, V^0, kappa^0)
// with kappa_0 = -n . d_ss X_0 and V_0 = d_ss kappa_0 + (1/2) kappa_0^3.

#include "willmore/curve_geometry.hpp"

#include <array>
#include <functional>
#include <string>

namespace willmore {

struct UnknownPreset : std::runtime_error {
    explicit UnknownPreset(const std::string& what) : std::runtime_error(what) {}
};
struct IrregularParameterization : std::runtime_error {
    explicit IrregularParameterization(const std::string& what) : std::runtime_error(what) {}
};
struct OrientationError : std::runtime_error {
    explicit OrientationError(const std::string& what) : std::runtime_error(what) {}
};

// Position derivatives in the parameter rho, orders 0..4.
using DerivArray = std::array<Vec2, 5>;

// Smooth closed curve rho in [0,1] -> R^2, counterclockwise, with parameter
// derivatives up to 4th order. Presets carry closed-form derivatives; a
// Richardson-extrapolated finite-difference fallback serves position-only
// curves and cross-checks the presets.
struct AnalyticCurve {
    std::string name;
    std::function<Vec2(double)> position;
    std::function<DerivArray(double)> derivatives;  // may be empty -> FD fallback

    DerivArray derivs(double rho) const;
};

struct PresetParams {
    double amplitude = 1.0 / 15.0;       // threefold radial modulation
    double perturbation = 0.1;           // circle_nonuniform angle perturbation
    double radius = 1.0;                 // circle radius
};

// Presets: circle, circle_nonuniform, ellipse, threefold.
AnalyticCurve preset_curve(const std::string& name, const PresetParams& params = {});

// 4th-order-accurate parameter derivatives of a position-only curve
// (central differences at steps delta and delta/2, Richardson combined).
DerivArray fd_derivatives(const std::function<Vec2(double)>& position, double rho,
                          double delta = 1e-2);

// Signed curvature kappa = -n . d_ss X; +1 on the CCW unit circle.
double analytic_curvature(const AnalyticCurve& curve, double rho);

// V_0 = d_ss kappa_0 + (1/2) kappa_0^3.
double analytic_velocity(const AnalyticCurve& curve, double rho);

// Same quantities from an explicit derivative array (shared by the FD path).
double curvature_from_derivs(const DerivArray& d);
double velocity_from_derivs(const DerivArray& d);

struct InitialState {
    PolygonalCurve curve;
    NodalScalarField V0;
    NodalScalarField kappa0;
};

// Samples nodes and fields at rho_j = j/N. Rejects clockwise curves by a
// signed-area check instead of silently flipping orientation.
InitialState sample_initial_state(const AnalyticCurve& curve, int N);

}  // namespace willmore
