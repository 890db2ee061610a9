#include "willmore/initial_data.hpp"

#include "willmore/taylor_jet.hpp"

#include <cmath>

namespace willmore {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

using J = Jet<4>;

DerivArray jets_to_derivs(const J& x, const J& y) {
    DerivArray d;
    for (int k = 0; k <= 4; ++k) d[static_cast<size_t>(k)] = Vec2(x.derivative(k), y.derivative(k));
    return d;
}

}  // namespace

DerivArray AnalyticCurve::derivs(double rho) const {
    if (derivatives) return derivatives(rho);
    return fd_derivatives(position, rho);
}

AnalyticCurve preset_curve(const std::string& name, const PresetParams& params) {
    AnalyticCurve c;
    c.name = name;
    if (name == "circle") {
        const double R = params.radius;
        c.position = [R](double rho) {
            return Vec2(R * std::cos(kTwoPi * rho), R * std::sin(kTwoPi * rho));
        };
        c.derivatives = [R](double rho) {
            const J theta = J::variable(rho) * kTwoPi;
            J s, co;
            sincos(theta, s, co);
            return jets_to_derivs(co * R, s * R);
        };
    } else if (name == "circle_nonuniform") {
        const double R = params.radius;
        const double a = params.perturbation;
        c.position = [R, a](double rho) {
            const double theta = kTwoPi * rho + a * std::sin(kTwoPi * rho);
            return Vec2(R * std::cos(theta), R * std::sin(theta));
        };
        c.derivatives = [R, a](double rho) {
            const J u = J::variable(rho) * kTwoPi;
            const J theta = u + sin(u) * a;
            J s, co;
            sincos(theta, s, co);
            return jets_to_derivs(co * R, s * R);
        };
    } else if (name == "ellipse") {
        const double ax = std::sqrt(2.0);
        c.position = [ax](double rho) {
            return Vec2(ax * std::cos(kTwoPi * rho), std::sin(kTwoPi * rho));
        };
        c.derivatives = [ax](double rho) {
            const J theta = J::variable(rho) * kTwoPi;
            J s, co;
            sincos(theta, s, co);
            return jets_to_derivs(co * ax, s);
        };
    } else if (name == "threefold") {
        const double a = params.amplitude;
        c.position = [a](double rho) {
            const double theta = kTwoPi * rho;
            const double r = 1.0 + a * std::cos(3.0 * theta);
            return Vec2(r * std::cos(theta), r * std::sin(theta));
        };
        c.derivatives = [a](double rho) {
            const J theta = J::variable(rho) * kTwoPi;
            J s, co;
            sincos(theta, s, co);
            const J r = cos(theta * 3.0) * a + 1.0;
            return jets_to_derivs(r * co, r * s);
        };
    } else {
        throw UnknownPreset("unknown preset curve: " + name);
    }
    return c;
}

DerivArray fd_derivatives(const std::function<Vec2(double)>& position, double rho, double delta) {
    // Second-order central stencils at steps delta and delta/2, Richardson
    // combined to 4th order: D = (4 D(delta/2) - D(delta)) / 3.
    auto central = [&](double h) {
        std::array<Vec2, 5> f;  // samples at rho + k h, k = -2..2
        for (int k = -2; k <= 2; ++k) f[static_cast<size_t>(k + 2)] = position(rho + k * h);
        DerivArray d;
        d[0] = f[2];
        d[1] = (f[3] - f[1]) / (2 * h);
        d[2] = (f[3] - 2 * f[2] + f[1]) / (h * h);
        d[3] = (f[4] - 2 * f[3] + 2 * f[1] - f[0]) / (2 * h * h * h);
        d[4] = (f[4] - 4 * f[3] + 6 * f[2] - 4 * f[1] + f[0]) / (h * h * h * h);
        return d;
    };
    const DerivArray c1 = central(delta);
    const DerivArray c2 = central(delta / 2);
    DerivArray d;
    d[0] = c2[0];
    for (int k = 1; k <= 4; ++k) {
        d[static_cast<size_t>(k)] = (4.0 * c2[static_cast<size_t>(k)] - c1[static_cast<size_t>(k)]) / 3.0;
    }
    return d;
}

double curvature_from_derivs(const DerivArray& d) {
    const double g = d[1].norm();
    if (g < 1e-12) throw IrregularParameterization("parameterization speed near zero");
    const double cross = d[1].x() * d[2].y() - d[1].y() * d[2].x();
    return cross / (g * g * g);
}

double velocity_from_derivs(const DerivArray& d) {
    const double g = d[1].norm();
    if (g < 1e-12) throw IrregularParameterization("parameterization speed near zero");
    // cross(rho) = x' y'' - y' x'' and its first two parameter derivatives.
    const double c0 = d[1].x() * d[2].y() - d[1].y() * d[2].x();
    const double c1 = d[1].x() * d[3].y() - d[1].y() * d[3].x();
    const double c2 = d[2].x() * d[3].y() - d[2].y() * d[3].x() + d[1].x() * d[4].y() - d[1].y() * d[4].x();
    const double g1 = d[1].dot(d[2]) / g;
    const double g2 = (d[2].squaredNorm() + d[1].dot(d[3]) - g1 * g1) / g;
    const double g3p = g * g * g;
    const double kappa = c0 / g3p;
    const double kappa1 = c1 / g3p - 3.0 * c0 * g1 / (g3p * g);
    const double kappa2 = c2 / g3p - (6.0 * c1 * g1 + 3.0 * c0 * g2) / (g3p * g) +
                          12.0 * c0 * g1 * g1 / (g3p * g * g);
    // d_ss kappa = (kappa'' - kappa' g'/g) / g^2 with d_s = (1/g) d_rho.
    const double dss_kappa = (kappa2 - kappa1 * g1 / g) / (g * g);
    return dss_kappa + 0.5 * kappa * kappa * kappa;
}

double analytic_curvature(const AnalyticCurve& curve, double rho) {
    return curvature_from_derivs(curve.derivs(rho));
}

double analytic_velocity(const AnalyticCurve& curve, double rho) {
    return velocity_from_derivs(curve.derivs(rho));
}

InitialState sample_initial_state(const AnalyticCurve& curve, int N) {
    if (N < 3) throw DegenerateCurve("sample_initial_state requires N >= 3");
    std::vector<Vec2> nodes(static_cast<size_t>(N));
    NodalScalarField V0(static_cast<size_t>(N)), kappa0(static_cast<size_t>(N));
    for (int j = 0; j < N; ++j) {
        const double rho = static_cast<double>(j) / N;
        const DerivArray d = curve.derivs(rho);
        nodes[static_cast<size_t>(j)] = d[0];
        kappa0[static_cast<size_t>(j)] = curvature_from_derivs(d);
        V0[static_cast<size_t>(j)] = velocity_from_derivs(d);
    }
    PolygonalCurve poly(std::move(nodes));
    if (polygon_area(poly) <= 0.0) {
        throw OrientationError("initial curve must be counterclockwise (signed area <= 0)");
    }
    return InitialState{std::move(poly), std::move(V0), std::move(kappa0)};
}

}  // namespace willmore
