#include "willmore/initial_data.hpp"

#include <doctest.h>

#include <cmath>

using namespace willmore;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("preset positions") {
    const auto circle = preset_curve("circle");
    CHECK(circle.position(0.0).x() == doctest::Approx(1.0));
    CHECK(circle.position(0.0).y() == doctest::Approx(0.0));

    const auto nonuni = preset_curve("circle_nonuniform");
    const double th = kPi / 2 + 0.1;  // angle 2*pi*rho + 0.1 sin(2*pi*rho) at rho = 1/4
    CHECK(nonuni.position(0.25).x() == doctest::Approx(std::cos(th)));
    CHECK(nonuni.position(0.25).y() == doctest::Approx(std::sin(th)));

    const auto three = preset_curve("threefold");
    CHECK(three.position(0.0).x() == doctest::Approx(16.0 / 15.0));
    CHECK(three.position(0.0).y() == doctest::Approx(0.0));

    const auto ellipse = preset_curve("ellipse");
    CHECK(ellipse.position(0.0).x() == doctest::Approx(std::sqrt(2.0)));
    CHECK(ellipse.position(0.5).x() == doctest::Approx(-std::sqrt(2.0)));

    CHECK_THROWS_AS(preset_curve("heptagram"), UnknownPreset);
}

TEST_CASE("circle curvature and velocity are constant") {
    const auto circle = preset_curve("circle");
    const auto nonuni = preset_curve("circle_nonuniform");
    for (double rho : {0.0, 0.13, 0.25, 0.61, 0.99}) {
        CHECK(analytic_curvature(circle, rho) == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(analytic_velocity(circle, rho) == doctest::Approx(0.5).epsilon(1e-12));
        // Reparameterization changes nothing geometric.
        CHECK(analytic_curvature(nonuni, rho) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(analytic_velocity(nonuni, rho) == doctest::Approx(0.5).epsilon(1e-11));
    }
    PresetParams big;
    big.radius = 2.0;
    const auto circle2 = preset_curve("circle", big);
    CHECK(analytic_curvature(circle2, 0.4) == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(analytic_velocity(circle2, 0.4) == doctest::Approx(1.0 / 16.0).epsilon(1e-12));
}

TEST_CASE("ellipse curvature at the major axis") {
    const auto ellipse = preset_curve("ellipse");
    // kappa = a b / (a^2 sin^2 t + b^2 cos^2 t)^{3/2} with a = sqrt(2), b = 1, t = 0.
    CHECK(analytic_curvature(ellipse, 0.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));
    // At the minor axis t = pi/2: a b / a^3 = 1/2.
    CHECK(analytic_curvature(ellipse, 0.25) == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("finite-difference fallback cross-checks closed-form derivatives") {
    // The position-only fallback differentiates up to 4th order numerically;
    // its noise floor is far above the closed-form path, so the agreement
    // thresholds here are the fallback's accuracy, not the presets'.
    for (const char* name : {"circle", "circle_nonuniform", "ellipse", "threefold"}) {
        const auto preset = preset_curve(name);
        AnalyticCurve fd_only{preset.name, preset.position, {}};
        for (double rho : {0.05, 0.3, 0.62}) {
            CHECK(analytic_curvature(fd_only, rho) ==
                  doctest::Approx(analytic_curvature(preset, rho)).epsilon(1e-5));
            CHECK(analytic_velocity(fd_only, rho) ==
                  doctest::Approx(analytic_velocity(preset, rho)).epsilon(1e-3));
        }
    }
}

namespace {

// 4th-order central first derivative.
template <typename F>
double central_d1(const F& f, double x, double h) {
    return (f(x - 2 * h) - f(x + 2 * h) + 8.0 * (f(x + h) - f(x - h))) / (12.0 * h);
}

}  // namespace

TEST_CASE("ellipse velocity agrees between closed form and a second-derivative oracle") {
    // Independent path: differentiate the closed-form curvature twice in arc
    // length numerically, so only the outer d_ss is approximate.
    const auto ellipse = preset_curve("ellipse");
    auto kappa = [&](double rho) { return analytic_curvature(ellipse, rho); };
    auto speed = [&](double rho) { return ellipse.derivs(rho)[1].norm(); };
    auto ds_kappa = [&](double rho) { return central_d1(kappa, rho, 5e-4) / speed(rho); };

    const double rho0 = 0.0;
    const double dss_kappa = central_d1(ds_kappa, rho0, 5e-4) / speed(rho0);
    const double k0 = kappa(rho0);
    const double oracle_velocity = dss_kappa + 0.5 * k0 * k0 * k0;
    const double closed = analytic_velocity(ellipse, rho0);
    CHECK(std::abs(closed - oracle_velocity) <= 1e-8 * std::max(1.0, std::abs(closed)));
}

TEST_CASE("finite differences converge at 4th order") {
    const auto three = preset_curve("threefold");
    const double rho = 0.17;
    const double exact = analytic_curvature(three, rho);
    double prev_err = 0.0;
    for (int k = 0; k < 3; ++k) {
        const double delta = 2e-2 / (1 << k);
        const double err =
            std::abs(curvature_from_derivs(fd_derivatives(three.position, rho, delta)) - exact);
        if (k > 0) CHECK(err <= prev_err / 10.0);  // 4th order would give ~16x
        prev_err = err;
    }
}

TEST_CASE("sampling the circle at N = 4 gives the inscribed square") {
    const auto state = sample_initial_state(preset_curve("circle"), 4);
    REQUIRE(state.curve.size() == 4);
    CHECK(state.curve.node(0).x() == doctest::Approx(1.0));
    CHECK(state.curve.node(1).y() == doctest::Approx(1.0));
    CHECK(state.curve.node(2).x() == doctest::Approx(-1.0));
    CHECK(state.curve.node(3).y() == doctest::Approx(-1.0));
    for (int j = 0; j < 4; ++j) {
        CHECK(state.kappa0[static_cast<size_t>(j)] == doctest::Approx(1.0));
        CHECK(state.V0[static_cast<size_t>(j)] == doctest::Approx(0.5));
    }
}

TEST_CASE("initial energy of the sampled circle") {
    const auto state = sample_initial_state(preset_curve("circle"), 256);
    CHECK(discrete_willmore_energy(state.curve, state.kappa0) ==
          doctest::Approx(256.0 * std::sin(kPi / 256)).epsilon(1e-13));
}

TEST_CASE("N = 3 is accepted as the boundary of the precondition") {
    const auto state = sample_initial_state(preset_curve("threefold"), 3);
    CHECK(state.curve.size() == 3);
}

TEST_CASE("clockwise curves are rejected, not flipped") {
    AnalyticCurve cw{"clockwise_circle",
                     [](double rho) {
                         return Vec2(std::cos(-2 * kPi * rho), std::sin(-2 * kPi * rho));
                     },
                     {}};
    CHECK_THROWS_AS(sample_initial_state(cw, 16), OrientationError);
}

TEST_CASE("sampled circle curvature is rotation invariant") {
    const int n = 16;
    AnalyticCurve shifted{"shifted_circle",
                          [](double rho) {
                              const double th = 2 * kPi * (rho + 3.0 / 16.0);
                              return Vec2(std::cos(th), std::sin(th));
                          },
                          {}};
    const auto base = sample_initial_state(preset_curve("circle"), n);
    const auto rot = sample_initial_state(shifted, n);
    for (int j = 0; j < n; ++j) {
        CHECK(rot.kappa0[static_cast<size_t>(j)] ==
              doctest::Approx(base.kappa0[static_cast<size_t>((j + 3) % n)]).epsilon(1e-6));
    }
}
