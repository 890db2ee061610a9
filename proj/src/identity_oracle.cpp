#include "willmore/identity_oracle.hpp"

#include <cmath>
#include <type_traits>

namespace willmore {

namespace {

using LD = long double;

constexpr LD kTwoPiL = 6.283185307179586476925286766559L;

Vec2L perp_l(const Vec2L& u) { return Vec2L(-u.y(), u.x()); }

// 4th-order central first derivative. The stencil values are materialized
// before combining so vector-valued results never alias dead temporaries.
template <typename F>
auto d1(const F& f, LD x, LD h) {
    using R = std::decay_t<decltype(f(x))>;
    const R fm2 = f(x - 2 * h), fm1 = f(x - h), fp1 = f(x + h), fp2 = f(x + 2 * h);
    return R((fm2 - fp2 + 8.0L * (fp1 - fm1)) * (1.0L / (12.0L * h)));
}

// 4th-order central second derivative.
template <typename F>
auto d2(const F& f, LD x, LD h) {
    using R = std::decay_t<decltype(f(x))>;
    const R fm2 = f(x - 2 * h), fm1 = f(x - h), f0 = f(x), fp1 = f(x + h), fp2 = f(x + 2 * h);
    return R((-fp2 - fm2 + 16.0L * (fp1 + fm1) - 30.0L * f0) * (1.0L / (12.0L * h * h)));
}

struct FrameAt {
    Vec2L tangent;
    Vec2L normal;
    LD speed;  // |d_rho X|
};

class FlowProbe {
  public:
    FlowProbe(const AnalyticFlow& flow, LD t, int grid_M)
        : flow_(flow), t_(t), h_(1.0L / grid_M), dt_(1.0L / grid_M) {}

    Vec2L position(LD rho) const { return flow_.position(rho, t_); }

    FrameAt frame(LD rho) const {
        const Vec2L xp = d1([&](LD r) { return position(r); }, rho, h_);
        const LD g = xp.norm();
        if (g < 1e-12L) throw IrregularParameterization("flow parameterization speed near zero");
        const Vec2L tau = xp / g;
        return FrameAt{tau, -perp_l(tau), g};
    }

    LD curvature(LD rho) const {
        const Vec2L xp = d1([&](LD r) { return position(r); }, rho, h_);
        const Vec2L xpp = d2([&](LD r) { return position(r); }, rho, h_);
        const LD g = xp.norm();
        if (g < 1e-12L) throw IrregularParameterization("flow parameterization speed near zero");
        return (xp.x() * xpp.y() - xp.y() * xpp.x()) / (g * g * g);
    }

    Vec2L time_velocity(LD rho) const {
        return d1([&](LD s) { return flow_.position(rho, s); }, t_, dt_);
    }

    // d_s f = (d_rho f) / |d_rho X|, for scalar or vector f.
    template <typename F>
    auto deriv_s(const F& f, LD rho) const {
        using R = std::decay_t<decltype(f(rho))>;
        return R(d1(f, rho, h_) * (1.0L / frame(rho).speed));
    }

  private:
    const AnalyticFlow& flow_;
    LD t_;
    LD h_;
    LD dt_;
};

}  // namespace

AnalyticFlow exact_willmore_circle_flow(double initial_radius) {
    const LD r4 = std::pow(static_cast<LD>(initial_radius), 4);
    return AnalyticFlow{
        "exact_willmore_circle",
        [r4](LD rho, LD t) {
            const LD R = std::pow(r4 + 2.0L * t, 0.25L);
            return Vec2L(R * std::cos(kTwoPiL * rho), R * std::sin(kTwoPiL * rho));
        }};
}

AnalyticFlow dilating_circle_flow(const std::function<long double(long double)>& radius) {
    return AnalyticFlow{"dilating_circle", [radius](LD rho, LD t) {
                            const LD R = radius(t);
                            return Vec2L(R * std::cos(kTwoPiL * rho), R * std::sin(kTwoPiL * rho));
                        }};
}

double check_normal_velocity_identity(const AnalyticFlow& flow, double t, int grid_M) {
    const FlowProbe probe(flow, t, grid_M);
    auto flux = [&](LD rho) -> Vec2L {
        // d_s kappa n - (1/2) kappa^2 d_s X
        const FrameAt f = probe.frame(rho);
        const LD dsk = probe.deriv_s([&](LD r) { return probe.curvature(r); }, rho);
        const LD k = probe.curvature(rho);
        return Vec2L(dsk * f.normal - 0.5L * k * k * f.tangent);
    };
    LD worst = 0.0L;
    for (int i = 0; i < grid_M; ++i) {
        const LD rho = static_cast<LD>(i) / grid_M;
        const FrameAt f = probe.frame(rho);
        const LD V = f.normal.dot(probe.time_velocity(rho));
        const Vec2L lhs = V * f.normal;
        const Vec2L rhs = probe.deriv_s(flux, rho);
        worst = std::max(worst, static_cast<LD>((lhs - rhs).norm()));
    }
    return static_cast<double>(worst);
}

double check_curvature_evolution_identity(const AnalyticFlow& flow, double t, int grid_M) {
    const FlowProbe probe(flow, t, grid_M);
    const LD dt = 1.0L / grid_M;
    auto kappa_at = [&](LD rho, LD s) {
        const FlowProbe p(flow, s, grid_M);
        return p.curvature(rho);
    };
    auto ds_dtX = [&](LD rho) -> Vec2L {
        return probe.deriv_s([&](LD r) { return probe.time_velocity(r); }, rho);
    };
    LD worst = 0.0L;
    for (int i = 0; i < grid_M; ++i) {
        const LD rho = static_cast<LD>(i) / grid_M;
        const LD lhs = d1([&](LD s) { return kappa_at(rho, s); }, static_cast<LD>(t), dt);
        const FrameAt f = probe.frame(rho);
        const LD term1 =
            -probe.deriv_s([&](LD r) { return probe.frame(r).normal.dot(ds_dtX(r)); }, rho);
        const LD term2 = -f.tangent.dot(ds_dtX(rho)) * probe.curvature(rho);
        worst = std::max(worst, std::abs(lhs - (term1 + term2)));
    }
    return static_cast<double>(worst);
}

double check_huisken_equivalence(const AnalyticFlow& flow, double t, int grid_M) {
    const FlowProbe probe(flow, t, grid_M);
    const LD dt = 1.0L / grid_M;
    auto kappa_at = [&](LD rho, LD s) {
        const FlowProbe p(flow, s, grid_M);
        return p.curvature(rho);
    };
    auto normal_velocity = [&](LD rho) {
        return probe.frame(rho).normal.dot(probe.time_velocity(rho));
    };
    LD worst = 0.0L;
    for (int i = 0; i < grid_M; ++i) {
        const LD rho = static_cast<LD>(i) / grid_M;
        const LD dtk = d1([&](LD s) { return kappa_at(rho, s); }, static_cast<LD>(t), dt);
        const LD dssV =
            probe.deriv_s([&](LD r) { return probe.deriv_s(normal_velocity, r); }, rho);
        const LD k = probe.curvature(rho);
        worst = std::max(worst, std::abs(dtk + dssV + k * k * normal_velocity(rho)));
    }
    return static_cast<double>(worst);
}

}  // namespace willmore
