#include "willmore/metrics.hpp"

#include <boost/geometry.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/geometry/geometries/polygon.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>

namespace willmore {

namespace bg = boost::geometry;
using BgPoint = bg::model::d2::point_xy<double>;
// CCW, open rings to match the curve convention (no repeated closing node).
using BgPolygon = bg::model::polygon<BgPoint, false, false>;
using BgMultiPolygon = bg::model::multi_polygon<BgPolygon>;

namespace {

BgPolygon to_bg(const PolygonalCurve& curve, const char* which) {
    BgPolygon poly;
    for (const Vec2& p : curve.nodes()) bg::append(poly.outer(), BgPoint(p.x(), p.y()));
    if (!bg::is_valid(poly)) {
        // Distinguish self-intersection from other defects for the error type.
        if (bg::intersects(poly)) {
            throw SelfIntersectingInput(std::string("manifold_distance: ") + which +
                                        " polygon self-intersects");
        }
        throw SelfIntersectingInput(std::string("manifold_distance: ") + which +
                                    " polygon is not a valid simple CCW polygon");
    }
    return poly;
}

// FNV-1a over the reference-config identity, for stable cache file names.
uint64_t fnv1a(const std::string& s) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace

PolygonalCurve ExactCircleSolution::curve_at(const PolygonalCurve& initial, double t) {
    const double r = radius(t);
    std::vector<Vec2> nodes;
    nodes.reserve(static_cast<size_t>(initial.size()));
    for (const Vec2& p : initial.nodes()) nodes.push_back(r * p);
    return PolygonalCurve(std::move(nodes));
}

double linf_field_error(const NodalScalarField& numerical, const NodalScalarField& exact) {
    if (numerical.size() != exact.size()) {
        throw FieldLengthMismatch("linf_field_error: size mismatch");
    }
    double m = 0.0;
    for (size_t i = 0; i < numerical.size(); ++i) m = std::max(m, std::abs(numerical[i] - exact[i]));
    return m;
}

double linf_field_error(const NodalScalarField& numerical, double exact_constant) {
    double m = 0.0;
    for (double v : numerical) m = std::max(m, std::abs(v - exact_constant));
    return m;
}

double manifold_distance(const PolygonalCurve& curve1, const PolygonalCurve& curve2) {
    const BgPolygon p1 = to_bg(curve1, "first");
    const BgPolygon p2 = to_bg(curve2, "second");
    BgMultiPolygon sym;
    bg::sym_difference(p1, p2, sym);
    return bg::area(sym);
}

std::vector<OrderRow> estimate_orders(const std::vector<std::pair<double, double>>& table) {
    if (table.size() < 2) throw NonPositiveError("estimate_orders: need at least 2 rows");
    std::vector<OrderRow> rows;
    rows.reserve(table.size());
    for (size_t i = 0; i < table.size(); ++i) {
        const auto [h, e] = table[i];
        if (!(e > 0.0)) throw NonPositiveError("estimate_orders: errors must be positive");
        double order = std::numeric_limits<double>::quiet_NaN();
        if (i > 0) {
            const auto [hp, ep] = table[i - 1];
            if (!(h < hp)) throw NonPositiveError("estimate_orders: h must be strictly decreasing");
            order = std::log(ep / e) / std::log(hp / h);
        }
        rows.push_back({h, e, order});
    }
    return rows;
}

PolygonalCurve reference_solution(const ReferenceConfig& config) {
    const AnalyticCurve preset = preset_curve(config.preset, config.params);
    const double T = config.T_final;

    // The circle presets have the analytic dilation solution.
    if (config.preset == "circle" || config.preset == "circle_nonuniform") {
        const InitialState init = sample_initial_state(preset, config.N);
        return ExactCircleSolution::curve_at(init.curve, T);
    }

    const double h = 1.0 / config.N;
    const double tau = config.tau > 0.0 ? config.tau : 0.5 * h * h;
    char key[256];
    std::snprintf(key, sizeof(key), "%s|N=%d|tau=%.17g|T=%.17g|tol=%.17g|amp=%.17g",
                  config.preset.c_str(), config.N, tau, T, config.tol, config.params.amplitude);
    char name[64];
    std::snprintf(name, sizeof(name), "ref_%016llx.csv",
                  static_cast<unsigned long long>(fnv1a(key)));
    const std::filesystem::path cache_path = std::filesystem::path(config.cache_dir) / name;

    if (std::filesystem::exists(cache_path)) {
        return read_curve_csv(cache_path.string());
    }

    const InitialState init = sample_initial_state(preset, config.N);
    const Trajectory traj = run_flow(init, tau, T, config.tol);
    if (traj.error) {
        throw std::runtime_error("reference_solution: fine run failed: " + *traj.error);
    }
    std::filesystem::create_directories(config.cache_dir);
    // Single-writer discipline: write to a temp file, then rename into place.
    const std::filesystem::path tmp = cache_path.string() + ".tmp";
    write_curve_csv(traj.final_state().curve, tmp.string());
    std::filesystem::rename(tmp, cache_path);
    return traj.final_state().curve;
}

double roundness(const PolygonalCurve& curve) {
    Vec2 centroid = Vec2::Zero();
    for (const Vec2& p : curve.nodes()) centroid += p;
    centroid /= curve.size();
    double rmin = std::numeric_limits<double>::infinity();
    double rmax = 0.0;
    for (const Vec2& p : curve.nodes()) {
        const double r = (p - centroid).norm();
        rmin = std::min(rmin, r);
        rmax = std::max(rmax, r);
    }
    if (!(rmin > 0.0)) throw DegenerateCurve("roundness: node coincides with centroid");
    return rmax / rmin;
}

}  // namespace willmore
