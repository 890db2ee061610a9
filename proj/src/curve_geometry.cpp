#include "willmore/curve_geometry.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace willmore {

namespace {

std::string fmt17(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void check_same_size(size_t a, size_t b, const char* ctx) {
    if (a != b) {
        throw FieldLengthMismatch(std::string(ctx) + ": field sizes " + std::to_string(a) +
                                  " vs " + std::to_string(b));
    }
}

}  // namespace

PolygonalCurve::PolygonalCurve(std::vector<Vec2> nodes) : nodes_(std::move(nodes)) {
    if (nodes_.size() < 3) {
        throw DegenerateCurve("PolygonalCurve requires N >= 3 nodes, got " +
                              std::to_string(nodes_.size()));
    }
}

double PolygonalCurve::perimeter() const {
    double p = 0.0;
    const int n = size();
    for (int j = 0; j < n; ++j) {
        p += (node(j) - node_periodic(j - 1)).norm();
    }
    return p;
}

std::vector<double> segment_lengths(const PolygonalCurve& curve) {
    const int n = curve.size();
    std::vector<double> len(static_cast<size_t>(n));
    double perim = 0.0;
    for (int j = 0; j < n; ++j) {
        len[static_cast<size_t>(j)] = (curve.node(j) - curve.node_periodic(j - 1)).norm();
        perim += len[static_cast<size_t>(j)];
    }
    const double eps = kDegeneracyRel * perim;
    for (int j = 0; j < n; ++j) {
        if (!(len[static_cast<size_t>(j)] > eps)) {
            throw DegenerateSegment("segment " + std::to_string(j) + " has length " +
                                    std::to_string(len[static_cast<size_t>(j)]) +
                                    " below threshold " + std::to_string(eps));
        }
    }
    return len;
}

std::vector<SegmentFrame> segment_frames(const PolygonalCurve& curve) {
    const int n = curve.size();
    auto len = segment_lengths(curve);
    std::vector<SegmentFrame> frames(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) {
        const Vec2 h = curve.node(j) - curve.node_periodic(j - 1);
        const double l = len[static_cast<size_t>(j)];
        const Vec2 tau = h / l;
        frames[static_cast<size_t>(j)] = SegmentFrame{l, tau, -perp(tau)};
    }
    return frames;
}

SegmentScalarField arc_derivative(const NodalScalarField& field, const PolygonalCurve& curve) {
    const int n = curve.size();
    check_same_size(field.size(), static_cast<size_t>(n), "arc_derivative");
    auto len = segment_lengths(curve);
    SegmentScalarField out(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) {
        const int jm = (j + n - 1) % n;
        out[static_cast<size_t>(j)] =
            (field[static_cast<size_t>(j)] - field[static_cast<size_t>(jm)]) / len[static_cast<size_t>(j)];
    }
    return out;
}

SegmentVectorField arc_derivative(const NodalVectorField& field, const PolygonalCurve& curve) {
    const int n = curve.size();
    check_same_size(field.size(), static_cast<size_t>(n), "arc_derivative");
    auto len = segment_lengths(curve);
    SegmentVectorField out(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) {
        const int jm = (j + n - 1) % n;
        out[static_cast<size_t>(j)] =
            (field[static_cast<size_t>(j)] - field[static_cast<size_t>(jm)]) / len[static_cast<size_t>(j)];
    }
    return out;
}

double lumped_inner(const NodalScalarField& u, const NodalScalarField& v, const PolygonalCurve& curve) {
    const int n = curve.size();
    check_same_size(u.size(), static_cast<size_t>(n), "lumped_inner");
    check_same_size(v.size(), static_cast<size_t>(n), "lumped_inner");
    auto len = segment_lengths(curve);
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
        const int jm = (j + n - 1) % n;
        acc += 0.5 * len[static_cast<size_t>(j)] *
               (u[static_cast<size_t>(jm)] * v[static_cast<size_t>(jm)] +
                u[static_cast<size_t>(j)] * v[static_cast<size_t>(j)]);
    }
    return acc;
}

double lumped_inner(const NodalVectorField& u, const NodalVectorField& v, const PolygonalCurve& curve) {
    const int n = curve.size();
    check_same_size(u.size(), static_cast<size_t>(n), "lumped_inner");
    check_same_size(v.size(), static_cast<size_t>(n), "lumped_inner");
    auto len = segment_lengths(curve);
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
        const int jm = (j + n - 1) % n;
        acc += 0.5 * len[static_cast<size_t>(j)] *
               (u[static_cast<size_t>(jm)].dot(v[static_cast<size_t>(jm)]) +
                u[static_cast<size_t>(j)].dot(v[static_cast<size_t>(j)]));
    }
    return acc;
}

double lumped_inner_segments(const SegmentScalarField& u, const SegmentScalarField& v, const PolygonalCurve& curve) {
    const int n = curve.size();
    check_same_size(u.size(), static_cast<size_t>(n), "lumped_inner");
    check_same_size(v.size(), static_cast<size_t>(n), "lumped_inner");
    auto len = segment_lengths(curve);
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
        acc += len[static_cast<size_t>(j)] * u[static_cast<size_t>(j)] * v[static_cast<size_t>(j)];
    }
    return acc;
}

double lumped_inner_segments(const SegmentVectorField& u, const SegmentVectorField& v, const PolygonalCurve& curve) {
    const int n = curve.size();
    check_same_size(u.size(), static_cast<size_t>(n), "lumped_inner");
    check_same_size(v.size(), static_cast<size_t>(n), "lumped_inner");
    auto len = segment_lengths(curve);
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
        acc += len[static_cast<size_t>(j)] * u[static_cast<size_t>(j)].dot(v[static_cast<size_t>(j)]);
    }
    return acc;
}

double lumped_inner_mixed(const NodalScalarField& u, const SegmentScalarField& v, const PolygonalCurve& curve) {
    const int n = curve.size();
    check_same_size(u.size(), static_cast<size_t>(n), "lumped_inner_mixed");
    check_same_size(v.size(), static_cast<size_t>(n), "lumped_inner_mixed");
    auto len = segment_lengths(curve);
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
        const int jm = (j + n - 1) % n;
        acc += 0.5 * len[static_cast<size_t>(j)] * v[static_cast<size_t>(j)] *
               (u[static_cast<size_t>(jm)] + u[static_cast<size_t>(j)]);
    }
    return acc;
}

double discrete_willmore_energy(const PolygonalCurve& curve, const NodalScalarField& kappa) {
    return 0.5 * lumped_inner(kappa, kappa, curve);
}

double polygon_area(const PolygonalCurve& curve) {
    const int n = curve.size();
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
        const Vec2& a = curve.node(j);
        const Vec2& b = curve.node_periodic(j + 1);
        acc += a.x() * b.y() - b.x() * a.y();
    }
    return 0.5 * acc;
}

void write_curve_csv(const PolygonalCurve& curve, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "x,y\n";
    for (const Vec2& p : curve.nodes()) {
        out << fmt17(p.x()) << "," << fmt17(p.y()) << "\n";
    }
}

PolygonalCurve read_curve_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::string line;
    std::vector<Vec2> nodes;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;  // "x,y"
            continue;
        }
        std::istringstream ss(line);
        std::string xs, ys;
        if (!std::getline(ss, xs, ',') || !std::getline(ss, ys)) {
            throw std::runtime_error("malformed curve CSV line: " + line);
        }
        nodes.emplace_back(std::stod(xs), std::stod(ys));
    }
    return PolygonalCurve(std::move(nodes));
}

void write_curve_json(const PolygonalCurve& curve, const std::string& path) {
    nlohmann::json j;
    auto& arr = j["nodes"];
    arr = nlohmann::json::array();
    for (const Vec2& p : curve.nodes()) arr.push_back({p.x(), p.y()});
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << j.dump() << "\n";
}

PolygonalCurve read_curve_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    nlohmann::json j;
    in >> j;
    std::vector<Vec2> nodes;
    for (const auto& p : j.at("nodes")) {
        nodes.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
    }
    return PolygonalCurve(std::move(nodes));
}

}  // namespace willmore
