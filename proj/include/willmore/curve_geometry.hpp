#pragma once

// Polygonal curve data model and the discrete geometric operators:
// segment frames, arc-length derivative, mass-lumped inner product,
// discrete Willmore energy.
//
// Index convention: nodes are 0-based, j = 0..N-1 with periodic wraparound.
// Segment j spans nodes (j-1 mod N, j), so node j touches segments j and
// (j+1 mod N).

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace willmore {

using Vec2 = Eigen::Vector2d;

// Nodal fields are continuous piecewise-linear (one value per node);
// segment fields are piecewise-constant (one value per segment).
using NodalScalarField = std::vector<double>;
using NodalVectorField = std::vector<Vec2>;
using SegmentScalarField = std::vector<double>;
using SegmentVectorField = std::vector<Vec2>;

struct DegenerateSegment : std::runtime_error {
    explicit DegenerateSegment(const std::string& what) : std::runtime_error(what) {}
};
struct FieldLengthMismatch : std::runtime_error {
    explicit FieldLengthMismatch(const std::string& what) : std::runtime_error(what) {}
};
struct DegenerateCurve : std::runtime_error {
    explicit DegenerateCurve(const std::string& what) : std::runtime_error(what) {}
};

// u^perp = (-u2, u1); outward normal of a CCW curve is n = -tau^perp.
inline Vec2 perp(const Vec2& u) { return Vec2(-u.y(), u.x()); }

class PolygonalCurve {
  public:
    explicit PolygonalCurve(std::vector<Vec2> nodes);

    int size() const { return static_cast<int>(nodes_.size()); }
    const std::vector<Vec2>& nodes() const { return nodes_; }
    const Vec2& node(int j) const { return nodes_[static_cast<size_t>(j)]; }

    // Node index with periodic wraparound (accepts -N..2N-1).
    const Vec2& node_periodic(int j) const {
        const int n = size();
        return nodes_[static_cast<size_t>(((j % n) + n) % n)];
    }

    double perimeter() const;

  private:
    std::vector<Vec2> nodes_;
};

struct SegmentFrame {
    double length;  // |h_j| > 0
    Vec2 tangent;   // h_j / |h_j|
    Vec2 normal;    // -h_j^perp / |h_j| (outward for CCW curves)
};

// Relative degeneracy threshold: segments shorter than this fraction of the
// perimeter are rejected rather than regularized.
inline constexpr double kDegeneracyRel = 1e-14;

std::vector<SegmentFrame> segment_frames(const PolygonalCurve& curve);

// Per-segment lengths only (cheaper than full frames).
std::vector<double> segment_lengths(const PolygonalCurve& curve);

// Discrete arc-length derivative: (field[j] - field[j-1]) / |h_j| on segment j.
SegmentScalarField arc_derivative(const NodalScalarField& field, const PolygonalCurve& curve);
SegmentVectorField arc_derivative(const NodalVectorField& field, const PolygonalCurve& curve);

// Mass-lumped inner product (1/2) sum_j |h_j| [(u.v)(rho_{j-1}^+) + (u.v)(rho_j^-)].
// Nodal fields contribute their nodal values at the one-sided limits; segment
// fields contribute the segment constant at both.
// NodalScalarField aliases SegmentScalarField, so the segment-field variants
// carry their own names instead of overloads.
double lumped_inner(const NodalScalarField& u, const NodalScalarField& v, const PolygonalCurve& curve);
double lumped_inner(const NodalVectorField& u, const NodalVectorField& v, const PolygonalCurve& curve);
double lumped_inner_segments(const SegmentScalarField& u, const SegmentScalarField& v, const PolygonalCurve& curve);
double lumped_inner_segments(const SegmentVectorField& u, const SegmentVectorField& v, const PolygonalCurve& curve);
// Mixed: nodal scalar times segment scalar.
double lumped_inner_mixed(const NodalScalarField& u, const SegmentScalarField& v, const PolygonalCurve& curve);

// Discrete Willmore energy (1/4) sum_j |h_j| [kappa_{j-1}^2 + kappa_j^2]
// = (1/2) lumped_inner(kappa, kappa).
double discrete_willmore_energy(const PolygonalCurve& curve, const NodalScalarField& kappa);

// Signed shoelace area; positive for counterclockwise orientation.
double polygon_area(const PolygonalCurve& curve);

// Serialization: CSV with header "x,y", one node per line, no repeated closing
// node; JSON alternative {"nodes": [[x,y],...]}.
void write_curve_csv(const PolygonalCurve& curve, const std::string& path);
PolygonalCurve read_curve_csv(const std::string& path);
void write_curve_json(const PolygonalCurve& curve, const std::string& path);
PolygonalCurve read_curve_json(const std::string& path);

}  // namespace willmore
