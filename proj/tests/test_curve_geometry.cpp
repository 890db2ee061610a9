#include "willmore/curve_geometry.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>

using namespace willmore;

namespace {

constexpr double kPi = 3.14159265358979323846;

PolygonalCurve unit_square_ccw() {
    return PolygonalCurve({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
}

PolygonalCurve regular_ngon(int n, double radius = 1.0) {
    std::vector<Vec2> nodes;
    for (int j = 0; j < n; ++j) {
        const double th = 2.0 * kPi * j / n;
        nodes.emplace_back(radius * std::cos(th), radius * std::sin(th));
    }
    return PolygonalCurve(std::move(nodes));
}

NodalScalarField random_field(int n, std::mt19937& rng) {
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    NodalScalarField f(static_cast<size_t>(n));
    for (double& v : f) v = dist(rng);
    return f;
}

}  // namespace

TEST_CASE("segment frames on the unit square") {
    const auto frames = segment_frames(unit_square_ccw());
    REQUIRE(frames.size() == 4);
    // Segment 1 spans nodes 0 -> 1 (the bottom edge): outward normal points down.
    CHECK(frames[1].length == doctest::Approx(1.0));
    CHECK(frames[1].tangent.x() == doctest::Approx(1.0));
    CHECK(frames[1].tangent.y() == doctest::Approx(0.0));
    CHECK(frames[1].normal.x() == doctest::Approx(0.0));
    CHECK(frames[1].normal.y() == doctest::Approx(-1.0));
}

TEST_CASE("regular N-gon chord lengths") {
    for (int n : {4, 7, 64}) {
        const auto frames = segment_frames(regular_ngon(n));
        for (const auto& f : frames) {
            CHECK(f.length == doctest::Approx(2.0 * std::sin(kPi / n)).epsilon(1e-12));
        }
    }
}

TEST_CASE("coincident consecutive nodes raise DegenerateSegment") {
    PolygonalCurve bad({{0, 0}, {0, 0}, {1, 1}, {0, 1}});
    CHECK_THROWS_AS(segment_frames(bad), DegenerateSegment);
}

TEST_CASE("frame orthonormality and closure on random perturbed polygons") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> jitter(-0.2, 0.2);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Vec2> nodes;
        const int n = 16;
        for (int j = 0; j < n; ++j) {
            const double th = 2.0 * kPi * j / n;
            const double r = 1.0 + jitter(rng);
            nodes.emplace_back(r * std::cos(th), r * std::sin(th));
        }
        PolygonalCurve curve(nodes);
        Vec2 closure = Vec2::Zero();
        for (const auto& f : segment_frames(curve)) {
            CHECK(std::abs(f.tangent.norm() - 1.0) <= 1e-14);
            CHECK(std::abs(f.normal.norm() - 1.0) <= 1e-14);
            CHECK(std::abs(f.normal.dot(f.tangent)) <= 1e-14);
            closure += f.length * f.tangent;
        }
        CHECK(closure.norm() <= 1e-13 * curve.perimeter());
    }
}

TEST_CASE("arc derivative basics") {
    const auto square = unit_square_ccw();
    SUBCASE("constant field is exactly zero") {
        const auto d = arc_derivative(NodalScalarField{3.5, 3.5, 3.5, 3.5}, square);
        for (double v : d) CHECK(v == 0.0);
    }
    SUBCASE("x-coordinate field on the square") {
        NodalScalarField x;
        for (const Vec2& p : square.nodes()) x.push_back(p.x());
        const auto d = arc_derivative(x, square);
        // Segment j spans nodes (j-1, j): bottom edge is segment 1.
        CHECK(d[1] == doctest::Approx(1.0));
        CHECK(d[2] == doctest::Approx(0.0));
        CHECK(d[3] == doctest::Approx(-1.0));
        CHECK(d[0] == doctest::Approx(0.0));
    }
    SUBCASE("alternating nodal values") {
        const auto d = arc_derivative(NodalScalarField{0, 1, 0, 1}, square);
        CHECK(d[1] == doctest::Approx(1.0));
        CHECK(d[2] == doctest::Approx(-1.0));
        CHECK(d[3] == doctest::Approx(1.0));
        CHECK(d[0] == doctest::Approx(-1.0));
    }
    SUBCASE("length mismatch") {
        CHECK_THROWS_AS(arc_derivative(NodalScalarField{1, 2, 3}, square), FieldLengthMismatch);
    }
}

TEST_CASE("lumped inner product") {
    const auto square = unit_square_ccw();
    SUBCASE("constants integrate to the perimeter") {
        const NodalScalarField one(4, 1.0);
        CHECK(lumped_inner(one, one, square) == doctest::Approx(4.0));
    }
    SUBCASE("single nodal hat on the square") {
        const NodalScalarField hat{1, 0, 0, 0};
        CHECK(lumped_inner(hat, hat, square) == doctest::Approx(1.0));
    }
    SUBCASE("segment constants") {
        const SegmentScalarField p{1, 2, 3, 4}, q{2, 0, 1, -1};
        // sum |h_j| p_j q_j with all |h_j| = 1
        CHECK(lumped_inner_segments(p, q, square) == doctest::Approx(2 + 0 + 3 - 4));
    }
    SUBCASE("symmetry and bilinearity on random fields") {
        std::mt19937 rng(7);
        const auto curve = regular_ngon(12);
        for (int trial = 0; trial < 10; ++trial) {
            const auto u = random_field(12, rng);
            const auto v = random_field(12, rng);
            const auto w = random_field(12, rng);
            const double scale = std::abs(lumped_inner(u, v, curve)) + 1.0;
            CHECK(std::abs(lumped_inner(u, v, curve) - lumped_inner(v, u, curve)) <= 1e-15 * scale);
            NodalScalarField lin(12);
            const double a = 1.7, b = -0.3;
            for (size_t i = 0; i < 12; ++i) lin[i] = a * u[i] + b * v[i];
            CHECK(lumped_inner(lin, w, curve) ==
                  doctest::Approx(a * lumped_inner(u, w, curve) + b * lumped_inner(v, w, curve))
                      .epsilon(1e-12));
            CHECK(lumped_inner(u, u, curve) > 0.0);
        }
    }
}

TEST_CASE("discrete Willmore energy") {
    SUBCASE("kappa == 1 on regular N-gon gives half the perimeter") {
        for (int n : {4, 64}) {
            const auto curve = regular_ngon(n);
            const NodalScalarField one(static_cast<size_t>(n), 1.0);
            CHECK(discrete_willmore_energy(curve, one) ==
                  doctest::Approx(n * std::sin(kPi / n)).epsilon(1e-13));
        }
    }
    SUBCASE("kappa == 0 gives zero, nonzero kappa gives positive") {
        const auto curve = regular_ngon(8);
        CHECK(discrete_willmore_energy(curve, NodalScalarField(8, 0.0)) == 0.0);
        NodalScalarField f(8, 0.0);
        f[3] = 1e-3;
        CHECK(discrete_willmore_energy(curve, f) > 0.0);
    }
    SUBCASE("kappa == 1/R on a 64-gon of radius 2") {
        // chords 4 sin(pi/64), perimeter 256 sin(pi/64), W = (1/2)(1/4) perimeter
        const auto curve = regular_ngon(64, 2.0);
        const NodalScalarField half(64, 0.5);
        CHECK(discrete_willmore_energy(curve, half) ==
              doctest::Approx(32.0 * std::sin(kPi / 64)).epsilon(1e-13));
    }
}

TEST_CASE("polygon area") {
    CHECK(polygon_area(unit_square_ccw()) == doctest::Approx(1.0));
    PolygonalCurve cw({{0, 0}, {0, 1}, {1, 1}, {1, 0}});
    CHECK(polygon_area(cw) == doctest::Approx(-1.0));
    CHECK(polygon_area(regular_ngon(256)) ==
          doctest::Approx(128.0 * std::sin(2.0 * kPi / 256)).epsilon(1e-13));
}

TEST_CASE("curve serialization round trip") {
    const auto curve = regular_ngon(13, 1.37);
    const auto dir = std::filesystem::temp_directory_path();
    const auto csv = (dir / "willmore_test_curve.csv").string();
    const auto json = (dir / "willmore_test_curve.json").string();
    write_curve_csv(curve, csv);
    write_curve_json(curve, json);
    for (const auto& loaded : {read_curve_csv(csv), read_curve_json(json)}) {
        REQUIRE(loaded.size() == curve.size());
        for (int j = 0; j < curve.size(); ++j) {
            CHECK(loaded.node(j).x() == curve.node(j).x());
            CHECK(loaded.node(j).y() == curve.node(j).y());
        }
    }
    std::filesystem::remove(csv);
    std::filesystem::remove(json);
}

TEST_CASE("curves with fewer than 3 nodes are rejected") {
    CHECK_THROWS_AS(PolygonalCurve({{0, 0}, {1, 0}}), DegenerateCurve);
}
