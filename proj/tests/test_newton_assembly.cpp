#include "willmore/newton_assembly.hpp"
#include "willmore/initial_data.hpp"
#include "willmore/linear_solver.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace willmore;

namespace {

FlowState circle_state(int n) {
    auto init = sample_initial_state(preset_curve("circle"), n);
    return FlowState{init.curve, init.V0, init.kappa0};
}

}  // namespace

TEST_CASE("state validation") {
    auto state = circle_state(8);
    CHECK_NOTHROW(state.validate());
    state.V[3] = std::nan("");
    CHECK_THROWS_AS(state.validate(), NonFiniteInput);
    auto short_state = circle_state(8);
    short_state.kappa.pop_back();
    CHECK_THROWS_AS(short_state.validate(), FieldLengthMismatch);
}

TEST_CASE("pack and unpack round trip") {
    const auto state = circle_state(6);
    const auto packed = pack_state(state);
    REQUIRE(packed.size() == 24);
    const auto back = unpack_state(packed, 6);
    for (int j = 0; j < 6; ++j) {
        CHECK(back.curve.node(j) == state.curve.node(j));
        CHECK(back.V[static_cast<size_t>(j)] == state.V[static_cast<size_t>(j)]);
        CHECK(back.kappa[static_cast<size_t>(j)] == state.kappa[static_cast<size_t>(j)]);
    }
}

TEST_CASE("velocity rows reduce to the lumped mass matrix when kappa = 0") {
    // Unit square, V = 0, kappa = 0: block (a) couples X and V only; the V
    // columns must carry -(|h_j| + |h_{j+1}|)/2 on the diagonal.
    PolygonalCurve square({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    const FlowState prev{square, NodalScalarField(4, 0.0), NodalScalarField(4, 0.0)};
    const auto sys = assemble_newton_system(prev, prev, 1.0);
    const Eigen::MatrixXd dense = Eigen::MatrixXd(sys.matrix);
    for (int k = 0; k < 4; ++k) {
        for (int j = 0; j < 4; ++j) {
            const double expect = (k == j) ? -1.0 : 0.0;  // all |h_j| = 1
            CHECK(dense(k, NewtonSystem::v_index(j, 4)) == doctest::Approx(expect));
        }
        // No kappa coupling in the velocity rows at kappa = 0.
        for (int j = 0; j < 4; ++j) {
            CHECK(dense(k, NewtonSystem::kappa_index(j, 4)) == doctest::Approx(0.0));
        }
    }
}

TEST_CASE("assembly smoke test on the N = 4 circle") {
    const auto prev = circle_state(4);
    const auto sys = assemble_newton_system(prev, prev, 1e-3);
    REQUIRE(sys.matrix.rows() == 16);
    REQUIRE(sys.rhs.size() == 16);
    const double defect = nonlinear_residual(prev, prev, 1e-3);
    CHECK(std::isfinite(defect));
    CHECK(defect > 0.0);   // the circle is not stationary
    CHECK(defect < 10.0);  // O(1) at the initial guess
    const auto report = solve(sys);
    CHECK(report.factorization_ok);
    CHECK(report.relative_residual <= kSolveResidualBound);
}

TEST_CASE("Newton fixed point: assembling at a root returns the root") {
    // Solve one implicit step by Newton iteration by hand, then verify the
    // converged state is reproduced exactly when used as the iterate.
    const auto prev = circle_state(32);
    const double tau = 1e-3;
    FlowState iterate = prev;
    for (int i = 0; i < 30; ++i) {
        const auto sys = assemble_newton_system(prev, iterate, tau);
        iterate = unpack_state(solve(sys).solution, prev.size());
    }
    CHECK(nonlinear_residual(prev, iterate, tau) <= 1e-11);

    const auto sys = assemble_newton_system(prev, iterate, tau);
    const auto root = pack_state(iterate);
    const Eigen::VectorXd defect = sys.matrix * root - sys.rhs;
    CHECK(defect.lpNorm<Eigen::Infinity>() <= 1e-11);
}

TEST_CASE("matrix rows touch at most 3 consecutive nodes") {
    const auto prev = circle_state(16);
    const int n = prev.size();
    const auto sys = assemble_newton_system(prev, prev, 1e-3);
    for (int row = 0; row < sys.matrix.rows(); ++row) {
        // Node owning the row: rows 0..N-1 by node, N..3N-1 in (node, comp)
        // pairs, 3N..4N-1 by node.
        int row_node;
        if (row < n) row_node = row;
        else if (row < 3 * n) row_node = (row - n) / 2;
        else row_node = row - 3 * n;
        Eigen::VectorXd e = Eigen::VectorXd::Zero(4 * n);
        e(row) = 1.0;
        const Eigen::VectorXd r = sys.matrix.transpose() * e;
        for (int col = 0; col < 4 * n; ++col) {
            if (r(col) == 0.0) continue;
            int col_node;
            if (col < 2 * n) col_node = col / 2;
            else if (col < 3 * n) col_node = col - 2 * n;
            else col_node = col - 3 * n;
            const int dist = std::abs(col_node - row_node);
            CHECK(std::min(dist, n - dist) <= 1);
        }
    }
}

TEST_CASE("assembly is deterministic") {
    const auto prev = circle_state(12);
    const auto a = assemble_newton_system(prev, prev, 5e-4);
    const auto b = assemble_newton_system(prev, prev, 5e-4);
    CHECK((a.rhs - b.rhs).lpNorm<Eigen::Infinity>() == 0.0);
    Eigen::SparseMatrix<double> diff = a.matrix - b.matrix;
    CHECK(Eigen::MatrixXd(diff).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("residual of a non-stationary candidate and tau scaling") {
    const auto prev = circle_state(8);
    FlowState frozen = prev;
    std::fill(frozen.V.begin(), frozen.V.end(), 0.0);
    CHECK(nonlinear_residual(prev, frozen, 1e-3) > 0.0);

    // Moving the nodes changes only the motion rows when tau is rescaled:
    // the defect difference between tau and 10*tau lives in rows 0..N-1.
    FlowState moved = prev;
    std::vector<Vec2> nodes = moved.curve.nodes();
    for (auto& p : nodes) p *= 1.01;
    moved.curve = PolygonalCurve(nodes);
    const double r1 = nonlinear_residual(prev, moved, 1e-3);
    const double r2 = nonlinear_residual(prev, moved, 1e-2);
    CHECK(r1 != r2);  // the tau-dependent motion rows dominate here
}

TEST_CASE("MatrixMarket debug dump") {
    const auto prev = circle_state(4);
    const auto sys = assemble_newton_system(prev, prev, 1e-3);
    const auto dir = std::filesystem::temp_directory_path();
    const auto mpath = (dir / "willmore_test.mtx").string();
    const auto rpath = (dir / "willmore_test_rhs.txt").string();
    dump_matrix_market(sys, mpath, rpath);
    std::ifstream m(mpath);
    std::string banner;
    std::getline(m, banner);
    CHECK(banner.find("MatrixMarket") != std::string::npos);
    int rows = 0, cols = 0, nnz = 0;
    m >> rows >> cols >> nnz;
    CHECK(rows == 16);
    CHECK(cols == 16);
    CHECK(nnz == sys.matrix.nonZeros());
    std::filesystem::remove(mpath);
    std::filesystem::remove(rpath);
}

TEST_CASE("solver basics") {
    SUBCASE("identity system") {
        NewtonSystem sys;
        sys.matrix = Eigen::SparseMatrix<double>(3, 3);
        sys.matrix.setIdentity();
        sys.rhs = Eigen::Vector3d(4.0, -1.0, 0.5);
        const auto report = solve(sys);
        CHECK(report.relative_residual == 0.0);
        CHECK((report.solution - sys.rhs).norm() == 0.0);
    }
    SUBCASE("2x2 symmetric Toeplitz") {
        NewtonSystem sys;
        sys.matrix = Eigen::SparseMatrix<double>(2, 2);
        sys.matrix.insert(0, 0) = 2.0;
        sys.matrix.insert(0, 1) = 1.0;
        sys.matrix.insert(1, 0) = 1.0;
        sys.matrix.insert(1, 1) = 2.0;
        sys.rhs = Eigen::Vector2d(3.0, 3.0);
        const auto report = solve(sys);
        CHECK(report.solution(0) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(report.solution(1) == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("singular matrix is reported") {
        NewtonSystem sys;
        sys.matrix = Eigen::SparseMatrix<double>(2, 2);
        sys.matrix.insert(0, 0) = 1.0;
        sys.matrix.insert(1, 0) = 1.0;
        sys.rhs = Eigen::Vector2d(1.0, 2.0);
        CHECK_THROWS_AS(solve(sys), SingularSystem);
    }
    SUBCASE("determinism") {
        const auto prev = circle_state(8);
        const auto sys = assemble_newton_system(prev, prev, 1e-3);
        const auto a = solve(sys);
        const auto b = solve(sys);
        CHECK((a.solution - b.solution).lpNorm<Eigen::Infinity>() == 0.0);
    }
}
