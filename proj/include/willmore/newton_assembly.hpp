#pragma once

// Assembly of one Newton-Raphson iterate of the fully implicit backward-Euler
// scheme. Unknowns are the nodal fields (X^{m+1}, V^{m+1}, kappa^{m+1}); all
// geometry (segment lengths, normals, arc-length derivatives, lumped weights)
// is frozen on the time-m curve.
//
// Unknown layout in the 4N vector: [X (2N, node-major x,y) | V (N) | kappa (N)].
// Rows 0..N-1 are the velocity equation tested with scalar hats, rows N..3N-1
// the curvature-gradient equation tested with vector hats, rows 3N..4N-1 the
// curvature evolution equation tested with scalar hats.

#include "willmore/curve_geometry.hpp"

#include <Eigen/Sparse>

#include <string>

namespace willmore {

struct NonFiniteInput : std::runtime_error {
    explicit NonFiniteInput(const std::string& what) : std::runtime_error(what) {}
};

struct FlowState {
    PolygonalCurve curve;
    NodalScalarField V;
    NodalScalarField kappa;

    int size() const { return curve.size(); }
    void validate() const;  // shared N, finite values
};

struct NewtonSystem {
    Eigen::SparseMatrix<double> matrix;  // 4N x 4N
    Eigen::VectorXd rhs;                 // 4N

    static int x_index(int node, int comp) { return 2 * node + comp; }
    static int v_index(int node, int n) { return 2 * n + node; }
    static int kappa_index(int node, int n) { return 3 * n + node; }
};

NewtonSystem assemble_newton_system(const FlowState& prev, const FlowState& iterate, double tau);

// Max absolute defect of the nonlinear backward-Euler equations at `candidate`
// over all 4N lumped test functions. Independent convergence check for the
// increment-based Newton stopping rule.
double nonlinear_residual(const FlowState& prev, const FlowState& candidate, double tau);

// Debug dump in MatrixMarket coordinate format (matrix) plus a dense rhs array.
void dump_matrix_market(const NewtonSystem& system, const std::string& matrix_path,
                        const std::string& rhs_path);

// Pack/unpack between a FlowState and the 4N unknown vector (curve geometry of
// `like` supplies N).
Eigen::VectorXd pack_state(const FlowState& state);
FlowState unpack_state(const Eigen::VectorXd& z, int n);

}  // namespace willmore
