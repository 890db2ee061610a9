#pragma once

// Direct sparse solve of the Newton system. The matrix is nonsymmetric with
// cyclic band structure; sparse LU with partial pivoting plus at most one step
// of iterative refinement keeps the residual at solver precision.

#include "willmore/newton_assembly.hpp"

namespace willmore {

struct SingularSystem : std::runtime_error {
    explicit SingularSystem(const std::string& what) : std::runtime_error(what) {}
};

struct SolveReport {
    Eigen::VectorXd solution;
    double relative_residual = 0.0;  // ||Ax-b||_inf / max(1, ||b||_inf)
    bool factorization_ok = false;
};

inline constexpr double kSolveResidualBound = 1e-12;

SolveReport solve(const NewtonSystem& system);

}  // namespace willmore
