#include "willmore/linear_solver.hpp"

#include <Eigen/SparseLU>

namespace willmore {

SolveReport solve(const NewtonSystem& system) {
    const auto& A = system.matrix;
    const auto& b = system.rhs;
    if (A.rows() != A.cols() || A.rows() != b.size()) {
        throw FieldLengthMismatch("solve: inconsistent system dimensions");
    }
    if (!b.allFinite()) throw NonFiniteInput("solve: rhs contains non-finite entries");

    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(A);
    if (lu.info() != Eigen::Success) {
        throw SingularSystem("sparse LU factorization failed (degenerate mesh or invalid state)");
    }

    SolveReport report;
    report.factorization_ok = true;
    report.solution = lu.solve(b);
    const double scale = std::max(1.0, b.lpNorm<Eigen::Infinity>());
    report.relative_residual = (A * report.solution - b).lpNorm<Eigen::Infinity>() / scale;

    if (report.relative_residual > kSolveResidualBound) {
        // One step of iterative refinement.
        const Eigen::VectorXd r = b - A * report.solution;
        report.solution += lu.solve(r);
        report.relative_residual = (A * report.solution - b).lpNorm<Eigen::Infinity>() / scale;
        if (report.relative_residual > kSolveResidualBound) {
            throw SingularSystem("solve residual " + std::to_string(report.relative_residual) +
                                 " exceeds bound after refinement");
        }
    }
    if (!report.solution.allFinite()) throw SingularSystem("solve produced non-finite solution");
    return report;
}

}  // namespace willmore
