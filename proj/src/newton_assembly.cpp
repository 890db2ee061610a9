#include "willmore/newton_assembly.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace willmore {

namespace {

bool all_finite(const NodalScalarField& f) {
    for (double v : f)
        if (!std::isfinite(v)) return false;
    return true;
}

bool all_finite(const std::vector<Vec2>& f) {
    for (const Vec2& v : f)
        if (!v.allFinite()) return false;
    return true;
}

}  // namespace

void FlowState::validate() const {
    const size_t n = static_cast<size_t>(curve.size());
    if (V.size() != n || kappa.size() != n) {
        throw FieldLengthMismatch("FlowState fields must match curve size " + std::to_string(n));
    }
    if (!all_finite(curve.nodes()) || !all_finite(V) || !all_finite(kappa)) {
        throw NonFiniteInput("FlowState contains non-finite values");
    }
}

NewtonSystem assemble_newton_system(const FlowState& prev, const FlowState& iterate, double tau) {
    if (!(tau > 0.0) || !std::isfinite(tau)) throw NonFiniteInput("tau must be finite and positive");
    prev.validate();
    iterate.validate();
    const int n = prev.size();
    if (iterate.size() != n) throw FieldLengthMismatch("prev/iterate size mismatch");

    // All geometry lives on the time-m curve.
    const auto frames = segment_frames(prev.curve);
    const auto& Xm = prev.curve.nodes();
    const auto& Km = prev.kappa;
    const auto& Xi = iterate.curve.nodes();
    const auto& Ki = iterate.kappa;

    // Per-segment quantities; segment j spans nodes (j-1, j).
    std::vector<double> L(static_cast<size_t>(n));
    std::vector<Vec2> nrm(static_cast<size_t>(n));
    std::vector<Vec2> dXi(static_cast<size_t>(n));  // d_s X^{m+1,i}
    std::vector<Vec2> dXm(static_cast<size_t>(n));  // d_s X^m
    std::vector<Vec2> D(static_cast<size_t>(n));    // d_s (X^{m+1,i} - X^m)
    std::vector<double> aw(static_cast<size_t>(n)); // mixed weight ((K_{j-1})^2 + K_j^2)/4
    for (int j = 0; j < n; ++j) {
        const int jm = (j + n - 1) % n;
        L[j] = frames[j].length;
        nrm[j] = frames[j].normal;
        dXi[j] = (Xi[j] - Xi[jm]) / L[j];
        dXm[j] = (Xm[j] - Xm[jm]) / L[j];
        D[j] = dXi[j] - dXm[j];
        aw[j] = 0.25 * (Ki[jm] * Ki[jm] + Ki[j] * Ki[j]);
    }

    const int dim = 4 * n;
    NewtonSystem sys;
    sys.matrix.resize(dim, dim);
    sys.rhs = Eigen::VectorXd::Zero(dim);

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<size_t>(30 * n));
    auto X = [](int node, int comp) { return NewtonSystem::x_index(node, comp); };
    auto Vi = [n](int node) { return NewtonSystem::v_index(node, n); };
    auto Kd = [n](int node) { return NewtonSystem::kappa_index(node, n); };

    for (int k = 0; k < n; ++k) {
        const int kp = (k + 1) % n;
        const int km = (k + n - 1) % n;
        const double Mk = 0.5 * (L[k] + L[kp]);
        const Vec2 wn = 0.5 * (L[k] * nrm[k] + L[kp] * nrm[kp]);  // lumped n^m weight at node k

        // --- Velocity equation row k:
        //   (n^m . (X - X^m)/tau, phi_k) = (V, phi_k)
        {
            const int row = k;
            trip.emplace_back(row, X(k, 0), wn.x() / tau);
            trip.emplace_back(row, X(k, 1), wn.y() / tau);
            trip.emplace_back(row, Vi(k), -Mk);
            sys.rhs[row] = wn.dot(Xm[k]) / tau;
        }

        // --- Curvature-gradient equation rows n+2k, n+2k+1 (vector hats):
        //   (V n^m, w) = (-d_s K n^m + (1/2)(K^i)^2 d_s X, d_s w)
        //                + ((K - K^i) K^i d_s X^i, d_s w)
        // The minus sign on the d_s K term follows the implicit scheme and its
        // stability proof; the Jacobian is exact at the root either way.
        for (int e = 0; e < 2; ++e) {
            const int row = n + 2 * k + e;
            trip.emplace_back(row, Vi(k), wn[e]);
            // T1: -(d_s K) n^m tested against d_s(hat_k e).
            //   j=k:   -((K_k - K_{k-1})/L_k)   (n_k)_e
            //   j=k+1: +((K_{k+1} - K_k)/L_{k+1}) (n_{k+1})_e
            const double c1 = -nrm[k][e] / L[k] - nrm[kp][e] / L[kp];   // K_k coefficient
            trip.emplace_back(row, Kd(k), -c1);                          // move RHS to LHS
            trip.emplace_back(row, Kd(km), -(nrm[k][e] / L[k]));
            trip.emplace_back(row, Kd(kp), -(nrm[kp][e] / L[kp]));
            // T2: (1/2)(K^i)^2 d_s X^{i+1}, mixed-lumped weight aw per segment.
            //   j=k:   (aw_k / L_k)(X_k - X_{k-1})_e
            //   j=k+1: -(aw_{k+1}/L_{k+1})(X_{k+1} - X_k)_e
            trip.emplace_back(row, X(k, e), -(aw[k] / L[k] + aw[kp] / L[kp]));
            trip.emplace_back(row, X(km, e), aw[k] / L[k]);
            trip.emplace_back(row, X(kp, e), aw[kp] / L[kp]);
            // T3: (K^{i+1} - K^i) K^i d_s X^i tested against d_s(hat_k e); the
            // nodal factor b_j = K^i_j K^{i+1}_j - (K^i_j)^2 splits into an
            // unknown part and a constant part.
            //   j=k:   (1/2)(b_{k-1} + b_k) (dXi_k)_e
            //   j=k+1: -(1/2)(b_k + b_{k+1}) (dXi_{k+1})_e
            const double gk = 0.5 * dXi[k][e];
            const double gkp = -0.5 * dXi[kp][e];
            trip.emplace_back(row, Kd(km), -(gk * Ki[km]));
            trip.emplace_back(row, Kd(k), -((gk + gkp) * Ki[k]));
            trip.emplace_back(row, Kd(kp), -(gkp * Ki[kp]));
            sys.rhs[row] = gk * (-Ki[km] * Ki[km] - Ki[k] * Ki[k]) +
                           gkp * (-Ki[k] * Ki[k] - Ki[kp] * Ki[kp]);
        }

        // --- Curvature evolution row 3n+k:
        //   (K - K^m, psi_k) = (n^m . d_s(X - X^m), d_s psi_k)
        //     - (d_s X . d_s(X^i - X^m) K^i, psi_k)
        //     - (d_s X^i . d_s(X - X^i) K^i, psi_k)
        //     - (d_s X^i . d_s(X^i - X^m) (K - K^i), psi_k)
        {
            const int row = 3 * n + k;
            double rhs = Mk * Km[k];
            trip.emplace_back(row, Kd(k), Mk);
            // term 1, both segment-constant:
            //   j=k:   (n_k . (X_k - X_{k-1}))/L_k - n_k . dXm_k
            //   j=k+1: -(n_{kp}.(X_{kp} - X_k))/L_{kp} + n_{kp} . dXm_{kp}
            for (int e = 0; e < 2; ++e) {
                trip.emplace_back(row, X(k, e), -(nrm[k][e] / L[k] + nrm[kp][e] / L[kp]));
                trip.emplace_back(row, X(km, e), nrm[k][e] / L[k]);
                trip.emplace_back(row, X(kp, e), nrm[kp][e] / L[kp]);
            }
            rhs += -nrm[k].dot(dXm[k]) + nrm[kp].dot(dXm[kp]);
            // term 2: -(1/2) K^i_k [ (X_k - X_{k-1}) . D_k + (X_{kp} - X_k) . D_{kp} ]
            for (int e = 0; e < 2; ++e) {
                trip.emplace_back(row, X(k, e), 0.5 * Ki[k] * (D[k][e] - D[kp][e]));
                trip.emplace_back(row, X(km, e), -0.5 * Ki[k] * D[k][e]);
                trip.emplace_back(row, X(kp, e), 0.5 * Ki[k] * D[kp][e]);
            }
            // term 3: -(1/2) K^i_k [ E_k . (dX_k^{new} L_k - dXi_k L_k) + ... ],
            // with E_j = dXi_j; the X^i part is constant.
            for (int e = 0; e < 2; ++e) {
                trip.emplace_back(row, X(k, e), 0.5 * Ki[k] * (dXi[k][e] - dXi[kp][e]));
                trip.emplace_back(row, X(km, e), -0.5 * Ki[k] * dXi[k][e]);
                trip.emplace_back(row, X(kp, e), 0.5 * Ki[k] * dXi[kp][e]);
            }
            rhs += 0.5 * Ki[k] * (L[k] * dXi[k].squaredNorm() + L[kp] * dXi[kp].squaredNorm());
            // term 4: -(1/2)(L_k g_k + L_{kp} g_{kp})(K_k - K^i_k), g_j = dXi_j . D_j.
            const double g4 = 0.5 * (L[k] * dXi[k].dot(D[k]) + L[kp] * dXi[kp].dot(D[kp]));
            trip.emplace_back(row, Kd(k), g4);
            rhs += g4 * Ki[k];
            sys.rhs[row] = rhs;
        }
    }

    sys.matrix.setFromTriplets(trip.begin(), trip.end());
    sys.matrix.makeCompressed();
    return sys;
}

double nonlinear_residual(const FlowState& prev, const FlowState& candidate, double tau) {
    if (!(tau > 0.0) || !std::isfinite(tau)) throw NonFiniteInput("tau must be finite and positive");
    prev.validate();
    candidate.validate();
    const int n = prev.size();
    if (candidate.size() != n) throw FieldLengthMismatch("prev/candidate size mismatch");

    const auto frames = segment_frames(prev.curve);
    const auto& Xm = prev.curve.nodes();
    const auto& Km = prev.kappa;
    const auto& Xc = candidate.curve.nodes();
    const auto& Kc = candidate.kappa;
    const auto& Vc = candidate.V;

    std::vector<double> L(static_cast<size_t>(n));
    std::vector<Vec2> nrm(static_cast<size_t>(n));
    std::vector<Vec2> dXc(static_cast<size_t>(n)), dXm(static_cast<size_t>(n));
    std::vector<double> dKc(static_cast<size_t>(n)), ac(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) {
        const int jm = (j + n - 1) % n;
        L[j] = frames[j].length;
        nrm[j] = frames[j].normal;
        dXc[j] = (Xc[j] - Xc[jm]) / L[j];
        dXm[j] = (Xm[j] - Xm[jm]) / L[j];
        dKc[j] = (Kc[j] - Kc[jm]) / L[j];
        ac[j] = 0.25 * (Kc[jm] * Kc[jm] + Kc[j] * Kc[j]);
    }

    double worst = 0.0;
    for (int k = 0; k < n; ++k) {
        const int kp = (k + 1) % n;
        const double Mk = 0.5 * (L[k] + L[kp]);
        const Vec2 wn = 0.5 * (L[k] * nrm[k] + L[kp] * nrm[kp]);

        const double defA = wn.dot(Xc[k] - Xm[k]) / tau - Mk * Vc[k];
        worst = std::max(worst, std::abs(defA));

        for (int e = 0; e < 2; ++e) {
            double rhsB = -dKc[k] * nrm[k][e] + dKc[kp] * nrm[kp][e];
            rhsB += ac[k] * dXc[k][e] - ac[kp] * dXc[kp][e];
            const double defB = wn[e] * Vc[k] - rhsB;
            worst = std::max(worst, std::abs(defB));
        }

        double rhsC = nrm[k].dot(dXc[k] - dXm[k]) - nrm[kp].dot(dXc[kp] - dXm[kp]);
        rhsC -= 0.5 * Kc[k] * (L[k] * dXc[k].dot(dXc[k] - dXm[k]) +
                               L[kp] * dXc[kp].dot(dXc[kp] - dXm[kp]));
        const double defC = Mk * (Kc[k] - Km[k]) - rhsC;
        worst = std::max(worst, std::abs(defC));
    }
    return worst;
}

void dump_matrix_market(const NewtonSystem& system, const std::string& matrix_path,
                        const std::string& rhs_path) {
    std::ofstream mat(matrix_path);
    if (!mat) throw std::runtime_error("cannot open for writing: " + matrix_path);
    mat << "%%MatrixMarket matrix coordinate real general\n";
    mat << system.matrix.rows() << " " << system.matrix.cols() << " " << system.matrix.nonZeros()
        << "\n";
    char buf[64];
    for (int o = 0; o < system.matrix.outerSize(); ++o) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(system.matrix, o); it; ++it) {
            std::snprintf(buf, sizeof(buf), "%ld %ld %.17g\n", static_cast<long>(it.row() + 1),
                          static_cast<long>(it.col() + 1), it.value());
            mat << buf;
        }
    }
    std::ofstream rhs(rhs_path);
    if (!rhs) throw std::runtime_error("cannot open for writing: " + rhs_path);
    for (Eigen::Index i = 0; i < system.rhs.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g\n", system.rhs[i]);
        rhs << buf;
    }
}

Eigen::VectorXd pack_state(const FlowState& state) {
    const int n = state.size();
    Eigen::VectorXd z(4 * n);
    for (int j = 0; j < n; ++j) {
        z[2 * j] = state.curve.node(j).x();
        z[2 * j + 1] = state.curve.node(j).y();
        z[2 * n + j] = state.V[static_cast<size_t>(j)];
        z[3 * n + j] = state.kappa[static_cast<size_t>(j)];
    }
    return z;
}

FlowState unpack_state(const Eigen::VectorXd& z, int n) {
    if (z.size() != 4 * n) throw FieldLengthMismatch("unpack_state: vector size != 4N");
    std::vector<Vec2> nodes(static_cast<size_t>(n));
    NodalScalarField V(static_cast<size_t>(n)), kappa(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) {
        nodes[static_cast<size_t>(j)] = Vec2(z[2 * j], z[2 * j + 1]);
        V[static_cast<size_t>(j)] = z[2 * n + j];
        kappa[static_cast<size_t>(j)] = z[3 * n + j];
    }
    return FlowState{PolygonalCurve(std::move(nodes)), std::move(V), std::move(kappa)};
}

}  // namespace willmore
