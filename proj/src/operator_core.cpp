#include "gamma3/operator_core.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>
#include <vector>

namespace gamma3 {

double OperatorTriple::scale() const {
    return 1 + std::max({op_norm(S1), op_norm(S2), op_norm(P)});
}

double commutator_residual(const ComplexMatrix& S1, const ComplexMatrix& S2, const ComplexMatrix& P) {
    return std::max({op_norm(commutator(S1, S2)), op_norm(commutator(S1, P)), op_norm(commutator(S2, P))});
}

OperatorTriple make_triple(ComplexMatrix S1, ComplexMatrix S2, ComplexMatrix P, double tol) {
    const Index n = P.rows();
    if (P.cols() != n || S1.rows() != n || S1.cols() != n || S2.rows() != n || S2.cols() != n)
        throw Error(ErrorCode::DimensionMismatch, "make_triple: S1, S2, P must be square of equal size");
    require_finite(S1, "make_triple: S1");
    require_finite(S2, "make_triple: S2");
    require_finite(P, "make_triple: P");
    OperatorTriple T{std::move(S1), std::move(S2), std::move(P), 0};
    T.commutator_residual = commutator_residual(T.S1, T.S2, T.P);
    if (T.commutator_residual > tol * T.scale())
        throw Error(ErrorCode::NotCommuting,
                    "make_triple: commutator residual " + std::to_string(T.commutator_residual));
    return T;
}

OperatorTriple adjoint(const OperatorTriple& T) {
    return {T.S1.adjoint(), T.S2.adjoint(), T.P.adjoint(), T.commutator_residual};
}

OperatorTriple conjugate(const OperatorTriple& T, const ComplexMatrix& U) {
    OperatorTriple out{U.adjoint() * T.S1 * U, U.adjoint() * T.S2 * U, U.adjoint() * T.P * U, 0};
    out.commutator_residual = commutator_residual(out.S1, out.S2, out.P);
    return out;
}

DefectSpace defect(const ComplexMatrix& P, bool adjoint, double rank_tol, double gram_floor) {
    if (P.rows() != P.cols()) throw Error(ErrorCode::DimensionMismatch, "defect: P not square");
    const Index n = P.rows();
    const double norm = op_norm(P);
    if (norm > 1 + 1e-8) throw Error(ErrorCode::NotContraction, "defect: ||P|| = " + std::to_string(norm));

    // Form the Gram product from materialized operands so that defect(P, true) and
    // defect(P*, false) see bit-identical input.
    const ComplexMatrix Ph = P.adjoint();
    ComplexMatrix gram = adjoint ? ComplexMatrix(P * Ph) : ComplexMatrix(Ph * P);
    ComplexMatrix G = ComplexMatrix::Identity(n, n) - gram;
    G = (G + G.adjoint()).eval() * 0.5;
    auto eig = hermitian_eig(G);

    const double lmax = n > 0 ? std::max(eig.eigenvalues.maxCoeff(), 0.0) : 0.0;
    const double floor = gram_floor * (1 + norm * norm);
    const double cutoff = rank_tol * std::sqrt(lmax);
    std::vector<Index> keep;
    for (Index k = n - 1; k >= 0; --k) {
        const double lam = eig.eigenvalues(k);
        if (lam <= floor) continue;
        if (std::sqrt(lam) <= cutoff) continue;
        keep.push_back(k);
    }

    DefectSpace ds;
    ds.dim = static_cast<Index>(keep.size());
    ds.basis.resize(n, ds.dim);
    ds.values.resize(ds.dim);
    for (Index j = 0; j < ds.dim; ++j) {
        const Index k = keep[static_cast<size_t>(j)];
        ds.basis.col(j) = eig.eigenvectors.col(k);
        ds.values(j) = std::sqrt(eig.eigenvalues(k));
    }
    ds.D = ds.basis * ds.values.asDiagonal() * ds.basis.adjoint();
    if (ds.dim == 0) ds.D = ComplexMatrix::Zero(n, n);
    return ds;
}

Defects defects(const ComplexMatrix& P, double rank_tol) {
    return {defect(P, false, rank_tol), defect(P, true, rank_tol)};
}

namespace {

// Swaps diagonal entries k, k+1 of the upper-triangular R (R = U* M U), updating U.
void swap_schur(ComplexMatrix& R, ComplexMatrix& U, Index k) {
    const Complex b = R(k, k + 1), d = R(k + 1, k + 1) - R(k, k);
    const double r = std::hypot(std::abs(b), std::abs(d));
    if (r == 0) return;
    // Columns (x, x_perp) with x the eigenvector of the trailing eigenvalue.
    Eigen::Matrix2cd G;
    G << b / r, -std::conj(d) / r, d / r, std::conj(b) / r;
    R.middleCols(k, 2) = R.middleCols(k, 2) * G;
    R.middleRows(k, 2) = G.adjoint() * R.middleRows(k, 2);
    U.middleCols(k, 2) = U.middleCols(k, 2) * G;
    R(k + 1, k) = 0;
}

// Single-linkage clusters of the diagonal of R at distance tol; ids in order of first appearance.
std::vector<int> cluster_ids(const ComplexMatrix& R, double tol) {
    const Index n = R.rows();
    std::vector<int> id(n, -1);
    int next = 0;
    for (Index i = 0; i < n; ++i) {
        if (id[i] >= 0) continue;
        id[i] = next;
        for (std::vector<Index> stack{i}; !stack.empty();) {
            const Index j = stack.back();
            stack.pop_back();
            for (Index k = 0; k < n; ++k)
                if (id[k] < 0 && std::abs(R(k, k) - R(j, j)) <= tol) {
                    id[k] = next;
                    stack.push_back(k);
                }
        }
        ++next;
    }
    return id;
}

}  // namespace

// Defective (Jordan-like) clusters scatter under Schur by ~eps^(1/m), so the
// other operators only triangularize blockwise: clusters are made contiguous by
// Givens swaps and each cluster contributes its mean diagonal (a stable trace).
// The cluster radius widens only until the off-block residual is small.
JointSpectrum joint_spectrum(const OperatorTriple& T, std::uint64_t seed) {
    const Index n = T.dim();
    JointSpectrum js;
    if (n == 0) return js;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    const double scale = T.scale();

    double best_residual = std::numeric_limits<double>::infinity();
    for (int attempt = 0; attempt < 5 && best_residual > 1e-7 * scale; ++attempt) {
        const Complex a(g(rng), g(rng)), b(g(rng), g(rng)), c(g(rng), g(rng));
        const ComplexMatrix M = a * T.S1 + b * T.S2 + c * T.P;
        Eigen::ComplexSchur<ComplexMatrix> schur(M);
        const double mscale = 1 + op_norm(M);
        for (double radius = 1e-10; radius <= 0.11; radius *= 10) {
            ComplexMatrix R = schur.matrixT(), U = schur.matrixU();
            std::vector<int> id = cluster_ids(R, radius * mscale);
            for (bool moved = true; moved;) {
                moved = false;
                for (Index k = 0; k + 1 < n; ++k)
                    if (id[k] > id[k + 1]) {
                        swap_schur(R, U, k);
                        std::swap(id[k], id[k + 1]);
                        moved = true;
                    }
            }
            const ComplexMatrix t[3] = {U.adjoint() * T.S1 * U, U.adjoint() * T.S2 * U, U.adjoint() * T.P * U};
            double residual = 0;
            for (const auto& ti : t) {
                ComplexMatrix off = ti.triangularView<Eigen::StrictlyLower>();
                for (Index i = 0; i < n; ++i)
                    for (Index j = 0; j < i; ++j)
                        if (id[i] == id[j]) off(i, j) = 0;
                residual = std::max(residual, op_norm(off));
            }
            if (residual < best_residual) {
                best_residual = residual;
                js.points.assign(n, {});
                for (Index i = 0; i < n;) {
                    Index j = i;
                    while (j < n && id[j] == id[i]) ++j;
                    Point3 mean{0, 0, 0};
                    for (Index k = i; k < j; ++k) {
                        mean.s1 += t[0](k, k);
                        mean.s2 += t[1](k, k);
                        mean.p += t[2](k, k);
                    }
                    const double m = double(j - i);
                    for (Index k = i; k < j; ++k) js.points[k] = {mean.s1 / m, mean.s2 / m, mean.p / m};
                    i = j;
                }
                js.triangularization_residual = residual;
            }
            if (residual <= 1e-7 * scale) break;
        }
    }
    if (js.triangularization_residual > 1e-6 * scale)
        throw Error(ErrorCode::GenericityFailure,
                    "joint_spectrum: residual " + std::to_string(js.triangularization_residual));
    return js;
}

AlmostNormalCheck is_almost_normal(const ComplexMatrix& A1, const ComplexMatrix& A2, double tol) {
    if (A1.rows() != A2.rows() || A1.cols() != A2.cols() || A1.rows() != A1.cols())
        throw Error(ErrorCode::DimensionMismatch, "is_almost_normal: shapes differ");
    AlmostNormalCheck c;
    c.commutator = op_norm(commutator(A1, A2));
    c.self_commutator_gap = op_norm(ComplexMatrix(self_commutator(A1) - self_commutator(A2)));
    c.holds = c.commutator <= tol && c.self_commutator_gap <= tol;
    return c;
}

std::string_view to_string(CertifierVerdict v) {
    return v == CertifierVerdict::Refuted ? "Refuted" : "PassedSampled";
}

std::vector<std::string> CertifierReport::failed_checks() const {
    std::vector<std::string> out;
    for (const auto& [name, check] : necessary_checks)
        if (!check.passed) out.push_back(name);
    return out;
}

IsometryReport is_gamma3_isometry(const OperatorTriple& T, double tol) {
    const Index n = T.dim();
    const ComplexMatrix id = ComplexMatrix::Identity(n, n);
    IsometryReport r;
    r.isometry_residual = op_norm(ComplexMatrix(T.P.adjoint() * T.P - id));
    r.coisometry_residual = op_norm(ComplexMatrix(T.P * T.P.adjoint() - id));
    r.defining_residual = std::max(op_norm(ComplexMatrix(T.S1 - T.S2.adjoint() * T.P)),
                                   op_norm(ComplexMatrix(T.S2 - T.S1.adjoint() * T.P)));
    r.unitary_p = r.isometry_residual <= tol && r.coisometry_residual <= tol;
    if (!r.unitary_p) return r;
    // In finite dimensions an isometric P is unitary, so the triple must be a
    // boundary-spectrum triple itself.
    const auto js = joint_spectrum(T);
    for (const auto& x : js.points) r.max_distinguished_gap = std::max(r.max_distinguished_gap, distinguished_gap(x));
    r.holds = r.max_distinguished_gap <= tol && r.defining_residual <= tol * T.scale() &&
              op_norm(T.S2) <= 3 + tol;
    return r;
}

}  // namespace gamma3
