#include "gamma3/fundamental.hpp"

#include <Eigen/QR>

namespace gamma3 {

namespace {

void require_contraction(const OperatorTriple& T) {
    const double norm = op_norm(T.P);
    if (norm > 1 + 1e-8) throw Error(ErrorCode::NotContraction, "||P|| = " + std::to_string(norm));
}

double pair_scale(const ComplexMatrix& X1, const ComplexMatrix& X2) {
    return 1 + std::max(op_norm(X1), op_norm(X2));
}

}  // namespace

void fill_residuals(const OperatorTriple& T, const DefectSpace& dp, FundamentalPair& pair) {
    const ComplexMatrix a1 = dp.lift(pair.A1), a2 = dp.lift(pair.A2);
    const ComplexMatrix& D = dp.D;
    pair.residual_defining = std::max(op_norm(ComplexMatrix(D * a1 * D - (T.S1 - T.S2.adjoint() * T.P))),
                                      op_norm(ComplexMatrix(D * a2 * D - (T.S2 - T.S1.adjoint() * T.P))));
    pair.residual_tetra = std::max(op_norm(ComplexMatrix(D * T.S1 - (a1 * D + a2.adjoint() * D * T.P))),
                                   op_norm(ComplexMatrix(D * T.S2 - (a2 * D + a1.adjoint() * D * T.P))));
}

FundamentalPair solve_defining(const OperatorTriple& T, const DefectSpace& dp, double tol) {
    require_contraction(T);
    const ComplexMatrix& Q = dp.basis;
    // D^+ restricted to the range of D, in basis coordinates.
    const RealVector inv = dp.values.cwiseInverse();
    auto solve = [&](const ComplexMatrix& rhs) {
        return ComplexMatrix(inv.asDiagonal() * (Q.adjoint() * rhs * Q) * inv.asDiagonal());
    };
    FundamentalPair pair;
    pair.A1 = solve(T.S1 - T.S2.adjoint() * T.P);
    pair.A2 = solve(T.S2 - T.S1.adjoint() * T.P);
    fill_residuals(T, dp, pair);
    if (pair.residual_defining > tol * T.scale())
        throw Error(ErrorCode::InconsistentSystem,
                    "solve_defining: right-hand side leaves the defect space (residual " +
                        std::to_string(pair.residual_defining) + ")");
    return pair;
}

FundamentalPair solve_defining(const OperatorTriple& T) {
    require_contraction(T);
    return solve_defining(T, defect(T.P));
}

FundamentalPair solve_tetra(const OperatorTriple& T, const DefectSpace& dp, double tol) {
    require_contraction(T);
    const Index d = dp.dim, n = T.dim();
    FundamentalPair pair;
    pair.A1 = ComplexMatrix::Zero(d, d);
    pair.A2 = ComplexMatrix::Zero(d, d);
    if (d == 0) {
        fill_residuals(T, dp, pair);
        return pair;
    }

    // Both equations carry a left factor of the basis; in coordinates they read
    //   X1 C + X2* E = L S1,  X2 C + X1* E = L S2,
    // with L = values * basis*, C = L and E = L P.
    const ComplexMatrix L = dp.values.asDiagonal() * dp.basis.adjoint();
    const ComplexMatrix& C = L;
    const ComplexMatrix E = L * T.P;

    const Index unknowns = 4 * d * d;
    const Index block = d * n;
    Eigen::MatrixXd sys = Eigen::MatrixXd::Zero(4 * block, unknowns);
    auto store = [&](Index column, const ComplexMatrix& e1, const ComplexMatrix& e2) {
        for (Index c = 0; c < n; ++c)
            for (Index r = 0; r < d; ++r) {
                const Index k = c * d + r;
                sys(k, column) = e1(r, c).real();
                sys(block + k, column) = e1(r, c).imag();
                sys(2 * block + k, column) = e2(r, c).real();
                sys(3 * block + k, column) = e2(r, c).imag();
            }
    };

    ComplexMatrix e1(d, n), e2(d, n);
    for (int part = 0; part < 4; ++part) {
        const Complex coef = (part % 2 == 0) ? Complex(1, 0) : Complex(0, 1);
        const bool first = part < 2;
        for (Index c = 0; c < d; ++c)
            for (Index r = 0; r < d; ++r) {
                e1.setZero();
                e2.setZero();
                // X = coef * E_rc, so X C fills row r with C.row(c) and X* E fills row c with conj(coef) E.row(r).
                ComplexMatrix& direct = first ? e1 : e2;
                ComplexMatrix& conjugated = first ? e2 : e1;
                direct.row(r) += coef * C.row(c);
                conjugated.row(c) += std::conj(coef) * E.row(r);
                store(part * d * d + c * d + r, e1, e2);
            }
    }

    Eigen::VectorXd rhs(4 * block);
    const ComplexMatrix t1 = L * T.S1, t2 = L * T.S2;
    for (Index c = 0; c < n; ++c)
        for (Index r = 0; r < d; ++r) {
            const Index k = c * d + r;
            rhs(k) = t1(r, c).real();
            rhs(block + k) = t1(r, c).imag();
            rhs(2 * block + k) = t2(r, c).real();
            rhs(3 * block + k) = t2(r, c).imag();
        }

    const Eigen::VectorXd x = sys.completeOrthogonalDecomposition().solve(rhs);
    for (Index c = 0; c < d; ++c)
        for (Index r = 0; r < d; ++r) {
            const Index k = c * d + r;
            pair.A1(r, c) = Complex(x(k), x(d * d + k));
            pair.A2(r, c) = Complex(x(2 * d * d + k), x(3 * d * d + k));
        }
    fill_residuals(T, dp, pair);
    if (pair.residual_tetra > tol * T.scale())
        throw Error(ErrorCode::InconsistentSystem,
                    "solve_tetra: least-squares residual " + std::to_string(pair.residual_tetra));
    return pair;
}

FundamentalPair solve_tetra(const OperatorTriple& T) {
    require_contraction(T);
    return solve_tetra(T, defect(T.P));
}

TripleAnalysis analyze(const OperatorTriple& T, double tol) {
    require_contraction(T);
    TripleAnalysis an{T, defects(T.P), {}, {}};
    an.A = solve_defining(T, an.defects.p, tol);
    an.B = solve_defining(adjoint(T), an.defects.p_adjoint, tol);
    return an;
}

double IdentityReport::max_residual() const {
    double m = 0;
    for (const auto& [name, value] : residuals) {
        if (name == "gram_difference" && !gram_hypothesis) continue;
        m = std::max(m, value);
    }
    return m;
}

IdentityReport verify_identity_suite(const TripleAnalysis& an, double tol) {
    const auto& T = an.triple;
    const auto& dp = an.defects.p;
    const auto& dps = an.defects.p_adjoint;
    const ComplexMatrix& D = dp.D;
    const ComplexMatrix& Ds = dps.D;
    const ComplexMatrix& Q = dp.basis;
    const ComplexMatrix& Qs = dps.basis;
    const ComplexMatrix a1 = dp.lift(an.A.A1), a2 = dp.lift(an.A.A2);
    const ComplexMatrix b1 = dps.lift(an.B.A1), b2 = dps.lift(an.B.A2);
    const ComplexMatrix Ph = T.P.adjoint();

    IdentityReport r;
    r.pair_commutator = op_norm(commutator(an.A.A1, an.A.A2));
    r.gram_hypothesis = r.pair_commutator <= tol * pair_scale(an.A.A1, an.A.A2);

    auto res = [](const ComplexMatrix& m) { return op_norm(m); };
    r.residuals["gram_difference"] =
        res(T.S1.adjoint() * T.S1 - T.S2.adjoint() * T.S2 - D * (a1.adjoint() * a1 - a2.adjoint() * a2) * D);
    r.residuals["defect_left_1"] = res((D * a1 - T.S1 * D + Ds * b2 * T.P) * Q);
    r.residuals["defect_left_2"] = res((D * a2 - T.S2 * D + Ds * b1 * T.P) * Q);
    r.residuals["intertwine_p_1"] = res((T.P * a1 - b1.adjoint() * T.P) * Q);
    r.residuals["intertwine_p_2"] = res((T.P * a2 - b2.adjoint() * T.P) * Q);
    r.residuals["adjoint_defect_1"] =
        res((a1.adjoint() * D * Ds - a2 * Ph - D * Ds * b1 + Ph * b2.adjoint()) * Qs);
    r.residuals["adjoint_defect_2"] =
        res((a2.adjoint() * D * Ds - a1 * Ph - D * Ds * b2 + Ph * b1.adjoint()) * Qs);
    return r;
}

CommutatorTransferReport verify_commutator_transfer(const TripleAnalysis& an, double tol, double rank_tol) {
    CommutatorTransferReport r;
    const auto& A = an.A;
    const auto& B = an.B;
    const ComplexMatrix& P = an.triple.P;
    if (P.size() > 0) {
        Eigen::JacobiSVD<ComplexMatrix> svd(P);
        const auto& sv = svd.singularValues();
        r.sigma_min_p = sv(sv.size() - 1);
        r.p_invertible = r.sigma_min_p > rank_tol * sv(0);
    }
    const double a_tol = tol * pair_scale(A.A1, A.A2) * pair_scale(A.A1, A.A2);
    const double b_tol = tol * pair_scale(B.A1, B.A2) * pair_scale(B.A1, B.A2);
    r.a_commutator = op_norm(commutator(A.A1, A.A2));
    r.b_commutator = op_norm(commutator(B.A1, B.A2));
    r.self_commutator_a = op_norm(ComplexMatrix(self_commutator(A.A1) - self_commutator(A.A2)));
    r.self_commutator_b = op_norm(ComplexMatrix(self_commutator(B.A1) - self_commutator(B.A2)));
    r.hypothesis_met = r.p_invertible && r.a_commutator <= a_tol;
    if (r.p_invertible) r.equivalence_holds = (r.a_commutator <= a_tol) == (r.b_commutator <= b_tol);
    return r;
}

}  // namespace gamma3
