#pragma once

#include "gamma3/geometry.hpp"
#include "gamma3/numerics.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace gamma3 {

/// Commuting triple (S1, S2, P) of square matrices of equal size.
struct OperatorTriple {
    ComplexMatrix S1, S2, P;
    double commutator_residual = 0;

    Index dim() const { return P.rows(); }
    /// 1 + max of the three operator norms; the reference scale for residuals.
    double scale() const;
};

double commutator_residual(const ComplexMatrix& S1, const ComplexMatrix& S2, const ComplexMatrix& P);

/// Validates shapes and commutation; throws NotCommuting when the largest pairwise
/// commutator exceeds tol * (1 + max norms).
OperatorTriple make_triple(ComplexMatrix S1, ComplexMatrix S2, ComplexMatrix P, double tol = tol::commute);

/// (S1*, S2*, P*).
OperatorTriple adjoint(const OperatorTriple& T);

/// Unitary conjugation U* T U.
OperatorTriple conjugate(const OperatorTriple& T, const ComplexMatrix& U);

/// D = (I - P*P)^{1/2} (or (I - PP*)^{1/2} for the adjoint defect) together with an
/// orthonormal basis of its range. `basis` holds eigenvectors of D, so
/// D * basis = basis * values.asDiagonal() and D = basis * values * basis*.
struct DefectSpace {
    ComplexMatrix D;
    ComplexMatrix basis;  // n x dim
    RealVector values;    // nonzero eigenvalues of D, matching basis columns
    Index dim = 0;

    /// basis * X * basis*: an operator on the defect space lifted to the ambient space.
    ComplexMatrix lift(const ComplexMatrix& X) const { return basis * X * basis.adjoint(); }
    /// basis* * M * basis.
    ComplexMatrix compress(const ComplexMatrix& M) const { return basis.adjoint() * M * basis; }
};

/// Eigenvalues of I - P*P below `gram_floor` are treated as exact zeros (they sit
/// at the roundoff level of forming P*P); the remaining defect values are cut
/// relative to the largest at rank_tol.
DefectSpace defect(const ComplexMatrix& P, bool adjoint = false, double rank_tol = tol::rank,
                   double gram_floor = 1e-12);

/// Both defect spaces of a contraction, computed once so every consumer shares the
/// same bases.
struct Defects {
    DefectSpace p;          // D_P on the closure of Ran D_P
    DefectSpace p_adjoint;  // D_{P*}

    Defects swapped() const { return {p_adjoint, p}; }
};

Defects defects(const ComplexMatrix& P, double rank_tol = tol::rank);

struct JointSpectrum {
    std::vector<Point3> points;
    double triangularization_residual = 0;
};

/// Joint eigenvalues from a unitary triangularization of a random combination
/// a S1 + b S2 + c P. Retries up to five combinations; GenericityFailure if the
/// below-diagonal mass stays above 1e-6 * scale.
JointSpectrum joint_spectrum(const OperatorTriple& T, std::uint64_t seed = 0x5eed);

struct AlmostNormalCheck {
    bool holds = false;
    double commutator = 0;              // ||[A1, A2]||
    double self_commutator_gap = 0;     // ||[A1*, A1] - [A2*, A2]||
};

AlmostNormalCheck is_almost_normal(const ComplexMatrix& A1, const ComplexMatrix& A2, double tol = tol::identity);

enum class CertifierVerdict { Refuted, PassedSampled };
std::string_view to_string(CertifierVerdict v);

struct NamedCheck {
    bool passed = false;
    double margin = 0;  // positive when passed
};

struct CertifierReport {
    std::map<std::string, NamedCheck> necessary_checks;
    int polynomial_trials = 0;
    double worst_ratio = 0;  // max over trials of ||f(S1,S2,P)|| / max |f| on the boundary grid
    CertifierVerdict verdict = CertifierVerdict::Refuted;

    std::vector<std::string> failed_checks() const;
};

struct CertifyOptions {
    int max_degree = 4;
    int trials = 200;
    int boundary_grid = 24;
    std::uint64_t seed = 1;
};

/// Necessary checks (norm bounds, joint spectrum in the closed set, solvable
/// fundamental equations) followed by a randomized polynomial test against the
/// distinguished boundary. Refuted is conclusive; PassedSampled is evidence.
CertifierReport certify_gamma3_contraction(const OperatorTriple& T, const CertifyOptions& opts = {});

struct IsometryReport {
    bool holds = false;
    double isometry_residual = 0;   // ||P*P - I||
    double coisometry_residual = 0; // ||PP* - I||
    double defining_residual = 0;   // max(||S1 - S2* P||, ||S2 - S1* P||)
    double max_distinguished_gap = 0;
    bool unitary_p = false;
};

IsometryReport is_gamma3_isometry(const OperatorTriple& T, double tol = tol::identity);

}  // namespace gamma3
