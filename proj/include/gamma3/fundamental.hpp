#pragma once

// Fundamental operator pairs. A pair (A1, A2) is stored in coordinates of the
// orthonormal basis of the defect space of P; `DefectSpace::lift` recovers the
// ambient-space operator.
//
// Two independent routes compute the same pair:
//   solve_defining: S1 - S2* P = D A1 D and S2 - S1* P = D A2 D, solved with the
//                   pseudo-inverse of D on its range;
//   solve_tetra:    D S1 = A1 D + A2* D P and D S2 = A2 D + A1* D P, a real-linear
//                   system (it involves A*) solved by least squares.

#include "gamma3/operator_core.hpp"

#include <map>
#include <string>

namespace gamma3 {

struct FundamentalPair {
    ComplexMatrix A1, A2;
    double residual_defining = 0;  // max_i ||D Â_i D - (S_i - S_j* P)||
    double residual_tetra = 0;     // max_i ||D S_i - (Â_i D + Â_j* D P)||

    Index dim() const { return A1.rows(); }
};

/// Residuals of both defining systems for a candidate pair.
void fill_residuals(const OperatorTriple& T, const DefectSpace& dp, FundamentalPair& pair);

FundamentalPair solve_defining(const OperatorTriple& T, const DefectSpace& dp, double tol = 1e-6);
FundamentalPair solve_defining(const OperatorTriple& T);

FundamentalPair solve_tetra(const OperatorTriple& T, const DefectSpace& dp, double tol = 1e-6);
FundamentalPair solve_tetra(const OperatorTriple& T);

/// Everything the verifiers need about a triple: both defect spaces, the
/// fundamental pair of T (on D_P) and of its adjoint (on D_{P*}).
struct TripleAnalysis {
    OperatorTriple triple;
    Defects defects;
    FundamentalPair A;
    FundamentalPair B;
};

TripleAnalysis analyze(const OperatorTriple& T, double tol = 1e-6);

/// Named residuals of the algebraic identities linking T, its pair A and the
/// adjoint pair B:
///   gram_difference        S1*S1 - S2*S2 = D (A1*A1 - A2*A2) D  (only meaningful when [A1, A2] = 0)
///   defect_left_1/2        D A1 = S1 D - D_* B2 P and D A2 = S2 D - D_* B1 P on D_P
///   intertwine_p_1/2       P A_i = B_i* P on D_P
///   adjoint_defect_1/2     A1* D D_* - A2 P* = D D_* B1 - P* B2* on D_{P*} (and 1 <-> 2)
struct IdentityReport {
    std::map<std::string, double> residuals;
    double pair_commutator = 0;       // ||[A1, A2]||
    bool gram_hypothesis = false;     // pair_commutator <= tol, so gram_difference applies

    double max_residual() const;
};

IdentityReport verify_identity_suite(const TripleAnalysis& an, double tol = tol::identity);

/// Commutator identities that hold when [A1, A2] = 0 and P has dense range:
///   (i)   [A1, A1*] = [A2, A2*]
///   (ii)  [B1, B2] = 0
///   (iii) [B1, B1*] = [B2, B2*]
/// plus the invertible-P equivalence [A1, A2] = 0 <=> [B1, B2] = 0.
struct CommutatorTransferReport {
    bool hypothesis_met = false;
    double sigma_min_p = 0;
    double a_commutator = 0;
    double b_commutator = 0;
    double self_commutator_a = 0;  // (i)
    double self_commutator_b = 0;  // (iii)
    bool p_invertible = false;
    bool equivalence_holds = true;  // checked when p_invertible
};

CommutatorTransferReport verify_commutator_transfer(const TripleAnalysis& an, double tol = tol::identity,
                                                   double rank_tol = tol::rank);

}  // namespace gamma3
