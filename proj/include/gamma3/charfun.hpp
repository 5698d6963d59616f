#pragma once

// Characteristic functions and the unitary-invariance machinery built on them.
//
// Theta_P(z) = -P + z D_{P*} (I - z P*)^{-1} D_P maps D_P -> D_{P*}; values are
// returned in the defect bases of a `Defects` bundle (columns in the D_P basis,
// rows in the D_{P*} basis). Theta_{P*} uses `Defects::swapped()`.

#include "gamma3/fundamental.hpp"

#include <optional>

namespace gamma3 {

struct CharFnSample {
    Complex z;
    ComplexMatrix Theta;  // dim(D_{P*}) x dim(D_P)
};

ComplexMatrix theta(const ComplexMatrix& P, const Defects& d, Complex z);
CharFnSample theta(const ComplexMatrix& P, Complex z);

/// 16 points on |z| = 0.5 and 16 on |z| = 0.9 with seeded angles.
std::vector<Complex> standard_z_samples(std::uint64_t seed = 0x7e7a);

struct IntertwiningReport {
    std::map<std::string, double> residuals;  // max over the z samples
    double max_residual() const;
};

/// With A the pair of T and B the pair of T*:
///   adjoint_theta_1: (A1* + A2 z) Theta_{P*}(z) = Theta_{P*}(z) (B1 + B2* z)
///   adjoint_theta_2: (A2* + A1 z) Theta_{P*}(z) = Theta_{P*}(z) (B2 + B1* z)
IntertwiningReport verify_adjoint_intertwining(const TripleAnalysis& an, const std::vector<Complex>& zs);

///   theta_1: (B1* + B2 z) Theta_P(z) = Theta_P(z) (A1 + A2* z)
///   theta_2: (B2* + B1 z) Theta_P(z) = Theta_P(z) (A2 + A1* z)
IntertwiningReport verify_theta_intertwining(const TripleAnalysis& an, const std::vector<Complex>& zs);

/// Unitaries u: D_P -> D_{P'} and u_star: D_{P*} -> D_{P'*} (basis coordinates)
/// with u_star Theta_P(z) = Theta_{P'}(z) u.
struct CoincidenceCertificate {
    ComplexMatrix u, u_star;
    double max_residual = 0;
};

struct CoincidenceCheck {
    bool holds = false;
    double residual = 0;          // max_z ||u_star Theta_P(z) - Theta_{P'}(z) u||
    double unitarity_defect = 0;  // max of ||u*u - I||, ||u_star* u_star - I||
};

CoincidenceCheck check_coincidence(const ComplexMatrix& P, const ComplexMatrix& P2, const CoincidenceCertificate& cert,
                                   const std::vector<Complex>& zs, double tol = 1e-7);
CoincidenceCheck check_coincidence(const Defects& d, const ComplexMatrix& P, const Defects& d2,
                                   const ComplexMatrix& P2, const CoincidenceCertificate& cert,
                                   const std::vector<Complex>& zs, double tol = 1e-7);

struct CoincidenceSearch {
    std::optional<CoincidenceCertificate> certificate;
    int nullity = 0;                // dimension of the linear solution space
    double smallest_singular = 0;   // of the stacked constraint matrix, relative
    double best_residual = 0;       // unitarity gap of the best attempt
};

/// Optional extra constraint u_star B_i = B'_i u_star, used by the invariants
/// pipeline to search for one u_star serving both conditions.
struct PairConstraint {
    ComplexMatrix B1, B2, B1p, B2p;
};

/// Heuristic search: null space of the sampled linear constraints, then
/// alternating projection onto unitaries from seeded random starts.
CoincidenceSearch solve_coincidence(const ComplexMatrix& P, const ComplexMatrix& P2, const std::vector<Complex>& zs,
                                    int attempts = 8, std::uint64_t seed = 1,
                                    const std::optional<PairConstraint>& pair = std::nullopt);
CoincidenceSearch solve_coincidence(const Defects& d, const ComplexMatrix& P, const Defects& d2,
                                    const ComplexMatrix& P2, const std::vector<Complex>& zs, int attempts,
                                    std::uint64_t seed, const std::optional<PairConstraint>& pair);

enum class EquivalenceVerdict { Equivalent, NotEquivalent, Inconclusive };
std::string_view to_string(EquivalenceVerdict v);

struct InvariantsOptions {
    std::uint64_t seed = 1;
    int attempts = 8;
    double tol = 1e-7;
    double invariant_rtol = 1e-6;
};

struct InvariantsReport {
    EquivalenceVerdict verdict = EquivalenceVerdict::Inconclusive;
    std::string reason;
    std::optional<CoincidenceCertificate> certificate;
    double coincidence_residual = 0;
    double pair_residual = 0;          // max_i ||u_star B_i - B'_i u_star||
    double cross_validation = 0;       // max ||U S_i - S'_i U||, ||U P - P' U||, ||U*U - I||
    double max_invariant_gap = 0;      // largest relative difference in the invariant battery
    int nullity = 0;
};

/// Decides unitary equivalence of two pure triples through their characteristic
/// functions and adjoint fundamental pairs. NotEquivalent is always backed by a
/// witness (a differing invariant or an empty solution space); a failed search
/// is Inconclusive. Throws NotPure.
InvariantsReport invariants_pipeline(const OperatorTriple& T, const OperatorTriple& T2,
                                     const InvariantsOptions& opts = {});

}  // namespace gamma3
