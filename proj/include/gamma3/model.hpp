#pragma once

// Toeplitz model of pure Gamma3-isometries on a truncated vector-valued Hardy
// space, the embedding W h = sum_n z^n (x) D_{P*} P*^n h, and the construction
// of a triple from admissible data (P, B1, B2).
//
// Degrees run 0..N, so a truncation has e (N + 1) rows. Analytic Toeplitz
// operators leave the span of degrees > N invariant, so the truncation is a
// compression to a co-invariant subspace.

#include "gamma3/fundamental.hpp"

namespace gamma3 {

/// phi(z) = F1* + F2 z, psi(z) = F2* + F1 z.
struct OperatorSymbol {
    ComplexMatrix F1, F2;

    Index coeff_dim() const { return F1.rows(); }
};

struct HardyTruncation {
    Index coeff_dim = 1;
    int degree = 2;  // N

    Index dim() const { return coeff_dim * (degree + 1); }
    Index block(int k) const { return coeff_dim * k; }
};

enum class ToeplitzKind { Phi, Psi, Shift };

/// Block lower-bidiagonal matrix: diagonal F1* / F2* / 0, subdiagonal F2 / F1 / I.
ComplexMatrix toeplitz(const OperatorSymbol& sym, const HardyTruncation& H, ToeplitzKind which);

struct SupNorm {
    double value = 0;
    double theta = 0;           // maximizer
    double resolution = 0;      // grid spacing
    double refinement_gap = 0;  // refined value minus best grid value
};

/// max over |z| = 1 of ||F1 + z F2||.
SupNorm sup_norm_circle(const OperatorSymbol& sym, int grid = 256);

/// Joint points (phi(w), psi(w), w) at `samples` points of the unit circle.
/// A point counts as a member when it lies in the closed set and its cubic has
/// every root in the closed disc; the closed-form conditions alone also admit
/// points such as (2.5, 0, 0) whose roots leave the disc.
struct SymbolBoundary {
    int points = 0;
    int members = 0;
    double max_distinguished_gap = 0;
    double min_root_margin = 0;
};

SymbolBoundary symbol_boundary(const OperatorSymbol& sym, int samples = 64);

struct IsometryModel {
    OperatorTriple triple;
    AlmostNormalCheck almost_normal;
    SupNorm sup_norm;
    // Identities checked on vectors supported in degrees 0..N-2.
    std::map<std::string, double> edge_residuals;
    double adjoint_pair_residual = 0;  // recovered adjoint pair vs (F1, F2) on degree 0
    double max_symbol_gap = 0;         // largest distinguished-boundary gap over sampled symbol points
    int symbol_points = 0;
    int symbol_members = 0;
    bool valid = false;
};

/// Throws NotAlmostNormal or SupNormExceeded.
IsometryModel build_gamma3_isometry(const OperatorSymbol& sym, const HardyTruncation& H, double tol = 1e-8,
                                    int symbol_samples = 64);

struct ModelEmbedding {
    ComplexMatrix W;  // rows in the D_{P*} basis coordinates, d* (N + 1) x n
    double truncation_defect = 0;
    int degree = 0;
    Index coeff_dim = 0;
};

inline constexpr int kMaxTruncation = 512;

/// Smallest N >= min_degree with ||P*^N|| <= 1e-8, capped at kMaxTruncation;
/// NotPure if the defect at the chosen N exceeds tol.
ModelEmbedding embed_W(const ComplexMatrix& P, const DefectSpace& dps, int min_degree = 2, double tol = 1e-9);
ModelEmbedding embed_W(const ComplexMatrix& P, int min_degree = 2, double tol = 1e-9);

struct AdmissibleConstruction {
    OperatorTriple triple;
    FundamentalPair A;  // of the constructed triple
    FundamentalPair B;  // of its adjoint, in the same D_{P*} basis as the input
    ModelEmbedding embedding;
    std::map<std::string, double> checks;
    SupNorm sup_norm;   // of (B1, B2), recorded
};

/// S1 = W* T_{B1* + B2 z} W, S2 = W* T_{B2* + B1 z} W with B1, B2 given in the
/// coordinates of defect(P, true).basis. Throws NotPure, or HypothesisFailed
/// naming the failed hypothesis.
AdmissibleConstruction construct_from_admissible(const ComplexMatrix& P, const ComplexMatrix& B1,
                                                 const ComplexMatrix& B2, int min_degree = 2, double tol = 1e-7);

}  // namespace gamma3
