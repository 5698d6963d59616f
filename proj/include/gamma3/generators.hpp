#pragma once

// Seeded random instances. Every generator takes the engine by reference; use
// `split_seed` to derive independent per-instance engines.

#include "gamma3/model.hpp"

#include <random>

namespace gamma3 {

using Rng = std::mt19937_64;

ComplexMatrix random_gaussian(Index rows, Index cols, Rng& rng);
/// Haar-distributed unitary (QR of a Gaussian matrix with phase correction).
ComplexMatrix random_unitary(Index n, Rng& rng);
/// Uniform in the disc of the given radius.
Complex random_disc_point(Rng& rng, double radius = 1.0);

/// symmetrize(z1, z2, z3) with z_i uniform in the disc of the given radius.
Point3 random_member(Rng& rng, double radius = 0.95);

OperatorTriple scalar_triple(Rng& rng);
/// Diagonal triple of symmetrized disc points conjugated by a random unitary.
OperatorTriple diagonal_triple(Index n, Rng& rng);

/// Commuting normal pair, or (a F, b F) with |a| = |b| and F non-normal; scaled
/// so that max_|z|=1 ||F1 + z F2|| lies in [0.5, 1] * max_sup, then shrunk
/// until every boundary symbol point has its roots in the closed disc.
OperatorSymbol almost_normal_pair(Index e, Rng& rng, double max_sup = 2.7, bool normal = false);

/// Truncated model triple of a random almost-normal symbol.
OperatorTriple model_triple(Index e, int degree, Rng& rng);

/// Admissible data (P, B1, B2); B_hat are full-space operators, B1 and B2 are
/// their compressions to the D_{P*} basis of P.
struct AdmissibleData {
    ComplexMatrix P, B1_hat, B2_hat;
    ComplexMatrix B1, B2;
    std::string family;
};

enum class AdmissibleFamily { NormalP, TruncatedShift, ScalarP, DirectSum };

/// Recomputes B1, B2 from B1_hat, B2_hat.
void compress_pair(AdmissibleData& data);

AdmissibleData admissible_data(AdmissibleFamily family, Index n, Rng& rng);
/// Picks a family uniformly; total dimension <= max_dim.
AdmissibleData admissible_data(Index max_dim, Rng& rng);

/// Scales (B1_hat, B2_hat) by (1 + eps) and recompresses: a change visible in
/// the adjoint fundamental pair.
AdmissibleData perturbed(const AdmissibleData& data, double eps);

struct GeneratedTriple {
    OperatorTriple triple;
    std::string kind;
};

/// Round robin over scalar, diagonal, model and admissible triples with
/// dimensions <= max_dim; instance k uses split_seed(seed, k).
std::vector<GeneratedTriple> generated_suite(int count, std::uint64_t seed, Index max_dim = 8);

}  // namespace gamma3
