#include "gamma3/generators.hpp"

#include <Eigen/QR>

namespace gamma3 {

ComplexMatrix random_gaussian(Index rows, Index cols, Rng& rng) {
    std::normal_distribution<double> g(0.0, std::sqrt(0.5));
    ComplexMatrix m(rows, cols);
    for (Index c = 0; c < cols; ++c)
        for (Index r = 0; r < rows; ++r) m(r, c) = Complex(g(rng), g(rng));
    return m;
}

ComplexMatrix random_unitary(Index n, Rng& rng) {
    if (n == 0) return ComplexMatrix(0, 0);
    Eigen::HouseholderQR<ComplexMatrix> qr(random_gaussian(n, n, rng));
    ComplexMatrix Q = qr.householderQ() * ComplexMatrix::Identity(n, n);
    const ComplexMatrix R = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index k = 0; k < n; ++k) {
        const double a = std::abs(R(k, k));
        if (a > 0) Q.col(k) *= R(k, k) / a;
    }
    return Q;
}

Complex random_disc_point(Rng& rng, double radius) {
    std::uniform_real_distribution<double> u(0, 1);
    return std::polar(radius * std::sqrt(u(rng)), 2 * std::numbers::pi * u(rng));
}

Point3 random_member(Rng& rng, double radius) {
    return symmetrize(random_disc_point(rng, radius), random_disc_point(rng, radius), random_disc_point(rng, radius));
}

OperatorTriple scalar_triple(Rng& rng) {
    const Point3 x = random_member(rng);
    ComplexMatrix s1(1, 1), s2(1, 1), p(1, 1);
    s1(0, 0) = x.s1;
    s2(0, 0) = x.s2;
    p(0, 0) = x.p;
    return make_triple(s1, s2, p);
}

OperatorTriple diagonal_triple(Index n, Rng& rng) {
    ComplexVector a(n), b(n), c(n);
    for (Index k = 0; k < n; ++k) {
        const Point3 x = random_member(rng);
        a(k) = x.s1;
        b(k) = x.s2;
        c(k) = x.p;
    }
    const ComplexMatrix U = random_unitary(n, rng);
    return make_triple(U * a.asDiagonal() * U.adjoint(), U * b.asDiagonal() * U.adjoint(),
                       U * c.asDiagonal() * U.adjoint());
}

namespace {

// Shrinks the symbol until its boundary points have every root in the closed
// disc. The points stay self-inversive under scaling and (0, 0, w) is a
// distinguished boundary point, so the loop terminates.
OperatorSymbol feasible(OperatorSymbol sym) {
    for (int k = 0; k < 60 && symbol_boundary(sym, 96).min_root_margin < -1e-9; ++k) {
        sym.F1 *= 0.9;
        sym.F2 *= 0.9;
    }
    return sym;
}

}  // namespace

OperatorSymbol almost_normal_pair(Index e, Rng& rng, double max_sup, bool normal) {
    std::uniform_real_distribution<double> u(0, 1);
    OperatorSymbol sym;
    if (normal || e == 1 || u(rng) < 0.5) {
        const ComplexMatrix V = random_unitary(e, rng);
        ComplexVector a(e), b(e);
        for (Index k = 0; k < e; ++k) {
            a(k) = random_disc_point(rng);
            b(k) = random_disc_point(rng);
        }
        sym.F1 = V * a.asDiagonal() * V.adjoint();
        sym.F2 = V * b.asDiagonal() * V.adjoint();
    } else {
        const ComplexMatrix F = random_gaussian(e, e, rng);
        const double r = 0.3 + 0.7 * u(rng);
        const Complex alpha = std::polar(r, 2 * std::numbers::pi * u(rng));
        const Complex beta = std::polar(r, 2 * std::numbers::pi * u(rng));
        sym.F1 = alpha * F;
        sym.F2 = beta * F;
    }
    const double sup = sup_norm_circle(sym).value;
    if (sup > 0) {
        const double target = max_sup * (0.5 + 0.5 * u(rng));
        sym.F1 *= target / sup;
        sym.F2 *= target / sup;
    }
    return feasible(sym);
}

OperatorTriple model_triple(Index e, int degree, Rng& rng) {
    const auto sym = almost_normal_pair(e, rng);
    return build_gamma3_isometry(sym, {e, degree}).triple;
}

void compress_pair(AdmissibleData& data) {
    const DefectSpace dps = defect(data.P, true);
    data.B1 = dps.compress(data.B1_hat);
    data.B2 = dps.compress(data.B2_hat);
}

namespace {

AdmissibleData normal_p(Index n, Rng& rng) {
    std::uniform_real_distribution<double> u(0, 1);
    const ComplexMatrix V = random_unitary(n, rng);
    ComplexVector p(n), b1(n), b2(n);
    for (Index k = 0; k < n; ++k) {
        p(k) = random_disc_point(rng, 0.85);
        const double total = 2.7 * (0.3 + 0.7 * u(rng));
        const double split = u(rng);
        OperatorSymbol sym{ComplexMatrix::Constant(1, 1, std::polar(total * split, 2 * std::numbers::pi * u(rng))),
                           ComplexMatrix::Constant(1, 1, std::polar(total * (1 - split), 2 * std::numbers::pi * u(rng)))};
        sym = feasible(sym);
        b1(k) = sym.F1(0, 0);
        b2(k) = sym.F2(0, 0);
    }
    AdmissibleData d;
    d.P = V * p.asDiagonal() * V.adjoint();
    d.B1_hat = V * b1.asDiagonal() * V.adjoint();
    d.B2_hat = V * b2.asDiagonal() * V.adjoint();
    d.family = "normal_p";
    return d;
}

// P = J (x) I_e with J the m x m lower shift; D_{P*} is the first block.
AdmissibleData truncated_shift(Index n, Rng& rng) {
    const Index e = n >= 4 ? 2 : 1;
    const Index m = n / e;
    const auto sym = almost_normal_pair(e, rng);
    AdmissibleData d;
    d.P = ComplexMatrix::Zero(m * e, m * e);
    for (Index k = 0; k + 1 < m; ++k) d.P.block((k + 1) * e, k * e, e, e) = ComplexMatrix::Identity(e, e);
    d.B1_hat = ComplexMatrix::Zero(m * e, m * e);
    d.B2_hat = d.B1_hat;
    d.B1_hat.topLeftCorner(e, e) = sym.F1;
    d.B2_hat.topLeftCorner(e, e) = sym.F2;
    d.family = "truncated_shift";
    return d;
}

AdmissibleData scalar_p(Index n, Rng& rng) {
    const auto sym = almost_normal_pair(n, rng, 2.7, false);
    AdmissibleData d;
    d.P = random_disc_point(rng, 0.85) * ComplexMatrix::Identity(n, n);
    d.B1_hat = sym.F1;
    d.B2_hat = sym.F2;
    d.family = "scalar_p";
    return d;
}

ComplexMatrix block_diag(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out = ComplexMatrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
    out.topLeftCorner(a.rows(), a.cols()) = a;
    out.bottomRightCorner(b.rows(), b.cols()) = b;
    return out;
}

}  // namespace

AdmissibleData admissible_data(AdmissibleFamily family, Index n, Rng& rng) {
    n = std::max<Index>(n, 1);
    AdmissibleData d;
    switch (family) {
        case AdmissibleFamily::NormalP: d = normal_p(n, rng); break;
        case AdmissibleFamily::TruncatedShift: d = truncated_shift(std::max<Index>(n, 2), rng); break;
        case AdmissibleFamily::ScalarP: d = scalar_p(n, rng); break;
        case AdmissibleFamily::DirectSum: {
            const Index n1 = std::max<Index>(n / 2, 1), n2 = std::max<Index>(n - n1, 2);
            const AdmissibleData a = normal_p(n1, rng);
            const AdmissibleData b = truncated_shift(n2, rng);
            d.P = block_diag(a.P, b.P);
            d.B1_hat = block_diag(a.B1_hat, b.B1_hat);
            d.B2_hat = block_diag(a.B2_hat, b.B2_hat);
            d.family = "direct_sum";
            break;
        }
    }
    compress_pair(d);
    return d;
}

AdmissibleData admissible_data(Index max_dim, Rng& rng) {
    std::uniform_int_distribution<int> fam(0, 3);
    const auto family = static_cast<AdmissibleFamily>(fam(rng));
    const Index lo = family == AdmissibleFamily::DirectSum ? 3 : (family == AdmissibleFamily::TruncatedShift ? 2 : 1);
    std::uniform_int_distribution<Index> dim(lo, std::max(lo, max_dim));
    return admissible_data(family, dim(rng), rng);
}

AdmissibleData perturbed(const AdmissibleData& data, double eps) {
    AdmissibleData d = data;
    d.B1_hat *= 1 + eps;
    d.B2_hat *= 1 + eps;
    compress_pair(d);
    return d;
}

std::vector<GeneratedTriple> generated_suite(int count, std::uint64_t seed, Index max_dim) {
    std::vector<GeneratedTriple> out;
    for (int k = 0; k < count; ++k) {
        Rng rng(split_seed(seed, static_cast<std::uint64_t>(k)));
        std::uniform_int_distribution<Index> dim(1, max_dim);
        switch (k % 4) {
            case 0: out.push_back({scalar_triple(rng), "scalar"}); break;
            case 1: out.push_back({diagonal_triple(dim(rng), rng), "diagonal"}); break;
            case 2: {
                std::uniform_int_distribution<int> pick(0, 1);
                const Index e = (max_dim >= 6 && pick(rng) == 1) ? 2 : 1;
                std::uniform_int_distribution<int> deg(2, static_cast<int>(max_dim / e) - 1);
                out.push_back({model_triple(e, deg(rng), rng), "model"});
                break;
            }
            default: {
                const auto data = admissible_data(max_dim, rng);
                out.push_back({construct_from_admissible(data.P, data.B1, data.B2).triple, "admissible/" + data.family});
            }
        }
    }
    return out;
}

}  // namespace gamma3
