#include "gamma3/numerics.hpp"

#include <Eigen/Eigenvalues>

namespace gamma3 {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::NotFinite: return "NotFinite";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::NonHermitian: return "NonHermitian";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::NotPSD: return "NotPSD";
        case ErrorCode::NearSingular: return "NearSingular";
        case ErrorCode::UnitP: return "UnitP";
        case ErrorCode::NotCommuting: return "NotCommuting";
        case ErrorCode::NotContraction: return "NotContraction";
        case ErrorCode::GenericityFailure: return "GenericityFailure";
        case ErrorCode::InconsistentSystem: return "InconsistentSystem";
        case ErrorCode::NotAlmostNormal: return "NotAlmostNormal";
        case ErrorCode::SupNormExceeded: return "SupNormExceeded";
        case ErrorCode::NotPure: return "NotPure";
        case ErrorCode::HypothesisFailed: return "HypothesisFailed";
        case ErrorCode::NearBoundary: return "NearBoundary";
        case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

NumericalRadius numerical_radius(const ComplexMatrix& A, int angles) {
    if (A.rows() != A.cols()) throw Error(ErrorCode::DimensionMismatch, "numerical_radius: matrix not square");
    angles = std::max(angles, 64);
    NumericalRadius out;
    out.resolution = 2 * std::numbers::pi / angles;
    if (A.size() == 0) return out;

    auto support = [&](double theta) {
        const Complex w = std::polar(1.0, theta);
        ComplexMatrix h = (w * A + std::conj(w) * A.adjoint()) * 0.5;
        return lambda_max(h);
    };

    std::vector<double> grid(static_cast<size_t>(angles));
    for (int k = 0; k < angles; ++k) grid[static_cast<size_t>(k)] = support(k * out.resolution);
    const double grid_best = *std::max_element(grid.begin(), grid.end());

    double best = grid_best;
    for (int k = 0; k < angles; ++k) {
        const double prev = grid[static_cast<size_t>((k + angles - 1) % angles)];
        const double next = grid[static_cast<size_t>((k + 1) % angles)];
        const double here = grid[static_cast<size_t>(k)];
        if (here < prev || here < next) continue;
        const double centre = k * out.resolution;
        auto [arg, val] = golden_maximize(support, centre - out.resolution, centre + out.resolution, 40);
        (void)arg;
        best = std::max(best, val);
    }
    out.value = best;
    out.refinement_gap = best - grid_best;
    return out;
}

double spectral_radius(const ComplexMatrix& A) {
    if (A.size() == 0) return 0;
    Eigen::ComplexEigenSolver<ComplexMatrix> es(A, false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

ComplexMatrix resolvent_apply(const ComplexMatrix& P, Complex z) {
    if (P.rows() != P.cols()) throw Error(ErrorCode::DimensionMismatch, "resolvent_apply: matrix not square");
    const Index n = P.rows();
    const ComplexMatrix id = ComplexMatrix::Identity(n, n);
    if (n == 0) return id;
    const bool norm_ok = std::abs(z) * op_norm(P) < 1;
    if (!norm_ok && std::abs(z) * spectral_radius(P) >= 1 - 1e-6)
        throw Error(ErrorCode::NearSingular, "resolvent_apply: |z| rho(P) too close to 1");
    const ComplexMatrix m = id - z * P;
    ComplexMatrix r = m.partialPivLu().solve(id);
    // One step of iterative refinement keeps the identity residual at roundoff.
    r += r * (id - m * r);
    if ((m * r - id).norm() > 1e-9)
        throw Error(ErrorCode::NearSingular, "resolvent_apply: residual above 1e-9");
    return r;
}

ComplexMatrix polar_unitary(const ComplexMatrix& A) {
    if (A.size() == 0) return A;
    Eigen::JacobiSVD<ComplexMatrix> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixU() * svd.matrixV().adjoint();
}

}  // namespace gamma3
