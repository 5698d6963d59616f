#pragma once

// Dense complex kernel shared by every other module: Hermitian eigensolver,
// PSD square root, pseudo-inverse, norms, numerical radius and the resolvent.
//
// The factorizations are templated on the Eigen expression type so that
// expressions (A.adjoint() * A, I - P.adjoint() * P, ...) can be passed
// without materializing them at the call site. Everything else in the
// library works with the double-precision aliases below.

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace gamma3 {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

enum class ErrorCode {
    NotFinite,
    DimensionMismatch,
    NonHermitian,
    NoConvergence,
    NotPSD,
    NearSingular,
    UnitP,
    NotCommuting,
    NotContraction,
    GenericityFailure,
    InconsistentSystem,
    NotAlmostNormal,
    SupNormExceeded,
    NotPure,
    HypothesisFailed,
    NearBoundary,
    ParseError,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

// Default tolerances. Identities that hold exactly in exact arithmetic are
// checked against these in floating point.
namespace tol {
inline constexpr double structural = 1e-10;
inline constexpr double identity = 1e-8;
inline constexpr double rank = 1e-9;
inline constexpr double commute = 1e-9;
}  // namespace tol

template <typename Derived>
using RealOf = typename Eigen::NumTraits<typename Derived::Scalar>::Real;

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& A) {
    return A.allFinite();
}

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& A, const char* what) {
    if (!A.allFinite()) throw Error(ErrorCode::NotFinite, what);
}

template <typename DA, typename DB>
auto commutator(const Eigen::MatrixBase<DA>& A, const Eigen::MatrixBase<DB>& B) {
    using M = Eigen::Matrix<typename DA::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    M a = A, b = B;
    return M(a * b - b * a);
}

// Self-commutator [A*, A] = A*A - AA*.
template <typename Derived>
auto self_commutator(const Eigen::MatrixBase<Derived>& A) {
    using M = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    M a = A;
    return M(a.adjoint() * a - a * a.adjoint());
}

template <typename Derived>
RealOf<Derived> op_norm(const Eigen::MatrixBase<Derived>& A) {
    using M = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    if (A.size() == 0) return 0;
    M a = A;
    if (a.rows() == 1 || a.cols() == 1) return a.norm();
    if (std::min(a.rows(), a.cols()) > 24) {
        Eigen::BDCSVD<M> svd(a);
        return svd.singularValues()(0);
    }
    Eigen::JacobiSVD<M> svd(a);
    return svd.singularValues()(0);
}

template <typename Real>
struct HermitianEig {
    Eigen::Matrix<Real, Eigen::Dynamic, 1> eigenvalues;  // ascending
    Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic> eigenvectors;
    int sweeps = 0;
};

inline constexpr int kJacobiSweepCap = 64;

// Cyclic complex Jacobi. Each rotation first removes the phase of a_pq with a
// diagonal unitary, then applies the real symmetric Jacobi rotation.
template <typename Derived>
HermitianEig<RealOf<Derived>> hermitian_eig(const Eigen::MatrixBase<Derived>& A,
                                            RealOf<Derived> tol = tol::structural) {
    using Real = RealOf<Derived>;
    using Scalar = std::complex<Real>;
    using M = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    static_assert(Eigen::NumTraits<typename Derived::Scalar>::IsComplex,
                  "hermitian_eig expects a complex matrix");

    if (A.rows() != A.cols()) throw Error(ErrorCode::DimensionMismatch, "hermitian_eig: matrix not square");
    require_finite(A, "hermitian_eig: non-finite entry");

    M a = A;
    const Index n = a.rows();
    const Real frob = a.norm();
    if ((a - a.adjoint()).norm() > tol * (1 + frob))
        throw Error(ErrorCode::NonHermitian, "hermitian_eig: ||A - A*|| exceeds tolerance");
    a = (a + a.adjoint()) / Real(2);

    M v = M::Identity(n, n);
    const Real eps = std::numeric_limits<Real>::epsilon();
    int sweep = 0;
    for (;; ++sweep) {
        Real off = 0;
        for (Index q = 1; q < n; ++q)
            for (Index p = 0; p < q; ++p) off += std::norm(a(p, q));
        if (off <= (eps * frob) * (eps * frob) || off == 0) break;
        if (sweep >= kJacobiSweepCap) throw Error(ErrorCode::NoConvergence, "hermitian_eig: sweep cap reached");

        for (Index p = 0; p < n - 1; ++p) {
            for (Index q = p + 1; q < n; ++q) {
                const Scalar apq = a(p, q);
                const Real mag = std::abs(apq);
                if (mag == 0) continue;
                const Real app = a(p, p).real();
                const Real aqq = a(q, q).real();
                const Scalar phase = apq / mag;  // e^{i phi}
                const Real theta = (aqq - app) / (2 * mag);
                const Real t = (theta >= 0 ? Real(1) : Real(-1)) / (std::abs(theta) + std::sqrt(theta * theta + 1));
                const Real c = 1 / std::sqrt(t * t + 1);
                const Real s = t * c;
                // Rotation on coordinates (p, q): V = [[c, s], [-s e^{-i phi}, c e^{-i phi}]].
                const Scalar vqp = -s * std::conj(phase);
                const Scalar vqq = c * std::conj(phase);

                auto rotate_cols = [&](M& m) {
                    for (Index k = 0; k < m.rows(); ++k) {
                        const Scalar mp = m(k, p), mq = m(k, q);
                        m(k, p) = c * mp + vqp * mq;
                        m(k, q) = s * mp + vqq * mq;
                    }
                };
                rotate_cols(a);
                for (Index k = 0; k < n; ++k) {
                    const Scalar mp = a(p, k), mq = a(q, k);
                    a(p, k) = c * mp + std::conj(vqp) * mq;
                    a(q, k) = s * mp + std::conj(vqq) * mq;
                }
                a(p, q) = a(q, p) = Scalar(0);
                a(p, p) = Scalar(a(p, p).real());
                a(q, q) = Scalar(a(q, q).real());
                rotate_cols(v);
            }
        }
    }

    std::vector<Index> order(static_cast<size_t>(n));
    for (Index i = 0; i < n; ++i) order[static_cast<size_t>(i)] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](Index i, Index j) { return a(i, i).real() < a(j, j).real(); });

    HermitianEig<Real> out;
    out.eigenvalues.resize(n);
    out.eigenvectors.resize(n, n);
    for (Index k = 0; k < n; ++k) {
        const Index src = order[static_cast<size_t>(k)];
        out.eigenvalues(k) = a(src, src).real();
        out.eigenvectors.col(k) = v.col(src);
    }
    out.sweeps = sweep;
    return out;
}

template <typename Derived>
RealOf<Derived> lambda_max(const Eigen::MatrixBase<Derived>& H) {
    if (H.rows() == 0) return 0;
    auto eig = hermitian_eig(H, RealOf<Derived>(1e-8));
    return eig.eigenvalues(eig.eigenvalues.size() - 1);
}

// Hermitian PSD square root. Eigenvalues in [-1e-10 ||A||, 0) are clamped.
template <typename Derived>
auto psd_sqrt(const Eigen::MatrixBase<Derived>& A) {
    using Real = RealOf<Derived>;
    using M = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
    auto eig = hermitian_eig(A);
    const Index n = A.rows();
    if (n == 0) return M(0, 0);
    const Real scale = eig.eigenvalues.cwiseAbs().maxCoeff();
    if (eig.eigenvalues(0) < -Real(1e-10) * scale)
        throw Error(ErrorCode::NotPSD, "psd_sqrt: eigenvalue below -1e-10 ||A||");
    Eigen::Matrix<Real, Eigen::Dynamic, 1> root = eig.eigenvalues.cwiseMax(Real(0)).cwiseSqrt();
    return M(eig.eigenvectors * root.asDiagonal() * eig.eigenvectors.adjoint());
}

// Moore-Penrose pseudo-inverse; singular values below rank_tol * sigma_max are dropped.
template <typename Derived>
auto pinv(const Eigen::MatrixBase<Derived>& A, RealOf<Derived> rank_tol = tol::rank) {
    using Real = RealOf<Derived>;
    using M = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    M a = A;
    M out = M::Zero(a.cols(), a.rows());
    if (a.size() == 0) return out;
    Eigen::JacobiSVD<M> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const Real cutoff = rank_tol * sv(0);
    for (Index k = 0; k < sv.size(); ++k) {
        if (sv(k) <= cutoff || sv(k) == 0) break;
        out += svd.matrixV().col(k) * (Real(1) / sv(k)) * svd.matrixU().col(k).adjoint();
    }
    return out;
}

struct NumericalRadius {
    double value = 0;        // best lower bound found
    double resolution = 0;   // angular grid spacing
    double refinement_gap = 0;  // refined value minus best raw grid value
};

// max over theta of lambda_max(Re(e^{i theta} A)), sampled on a grid and refined
// by golden-section search around each local grid maximum.
NumericalRadius numerical_radius(const ComplexMatrix& A, int angles = 256);

double spectral_radius(const ComplexMatrix& A);

// (I - zP)^{-1}. Requires |z| rho(P) < 1 - 1e-6 or ||zP|| < 1.
ComplexMatrix resolvent_apply(const ComplexMatrix& P, Complex z);

// Golden-section maximization of a unimodal-ish function on [lo, hi].
template <typename F>
std::pair<double, double> golden_maximize(F&& f, double lo, double hi, int iterations = 60) {
    const double g = (std::sqrt(5.0) - 1) / 2;
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < iterations; ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        }
    }
    return f1 > f2 ? std::pair{x1, f1} : std::pair{x2, f2};
}

// Polar (closest unitary) factor of a square matrix.
ComplexMatrix polar_unitary(const ComplexMatrix& A);

// splitmix64 of (seed, stream): independent per-trial seeds, so results do not
// depend on the order in which trials run.
inline std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace gamma3
