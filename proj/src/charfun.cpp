#include "gamma3/charfun.hpp"
#include "gamma3/model.hpp"

#include <random>

namespace gamma3 {

ComplexMatrix theta(const ComplexMatrix& P, const Defects& d, Complex z) {
    if (std::abs(z) > 1 - 1e-6) throw Error(ErrorCode::NearBoundary, "theta: |z| > 1 - 1e-6");
    const auto& dp = d.p;
    const auto& dps = d.p_adjoint;
    if (dp.dim == 0 || dps.dim == 0) return ComplexMatrix::Zero(dps.dim, dp.dim);
    const ComplexMatrix Ph = P.adjoint();
    const ComplexMatrix body = -P + z * dps.D * resolvent_apply(Ph, z) * dp.D;
    return dps.basis.adjoint() * body * dp.basis;
}

CharFnSample theta(const ComplexMatrix& P, Complex z) { return {z, theta(P, defects(P), z)}; }

std::vector<Complex> standard_z_samples(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(0, 2 * std::numbers::pi);
    std::vector<Complex> zs;
    for (double r : {0.5, 0.9})
        for (int k = 0; k < 16; ++k) zs.push_back(std::polar(r, angle(rng)));
    return zs;
}

double IntertwiningReport::max_residual() const {
    double m = 0;
    for (const auto& [name, v] : residuals) m = std::max(m, v);
    return m;
}

namespace {

// Residuals of (X1* + X2 z) Th(z) = Th(z) (Y1 + Y2* z) and its 1 <-> 2 swap.
IntertwiningReport intertwining(const ComplexMatrix& P, const Defects& d, const FundamentalPair& left,
                                const FundamentalPair& right, const std::vector<Complex>& zs,
                                const std::string& prefix) {
    IntertwiningReport r;
    double r1 = 0, r2 = 0;
    for (Complex z : zs) {
        const ComplexMatrix th = theta(P, d, z);
        if (th.size() == 0) continue;
        const ComplexMatrix e1 = (left.A1.adjoint() + z * left.A2) * th - th * (right.A1 + z * right.A2.adjoint());
        const ComplexMatrix e2 = (left.A2.adjoint() + z * left.A1) * th - th * (right.A2 + z * right.A1.adjoint());
        r1 = std::max(r1, op_norm(e1));
        r2 = std::max(r2, op_norm(e2));
    }
    r.residuals[prefix + "1"] = r1;
    r.residuals[prefix + "2"] = r2;
    return r;
}

}  // namespace

IntertwiningReport verify_adjoint_intertwining(const TripleAnalysis& an, const std::vector<Complex>& zs) {
    // Theta_{P*}: D_{P*} -> D_P; left factor acts on D_P (pair A), right on D_{P*} (pair B).
    return intertwining(an.triple.P.adjoint(), an.defects.swapped(), an.A, an.B, zs, "adjoint_theta_");
}

IntertwiningReport verify_theta_intertwining(const TripleAnalysis& an, const std::vector<Complex>& zs) {
    return intertwining(an.triple.P, an.defects, an.B, an.A, zs, "theta_");
}

CoincidenceCheck check_coincidence(const Defects& d, const ComplexMatrix& P, const Defects& d2,
                                   const ComplexMatrix& P2, const CoincidenceCertificate& cert,
                                   const std::vector<Complex>& zs, double tol) {
    if (cert.u.rows() != d2.p.dim || cert.u.cols() != d.p.dim || cert.u_star.rows() != d2.p_adjoint.dim ||
        cert.u_star.cols() != d.p_adjoint.dim)
        throw Error(ErrorCode::DimensionMismatch, "check_coincidence: certificate does not match defect dims");
    CoincidenceCheck c;
    auto unitarity = [](const ComplexMatrix& u) {
        if (u.size() == 0) return 0.0;
        return op_norm(ComplexMatrix(u.adjoint() * u - ComplexMatrix::Identity(u.cols(), u.cols())));
    };
    c.unitarity_defect = std::max(unitarity(cert.u), unitarity(cert.u_star));
    for (Complex z : zs) {
        const ComplexMatrix e = cert.u_star * theta(P, d, z) - theta(P2, d2, z) * cert.u;
        if (e.size() > 0) c.residual = std::max(c.residual, op_norm(e));
    }
    c.holds = cert.u.rows() == cert.u.cols() && cert.u_star.rows() == cert.u_star.cols() &&
              c.unitarity_defect <= 1e-8 && c.residual <= tol;
    return c;
}

CoincidenceCheck check_coincidence(const ComplexMatrix& P, const ComplexMatrix& P2, const CoincidenceCertificate& cert,
                                   const std::vector<Complex>& zs, double tol) {
    return check_coincidence(defects(P), P, defects(P2), P2, cert, zs, tol);
}

namespace {

// Column-major vec identities: vec(X M) = (M^T (x) I) vec(X), vec(M X) = (I (x) M) vec(X).
ComplexMatrix kron(const ComplexMatrix& A, const ComplexMatrix& B) {
    ComplexMatrix out(A.rows() * B.rows(), A.cols() * B.cols());
    for (Index i = 0; i < A.rows(); ++i)
        for (Index j = 0; j < A.cols(); ++j) out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    return out;
}

ComplexMatrix unvec(const ComplexVector& v, Index offset, Index rows, Index cols) {
    ComplexMatrix m(rows, cols);
    for (Index c = 0; c < cols; ++c)
        for (Index r = 0; r < rows; ++r) m(r, c) = v(offset + c * rows + r);
    return m;
}

ComplexVector vec_pair(const ComplexMatrix& u, const ComplexMatrix& us) {
    ComplexVector v(u.size() + us.size());
    v.head(u.size()) = Eigen::Map<const ComplexVector>(u.data(), u.size());
    v.tail(us.size()) = Eigen::Map<const ComplexVector>(us.data(), us.size());
    return v;
}

}  // namespace

CoincidenceSearch solve_coincidence(const Defects& d, const ComplexMatrix& P, const Defects& d2,
                                    const ComplexMatrix& P2, const std::vector<Complex>& zs, int attempts,
                                    std::uint64_t seed, const std::optional<PairConstraint>& pair) {
    CoincidenceSearch out;
    const Index k = d.p.dim, ks = d.p_adjoint.dim;
    if (d2.p.dim != k || d2.p_adjoint.dim != ks) return out;
    const Index nu = k * k, nus = ks * ks;
    if (nu + nus == 0) {
        out.certificate = CoincidenceCertificate{ComplexMatrix(0, 0), ComplexMatrix(0, 0), 0};
        return out;
    }

    // Unknown x = [vec(u); vec(u_star)].
    std::vector<ComplexMatrix> rows;
    const ComplexMatrix Ik = ComplexMatrix::Identity(k, k), Iks = ComplexMatrix::Identity(ks, ks);
    for (Complex z : zs) {
        const ComplexMatrix th = theta(P, d, z), th2 = theta(P2, d2, z);
        ComplexMatrix r(ks * k, nu + nus);
        r.leftCols(nu) = -kron(Ik, th2);
        r.rightCols(nus) = kron(th.transpose(), Iks);
        rows.push_back(std::move(r));
    }
    if (pair) {
        for (const auto& [b, bp] : {std::pair{&pair->B1, &pair->B1p}, std::pair{&pair->B2, &pair->B2p}}) {
            ComplexMatrix r = ComplexMatrix::Zero(nus, nu + nus);
            r.rightCols(nus) = kron(b->transpose(), Iks) - kron(Iks, *bp);
            rows.push_back(std::move(r));
        }
    }
    Index total = 0;
    for (const auto& r : rows) total += r.rows();
    ComplexMatrix K(total, nu + nus);
    Index at = 0;
    for (const auto& r : rows) {
        K.middleRows(at, r.rows()) = r;
        at += r.rows();
    }

    Eigen::JacobiSVD<ComplexMatrix> svd(K, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double smax = sv.size() > 0 ? std::max(sv(0), 1.0) : 1.0;
    const Index cols = nu + nus;
    // Singular values are only returned for min(rows, cols) directions; the rest are exact zeros.
    Index nullity = std::max<Index>(0, cols - sv.size());
    for (Index i = 0; i < sv.size(); ++i)
        if (sv(i) <= 1e-8 * smax) ++nullity;
    out.nullity = static_cast<int>(nullity);
    out.smallest_singular = (sv.size() == cols ? sv(cols - 1) : 0.0) / smax;
    if (nullity == 0) return out;
    const ComplexMatrix N = svd.matrixV().rightCols(nullity);

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    double best = std::numeric_limits<double>::infinity();
    for (int attempt = 0; attempt < std::max(attempts, 1); ++attempt) {
        ComplexVector c(nullity);
        for (Index i = 0; i < nullity; ++i) c(i) = Complex(g(rng), g(rng));
        if (attempt == 0 && nullity == 1) c(0) = 1;
        double gap = std::numeric_limits<double>::infinity();
        ComplexMatrix u, us;
        for (int it = 0; it < 500; ++it) {
            const ComplexVector x = N * c;
            u = polar_unitary(unvec(x, 0, k, k));
            us = polar_unitary(unvec(x, nu, ks, ks));
            const ComplexVector y = vec_pair(u, us);
            c = N.adjoint() * y;
            gap = (N * c - y).norm();
            if (gap < 1e-13) break;
        }
        // The unitary pair sits `gap` away from the solution space.
        if (gap < best) best = gap;
        if (gap <= 1e-9) {
            CoincidenceCertificate cert{u, us, 0};
            const auto chk = check_coincidence(d, P, d2, P2, cert, zs);
            cert.max_residual = chk.residual;
            if (chk.holds) {
                out.certificate = cert;
                out.best_residual = gap;
                return out;
            }
        }
    }
    out.best_residual = best;
    return out;
}

CoincidenceSearch solve_coincidence(const ComplexMatrix& P, const ComplexMatrix& P2, const std::vector<Complex>& zs,
                                    int attempts, std::uint64_t seed, const std::optional<PairConstraint>& pair) {
    return solve_coincidence(defects(P), P, defects(P2), P2, zs, attempts, seed, pair);
}

std::string_view to_string(EquivalenceVerdict v) {
    switch (v) {
        case EquivalenceVerdict::Equivalent: return "Equivalent";
        case EquivalenceVerdict::NotEquivalent: return "NotEquivalent";
        case EquivalenceVerdict::Inconclusive: return "Inconclusive";
    }
    return "Unknown";
}

namespace {

// Traces of all words of length <= 3 in {S1, S2, P, S1*, S2*, P*}, followed by
// sorted singular values of Theta_P at a few points and traces of B-words.
// Every entry is a unitary invariant of the triple.
std::vector<Complex> invariant_battery(const TripleAnalysis& an, const std::vector<Complex>& zs) {
    const auto& T = an.triple;
    const std::array<ComplexMatrix, 6> letters = {T.S1, T.S2, T.P, T.S1.adjoint(), T.S2.adjoint(), T.P.adjoint()};
    std::vector<Complex> out;
    for (size_t a = 0; a < 6; ++a) {
        out.push_back(letters[a].trace());
        for (size_t b = 0; b < 6; ++b) {
            const ComplexMatrix ab = letters[a] * letters[b];
            out.push_back(ab.trace());
            for (size_t c = 0; c < 6; ++c) out.push_back((ab * letters[c]).trace());
        }
    }
    const std::array<ComplexMatrix, 4> bl = {an.B.A1, an.B.A2, an.B.A1.adjoint(), an.B.A2.adjoint()};
    for (size_t a = 0; a < 4; ++a)
        for (size_t b = 0; b < 4; ++b) out.push_back((bl[a] * bl[b]).trace());
    for (size_t i = 0; i < std::min<size_t>(zs.size(), 4); ++i) {
        const ComplexMatrix th = theta(T.P, an.defects, zs[i]);
        if (th.size() == 0) continue;
        Eigen::JacobiSVD<ComplexMatrix> svd(th);
        for (Index k = 0; k < svd.singularValues().size(); ++k) out.push_back(svd.singularValues()(k));
    }
    return out;
}

}  // namespace

InvariantsReport invariants_pipeline(const OperatorTriple& T, const OperatorTriple& T2, const InvariantsOptions& opts) {
    InvariantsReport r;
    if (T.dim() != T2.dim()) {
        r.verdict = EquivalenceVerdict::NotEquivalent;
        r.reason = "dimensions differ";
        return r;
    }
    const TripleAnalysis an = analyze(T), an2 = analyze(T2);
    // Purity is a precondition; embed_W measures it and throws NotPure.
    const auto e1 = embed_W(T.P, an.defects.p_adjoint);
    const auto e2 = embed_W(T2.P, an2.defects.p_adjoint);

    if (an.defects.p.dim != an2.defects.p.dim || an.defects.p_adjoint.dim != an2.defects.p_adjoint.dim) {
        r.verdict = EquivalenceVerdict::NotEquivalent;
        r.reason = "defect dimensions differ";
        return r;
    }

    const auto zs = standard_z_samples(opts.seed);
    const auto inv1 = invariant_battery(an, zs), inv2 = invariant_battery(an2, zs);
    const double scale = std::max(T.scale(), T2.scale());
    for (size_t i = 0; i < inv1.size() && i < inv2.size(); ++i) {
        const double ref = std::pow(scale, 3) * static_cast<double>(std::max<Index>(T.dim(), 1));
        r.max_invariant_gap = std::max(r.max_invariant_gap, std::abs(inv1[i] - inv2[i]) / ref);
    }
    if (inv1.size() != inv2.size() || r.max_invariant_gap > opts.invariant_rtol) {
        r.verdict = EquivalenceVerdict::NotEquivalent;
        r.reason = "unitary invariants differ";
        return r;
    }

    const PairConstraint pc{an.B.A1, an.B.A2, an2.B.A1, an2.B.A2};
    const auto search = solve_coincidence(an.defects, T.P, an2.defects, T2.P, zs, opts.attempts, opts.seed, pc);
    r.nullity = search.nullity;
    if (search.nullity == 0) {
        r.verdict = EquivalenceVerdict::NotEquivalent;
        r.reason = "no linear intertwiner of characteristic functions and adjoint pairs";
        return r;
    }
    if (!search.certificate) {
        r.verdict = EquivalenceVerdict::Inconclusive;
        r.reason = "no unitary certificate found in the solution space";
        return r;
    }
    const auto& cert = *search.certificate;
    r.certificate = cert;
    r.coincidence_residual = cert.max_residual;
    r.pair_residual = std::max(op_norm(ComplexMatrix(cert.u_star * an.B.A1 - an2.B.A1 * cert.u_star)),
                               op_norm(ComplexMatrix(cert.u_star * an.B.A2 - an2.B.A2 * cert.u_star)));
    if (r.pair_residual > opts.tol * scale) {
        r.verdict = EquivalenceVerdict::Inconclusive;
        r.reason = "certificate does not intertwine the adjoint pairs";
        return r;
    }

    // Transport through the functional models: U = W'* (I (x) u_star) W.
    const int degree = std::max(e1.degree, e2.degree);
    const ComplexMatrix W1 = embed_W(T.P, an.defects.p_adjoint, degree).W;
    const ComplexMatrix W2 = embed_W(T2.P, an2.defects.p_adjoint, degree).W;
    const ComplexMatrix lifted = kron(ComplexMatrix::Identity(degree + 1, degree + 1), cert.u_star);
    const ComplexMatrix U = W2.adjoint() * lifted * W1;
    const Index n = T.dim();
    r.cross_validation = std::max({op_norm(ComplexMatrix(U * T.S1 - T2.S1 * U)),
                                   op_norm(ComplexMatrix(U * T.S2 - T2.S2 * U)),
                                   op_norm(ComplexMatrix(U * T.P - T2.P * U)),
                                   op_norm(ComplexMatrix(U.adjoint() * U - ComplexMatrix::Identity(n, n)))});
    if (r.cross_validation > 1e-6 * scale) {
        r.verdict = EquivalenceVerdict::Inconclusive;
        r.reason = "model transport does not intertwine the triples";
        return r;
    }
    r.verdict = EquivalenceVerdict::Equivalent;
    r.reason = "characteristic functions coincide and adjoint pairs are intertwined";
    return r;
}

}  // namespace gamma3
