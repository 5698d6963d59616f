#include "gamma3/model.hpp"
#include "gamma3/charfun.hpp"

#include <limits>

namespace gamma3 {

ComplexMatrix toeplitz(const OperatorSymbol& sym, const HardyTruncation& H, ToeplitzKind which) {
    const Index e = H.coeff_dim;
    if (sym.F1.rows() != e || sym.F1.cols() != e || sym.F2.rows() != e || sym.F2.cols() != e)
        throw Error(ErrorCode::DimensionMismatch, "toeplitz: symbol does not match coefficient dimension");
    ComplexMatrix diag, sub;
    switch (which) {
        case ToeplitzKind::Phi:
            diag = sym.F1.adjoint();
            sub = sym.F2;
            break;
        case ToeplitzKind::Psi:
            diag = sym.F2.adjoint();
            sub = sym.F1;
            break;
        case ToeplitzKind::Shift:
            diag = ComplexMatrix::Zero(e, e);
            sub = ComplexMatrix::Identity(e, e);
            break;
    }
    ComplexMatrix T = ComplexMatrix::Zero(H.dim(), H.dim());
    for (int k = 0; k <= H.degree; ++k) {
        T.block(H.block(k), H.block(k), e, e) = diag;
        if (k < H.degree) T.block(H.block(k + 1), H.block(k), e, e) = sub;
    }
    return T;
}

SupNorm sup_norm_circle(const OperatorSymbol& sym, int grid) {
    grid = std::max(grid, 64);
    auto f = [&](double t) { return op_norm(ComplexMatrix(sym.F1 + std::polar(1.0, t) * sym.F2)); };
    SupNorm s;
    s.resolution = 2 * std::numbers::pi / grid;
    int best_k = 0;
    double best = f(0);
    for (int k = 1; k < grid; ++k) {
        const double v = f(k * s.resolution);
        if (v > best) {
            best = v;
            best_k = k;
        }
    }
    const double centre = best_k * s.resolution;
    auto [arg, val] = golden_maximize(f, centre - s.resolution, centre + s.resolution, 60);
    s.value = std::max(best, val);
    s.theta = val > best ? arg : centre;
    s.refinement_gap = s.value - best;
    return s;
}

SymbolBoundary symbol_boundary(const OperatorSymbol& sym, int samples) {
    SymbolBoundary sb;
    sb.min_root_margin = std::numeric_limits<double>::infinity();
    const Index e = sym.coeff_dim();
    for (int k = 0; k < samples; ++k) {
        const Complex w = std::polar(1.0, 2 * std::numbers::pi * (k + 0.5) / samples);
        const ComplexMatrix phi = sym.F1.adjoint() + w * sym.F2;
        const ComplexMatrix psi = sym.F2.adjoint() + w * sym.F1;
        const ComplexMatrix wI = w * ComplexMatrix::Identity(e, e);
        const OperatorTriple sample{phi, psi, wI, commutator_residual(phi, psi, wI)};
        for (const auto& x : joint_spectrum(sample, static_cast<std::uint64_t>(k) + 1).points) {
            ++sb.points;
            const auto r = classify(x);
            if (r.member() && r.root_margin >= -1e-6) ++sb.members;
            sb.max_distinguished_gap = std::max(sb.max_distinguished_gap, r.distinguished_gap);
            sb.min_root_margin = std::min(sb.min_root_margin, r.root_margin);
        }
    }
    return sb;
}

IsometryModel build_gamma3_isometry(const OperatorSymbol& sym, const HardyTruncation& H, double tol,
                                    int symbol_samples) {
    if (H.degree < 2) throw Error(ErrorCode::DimensionMismatch, "build_gamma3_isometry: truncation degree must be >= 2");
    require_finite(sym.F1, "build_gamma3_isometry: F1");
    require_finite(sym.F2, "build_gamma3_isometry: F2");
    IsometryModel m;
    m.almost_normal = is_almost_normal(sym.F1, sym.F2, tol * (1 + std::pow(op_norm(sym.F1) + op_norm(sym.F2), 2)));
    if (!m.almost_normal.holds)
        throw Error(ErrorCode::NotAlmostNormal, "build_gamma3_isometry: commutator " +
                                                    std::to_string(m.almost_normal.commutator) + ", self-commutator gap " +
                                                    std::to_string(m.almost_normal.self_commutator_gap));
    m.sup_norm = sup_norm_circle(sym);
    if (m.sup_norm.value > 3 + tol)
        throw Error(ErrorCode::SupNormExceeded, "build_gamma3_isometry: sup norm " + std::to_string(m.sup_norm.value));

    const ComplexMatrix S1 = toeplitz(sym, H, ToeplitzKind::Phi);
    const ComplexMatrix S2 = toeplitz(sym, H, ToeplitzKind::Psi);
    const ComplexMatrix Z = toeplitz(sym, H, ToeplitzKind::Shift);
    m.triple = OperatorTriple{S1, S2, Z, commutator_residual(S1, S2, Z)};

    // Columns for degrees 0..N-2, where truncation does not touch the identities.
    const Index e = H.coeff_dim;
    const Index interior = e * (H.degree - 1);
    auto on_interior = [&](const ComplexMatrix& X) { return op_norm(ComplexMatrix(X.leftCols(interior))); };
    const ComplexMatrix id = ComplexMatrix::Identity(H.dim(), H.dim());
    m.edge_residuals["commute_s1_s2"] = on_interior(commutator(S1, S2));
    m.edge_residuals["commute_s1_p"] = on_interior(commutator(S1, Z));
    m.edge_residuals["commute_s2_p"] = on_interior(commutator(S2, Z));
    m.edge_residuals["shift_isometry"] = on_interior(Z.adjoint() * Z - id);
    m.edge_residuals["s1_equals_s2_adjoint_p"] = on_interior(S1 - S2.adjoint() * Z);
    m.edge_residuals["s2_equals_s1_adjoint_p"] = on_interior(S2 - S1.adjoint() * Z);

    // The adjoint fundamental pair lives on degree 0 and equals (F1, F2).
    const OperatorTriple Tadj = adjoint(m.triple);
    const DefectSpace dps = defect(Z, true);
    const auto B = solve_defining(Tadj, dps);
    ComplexMatrix F1hat = ComplexMatrix::Zero(H.dim(), H.dim()), F2hat = F1hat;
    F1hat.topLeftCorner(e, e) = sym.F1;
    F2hat.topLeftCorner(e, e) = sym.F2;
    m.adjoint_pair_residual = std::max(op_norm(ComplexMatrix(dps.lift(B.A1) - F1hat)),
                                       op_norm(ComplexMatrix(dps.lift(B.A2) - F2hat)));

    const auto sb = symbol_boundary(sym, symbol_samples);
    m.symbol_points = sb.points;
    m.symbol_members = sb.members;
    m.max_symbol_gap = sb.max_distinguished_gap;

    double worst = m.adjoint_pair_residual;
    for (const auto& [name, v] : m.edge_residuals) worst = std::max(worst, v);
    m.valid = worst <= tol * (1 + m.sup_norm.value) && m.symbol_members == m.symbol_points;
    return m;
}

ModelEmbedding embed_W(const ComplexMatrix& P, const DefectSpace& dps, int min_degree, double tol) {
    const Index n = P.rows();
    const double norm = op_norm(P);
    if (norm > 1 + 1e-8) throw Error(ErrorCode::NotContraction, "embed_W: ||P|| = " + std::to_string(norm));
    ModelEmbedding emb;
    emb.coeff_dim = dps.dim;

    // Adaptive degree: smallest N with ||P*^N|| <= 1e-8.
    const ComplexMatrix Ph = P.adjoint();
    ComplexMatrix power = ComplexMatrix::Identity(n, n);
    int N = 0;
    while (N < kMaxTruncation && op_norm(power) > 1e-8) {
        power = (Ph * power).eval();
        ++N;
    }
    N = std::max({N, min_degree, 0});

    // Blocks values * basis* * P*^k, the coordinates of D_{P*} P*^k.
    const ComplexMatrix L = dps.values.asDiagonal() * dps.basis.adjoint();
    emb.W = ComplexMatrix::Zero(dps.dim * (N + 1), n);
    power = ComplexMatrix::Identity(n, n);
    for (int k = 0; k <= N; ++k) {
        emb.W.middleRows(dps.dim * k, dps.dim) = L * power;
        power = (Ph * power).eval();
    }
    emb.degree = N;
    emb.truncation_defect = op_norm(ComplexMatrix(ComplexMatrix::Identity(n, n) - emb.W.adjoint() * emb.W));
    if (emb.truncation_defect > tol)
        throw Error(ErrorCode::NotPure, "embed_W: truncation defect " + std::to_string(emb.truncation_defect) +
                                            " at degree " + std::to_string(N));
    return emb;
}

ModelEmbedding embed_W(const ComplexMatrix& P, int min_degree, double tol) {
    return embed_W(P, defect(P, true), min_degree, tol);
}

namespace {

[[noreturn]] void hypothesis_failed(const std::string& name, double value) {
    throw Error(ErrorCode::HypothesisFailed, name + " (" + std::to_string(value) + ")");
}

}  // namespace

AdmissibleConstruction construct_from_admissible(const ComplexMatrix& P, const ComplexMatrix& B1,
                                                 const ComplexMatrix& B2, int min_degree, double tol) {
    if (P.rows() != P.cols()) throw Error(ErrorCode::DimensionMismatch, "construct_from_admissible: P not square");
    require_finite(P, "construct_from_admissible: P");
    require_finite(B1, "construct_from_admissible: B1");
    require_finite(B2, "construct_from_admissible: B2");
    const Defects ds = defects(P);
    const DefectSpace& dps = ds.p_adjoint;
    const Index e = dps.dim;
    if (B1.rows() != e || B1.cols() != e || B2.rows() != e || B2.cols() != e)
        throw Error(ErrorCode::DimensionMismatch, "construct_from_admissible: B1, B2 must act on the defect space of P* (dim " +
                                                      std::to_string(e) + ")");

    AdmissibleConstruction out;
    out.embedding = embed_W(P, dps, min_degree);

    const double bscale = 1 + std::max(op_norm(B1), op_norm(B2));
    const auto an = is_almost_normal(B1, B2, tol * bscale * bscale);
    out.checks["almost_normal_commutator"] = an.commutator;
    out.checks["almost_normal_self_commutator"] = an.self_commutator_gap;
    if (!an.holds) hypothesis_failed("almost_normal", std::max(an.commutator, an.self_commutator_gap));
    const double w1 = numerical_radius(B1).value, w2 = numerical_radius(B2).value;
    out.checks["numerical_radius_b1"] = w1;
    out.checks["numerical_radius_b2"] = w2;
    if (w1 > 3 + tol) hypothesis_failed("numerical_radius_b1", w1);
    if (w2 > 3 + tol) hypothesis_failed("numerical_radius_b2", w2);
    out.sup_norm = sup_norm_circle({B1, B2});
    out.checks["sup_norm"] = out.sup_norm.value;

    const HardyTruncation H{e, out.embedding.degree};
    const OperatorSymbol sym{B1, B2};
    const ComplexMatrix& W = out.embedding.W;
    const ComplexMatrix Tphi = toeplitz(sym, H, ToeplitzKind::Phi);
    const ComplexMatrix Tpsi = toeplitz(sym, H, ToeplitzKind::Psi);

    // Range of W must be co-invariant for both Toeplitz operators.
    const ComplexMatrix proj = ComplexMatrix::Identity(H.dim(), H.dim()) - W * W.adjoint();
    const double coinv = std::max(op_norm(ComplexMatrix(proj * Tphi.adjoint() * W)),
                                  op_norm(ComplexMatrix(proj * Tpsi.adjoint() * W)));
    out.checks["co_invariance"] = coinv;
    if (coinv > tol * bscale) hypothesis_failed("co_invariance", coinv);

    const ComplexMatrix S1 = W.adjoint() * Tphi * W;
    const ComplexMatrix S2 = W.adjoint() * Tpsi * W;
    out.triple = OperatorTriple{S1, S2, P, commutator_residual(S1, S2, P)};
    out.checks["commutation"] = out.triple.commutator_residual;
    if (out.triple.commutator_residual > tol * out.triple.scale())
        hypothesis_failed("commutation", out.triple.commutator_residual);

    out.A = solve_defining(out.triple, ds.p, tol);
    out.B = solve_defining(adjoint(out.triple), dps, tol);
    const double adj = std::max(op_norm(ComplexMatrix(out.B.A1 - B1)), op_norm(ComplexMatrix(out.B.A2 - B2)));
    out.checks["adjoint_pair"] = adj;
    if (adj > tol * bscale) hypothesis_failed("adjoint_pair", adj);

    const TripleAnalysis analysis{out.triple, ds, out.A, out.B};
    const auto inter = verify_theta_intertwining(analysis, standard_z_samples());
    out.checks["intertwining"] = inter.max_residual();
    if (inter.max_residual() > tol * bscale) hypothesis_failed("intertwining", inter.max_residual());
    return out;
}

}  // namespace gamma3
