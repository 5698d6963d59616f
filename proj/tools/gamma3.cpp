// gamma3: command-line front end.
//
// Exit codes: 0 success / member / passed / equivalent, 1 negative verdict,
// 2 ambiguous or inconclusive, 3 input error.

#include "gamma3/charfun.hpp"
#include "gamma3/generators.hpp"
#include "gamma3/io.hpp"
#include "gamma3/model.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <iostream>

using namespace gamma3;

namespace {

constexpr int kOk = 0, kNegative = 1, kAmbiguous = 2, kInputError = 3;

constexpr const char* kComplexHelp =
    "Complex literals: a, bi, a+bi, a-bi, i, -i (a, b decimal, exponents allowed; j accepted for i).";

std::uint64_t default_seed() {
    if (const char* env = std::getenv("GAMMA3_SEED")) {
        try {
            size_t used = 0;
            const unsigned long long v = std::stoull(env, &used);
            if (used == std::string(env).size()) return v;
        } catch (const std::exception&) {
        }
        throw Error(ErrorCode::ParseError, "GAMMA3_SEED is not an unsigned integer");
    }
    return 1;
}

void emit(const Json& j) { std::cout << j.dump(2) << '\n'; }

Json point_json(const Point3& x) {
    return {{"s1", format_complex(x.s1)}, {"s2", format_complex(x.s2)}, {"p", format_complex(x.p)}};
}

OperatorTriple load_triple(const std::string& path) {
    const auto t = triple_from_json(read_json_file(path));
    return make_triple(t.S1, t.S2, t.P);
}

// Coordinates in the defect basis, plus the operators lifted to the full space.
Json pair_json(const FundamentalPair& p, const DefectSpace& d) {
    return {{"A1", matrix_to_json(p.A1)},
            {"A2", matrix_to_json(p.A2)},
            {"basis", matrix_to_json(d.basis)},
            {"lifted", {{"A1", matrix_to_json(d.lift(p.A1))}, {"A2", matrix_to_json(d.lift(p.A2))}}},
            {"residual_defining", p.residual_defining},
            {"residual_tetra", p.residual_tetra}};
}

Json triple_json(const OperatorTriple& T, const Json& metadata = Json::object()) {
    return triple_to_json({T.S1, T.S2, T.P, metadata});
}

// --- membership -------------------------------------------------------------

struct MembershipArgs {
    std::string point, roots, report = "json";
    bool strict = false;
};

int cmd_membership(const MembershipArgs& a) {
    if (a.point.empty() == a.roots.empty())
        throw Error(ErrorCode::ParseError, "give exactly one of --point or --roots");
    const auto values = parse_complex_list(a.point.empty() ? a.roots : a.point);
    if (values.size() != 3) throw Error(ErrorCode::ParseError, "expected three comma-separated complex numbers");
    const Point3 x = a.point.empty() ? symmetrize(values[0], values[1], values[2]) : Point3{values[0], values[1], values[2]};
    const auto r = classify(x);

    int code = kOk;
    if (r.verdict == Verdict::Outside) code = kNegative;
    else if (r.boundary_ambiguous) code = kAmbiguous;
    if (a.strict && r.outside_root_definition) code = kNegative;

    if (a.report == "text") {
        std::cout << to_string(r.verdict) << '\n';
        for (size_t k = 0; k < r.slack.size(); ++k)
            std::cout << "  slack(" << kConditionNames[k] << ") = " << r.slack[k] << '\n';
        std::cout << "  oracle_margin = " << r.oracle_margin << "\n  distinguished_gap = " << r.distinguished_gap
                  << "\n  root_margin = " << r.root_margin << '\n';
        return code;
    }
    Json slacks = Json::object();
    for (size_t k = 0; k < r.slack.size(); ++k) slacks[std::string(kConditionNames[k])] = r.slack[k];
    Json roots = Json::array();
    for (const auto& t : r.roots) roots.push_back(format_complex(t));
    emit({{"point", point_json(x)},
          {"verdict", to_string(r.verdict)},
          {"member", r.member()},
          {"slacks", slacks},
          {"oracle_margin", r.oracle_margin},
          {"distinguished_gap", r.distinguished_gap},
          {"roots", roots},
          {"root_margin", r.root_margin},
          {"disagreement", r.disagreement},
          {"boundary_ambiguous", r.boundary_ambiguous},
          {"outside_root_definition", r.outside_root_definition}});
    return code;
}

// --- certify ----------------------------------------------------------------

Json certifier_json(const CertifierReport& r, const CertifyOptions& o) {
    Json checks = Json::object();
    for (const auto& [name, c] : r.necessary_checks) checks[name] = {{"passed", c.passed}, {"margin", c.margin}};
    return {{"verdict", to_string(r.verdict)},
            {"necessary_checks", checks},
            {"failed_checks", r.failed_checks()},
            {"polynomial_trials", r.polynomial_trials},
            {"worst_ratio", r.worst_ratio},
            {"options",
             {{"degree", o.max_degree}, {"trials", o.trials}, {"grid", o.boundary_grid}, {"seed", o.seed}}}};
}

int cmd_certify(const std::string& file, const CertifyOptions& o) {
    const auto T = load_triple(file);
    const auto r = certify_gamma3_contraction(T, o);
    emit(certifier_json(r, o));
    return r.verdict == CertifierVerdict::PassedSampled ? kOk : kNegative;
}

// --- fundamental ------------------------------------------------------------

int cmd_fundamental(const std::string& file, bool suite) {
    const auto T = load_triple(file);
    const auto an = analyze(T);
    const auto tetra = solve_tetra(T, an.defects.p);
    Json out = {{"dim", T.dim()},
                {"defect_dim", an.defects.p.dim},
                {"adjoint_defect_dim", an.defects.p_adjoint.dim},
                {"A", pair_json(an.A, an.defects.p)},
                {"B", pair_json(an.B, an.defects.p_adjoint)},
                {"cross_solver_gap", std::max(op_norm(ComplexMatrix(an.A.A1 - tetra.A1)),
                                              op_norm(ComplexMatrix(an.A.A2 - tetra.A2)))}};
    if (an.defects.p.dim == 0) out["note"] = "defect space of P is trivial";
    if (suite) {
        const auto ids = verify_identity_suite(an);
        const auto zs = standard_z_samples();
        Json res = Json::object();
        for (const auto& [k, v] : ids.residuals) res[k] = v;
        for (const auto& rep : {verify_adjoint_intertwining(an, zs), verify_theta_intertwining(an, zs)})
            for (const auto& [k, v] : rep.residuals) res[k] = v;
        const auto ct = verify_commutator_transfer(an);
        out["residuals"] = res;
        out["pair_commutator"] = ids.pair_commutator;
        out["gram_hypothesis"] = ids.gram_hypothesis;
        out["commutator_transfer"] = {{"hypothesis_met", ct.hypothesis_met},
                                      {"p_invertible", ct.p_invertible},
                                      {"sigma_min_p", ct.sigma_min_p},
                                      {"a_commutator", ct.a_commutator},
                                      {"b_commutator", ct.b_commutator},
                                      {"self_commutator_gap_a", ct.self_commutator_a},
                                      {"self_commutator_gap_b", ct.self_commutator_b},
                                      {"equivalence_holds", ct.equivalence_holds}};
    }
    emit(out);
    return kOk;
}

// --- model ------------------------------------------------------------------

struct ModelArgs {
    std::string f1, f2, admissible, out;
    int truncation = 8;
};

int finish_triple(const ModelArgs& a, const OperatorTriple& T, Json report, const Json& metadata) {
    if (!a.out.empty()) {
        write_json_file(a.out, triple_json(T, metadata));
        report["triple_file"] = a.out;
    } else {
        report["triple"] = triple_json(T, metadata);
    }
    emit(report);
    return report.value("valid", true) ? kOk : kNegative;
}

int cmd_model(const ModelArgs& a) {
    if (!a.admissible.empty()) {
        std::vector<std::string> paths;
        std::stringstream ss(a.admissible);
        for (std::string p; std::getline(ss, p, ',');) paths.push_back(p);
        if (paths.size() != 3) throw Error(ErrorCode::ParseError, "--admissible expects P,B1,B2 file paths");
        const ComplexMatrix P = matrix_from_json(read_json_file(paths[0]));
        if (P.rows() != P.cols()) throw Error(ErrorCode::DimensionMismatch, "P must be square");
        AdmissibleData d{P, matrix_from_json(read_json_file(paths[1])), matrix_from_json(read_json_file(paths[2])), {}, {}, "file"};
        if (d.B1_hat.rows() != P.rows() || d.B1_hat.cols() != P.rows() || d.B2_hat.rows() != P.rows() ||
            d.B2_hat.cols() != P.rows())
            throw Error(ErrorCode::DimensionMismatch, "B1, B2 must be n x n like P");
        compress_pair(d);
        const auto c = construct_from_admissible(d.P, d.B1, d.B2);
        const Defects ds = defects(d.P);
        Json checks = Json::object();
        for (const auto& [k, v] : c.checks) checks[k] = v;
        Json report = {{"kind", "admissible"},
                       {"valid", true},
                       {"truncation_degree", c.embedding.degree},
                       {"truncation_defect", c.embedding.truncation_defect},
                       {"checks", checks},
                       {"A", pair_json(c.A, ds.p)},
                       {"B", pair_json(c.B, ds.p_adjoint)}};
        return finish_triple(a, c.triple, report, {{"generator", "admissible"}});
    }
    if (a.f1.empty() || a.f2.empty()) throw Error(ErrorCode::ParseError, "give --F1 and --F2, or --admissible");
    const OperatorSymbol sym{matrix_from_json(read_json_file(a.f1)), matrix_from_json(read_json_file(a.f2))};
    if (sym.F1.rows() != sym.F1.cols() || sym.F1.rows() != sym.F2.rows() || sym.F2.rows() != sym.F2.cols())
        throw Error(ErrorCode::DimensionMismatch, "F1, F2 must be square of equal size");
    const auto m = build_gamma3_isometry(sym, {sym.coeff_dim(), a.truncation});
    Json edges = Json::object();
    for (const auto& [k, v] : m.edge_residuals) edges[k] = v;
    Json report = {{"kind", "isometry"},
                   {"valid", m.valid},
                   {"truncation_degree", a.truncation},
                   {"sup_norm", m.sup_norm.value},
                   {"almost_normal", {{"commutator", m.almost_normal.commutator},
                                      {"self_commutator_gap", m.almost_normal.self_commutator_gap}}},
                   {"edge_residuals", edges},
                   {"adjoint_pair_residual", m.adjoint_pair_residual},
                   {"symbol_points", m.symbol_points},
                   {"symbol_members", m.symbol_members},
                   {"max_symbol_distinguished_gap", m.max_symbol_gap}};
    return finish_triple(a, m.triple, report, {{"generator", "toeplitz_model"}});
}

// --- invariants -------------------------------------------------------------

int cmd_invariants(const std::string& fa, const std::string& fb, const InvariantsOptions& o) {
    const auto r = invariants_pipeline(load_triple(fa), load_triple(fb), o);
    Json out = {{"verdict", to_string(r.verdict)},
                {"reason", r.reason},
                {"max_invariant_gap", r.max_invariant_gap},
                {"nullity", r.nullity},
                {"coincidence_residual", r.coincidence_residual},
                {"pair_residual", r.pair_residual},
                {"cross_validation", r.cross_validation}};
    if (r.certificate) out["certificate"] = {{"u", matrix_to_json(r.certificate->u)}, {"u_star", matrix_to_json(r.certificate->u_star)}};
    emit(out);
    switch (r.verdict) {
        case EquivalenceVerdict::Equivalent: return kOk;
        case EquivalenceVerdict::NotEquivalent: return kNegative;
        case EquivalenceVerdict::Inconclusive: return kAmbiguous;
    }
    return kAmbiguous;
}

// --- random -----------------------------------------------------------------

struct RandomArgs {
    std::string kind = "scalar", out;
    int dim = 2;
    int truncation = 4;
    std::uint64_t seed = 1;
};

int cmd_random(const RandomArgs& a) {
    if (a.dim < 1 || a.dim > 64) throw Error(ErrorCode::ParseError, "--dim must be in 1..64");
    Rng rng(split_seed(a.seed, 0));
    OperatorTriple T;
    Json meta = {{"seed", a.seed}, {"generator", a.kind}};
    if (a.kind == "scalar") {
        T = scalar_triple(rng);
    } else if (a.kind == "diagonal") {
        T = diagonal_triple(a.dim, rng);
    } else if (a.kind == "model") {
        T = model_triple(a.dim, std::max(a.truncation, 2), rng);
        meta["truncation"] = std::max(a.truncation, 2);
    } else if (a.kind == "admissible") {
        const auto d = admissible_data(a.dim, rng);
        T = construct_from_admissible(d.P, d.B1, d.B2).triple;
        meta["family"] = d.family;
    } else {
        throw Error(ErrorCode::ParseError, "unknown --kind " + a.kind);
    }
    const Json j = triple_json(T, meta);
    if (!a.out.empty()) write_json_file(a.out, j);
    else emit(j);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical toolkit for the symmetrized tridisc and its operator theory.\n" + std::string(kComplexHelp)};
    app.require_subcommand(1);

    std::uint64_t env_seed = 1;
    try {
        env_seed = default_seed();
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInputError;
    }

    MembershipArgs mem;
    auto* membership = app.add_subcommand("membership", "Classify a point of C^3 (exit 0 member, 1 outside, 2 ambiguous).");
    membership->add_option("--point", mem.point, "s1,s2,p as complex literals");
    membership->add_option("--roots", mem.roots, "z1,z2,z3; the point is their symmetrization");
    membership->add_flag("--strict", mem.strict, "also require every root of the cubic to lie in the closed disc");
    membership->add_option("--report", mem.report, "json or text")->check(CLI::IsMember({"json", "text"}));
    membership->footer(kComplexHelp);

    std::string certify_file;
    CertifyOptions copts;
    copts.seed = env_seed;
    auto* certify = app.add_subcommand("certify", "Randomized spectral-set test (exit 0 passed, 1 refuted).");
    certify->add_option("triple", certify_file, "triple file")->required();
    certify->add_option("--degree", copts.max_degree, "maximum total degree")->check(CLI::Range(0, 8));
    certify->add_option("--trials", copts.trials, "number of random polynomials")->check(CLI::Range(1, 100000));
    certify->add_option("--grid", copts.boundary_grid, "angles per coordinate on the boundary torus")->check(CLI::Range(4, 96));
    certify->add_option("--seed", copts.seed, "seed (default GAMMA3_SEED or 1)");

    std::string fundamental_file;
    bool suite = false;
    auto* fundamental = app.add_subcommand("fundamental", "Fundamental pairs of a triple and of its adjoint.");
    fundamental->add_option("triple", fundamental_file, "triple file")->required();
    fundamental->add_flag("--verify-suite", suite, "also report identity and intertwining residuals");

    ModelArgs margs;
    auto* model = app.add_subcommand("model", "Toeplitz model triple, or the triple built from admissible data.");
    model->add_option("--F1", margs.f1, "matrix file for F1");
    model->add_option("--F2", margs.f2, "matrix file for F2");
    model->add_option("--truncation", margs.truncation, "truncation degree N (blocks 0..N)")->check(CLI::Range(2, 512));
    model->add_option("--admissible", margs.admissible,
                      "P,B1,B2 matrix files; B1 and B2 are n x n and are compressed to the defect space of P*");
    model->add_option("--out", margs.out, "write the triple file here instead of stdout");

    std::string inv_a, inv_b;
    InvariantsOptions iopts;
    iopts.seed = env_seed;
    auto* invariants = app.add_subcommand("invariants", "Unitary equivalence of two pure triples (exit 0/1/2).");
    invariants->add_option("tripleA", inv_a, "first triple file")->required();
    invariants->add_option("tripleB", inv_b, "second triple file")->required();
    invariants->add_option("--seed", iopts.seed, "seed (default GAMMA3_SEED or 1)");
    invariants->add_option("--budget", iopts.attempts, "random starts of the certificate search")->check(CLI::Range(1, 1000));

    RandomArgs rargs;
    rargs.seed = env_seed;
    auto* random = app.add_subcommand("random", "Seeded random triple.");
    random->add_option("--kind", rargs.kind, "scalar, diagonal, model or admissible")
        ->check(CLI::IsMember({"scalar", "diagonal", "model", "admissible"}));
    random->add_option("--dim", rargs.dim, "matrix size (coefficient size for model)");
    random->add_option("--truncation", rargs.truncation, "truncation degree for --kind model");
    random->add_option("--seed", rargs.seed, "seed (default GAMMA3_SEED or 1)");
    random->add_option("--out", rargs.out, "write here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInputError;
    }

    try {
        if (*membership) return cmd_membership(mem);
        if (*certify) return cmd_certify(certify_file, copts);
        if (*fundamental) return cmd_fundamental(fundamental_file, suite);
        if (*model) return cmd_model(margs);
        if (*invariants) return cmd_invariants(inv_a, inv_b, iopts);
        if (*random) return cmd_random(rargs);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        switch (e.code()) {
            case ErrorCode::NotContraction:
            case ErrorCode::InconsistentSystem:
            case ErrorCode::NotAlmostNormal:
            case ErrorCode::SupNormExceeded:
            case ErrorCode::HypothesisFailed:
            case ErrorCode::NotPure:
                return kNegative;
            case ErrorCode::GenericityFailure:
            case ErrorCode::NoConvergence:
                return kAmbiguous;
            default:
                return kInputError;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInputError;
    }
    return kInputError;
}
