// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "gamma3/charfun.hpp"
#include "gamma3/generators.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>

using namespace gamma3;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

ComplexMatrix scalar(Complex v) {
    ComplexMatrix m(1, 1);
    m(0, 0) = v;
    return m;
}

double pair_gap(const ComplexMatrix& a1, const ComplexMatrix& a2, const ComplexMatrix& b1, const ComplexMatrix& b2) {
    return std::max(op_norm(ComplexMatrix(a1 - b1)), op_norm(ComplexMatrix(a2 - b2)));
}

struct Outcome {
    bool pass = true;
    std::ostringstream detail;
    std::string failures;

    void require(bool ok, const std::string& what) {
        if (!ok) failures += (failures.empty() ? "" : "; ") + what;
        pass = pass && ok;
    }
};

// 1. Closed-form conditions and the condition-(2) oracle agree away from the boundary.
void characterization(Outcome& o) {
    Rng rng(split_seed(2024, 1));
    int accepted = 0, disagreements = 0, members = 0;
    double elapsed = 0;
    while (accepted < 10000) {
        const Point3 x = accepted % 2 == 0
                             ? random_member(rng, 1.0)
                             : Point3{random_disc_point(rng, 3.3), random_disc_point(rng, 3.3), random_disc_point(rng, 1.05)};
        const auto t0 = Clock::now();
        const auto r = classify(x);
        elapsed += seconds_since(t0);
        bool clear = std::abs(r.oracle_margin) > 1e-7;
        for (double s : r.slack) clear = clear && std::abs(s) > 1e-7;
        if (!clear) continue;
        ++accepted;
        const bool in = r.oracle_margin > 0;
        members += in;
        bool agree = !r.disagreement;
        for (double s : r.slack) agree = agree && ((s > 0) == in);
        disagreements += !agree;
    }
    o.require(disagreements == 0, std::to_string(disagreements) + " disagreements");
    o.require(elapsed < 10, "runtime " + std::to_string(elapsed) + " s");
    o.detail << "points=10000 members=" << members << " disagreements=" << disagreements << " classify_time=" << elapsed
             << "s";
}

// 2. symmetrize(root_fiber(x)) = x, and closed-disc images are members.
void round_trip(Outcome& o) {
    Rng rng(split_seed(2024, 2));
    double worst = 0;
    int non_members = 0;
    for (int k = 0; k < 1000; ++k) {
        const Point3 x{random_disc_point(rng, 3), random_disc_point(rng, 3), random_disc_point(rng, 1)};
        const auto r = root_fiber(x);
        const Point3 y = symmetrize(r[0], r[1], r[2]);
        worst = std::max({worst, std::abs(y.s1 - x.s1), std::abs(y.s2 - x.s2), std::abs(y.p - x.p)});
        // Closed disc, with every fourth triple on the circle.
        const auto z = [&](int i) {
            const Complex c = random_disc_point(rng, 1.0);
            return (k + i) % 4 == 0 ? c / std::abs(c) : c;
        };
        non_members += !classify(symmetrize(z(0), z(1), z(2))).member();
    }
    o.require(worst <= 1e-9, "round trip error " + std::to_string(worst));
    o.require(non_members == 0, std::to_string(non_members) + " images classified outside");
    o.detail << "round_trip_max=" << worst << " image_non_members=" << non_members;
}

const std::vector<GeneratedTriple>& suite() {
    static const auto s = generated_suite(200, 31337, 8);
    return s;
}

// 3. Both solvers agree; scalar closed form.
void cross_solver(Outcome& o) {
    double worst = 0;
    for (const auto& g : suite()) {
        const auto dp = defect(g.triple.P);
        const auto a = solve_defining(g.triple, dp), b = solve_tetra(g.triple, dp);
        worst = std::max(worst, pair_gap(a.A1, a.A2, b.A1, b.A2));
    }
    Rng rng(split_seed(2024, 3));
    double scalar_worst = 0;
    for (int k = 0; k < 1000; ++k) {
        const auto x = random_member(rng, 0.98);
        const auto T = make_triple(scalar(x.s1), scalar(x.s2), scalar(x.p));
        const double q = 1 - std::norm(x.p);
        const Complex a1 = (x.s1 - std::conj(x.s2) * x.p) / q, a2 = (x.s2 - std::conj(x.s1) * x.p) / q;
        for (const auto& pair : {solve_defining(T), solve_tetra(T)})
            scalar_worst = std::max({scalar_worst, std::abs(pair.A1(0, 0) - a1), std::abs(pair.A2(0, 0) - a2)});
    }
    const auto T = make_triple(scalar(1.5), scalar(0.75), scalar(0.125));
    double example = 0;
    for (const auto& pair : {solve_defining(T), solve_tetra(T)})
        example = std::max({example, std::abs(pair.A1(0, 0) - 10.0 / 7.0), std::abs(pair.A2(0, 0) - 4.0 / 7.0)});
    o.require(worst <= 1e-8, "solver gap " + std::to_string(worst));
    o.require(scalar_worst <= 1e-12, "scalar formula error " + std::to_string(scalar_worst));
    o.require(example <= 1e-12, "(10/7, 4/7) error " + std::to_string(example));
    o.detail << "triples=" << suite().size() << " solver_gap=" << worst << " scalar_err=" << scalar_worst
             << " example_err=" << example;
}

// 4. Identity suite on all triples; commutator transfer on invertible P with commuting A-pair.
void identity_suite(Outcome& o) {
    double worst = 0;
    int subfamily = 0, transfer_failures = 0;
    for (const auto& g : suite()) {
        const auto an = analyze(g.triple);
        worst = std::max(worst, verify_identity_suite(an).max_residual());
        const auto ct = verify_commutator_transfer(an);
        if (!ct.hypothesis_met) continue;
        ++subfamily;
        transfer_failures += !ct.equivalence_holds;
    }
    o.require(worst <= 1e-7, "identity residual " + std::to_string(worst));
    o.require(subfamily > 0, "empty commutator-transfer subfamily");
    o.require(transfer_failures == 0, std::to_string(transfer_failures) + " commutator-transfer failures");
    o.detail << "identity_max=" << worst << " transfer_subfamily=" << subfamily << " transfer_failures=" << transfer_failures;
}

// 5. Characteristic-function intertwining at 32 points.
void intertwining(Outcome& o) {
    const auto zs = standard_z_samples();
    double worst = 0;
    for (const auto& g : suite()) {
        const auto an = analyze(g.triple);
        worst = std::max({worst, verify_adjoint_intertwining(an, zs).max_residual(),
                          verify_theta_intertwining(an, zs).max_residual()});
    }
    o.require(worst <= 1e-7, "intertwining residual " + std::to_string(worst));
    o.detail << "z_samples=" << zs.size() << " max_residual=" << worst;
}

// 6. Admissible data -> triple -> adjoint pair and spectral-set test.
void model_round_trip(Outcome& o) {
    Rng rng(split_seed(2024, 6));
    double pair_worst = 0, ratio_worst = 0;
    int refuted = 0;
    CertifyOptions opts;
    opts.max_degree = 4;
    opts.trials = 200;
    for (int k = 0; k < 50; ++k) {
        const auto d = admissible_data(8, rng);
        const auto c = construct_from_admissible(d.P, d.B1, d.B2);
        pair_worst = std::max(pair_worst, pair_gap(c.B.A1, c.B.A2, d.B1, d.B2));
        opts.seed = split_seed(2024, 600 + k);
        const auto r = certify_gamma3_contraction(c.triple, opts);
        ratio_worst = std::max(ratio_worst, r.worst_ratio);
        refuted += r.verdict != CertifierVerdict::PassedSampled;
    }
    const auto c = construct_from_admissible(scalar(0.5), scalar(1), scalar(0.5));
    const double oracle = std::max({std::abs(c.triple.S1(0, 0) - 1.25), std::abs(c.triple.S2(0, 0) - 1.0),
                                    std::abs(c.triple.P(0, 0) - 0.5)});
    o.require(pair_worst <= 1e-7, "adjoint pair error " + std::to_string(pair_worst));
    o.require(refuted == 0, std::to_string(refuted) + " triples refuted");
    o.require(ratio_worst <= 1 + 1e-6, "worst ratio " + std::to_string(ratio_worst));
    o.require(oracle <= 1e-12, "scalar oracle error " + std::to_string(oracle));
    o.detail << "instances=50 adjoint_pair_err=" << pair_worst << " worst_ratio=" << ratio_worst
             << " scalar_oracle_err=" << oracle;
}

// 7. Toeplitz model of the (1, 1) symbol.
void isometry_model(Outcome& o) {
    const auto m = build_gamma3_isometry({scalar(1), scalar(1)}, {1, 8});
    double edge = 0;
    for (const auto& [name, v] : m.edge_residuals) edge = std::max(edge, v);
    int distinguished = 0;
    for (int k = 0; k < 64; ++k) {
        const Complex w = std::polar(1.0, 2 * std::numbers::pi * k / 64);
        distinguished += classify({1.0 + w, 1.0 + w, w}).verdict == Verdict::DistinguishedBoundary;
    }
    o.require(m.valid, "model checks failed");
    o.require(distinguished == 64, std::to_string(distinguished) + "/64 symbol points distinguished");
    o.require(m.symbol_members == m.symbol_points, "model symbol points not all distinguished");
    o.detail << "truncation=8 edge_max=" << edge << " distinguished=" << distinguished << "/64";
}

// 8. Equivalent conjugates, inequivalent perturbations.
void unitary_invariants(Outcome& o) {
    Rng rng(split_seed(2024, 8));
    const auto t0 = Clock::now();
    int eq_ok = 0, neq_ok = 0, false_equivalent = 0, inconclusive = 0;
    for (int k = 0; k < 50; ++k) {
        OperatorTriple T;
        if (k % 2 == 0) {
            const auto d = admissible_data(6, rng);
            T = construct_from_admissible(d.P, d.B1, d.B2).triple;
        } else {
            T = diagonal_triple(1 + k % 6, rng);
        }
        const auto r = invariants_pipeline(T, conjugate(T, random_unitary(T.dim(), rng)));
        eq_ok += r.verdict == EquivalenceVerdict::Equivalent;
        inconclusive += r.verdict == EquivalenceVerdict::Inconclusive;
    }
    for (int k = 0; k < 50; ++k) {
        OperatorTriple T, T2;
        if (k % 2 == 0) {
            const auto d = admissible_data(6, rng);
            const auto near = perturbed(d, 1e-2);
            T = construct_from_admissible(d.P, d.B1, d.B2).triple;
            T2 = construct_from_admissible(near.P, near.B1, near.B2).triple;
        } else {
            // Scalar parameter moved by 1e-2 along a random direction, staying in the set.
            Point3 x = random_member(rng, 0.9);
            const Complex dir = std::polar(1e-2, std::uniform_real_distribution<double>(0, 6.28)(rng));
            const Point3 y = k % 4 == 1 ? Point3{x.s1 + dir, x.s2, x.p} : Point3{x.s1, x.s2, x.p + dir};
            T = make_triple(scalar(x.s1), scalar(x.s2), scalar(x.p));
            T2 = make_triple(scalar(y.s1), scalar(y.s2), scalar(y.p));
        }
        const auto r = invariants_pipeline(T, conjugate(T2, random_unitary(T2.dim(), rng)));
        neq_ok += r.verdict == EquivalenceVerdict::NotEquivalent;
        false_equivalent += r.verdict == EquivalenceVerdict::Equivalent;
        inconclusive += r.verdict == EquivalenceVerdict::Inconclusive;
    }
    const double elapsed = seconds_since(t0);
    o.require(eq_ok == 50, std::to_string(eq_ok) + "/50 conjugated pairs Equivalent");
    o.require(neq_ok == 50, std::to_string(neq_ok) + "/50 perturbed pairs NotEquivalent");
    o.require(false_equivalent == 0, std::to_string(false_equivalent) + " false Equivalent");
    o.require(elapsed < 60, "runtime " + std::to_string(elapsed) + " s");
    o.detail << "equivalent=" << eq_ok << "/50 not_equivalent=" << neq_ok << "/50 false_equivalent=" << false_equivalent
             << " inconclusive=" << inconclusive << " time=" << elapsed << "s";
}

// 9. Kernel numerics.
void kernel_numerics(Outcome& o) {
    Rng rng(split_seed(2024, 9));
    double eig = 0, sqrt_err = 0, penrose = 0, sandwich = 0, contractive = 0, resolvent = 0, norm_gap = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const Index n = 1 + trial % 16;
        const ComplexMatrix G = random_gaussian(n, n, rng);
        const ComplexMatrix H = (G + G.adjoint()) * 0.5;
        const auto e = hermitian_eig(H);
        const ComplexMatrix& V = e.eigenvectors;
        eig = std::max({eig, op_norm(ComplexMatrix(H - V * e.eigenvalues.asDiagonal() * V.adjoint())) / (1 + op_norm(H)),
                        op_norm(ComplexMatrix(V.adjoint() * V - ComplexMatrix::Identity(n, n)))});

        const ComplexMatrix A = G.adjoint() * G;
        const ComplexMatrix R = psd_sqrt(A);
        sqrt_err = std::max(sqrt_err, op_norm(ComplexMatrix(R * R - A)) / (1 + op_norm(A)));

        const Index r = 1 + trial % n;
        const ComplexMatrix L = random_gaussian(n, r, rng) * random_gaussian(r, n, rng);
        const ComplexMatrix X = pinv(L);
        const double s = 1 + op_norm(L);
        penrose = std::max({penrose, op_norm(ComplexMatrix(L * X * L - L)) / (s * s),
                            op_norm(ComplexMatrix(X * L * X - X)) / (s * (1 + op_norm(X))),
                            op_norm(ComplexMatrix((L * X).adjoint() - L * X)) / s,
                            op_norm(ComplexMatrix((X * L).adjoint() - X * L)) / s});

        const double w = numerical_radius(G).value, nrm = op_norm(G);
        sandwich = std::max({sandwich, w - nrm, nrm - 2 * w});
        norm_gap = std::max(norm_gap, std::abs(nrm * nrm - lambda_max(ComplexMatrix(G.adjoint() * G))) / (1 + nrm * nrm));

        const ComplexMatrix P = G * (1.0 / nrm);
        const Defects d = defects(P);
        for (Complex z : standard_z_samples(trial)) {
            contractive = std::max(contractive, op_norm(theta(P, d, z)) - 1);
            const ComplexMatrix res = resolvent_apply(P, z);
            resolvent = std::max(resolvent, op_norm(ComplexMatrix((ComplexMatrix::Identity(n, n) - z * P) * res -
                                                                  ComplexMatrix::Identity(n, n))));
        }
    }
    o.require(eig <= 1e-10, "eig residual " + std::to_string(eig));
    o.require(sqrt_err <= 1e-9, "sqrt residual " + std::to_string(sqrt_err));
    o.require(penrose <= 1e-8, "Penrose residual " + std::to_string(penrose));
    o.require(sandwich <= 1e-10, "numerical radius sandwich violated by " + std::to_string(sandwich));
    o.require(norm_gap <= 1e-9, "norm vs Gram eigenvalue " + std::to_string(norm_gap));
    o.require(contractive <= 1e-10, "characteristic function exceeds 1 by " + std::to_string(contractive));
    o.require(resolvent <= 1e-9, "resolvent residual " + std::to_string(resolvent));
    o.detail << "eig=" << eig << " sqrt=" << sqrt_err << " penrose=" << penrose << " sandwich=" << sandwich
             << " theta_excess=" << contractive << " resolvent=" << resolvent;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria = {
        {"characterization equivalence", characterization},
        {"geometry round trip", round_trip},
        {"fundamental pair cross-solver", cross_solver},
        {"fundamental identity suite", identity_suite},
        {"intertwining identities", intertwining},
        {"admissible model round trip", model_round_trip},
        {"isometry model", isometry_model},
        {"unitary invariants", unitary_invariants},
        {"kernel numerics", kernel_numerics},
    };
    int failures = 0;
    for (size_t k = 0; k < criteria.size(); ++k) {
        Outcome o;
        const auto t0 = Clock::now();
        try {
            criteria[k].second(o);
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        std::printf("%s %zu %s (%.1fs) %s%s%s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first,
                    seconds_since(t0), o.detail.str().c_str(), o.failures.empty() ? "" : " | failed: ",
                    o.failures.c_str());
        std::fflush(stdout);
        failures += !o.pass;
    }
    return failures == 0 ? 0 : 1;
}
