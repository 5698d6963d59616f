#include "gamma3/fundamental.hpp"
#include "gamma3/operator_core.hpp"

#include <random>

namespace gamma3 {

namespace {

struct Monomial {
    int a, b, c;  // s1^a s2^b p^c
};

std::vector<Monomial> monomials(int degree) {
    std::vector<Monomial> out;
    for (int total = 0; total <= degree; ++total)
        for (int a = total; a >= 0; --a)
            for (int b = total - a; b >= 0; --b) out.push_back({a, b, total - a - b});
    return out;
}

std::vector<ComplexMatrix> powers(const ComplexMatrix& X, int degree) {
    std::vector<ComplexMatrix> out{ComplexMatrix::Identity(X.rows(), X.cols())};
    for (int k = 1; k <= degree; ++k) out.push_back(out.back() * X);
    return out;
}

// Monomial values at symmetrize(e^{i t0}, e^{i t1}, e^{i t2}).
void boundary_row(const std::vector<Monomial>& mono, const std::array<double, 3>& t, int degree,
                  ComplexVector& row) {
    const Point3 x = symmetrize(std::polar(1.0, t[0]), std::polar(1.0, t[1]), std::polar(1.0, t[2]));
    std::vector<Complex> ps1(degree + 1), ps2(degree + 1), pp(degree + 1);
    ps1[0] = ps2[0] = pp[0] = 1;
    for (int k = 1; k <= degree; ++k) {
        ps1[k] = ps1[k - 1] * x.s1;
        ps2[k] = ps2[k - 1] * x.s2;
        pp[k] = pp[k - 1] * x.p;
    }
    row.resize(static_cast<Index>(mono.size()));
    for (size_t m = 0; m < mono.size(); ++m) row(static_cast<Index>(m)) = ps1[mono[m].a] * ps2[mono[m].b] * pp[mono[m].c];
}

NamedCheck check(double margin) { return {margin >= 0, margin}; }

}  // namespace

CertifierReport certify_gamma3_contraction(const OperatorTriple& T, const CertifyOptions& opts) {
    CertifierReport report;
    const double slack = 1e-8;
    const double p_norm = op_norm(T.P);
    report.necessary_checks["p_contraction"] = check(1 + slack - p_norm);
    report.necessary_checks["s1_norm"] = check(3 + slack - op_norm(T.S1));
    report.necessary_checks["s2_norm"] = check(3 + slack - op_norm(T.S2));

    // Joint spectrum inside the closed set: either on the distinguished boundary,
    // or inside the closed-form region with every root in the closed disc.
    const auto js = joint_spectrum(T, opts.seed);
    double spectrum_margin = std::numeric_limits<double>::infinity();
    std::vector<std::array<double, 3>> spectral_angles;
    for (const auto& x : js.points) {
        if (distinguished_gap(x) <= 1e-8) {
            spectrum_margin = std::min(spectrum_margin, 0.0);
            const auto roots = root_fiber(x);
            spectral_angles.push_back({std::arg(roots[0]), std::arg(roots[1]), std::arg(roots[2])});
            continue;
        }
        const auto r = classify(x);
        const double m = std::min(r.slack[static_cast<size_t>(Condition::C5)] + 1e-7, r.root_margin + 1e-6);
        spectrum_margin = std::min(spectrum_margin, m);
    }
    if (js.points.empty()) spectrum_margin = 0;
    report.necessary_checks["joint_spectrum_in_gamma3"] = check(spectrum_margin);

    if (p_norm <= 1 + slack) {
        const double tol = 1e-6 * T.scale();
        try {
            const auto pair = solve_defining(T);
            report.necessary_checks["fundamental_equations"] = check(tol - pair.residual_defining);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::InconsistentSystem) throw;
            report.necessary_checks["fundamental_equations"] = {false, -1};
        }
    }

    // Randomized spectral-set test against the distinguished boundary.
    const int degree = std::max(opts.max_degree, 0);
    const auto mono = monomials(degree);
    const Index nm = static_cast<Index>(mono.size());
    const auto p1 = powers(T.S1, degree), p2 = powers(T.S2, degree), pp = powers(T.P, degree);
    std::vector<ComplexMatrix> op_mono;
    op_mono.reserve(mono.size());
    for (const auto& m : mono) op_mono.push_back(p1[m.a] * p2[m.b] * pp[m.c]);

    // theta1 <= theta2 <= theta3 covers every symmetric point once.
    const int g = std::max(opts.boundary_grid, 4);
    const double h = 2 * std::numbers::pi / g;
    std::vector<std::array<double, 3>> grid;
    for (int i = 0; i < g; ++i)
        for (int j = i; j < g; ++j)
            for (int k = j; k < g; ++k) grid.push_back({i * h, j * h, k * h});
    ComplexMatrix values(static_cast<Index>(grid.size()), nm);
    ComplexVector row;
    for (size_t r = 0; r < grid.size(); ++r) {
        boundary_row(mono, grid[r], degree, row);
        values.row(static_cast<Index>(r)) = row.transpose();
    }

    const int starts = 6;
    report.polynomial_trials = opts.trials;
    report.worst_ratio = 0;
    for (int trial = 0; trial < opts.trials; ++trial) {
        std::mt19937_64 rng(split_seed(opts.seed, static_cast<std::uint64_t>(trial)));
        std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
        ComplexVector coef(nm);
        for (Index m = 0; m < nm; ++m) coef(m) = Complex(gauss(rng), gauss(rng));

        ComplexMatrix f = ComplexMatrix::Zero(T.dim(), T.dim());
        for (Index m = 0; m < nm; ++m) f += coef(m) * op_mono[static_cast<size_t>(m)];
        const double lhs = op_norm(f);

        const RealVector mag = (values * coef).cwiseAbs();
        std::vector<Index> order(static_cast<size_t>(mag.size()));
        for (Index i = 0; i < mag.size(); ++i) order[static_cast<size_t>(i)] = i;
        const size_t top = std::min<size_t>(starts, order.size());
        std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(top), order.end(),
                          [&](Index a, Index b) { return mag(a) > mag(b); });

        auto modulus = [&](const std::array<double, 3>& t) {
            ComplexVector r;
            boundary_row(mono, t, degree, r);
            return std::abs(r.cwiseProduct(coef).sum());
        };
        double sup = mag.maxCoeff();
        std::vector<std::array<double, 3>> seeds = spectral_angles;
        for (size_t s = 0; s < top; ++s) seeds.push_back(grid[static_cast<size_t>(order[s])]);
        for (auto t : seeds) {
            sup = std::max(sup, modulus(t));
            double width = h;
            for (int round = 0; round < 4; ++round) {
                for (int c = 0; c < 3; ++c) {
                    auto along = [&](double v) {
                        auto u = t;
                        u[static_cast<size_t>(c)] = v;
                        return modulus(u);
                    };
                    const double centre = t[static_cast<size_t>(c)];
                    auto [arg, val] = golden_maximize(along, centre - width, centre + width, 40);
                    if (val > modulus(t)) t[static_cast<size_t>(c)] = arg;
                }
                width *= 0.5;
            }
            sup = std::max(sup, modulus(t));
        }
        const double ratio = sup > 0 ? lhs / sup : (lhs > 0 ? std::numeric_limits<double>::infinity() : 0);
        report.worst_ratio = std::max(report.worst_ratio, ratio);
    }

    const bool necessary_ok = report.failed_checks().empty();
    report.verdict = (necessary_ok && report.worst_ratio <= 1 + 1e-6) ? CertifierVerdict::PassedSampled
                                                                       : CertifierVerdict::Refuted;
    return report;
}

}  // namespace gamma3
