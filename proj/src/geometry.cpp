#include "gamma3/geometry.hpp"

#include <Eigen/Eigenvalues>

namespace gamma3 {

namespace {

Complex cubic(const Point3& x, Complex t) { return ((t - x.s1) * t + x.s2) * t - x.p; }
Complex cubic_prime(const Point3& x, Complex t) { return (3.0 * t - 2.0 * x.s1) * t + x.s2; }

// Slack of (s, q) in the closed symmetrized bidisc: |s| <= 2, |s - conj(s) q| <= 1 - |q|^2.
double bidisc_slack(Complex s, Complex q) {
    return std::min(2.0 - std::abs(s), 1.0 - std::norm(q) - std::abs(s - std::conj(s) * q));
}

}  // namespace

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::InteriorG3: return "InteriorG3";
        case Verdict::BoundaryGamma3: return "BoundaryGamma3";
        case Verdict::DistinguishedBoundary: return "DistinguishedBoundary";
        case Verdict::Outside: return "Outside";
    }
    return "Unknown";
}

Point3 symmetrize(Complex z1, Complex z2, Complex z3) {
    return {z1 + z2 + z3, z1 * z2 + z2 * z3 + z3 * z1, z1 * z2 * z3};
}

std::array<Complex, 3> root_fiber(const Point3& x) {
    Eigen::Matrix3cd companion;
    companion << x.s1, -x.s2, x.p, 1, 0, 0, 0, 1, 0;
    Eigen::ComplexEigenSolver<Eigen::Matrix3cd> es(companion, false);
    std::array<Complex, 3> roots{};
    for (int k = 0; k < 3; ++k) {
        Complex t = es.eigenvalues()(k);
        // Newton polish, kept only when it lowers the residual.
        for (int it = 0; it < 2; ++it) {
            const Complex d = cubic_prime(x, t);
            if (std::abs(d) == 0) break;
            const Complex next = t - cubic(x, t) / d;
            if (!(std::abs(cubic(x, next)) < std::abs(cubic(x, t)))) break;
            t = next;
        }
        roots[static_cast<size_t>(k)] = t;
    }
    return roots;
}

std::array<double, 6> condition_slacks(const Point3& x) {
    const Complex s1 = x.s1, s2 = x.s2, p = x.p;
    const double a1 = std::norm(s1), a2 = std::norm(s2), ap = std::norm(p);
    const double mixed = std::abs(s1 * s2 - 9.0 * p);
    const double d1 = std::abs(s1 - std::conj(s2) * p);
    const double d2 = std::abs(s2 - std::conj(s1) * p);

    std::array<double, 6> slack{};
    slack[0] = 9 - a2 - 3 * d1 - mixed;
    slack[1] = 9 - a1 - 3 * d2 - mixed;
    slack[2] = std::min(9 - (a1 - a2 + 9 * ap + 6 * d2), 3 - std::abs(s2));
    slack[3] = std::min(9 - (-a1 + a2 + 9 * ap + 6 * d1), 3 - std::abs(s1));
    slack[4] = std::min(9 - (a1 + a2 - 9 * ap + 2 * mixed), 1 - std::abs(p));
    slack[5] = 3 * (1 - ap) - d1 - d2;
    return slack;
}

double oracle_condition2(const Point3& x, int boundary_samples) {
    boundary_samples = std::max(boundary_samples, 256);
    if (std::abs(x.s1) >= 3) return 3 - std::abs(x.s1);
    auto margin = [&](double theta) {
        const Complex z = std::polar(1.0, theta);
        return std::abs(3.0 - x.s1 * z) - std::abs(x.s2 - 3.0 * x.p * z);
    };
    const double h = 2 * std::numbers::pi / boundary_samples;
    int best_k = 0;
    double best = margin(0);
    for (int k = 1; k < boundary_samples; ++k) {
        const double m = margin(k * h);
        if (m < best) {
            best = m;
            best_k = k;
        }
    }
    auto neg = [&](double theta) { return -margin(theta); };
    auto [arg, val] = golden_maximize(neg, (best_k - 1) * h, (best_k + 1) * h, 50);
    (void)arg;
    return std::min(best, -val);
}

double distinguished_gap(const Point3& x) {
    const double unimodular = std::abs(std::abs(x.p) - 1);
    const double self_inversive = std::abs(x.s1 - std::conj(x.s2) * x.p);
    // Roots of the derivative 3t^2 - 2 s1 t + s2 have sum 2 s1 / 3 and product s2 / 3.
    const double derivative = std::max(0.0, -bidisc_slack(2.0 * x.s1 / 3.0, x.s2 / 3.0));
    return std::max({unimodular, self_inversive, derivative});
}

MembershipReport classify(const Point3& x, const ClassifyOptions& opts) {
    MembershipReport r;
    r.slack = condition_slacks(x);
    r.oracle_margin = oracle_condition2(x, opts.oracle_samples);
    r.roots = root_fiber(x);
    double max_root = 0;
    for (const auto& t : r.roots) max_root = std::max(max_root, std::abs(t));
    r.root_margin = 1 - max_root;
    r.distinguished_gap = distinguished_gap(x);

    bool any_in = false, any_out = false;
    auto vote = [&](double s) {
        if (std::abs(s) <= opts.ambiguity) return;
        (s > 0 ? any_in : any_out) = true;
    };
    for (double s : r.slack) vote(s);
    vote(r.oracle_margin);
    r.disagreement = any_in && any_out;

    const double primary = r.slack[static_cast<size_t>(Condition::C5)];
    if (r.distinguished_gap <= opts.boundary_tol) {
        r.verdict = Verdict::DistinguishedBoundary;
    } else if (primary > opts.ambiguity) {
        r.verdict = Verdict::InteriorG3;
    } else if (primary < -opts.ambiguity) {
        r.verdict = Verdict::Outside;
    } else {
        r.verdict = Verdict::BoundaryGamma3;
        r.boundary_ambiguous = true;
    }
    r.outside_root_definition = r.member() && r.root_margin < -1e-6;
    return r;
}

DecompositionWitness witness8(const Point3& x) {
    const double ap = std::norm(x.p);
    if (std::abs(x.p) >= 1 - 1e-12) throw Error(ErrorCode::UnitP, "witness8: |p| >= 1");
    return {(x.s1 - std::conj(x.s2) * x.p) / (1 - ap), (x.s2 - std::conj(x.s1) * x.p) / (1 - ap)};
}

std::optional<MatrixWitness> witness7(const Point3& x, int search_budget) {
    const Complex b11 = x.s1 / 3.0, b22 = x.s2 / 3.0;
    const Complex q = b11 * b22 - x.p;  // b12 * b21
    auto make = [&](double t) {
        ComplexMatrix B(2, 2);
        if (std::abs(q) == 0) {
            B << b11, 0, 0, b22;
        } else {
            B << b11, t, q / t, b22;
        }
        return B;
    };
    // ||B|| depends on b12 only through |b12| (the phase of b12 moves into b21
    // and leaves the Frobenius norm and det unchanged), so the search is over t > 0.
    double best_t = 1;
    double best = op_norm(make(best_t));
    if (std::abs(q) > 0) {
        const double centre = 0.5 * std::log(std::abs(q));
        const int budget = std::max(search_budget, 16);
        const double lo = centre - 10, hi = centre + 10;
        int best_k = 0;
        for (int k = 0; k < budget; ++k) {
            const double s = lo + (hi - lo) * k / (budget - 1);
            const double v = op_norm(make(std::exp(s)));
            if (v < best) {
                best = v;
                best_k = k;
                best_t = std::exp(s);
            }
        }
        const double step = (hi - lo) / (budget - 1);
        const double mid = lo + step * best_k;
        auto neg = [&](double s) { return -op_norm(make(std::exp(s))); };
        auto [arg, val] = golden_maximize(neg, mid - step, mid + step, 60);
        if (-val < best) {
            best = -val;
            best_t = std::exp(arg);
        }
    }
    if (best > 1 + 1e-8) return std::nullopt;
    return MatrixWitness{make(best_t), best};
}

}  // namespace gamma3
