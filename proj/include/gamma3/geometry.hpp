#pragma once

// Membership in the closed symmetrized tridisc and its interior / distinguished
// boundary. The closed-form conditions below are evaluated as signed slacks
// (positive = satisfied strictly); the bidisc oracle and the root-fiber
// definition are reported alongside as independent cross-checks.

#include "gamma3/numerics.hpp"

#include <array>
#include <optional>
#include <string_view>

namespace gamma3 {

struct Point3 {
    Complex s1{}, s2{}, p{};
};

Point3 symmetrize(Complex z1, Complex z2, Complex z3);

// Roots of t^3 - s1 t^2 + s2 t - p (companion-matrix eigenvalues).
std::array<Complex, 3> root_fiber(const Point3& x);

enum class Verdict { InteriorG3, BoundaryGamma3, DistinguishedBoundary, Outside };

std::string_view to_string(Verdict v);

// Order of the slack array in MembershipReport.
enum class Condition { C3 = 0, C3Prime, C4, C4Prime, C5, C6 };
inline constexpr std::array<std::string_view, 6> kConditionNames = {"3", "3'", "4", "4'", "5", "6"};

std::array<double, 6> condition_slacks(const Point3& x);

struct MembershipReport {
    Verdict verdict = Verdict::Outside;
    std::array<double, 6> slack{};  // indexed by Condition
    double oracle_margin = 0;       // signed bidisc margin
    bool disagreement = false;      // two conditions disagree with |slack| > ambiguity
    bool boundary_ambiguous = false;
    // Distinguished-boundary test: |p| = 1, s1 = conj(s2) p, and the derivative
    // of the cubic has its roots in the closed disc.
    double distinguished_gap = 0;
    std::array<Complex, 3> roots{};
    double root_margin = 0;  // 1 - max |root|
    // Set when the closed-form verdict says "member" while a root of the cubic
    // lies clearly outside the closed disc.
    bool outside_root_definition = false;

    bool member() const { return verdict != Verdict::Outside; }
};

struct ClassifyOptions {
    double ambiguity = 1e-7;
    double boundary_tol = 1e-8;
    int oracle_samples = 1024;
};

MembershipReport classify(const Point3& x, const ClassifyOptions& opts = {});

// min over |z| = 1 of |3 - s1 z| - |s2 - 3 p z|; when |s1| >= 3 the factor
// 3 - s1 z vanishes in the closed disc and 3 - |s1| is returned instead.
// Positive certifies that 3 - s1 z - s2 w + 3 p z w has no zero on the closed bidisc.
double oracle_condition2(const Point3& x, int boundary_samples = 1024);

// Residual of the closed-form distinguished-boundary test (0 on the boundary).
double distinguished_gap(const Point3& x);

struct DecompositionWitness {
    Complex c1{}, c2{};
};

DecompositionWitness witness8(const Point3& x);

struct MatrixWitness {
    ComplexMatrix B;  // 2x2
    double norm = 0;
};

std::optional<MatrixWitness> witness7(const Point3& x, int search_budget = 512);

}  // namespace gamma3
