#pragma once

// Exact linear feasibility { mu >= 0 : A mu = b } with Farkas certificates.
//
// Exactly one of the following holds (Farkas' lemma):
//   * some mu >= 0 solves A mu = b, or
//   * some y has yᵀA >= 0 componentwise and yᵀb < 0.
// solve_feasibility returns a witness for whichever branch holds, checked by
// re-substitution before it is returned.

#include "famrep/rational.hpp"

#include <cstddef>
#include <variant>
#include <vector>

namespace famrep::lp {

using Matrix = std::vector<std::vector<Rational>>;

struct FeasibilitySystem {
    Matrix a;                 // d x n
    std::vector<Rational> b;  // d
    /// Adds the row Σ mu = 1.
    bool normalized = false;

    std::size_t rows() const { return a.size(); }
    std::size_t cols() const { return a.empty() ? 0 : a.front().size(); }
    /// Throws std::invalid_argument unless d >= 1, n >= 1 and shapes agree.
    void validate() const;
    /// (A | b) with the normalization row appended when flagged.
    FeasibilitySystem augmented() const;
};

struct Feasible {
    std::vector<Rational> mu;
};

/// yᵀA >= 0 and yᵀb < 0 over the augmented system (the normalization row, when
/// present, is the last entry of y). Scaled so the first nonzero entry has
/// absolute value 1.
struct Infeasible {
    std::vector<Rational> y;
};

struct FeasibilityOutcome {
    std::variant<Feasible, Infeasible> result;
    std::size_t pivots = 0;

    bool feasible() const { return std::holds_alternative<Feasible>(result); }
    const std::vector<Rational>& mu() const { return std::get<Feasible>(result).mu; }
    const std::vector<Rational>& certificate() const { return std::get<Infeasible>(result).y; }
};

/// Phase-one simplex over exact rationals with Bland's rule (smallest entering
/// index, ties in the ratio test broken by smallest basic index). Artificial
/// variables left basic at level zero are pivoted out afterwards, so the
/// returned mu is a basic solution of the original system.
FeasibilityOutcome solve_feasibility(const FeasibilitySystem& sys);

/// Exact re-substitution check of either branch.
bool verify(const FeasibilitySystem& sys, const FeasibilityOutcome& outcome);

/// Scales v so its first nonzero entry has absolute value 1.
void normalize_certificate(std::vector<Rational>& v);

}  // namespace famrep::lp
