#pragma once

// Representation theorems on finite ground sets, posed as exact linear
// feasibility problems.
//
// A functional φ on the span of h_1..h_d is conglomerative with respect to T
// when φ(h) < 0 forces inf_ω (Th)(ω) < 0. With finitely many columns the
// conical hull of the evaluation vectors is polyhedral and therefore closed,
// so conglomerability is plain cone membership of (φ(h_i))_i and Farkas'
// lemma supplies the violating h whenever membership fails. On a finite
// ground set every function is bounded, so no purely finitely additive
// residual appears in the representation.

#include "famrep/integrate.hpp"
#include "famrep/lp.hpp"

#include <optional>
#include <string>
#include <vector>

namespace famrep {

/// Finite form of a pair (φ, T): T[i][ω] = (T h_i)(ω) and phi[i] = φ(h_i).
/// Nonlinear generator families are handled by listing their lifted
/// evaluations directly as rows.
struct ConglomerabilityInstance {
    std::vector<std::string> basis_labels;
    GroundSet omega;
    lp::Matrix t;
    std::vector<Rational> phi;

    std::size_t dimension() const { return basis_labels.size(); }
    /// Throws InvariantError on shape mismatches or repeated labels.
    void validate() const;
    lp::FeasibilitySystem system(bool normalized) const;
    /// Keeps only the listed columns, in order.
    ConglomerabilityInstance restrict_columns(const std::vector<std::size_t>& columns) const;
};

/// Feasible(μ ≥ 0) with Σ_ω μ(ω) T[i][ω] = phi[i], or Infeasible(a) with
/// Σ a_i phi[i] < 0 and Σ a_i T[i][ω] >= 0 for every ω.
lp::FeasibilityOutcome check_conglomerability(const ConglomerabilityInstance& inst);

/// As above with Σμ = 1. An infeasible certificate (a, c) satisfies
/// Σ a_i T[i][ω] + c >= 0 for all ω and Σ a_i phi[i] + c < 0; the reported
/// certificate is a alone, for which Σ a_i phi[i] < min_ω Σ a_i T[i][ω].
lp::FeasibilityOutcome probability_representation(const ConglomerabilityInstance& inst);

/// Re-substitution check of either function's output.
bool verify_representation(const ConglomerabilityInstance& inst, const lp::FeasibilityOutcome& out,
                           bool normalized);

struct DirectedVerdict {
    bool directed = false;
    /// Coefficients a with Σ a_i T[i][ω] >= 1 on every column where T is not
    /// identically zero (all zeros when no such column exists).
    std::vector<Rational> witness;
    std::size_t pivots = 0;
};

/// T is directed iff some combination of the rows is >= 1 on the support of
/// T: such a vector dominates every |Th| after scaling, and conversely a
/// combination that is nonzero on the whole support (a generic one) is
/// dominated only by vectors positive there.
DirectedVerdict is_directed(const ConglomerabilityInstance& inst);

/// A map between ground sets, stored as the image index of each point.
struct PointMap {
    GroundSet domain;
    GroundSet codomain;
    std::vector<std::size_t> image;

    /// Throws InvariantError on a size mismatch or an out-of-range image.
    void validate() const;
    /// h ∘ map, a quantity on the domain.
    RandomQuantity pull(const RandomQuantity& h) const;
    bool injective() const;
};

/// Null sets given by generators; membership means inclusion in their union.
struct IdealOfSets {
    GroundSet ground;
    std::vector<Subset> generators;

    Subset union_of_generators() const;
    bool contains(const Subset& set) const;
};

struct CompanionResult {
    /// The lifted problem actually solved (null columns already removed).
    ConglomerabilityInstance instance;
    /// Columns of the full Ω′ that the solved instance keeps.
    std::vector<std::size_t> kept_columns;
    /// Solver output; a feasible μ is expanded to all of Ω′ with zeros on
    /// the removed columns.
    lp::FeasibilityOutcome outcome;
    /// Power set of Ω′ weighted by μ, and the minimal structure carrying the
    /// integrals of h_i ∘ X′ under it.
    std::optional<MeasureStructure> measure;
    std::optional<MeasureStructure> minimal;
};

/// Looks for μ on Ω′ with ∫ h_i(X) dm = Σ_ω′ μ(ω′) h_i(X′(ω′)) for every i.
/// Throws PreconditionError when some h_i ∘ X is not integrable.
CompanionResult solve_companion(const MeasureStructure& m, const PointMap& x,
                                const std::vector<RandomQuantity>& family,
                                const PointMap& xprime);

/// Same problem with μ required to vanish on the ideal.
CompanionResult solve_companion_with_nulls(const MeasureStructure& m, const PointMap& x,
                                           const std::vector<RandomQuantity>& family,
                                           const PointMap& xprime, const IdealOfSets& neg);

/// Exact re-substitution check of a companion result.
bool verify_companion(const MeasureStructure& m, const PointMap& x,
                      const std::vector<RandomQuantity>& family, const PointMap& xprime,
                      const CompanionResult& result);

/// Mixture problem m = Σ_θ λ(θ) Q_θ on a finite algebra.
struct DisintegrationInstance {
    SetRing algebra;
    AdditiveSetFunction m;
    std::vector<std::string> thetas;
    std::vector<AdditiveSetFunction> q;

    /// Throws InvariantError unless the algebra covers the ground set, all set
    /// functions live on it and each has total mass 1.
    void validate() const;
};

/// Feasible(λ) over θ with Σλ = 1, or Infeasible(c) with one coefficient per
/// algebra atom such that Σ_a c_a Q_θ(a) >= 0 for every θ and
/// Σ_a c_a m(a) < 0.
lp::FeasibilityOutcome disintegrate(const DisintegrationInstance& inst);

bool verify_disintegration(const DisintegrationInstance& inst, const lp::FeasibilityOutcome& out);

/// K(·, s) for every s in S, each an additive set function on a common ring.
struct Kernel {
    GroundSet s;
    std::vector<AdditiveSetFunction> per_point;
};

/// K(A ∩ {X ∈ E}; s) = K(A; s) 1_E(s) for every A in `ring`, E ⊆ S and s ∈ S,
/// with the left side evaluated through the carrier of K(·, s) (an uncarried
/// set fails the identity). Equivalent to the same identity on ring atoms and
/// singletons E, which is what is checked.
bool verify_takeout(const SetRing& ring, const Kernel& kernel, const PointMap& x);

/// K(A, s) = Q_θ(A) for the θ with G(θ) = s, and the zero function off the
/// range of G. Throws PreconditionError unless G is injective and maps the
/// θ labels of the instance into the kernel's point set.
Kernel takeout_kernel(const DisintegrationInstance& inst, const PointMap& g);

}  // namespace famrep
