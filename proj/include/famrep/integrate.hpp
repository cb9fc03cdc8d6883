#pragma once

// Random quantities on a finite ground set and their finitely additive
// integral.
//
// On a finite ground set the map t -> λ_*(X > t) is a step function whose
// pieces are the open intervals between consecutive attained values of X, so
// every layer-cake integral is a finite exact sum. Measurability reduces to a
// finite check: the set {t > 0 : {X > t} ∈ A(λ)} is dense in (0, ∞) exactly
// when each open interval between consecutive attained values (and the one
// below the smallest positive value) has its level set in A(λ), because
// {X > t} is constant on each such interval. Tightness is automatic here.

#include "famrep/setcore.hpp"

#include <optional>
#include <variant>
#include <vector>

namespace famrep {

/// Exact rational-valued function on the atoms of a ground set.
class RandomQuantity {
public:
    RandomQuantity(GroundSet ground, std::vector<Rational> values);
    static RandomQuantity constant(const GroundSet& ground, const Rational& c);
    static RandomQuantity indicator(const Subset& set, const Rational& c = Rational(1));

    const GroundSet& ground() const { return ground_; }
    const std::vector<Rational>& values() const { return values_; }
    const Rational& operator()(std::size_t i) const { return values_.at(i); }

    bool is_nonnegative() const;
    RandomQuantity positive_part() const;
    RandomQuantity negative_part() const;
    RandomQuantity min_with(const Rational& b) const;

    /// {X > t} and {X >= t}.
    Subset above(const Rational& t) const;
    Subset at_least(const Rational& t) const;
    /// Strictly positive attained values, ascending, without repeats.
    std::vector<Rational> positive_levels() const;

    friend RandomQuantity operator+(const RandomQuantity& a, const RandomQuantity& b);
    friend RandomQuantity operator-(const RandomQuantity& a, const RandomQuantity& b);
    friend RandomQuantity operator*(const RandomQuantity& a, const RandomQuantity& b);
    friend RandomQuantity operator*(const Rational& c, const RandomQuantity& a);
    friend RandomQuantity operator-(const RandomQuantity& a);
    friend bool operator==(const RandomQuantity&, const RandomQuantity&) = default;

private:
    GroundSet ground_;
    std::vector<Rational> values_;
};

/// Finite combination Σ c_k 1_{A_k} with every A_k drawn from `ring`.
struct SimpleFunction {
    SetRing ring;
    std::vector<std::pair<Rational, Subset>> terms;

    /// Throws InvariantError when a term's set is not in the ring.
    void validate() const;
    RandomQuantity evaluate() const;
};

/// Σ c_k λ(A_k), each A_k evaluated through the carrier extension of λ.
/// Throws PreconditionError when some A_k is not carried.
Rational integrate_simple(const SimpleFunction& f, const MeasureStructure& ms);

/// The finitely many t > 0 where t -> λ_*(X > t) jumps. D(X, λ) is the
/// complement of `discontinuities` in (0, ∞).
struct JumpReport {
    std::vector<Rational> discontinuities;
};

JumpReport jump_set(const RandomQuantity& x, const MeasureStructure& ms);

bool is_measurable(const RandomQuantity& x, const MeasureStructure& ms);

/// Staircase approximation over A(λ) with threshold mesh 2^-(n+1) on (0, 2^n]:
/// X_n = Σ t_i 1{t_i < X <= t_{i+1}} with the top cell below 2^n left out.
/// Then 0 <= X_n <= X, X_n increases in n and |X - X_n| < 2^-n where X <= 2^(n-1).
/// Throws PreconditionError for negative or non-measurable X, or n < 1.
SimpleFunction staircase(const RandomQuantity& x, const MeasureStructure& ms, unsigned n);

/// Lower and upper layer-cake integrals ∫ λ_*(X > t) dt and ∫ λ^*(X > t) dt
/// of the positive part of X.
struct LayerIntegrals {
    Rational lower;
    ExtendedRational upper;
};

LayerIntegrals layer_integrals(const RandomQuantity& x, const MeasureStructure& ms);

/// Why an integral does not exist: the layer integrals of X⁺ or X⁻ differ.
struct NotIntegrable {
    LayerIntegrals positive_tail;
    LayerIntegrals negative_tail;
};

class IntegralResult {
public:
    IntegralResult(Rational value) : state_(std::move(value)) {}
    IntegralResult(NotIntegrable failure) : state_(std::move(failure)) {}

    bool integrable() const { return std::holds_alternative<Rational>(state_); }
    /// Throws PreconditionError when not integrable.
    const Rational& value() const;
    const NotIntegrable& failure() const { return std::get<NotIntegrable>(state_); }

private:
    std::variant<Rational, NotIntegrable> state_;
};

/// ∫X⁺dλ − ∫X⁻dλ with each tail computed by the layer-cake formula.
IntegralResult integral(const RandomQuantity& x, const MeasureStructure& ms);

/// (R_g, λ_g) with R_g = A(λ) and λ_g(A) = ∫ 1_A g dλ. Throws
/// PreconditionError for negative or non-measurable g.
MeasureStructure density_measure(const MeasureStructure& ms, const RandomQuantity& g);

/// Minimal structure carrying the integrals of a family: the ring generated
/// by the level sets {h > t}, t ∈ D(h, λ) (and {-h > t} for signed members),
/// with λ restricted from its carrier extension. Throws PreconditionError when
/// a family member is not integrable.
MeasureStructure minimal_structure(const std::vector<RandomQuantity>& family,
                                   const MeasureStructure& ms);

}  // namespace famrep
