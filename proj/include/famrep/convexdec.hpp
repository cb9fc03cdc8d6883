#pragma once

// Convex functions of one real variable as mixtures of the kernels
//
//   h_u^v(x) = (v − max(x, u))⁺ 1{x > x₀} − (min(v, x) − u)⁺ 1{x ≤ x₀}
//
// against their second-derivative ("kink") measure ν. After subtracting the
// one-sided tangents at a minimizer x₀, φ(v) = φ(u) + ∫ h_u^v dν for u <= v.

#include "famrep/integrate.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace famrep {

/// Thrown when an input fails convexity (a negative slope jump or second
/// difference).
class NotConvex : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

/// Continuous piecewise-linear function: slopes[j] holds on the j-th piece,
/// the pieces being (-∞, x_1], [x_1, x_2], ..., [x_k, ∞). The additive
/// constant is fixed by value(anchor_x) = anchor_value.
struct PiecewiseLinear {
    std::vector<Rational> breakpoints;
    std::vector<Rational> slopes;
    Rational anchor_x;
    Rational anchor_value;

    /// Throws InvariantError on shape errors or unsorted breakpoints.
    void validate() const;
    bool is_convex() const;
    Rational operator()(const Rational& x) const;
    Rational right_slope(const Rational& x) const;
    Rational left_slope(const Rational& x) const;
};

/// Samples f(start + k·step), k = 0..N, on a uniform grid.
struct SampledFunction {
    Rational start;
    Rational step;
    std::vector<Rational> values;

    /// Throws InvariantError unless step > 0 and there are at least three samples.
    void validate() const;
    Rational point(std::size_t k) const { return start + step * k; }
    /// Throws NotConvex on a negative second difference.
    void require_convex() const;
};

/// Per-cell masses on a uniform grid; each cell's mass sits at its midpoint.
struct GridDensity {
    Rational start;
    Rational step;
    std::vector<Rational> cell_masses;

    Rational midpoint(std::size_t k) const { return start + step * (Rational(2 * k + 1, 2)); }
};

/// Finite Borel measure: point masses plus an optional gridded density.
struct KinkMeasure {
    std::vector<std::pair<Rational, Rational>> atoms;  // (location, mass), sorted
    std::optional<GridDensity> density;

    /// Throws InvariantError unless masses are positive and locations strictly increase.
    void validate() const;
    Rational total() const;
    /// Every point mass, density midpoints included, in increasing order.
    std::vector<std::pair<Rational, Rational>> point_masses() const;
    /// ν of the open interval (a, b).
    Rational open_interval(const Rational& a, const Rational& b) const;
};

Rational kernel_eval(const Rational& u, const Rational& v, const Rational& x0, const Rational& x);

/// Smallest minimizer x₀ and φ̂ = φ minus the tangent D⁺φ(x₀)(x − x₀) on the
/// right of x₀ and D⁻φ(x₀)(x − x₀) on the left. When φ is flat on a left
/// half-line the first breakpoint is used (the anchor point for a constant φ).
/// Throws PreconditionError when the infimum is approached only at ±∞ and
/// NotConvex for non-convex input.
std::pair<Rational, PiecewiseLinear> normalize_at_min(const PiecewiseLinear& phi);

/// Grid index of the smallest sampled minimizer and the samples minus the
/// estimated tangent there. Throws PreconditionError when the minimum sits on
/// the right end, or on the left end while the samples strictly increase.
std::pair<std::size_t, SampledFunction> normalize_at_min(const SampledFunction& phi);

struct ConvexDecomposition {
    Rational x0;
    KinkMeasure nu;
    /// One-sided slopes at x₀ removed by the normalization.
    Rational left_slope;
    Rational right_slope;

    /// The removed tangent part: right_slope·(x − x₀) for x > x₀, left_slope·(x − x₀) otherwise.
    Rational tangent(const Rational& x) const;
};

/// Kink measure of a convex piecewise-linear function: one atom per genuine
/// breakpoint other than x₀, carrying the slope jump. Without x0 the smallest
/// minimizer is used; an explicit x0 may be any point, since removing the
/// one-sided tangents there leaves a convex function minimized at x0.
/// Throws NotConvex, or PreconditionError when no default minimizer exists.
ConvexDecomposition decompose(const PiecewiseLinear& phi, std::optional<Rational> x0 = std::nullopt);

/// Sampled version: slopes are estimated at the grid points (central
/// differences inside, second-order one-sided differences at the ends) and
/// the slope increase across each cell is placed at the cell midpoint.
ConvexDecomposition decompose(const SampledFunction& phi);

/// φ(u) + ∫ h_u^v dν for normalized φ; for v < u the identity is used in
/// reverse, φ(v) = φ(u) − ∫ h_v^u dν.
Rational reconstruct(const Rational& x0, const KinkMeasure& nu, const Rational& u, const Rational& phi_u,
                     const Rational& v);

/// Reconstruction of the original (unnormalized) function.
Rational reconstruct(const ConvexDecomposition& dec, const Rational& u, const Rational& phi_u,
                     const Rational& v);

/// Finite instance of the Ω-side representation: one ground point per cell
/// (t_{j-1}, t_j] of the thresholds (x₀ inserted), X at the ν-barycentre of
/// the cell (its midpoint when the cell carries no mass), and λ₀ the ν-mass of
/// the cell, on the ring generated by {u < X <= x₀} and {x₀ < X <= v}.
struct StieltjesInstance {
    Rational x0;
    std::vector<Rational> thresholds;
    MeasureStructure lambda;
    RandomQuantity x;
};

/// Throws PreconditionError when some mass of ν lies outside (t_first, t_last]
/// or exactly on a threshold, or when fewer than two thresholds result.
StieltjesInstance stieltjes_lambda(const ConvexDecomposition& dec, std::vector<Rational> thresholds);
StieltjesInstance stieltjes_lambda(const PiecewiseLinear& phi, std::vector<Rational> thresholds);

/// ∫ h_u^v(X) dλ₀ through the layer-cake integral.
Rational stieltjes_increment(const StieltjesInstance& inst, const Rational& u, const Rational& v);

}  // namespace famrep
