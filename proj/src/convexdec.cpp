#include "famrep/convexdec.hpp"

#include <algorithm>
#include <map>

namespace famrep {

namespace {

Rational positive(const Rational& x) { return x > 0 ? x : Rational(0); }

// Sampled slope estimates at every grid point.
std::vector<Rational> grid_slopes(const SampledFunction& f) {
    const auto& y = f.values;
    const std::size_t n = y.size() - 1;
    const Rational twice = 2 * f.step;
    std::vector<Rational> s(n + 1);
    s[0] = (-3 * y[0] + 4 * y[1] - y[2]) / twice;
    s[n] = (3 * y[n] - 4 * y[n - 1] + y[n - 2]) / twice;
    for (std::size_t k = 1; k < n; ++k) s[k] = (y[k + 1] - y[k - 1]) / twice;
    return s;
}

std::size_t first_argmin(const std::vector<Rational>& values) {
    return static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());
}

PiecewiseLinear subtract_tangent(const PiecewiseLinear& phi, const Rational& x0) {
    const Rational left = phi.left_slope(x0);
    const Rational right = phi.right_slope(x0);
    PiecewiseLinear out = phi;
    for (std::size_t j = 0; j < out.slopes.size(); ++j) {
        const bool right_of_x0 = j > 0 && phi.breakpoints[j - 1] >= x0;
        out.slopes[j] -= right_of_x0 ? right : left;
    }
    const Rational offset = out.anchor_x - x0;
    out.anchor_value -= (out.anchor_x > x0 ? right : left) * offset;
    return out;
}

Rational default_minimizer(const PiecewiseLinear& phi) {
    if (phi.slopes.front() > 0 || phi.slopes.back() < 0) {
        throw PreconditionError("the infimum is not attained: φ is monotone at infinity");
    }
    if (phi.breakpoints.empty()) return phi.anchor_x;
    if (phi.slopes.front() == 0) return phi.breakpoints.front();
    std::size_t j = 1;
    while (phi.slopes[j] < 0) ++j;
    return phi.breakpoints[j - 1];
}

}  // namespace

// ---------------------------------------------------------------------------
// Piecewise-linear and sampled functions

void PiecewiseLinear::validate() const {
    if (slopes.size() != breakpoints.size() + 1) {
        throw InvariantError("need one more slope than breakpoints");
    }
    for (std::size_t j = 1; j < breakpoints.size(); ++j) {
        if (!(breakpoints[j - 1] < breakpoints[j])) {
            throw InvariantError("breakpoints must strictly increase");
        }
    }
}

bool PiecewiseLinear::is_convex() const {
    return std::is_sorted(slopes.begin(), slopes.end());
}

Rational PiecewiseLinear::right_slope(const Rational& x) const {
    const auto j = std::upper_bound(breakpoints.begin(), breakpoints.end(), x) - breakpoints.begin();
    return slopes[static_cast<std::size_t>(j)];
}

Rational PiecewiseLinear::left_slope(const Rational& x) const {
    const auto j = std::lower_bound(breakpoints.begin(), breakpoints.end(), x) - breakpoints.begin();
    return slopes[static_cast<std::size_t>(j)];
}

Rational PiecewiseLinear::operator()(const Rational& x) const {
    // Integrate the slope from the anchor to x piece by piece.
    const bool forward = anchor_x <= x;
    const Rational& a = forward ? anchor_x : x;
    const Rational& b = forward ? x : anchor_x;
    Rational area(0);
    for (std::size_t j = 0; j < slopes.size(); ++j) {
        Rational lo = a, hi = b;
        if (j > 0 && breakpoints[j - 1] > lo) lo = breakpoints[j - 1];
        if (j < breakpoints.size() && breakpoints[j] < hi) hi = breakpoints[j];
        if (lo < hi) area += slopes[j] * (hi - lo);
    }
    return forward ? Rational(anchor_value + area) : Rational(anchor_value - area);
}

void SampledFunction::validate() const {
    if (!(step > 0)) throw InvariantError("grid step must be positive");
    if (values.size() < 3) throw InvariantError("need at least three samples");
}

void SampledFunction::require_convex() const {
    validate();
    for (std::size_t k = 1; k + 1 < values.size(); ++k) {
        if (values[k + 1] - 2 * values[k] + values[k - 1] < 0) {
            throw NotConvex("negative second difference at " + to_string(point(k)));
        }
    }
}

// ---------------------------------------------------------------------------
// Kink measures

void KinkMeasure::validate() const {
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (!(atoms[i].second > 0)) throw InvariantError("atom masses must be positive");
        if (i > 0 && !(atoms[i - 1].first < atoms[i].first)) {
            throw InvariantError("atom locations must strictly increase");
        }
    }
    if (density) {
        if (!(density->step > 0)) throw InvariantError("density step must be positive");
        for (const auto& m : density->cell_masses) {
            if (m < 0) throw InvariantError("density masses must be nonnegative");
        }
    }
}

Rational KinkMeasure::total() const {
    Rational s(0);
    for (const auto& [x, m] : point_masses()) s += m;
    return s;
}

std::vector<std::pair<Rational, Rational>> KinkMeasure::point_masses() const {
    std::map<Rational, Rational> merged;
    for (const auto& [x, m] : atoms) merged[x] += m;
    if (density) {
        for (std::size_t k = 0; k < density->cell_masses.size(); ++k) {
            if (density->cell_masses[k] != 0) merged[density->midpoint(k)] += density->cell_masses[k];
        }
    }
    return {merged.begin(), merged.end()};
}

Rational KinkMeasure::open_interval(const Rational& a, const Rational& b) const {
    Rational s(0);
    for (const auto& [x, m] : point_masses()) {
        if (a < x && x < b) s += m;
    }
    return s;
}

Rational kernel_eval(const Rational& u, const Rational& v, const Rational& x0, const Rational& x) {
    if (x > x0) return positive(v - std::max(x, u));
    return -positive(std::min(v, x) - u);
}

// ---------------------------------------------------------------------------
// Normalization and decomposition

std::pair<Rational, PiecewiseLinear> normalize_at_min(const PiecewiseLinear& phi) {
    phi.validate();
    if (!phi.is_convex()) throw NotConvex("slopes must be non-decreasing");
    const Rational x0 = default_minimizer(phi);
    return {x0, subtract_tangent(phi, x0)};
}

std::pair<std::size_t, SampledFunction> normalize_at_min(const SampledFunction& phi) {
    phi.require_convex();
    const std::size_t k0 = first_argmin(phi.values);
    const std::size_t n = phi.values.size() - 1;
    if (k0 == n || (k0 == 0 && phi.values[1] > phi.values[0])) {
        throw PreconditionError("the sampled minimum sits on the edge of the grid");
    }
    const Rational slope = grid_slopes(phi)[k0];
    SampledFunction out = phi;
    for (std::size_t k = 0; k <= n; ++k) out.values[k] -= slope * (phi.point(k) - phi.point(k0));
    return {k0, out};
}

Rational ConvexDecomposition::tangent(const Rational& x) const {
    return (x > x0 ? right_slope : left_slope) * (x - x0);
}

ConvexDecomposition decompose(const PiecewiseLinear& phi, std::optional<Rational> x0) {
    phi.validate();
    if (!phi.is_convex()) throw NotConvex("slopes must be non-decreasing");
    // Subtracting the one-sided tangents at any point makes that point a
    // minimizer of the remainder, so an explicit x0 need not minimize φ.
    if (!x0) x0 = default_minimizer(phi);
    const auto normalized = subtract_tangent(phi, *x0);
    ConvexDecomposition dec{*x0, {}, phi.left_slope(*x0), phi.right_slope(*x0)};
    for (std::size_t j = 0; j < phi.breakpoints.size(); ++j) {
        const Rational jump = normalized.slopes[j + 1] - normalized.slopes[j];
        if (jump > 0) dec.nu.atoms.emplace_back(phi.breakpoints[j], jump);
    }
    return dec;
}

ConvexDecomposition decompose(const SampledFunction& phi) {
    const auto [k0, normalized] = normalize_at_min(phi);
    const auto slopes = grid_slopes(phi);
    ConvexDecomposition dec{phi.point(k0), {}, slopes[k0], slopes[k0]};
    GridDensity density{phi.start, phi.step, {}};
    for (std::size_t k = 0; k + 1 < slopes.size(); ++k) {
        density.cell_masses.push_back(slopes[k + 1] - slopes[k]);
    }
    dec.nu.density = std::move(density);
    return dec;
}

Rational reconstruct(const Rational& x0, const KinkMeasure& nu, const Rational& u, const Rational& phi_u,
                     const Rational& v) {
    const bool forward = u <= v;
    const Rational& lo = forward ? u : v;
    const Rational& hi = forward ? v : u;
    Rational s(0);
    for (const auto& [x, m] : nu.point_masses()) s += m * kernel_eval(lo, hi, x0, x);
    return forward ? Rational(phi_u + s) : Rational(phi_u - s);
}

Rational reconstruct(const ConvexDecomposition& dec, const Rational& u, const Rational& phi_u,
                     const Rational& v) {
    const Rational normalized_u = phi_u - dec.tangent(u);
    return reconstruct(dec.x0, dec.nu, u, normalized_u, v) + dec.tangent(v);
}

// ---------------------------------------------------------------------------
// Ω-side measure

StieltjesInstance stieltjes_lambda(const ConvexDecomposition& dec, std::vector<Rational> thresholds) {
    thresholds.push_back(dec.x0);
    std::sort(thresholds.begin(), thresholds.end());
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
    if (thresholds.size() < 2) throw PreconditionError("need at least two distinct thresholds");

    const std::size_t cells = thresholds.size() - 1;
    std::vector<Rational> mass(cells, Rational(0)), moment(cells, Rational(0));
    for (const auto& [x, m] : dec.nu.point_masses()) {
        if (!(thresholds.front() < x && x < thresholds.back())) {
            throw PreconditionError("mass at " + to_string(x) + " is not bracketed by the thresholds");
        }
        const auto it = std::lower_bound(thresholds.begin(), thresholds.end(), x);
        if (*it == x) throw PreconditionError("mass at " + to_string(x) + " sits on a threshold");
        const auto j = static_cast<std::size_t>(it - thresholds.begin()) - 1;
        mass[j] += m;
        moment[j] += m * x;
    }

    std::vector<std::string> labels;
    std::vector<Rational> x_values;
    for (std::size_t j = 0; j < cells; ++j) {
        labels.push_back("(" + to_string(thresholds[j]) + "," + to_string(thresholds[j + 1]) + "]");
        x_values.push_back(mass[j] != 0 ? Rational(moment[j] / mass[j])
                                        : Rational((thresholds[j] + thresholds[j + 1]) / 2));
    }
    const GroundSet ground(labels);
    RandomQuantity x(ground, x_values);

    std::vector<Subset> generators;
    const Subset up_to_x0 = x.above(dec.x0).complement();
    for (const auto& t : thresholds) {
        if (t < dec.x0) generators.push_back(x.above(t) & up_to_x0);
        if (t > dec.x0) generators.push_back(x.above(dec.x0) - x.above(t));
    }
    const auto ring = generate_ring(ground, generators);
    std::vector<Rational> atom_masses;
    for (const auto& atom : ring.atoms()) {
        Rational s(0);
        for (auto j : atom.indices()) s += mass[j];
        atom_masses.push_back(s);
    }
    return {dec.x0, std::move(thresholds), MeasureStructure(ring, std::move(atom_masses)), std::move(x)};
}

StieltjesInstance stieltjes_lambda(const PiecewiseLinear& phi, std::vector<Rational> thresholds) {
    return stieltjes_lambda(decompose(phi), std::move(thresholds));
}

Rational stieltjes_increment(const StieltjesInstance& inst, const Rational& u, const Rational& v) {
    const bool forward = u <= v;
    const Rational& lo = forward ? u : v;
    const Rational& hi = forward ? v : u;
    std::vector<Rational> h;
    for (const auto& xv : inst.x.values()) h.push_back(kernel_eval(lo, hi, inst.x0, xv));
    const Rational value = integral(RandomQuantity(inst.x.ground(), std::move(h)), inst.lambda).value();
    return forward ? value : Rational(-value);
}

}  // namespace famrep
