#include "famrep/integrate.hpp"

#include <algorithm>
#include <map>

namespace famrep {

namespace {

void require_same_ground(const GroundSet& a, const GroundSet& b) {
    if (!(a == b)) throw GroundMismatch();
}

mpz_class ceil_of(const Rational& q) {
    mpz_class r;
    mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

// Level sets {X >= v} for the positive levels v of X, one per open interval
// of (0, ∞) between consecutive attained values.
std::vector<Subset> positive_level_sets(const RandomQuantity& x) {
    std::vector<Subset> out;
    for (const auto& v : x.positive_levels()) out.push_back(x.at_least(v));
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// RandomQuantity

RandomQuantity::RandomQuantity(GroundSet ground, std::vector<Rational> values)
    : ground_(std::move(ground)), values_(std::move(values)) {
    if (values_.size() != ground_.size()) {
        throw InvariantError("random quantity needs one value per atom");
    }
}

RandomQuantity RandomQuantity::constant(const GroundSet& ground, const Rational& c) {
    return RandomQuantity(ground, std::vector<Rational>(ground.size(), c));
}

RandomQuantity RandomQuantity::indicator(const Subset& set, const Rational& c) {
    std::vector<Rational> v(set.ground().size(), Rational(0));
    for (auto i : set.indices()) v[i] = c;
    return RandomQuantity(set.ground(), std::move(v));
}

bool RandomQuantity::is_nonnegative() const {
    return std::all_of(values_.begin(), values_.end(), [](const Rational& v) { return v >= 0; });
}

RandomQuantity RandomQuantity::positive_part() const {
    auto v = values_;
    for (auto& x : v) {
        if (x < 0) x = 0;
    }
    return RandomQuantity(ground_, std::move(v));
}

RandomQuantity RandomQuantity::negative_part() const { return (-*this).positive_part(); }

RandomQuantity RandomQuantity::min_with(const Rational& b) const {
    auto v = values_;
    for (auto& x : v) {
        if (x > b) x = b;
    }
    return RandomQuantity(ground_, std::move(v));
}

Subset RandomQuantity::above(const Rational& t) const {
    Subset s(ground_);
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (values_[i] > t) s.insert(i);
    }
    return s;
}

Subset RandomQuantity::at_least(const Rational& t) const {
    Subset s(ground_);
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (values_[i] >= t) s.insert(i);
    }
    return s;
}

std::vector<Rational> RandomQuantity::positive_levels() const {
    std::vector<Rational> levels;
    for (const auto& v : values_) {
        if (v > 0) levels.push_back(v);
    }
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    return levels;
}

namespace {

template <class Op>
RandomQuantity combine(const RandomQuantity& a, const RandomQuantity& b, Op op) {
    require_same_ground(a.ground(), b.ground());
    std::vector<Rational> v(a.values().size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = op(a(i), b(i));
    return RandomQuantity(a.ground(), std::move(v));
}

}  // namespace

RandomQuantity operator+(const RandomQuantity& a, const RandomQuantity& b) {
    return combine(a, b, [](const Rational& x, const Rational& y) { return Rational(x + y); });
}

RandomQuantity operator-(const RandomQuantity& a, const RandomQuantity& b) {
    return combine(a, b, [](const Rational& x, const Rational& y) { return Rational(x - y); });
}

RandomQuantity operator*(const RandomQuantity& a, const RandomQuantity& b) {
    return combine(a, b, [](const Rational& x, const Rational& y) { return Rational(x * y); });
}

RandomQuantity operator*(const Rational& c, const RandomQuantity& a) {
    auto v = a.values();
    for (auto& x : v) x *= c;
    return RandomQuantity(a.ground(), std::move(v));
}

RandomQuantity operator-(const RandomQuantity& a) { return Rational(-1) * a; }

// ---------------------------------------------------------------------------
// Simple functions

void SimpleFunction::validate() const {
    for (const auto& [c, set] : terms) {
        if (!ring.contains(set)) {
            throw InvariantError("simple-function term " + to_string(set) + " is not in its ring");
        }
    }
}

RandomQuantity SimpleFunction::evaluate() const {
    auto x = RandomQuantity::constant(ring.ground(), Rational(0));
    for (const auto& [c, set] : terms) x = x + RandomQuantity::indicator(set, c);
    return x;
}

Rational integrate_simple(const SimpleFunction& f, const MeasureStructure& ms) {
    const auto carrier = carrier_ring(ms);
    Rational s(0);
    for (const auto& [c, set] : f.terms) {
        if (!carrier.ring().contains(set)) {
            throw PreconditionError("term " + to_string(set) + " is not carried by the measure");
        }
        s += c * carrier.value(set);
    }
    return s;
}

// ---------------------------------------------------------------------------
// Jumps, measurability, staircase

JumpReport jump_set(const RandomQuantity& x, const MeasureStructure& ms) {
    require_same_ground(x.ground(), ms.ground());
    JumpReport report;
    for (const auto& v : x.positive_levels()) {
        // Left limit at v is λ_*(X >= v), right limit is λ_*(X > v).
        if (inner_measure(ms, x.at_least(v)) != inner_measure(ms, x.above(v))) {
            report.discontinuities.push_back(v);
        }
    }
    return report;
}

bool is_measurable(const RandomQuantity& x, const MeasureStructure& ms) {
    require_same_ground(x.ground(), ms.ground());
    const auto carrier = carrier_ring(ms);
    for (const RandomQuantity& side : {x, -x}) {
        for (const auto& level : positive_level_sets(side)) {
            if (!carrier.ring().contains(level)) return false;
        }
    }
    return true;
}

SimpleFunction staircase(const RandomQuantity& x, const MeasureStructure& ms, unsigned n) {
    require_same_ground(x.ground(), ms.ground());
    if (n < 1) throw PreconditionError("staircase index must be positive");
    if (!x.is_nonnegative()) throw PreconditionError("staircase requires a nonnegative quantity");
    if (!is_measurable(x, ms)) throw PreconditionError("staircase requires a measurable quantity");

    const auto carrier = carrier_ring(ms);
    const Rational step = pow2(-static_cast<long>(n) - 1);
    // Grid t_i = i * step, i = 0..I+1 with t_{I+1} = 2^n.
    const mpz_class last_index = mpz_class(1) << (2 * n + 1);  // I + 1
    const mpz_class top_term = last_index - 2;                 // I - 1

    std::map<mpz_class, Subset> cells;
    for (std::size_t i = 0; i < x.values().size(); ++i) {
        const auto& v = x(i);
        if (v <= 0) continue;
        const mpz_class k = ceil_of(Rational(v / step)) - 1;  // largest k with k*step < v
        if (k < 1 || k > top_term) continue;
        cells.try_emplace(k, x.ground()).first->second.insert(i);
    }

    SimpleFunction f{carrier.ring(), {}};
    for (auto& [k, set] : cells) {
        const Rational t = Rational(k) * step;
        // {t < X <= t + step}: a difference of carried level sets.
        Subset cell = x.above(t) - x.above(t + step);
        f.terms.emplace_back(t, std::move(cell));
    }
    f.validate();
    return f;
}

// ---------------------------------------------------------------------------
// Layer-cake integral

LayerIntegrals layer_integrals(const RandomQuantity& x, const MeasureStructure& ms) {
    require_same_ground(x.ground(), ms.ground());
    LayerIntegrals out{Rational(0), ExtendedRational(Rational(0))};
    Rational previous(0);
    Rational upper(0);
    bool upper_finite = true;
    for (const auto& v : x.positive_levels()) {
        // On (previous, v) the level set {X > t} equals {X >= v}.
        const Rational width = v - previous;
        const Subset level = x.at_least(v);
        out.lower += width * inner_measure(ms, level);
        const auto outer = outer_measure(ms, level);
        if (outer.is_infinite()) {
            upper_finite = false;
        } else {
            upper += width * outer.value();
        }
        previous = v;
    }
    out.upper = upper_finite ? ExtendedRational(upper) : ExtendedRational::infinity();
    return out;
}

const Rational& IntegralResult::value() const {
    if (!integrable()) throw PreconditionError("quantity is not integrable");
    return std::get<Rational>(state_);
}

IntegralResult integral(const RandomQuantity& x, const MeasureStructure& ms) {
    NotIntegrable layers{layer_integrals(x, ms), layer_integrals(-x, ms)};
    const auto agree = [](const LayerIntegrals& l) {
        return l.upper.is_finite() && l.upper.value() == l.lower;
    };
    if (!agree(layers.positive_tail) || !agree(layers.negative_tail)) return layers;
    return Rational(layers.positive_tail.lower - layers.negative_tail.lower);
}

// ---------------------------------------------------------------------------
// Density measures and minimal structures

MeasureStructure density_measure(const MeasureStructure& ms, const RandomQuantity& g) {
    require_same_ground(g.ground(), ms.ground());
    if (!g.is_nonnegative()) throw PreconditionError("density must be nonnegative");
    if (!is_measurable(g, ms)) throw PreconditionError("density must be measurable");
    const auto carrier = carrier_ring(ms);
    std::vector<Rational> masses;
    for (const auto& atom : carrier.ring().atoms()) {
        masses.push_back(integral(RandomQuantity::indicator(atom) * g, ms).value());
    }
    return MeasureStructure(carrier.ring(), std::move(masses));
}

MeasureStructure minimal_structure(const std::vector<RandomQuantity>& family,
                                   const MeasureStructure& ms) {
    std::vector<Subset> generators;
    for (const auto& h : family) {
        require_same_ground(h.ground(), ms.ground());
        if (!integral(h, ms).integrable()) {
            throw PreconditionError("family member is not integrable");
        }
        for (const RandomQuantity& side : {h, -h}) {
            // One threshold per continuity interval: the midpoint between
            // consecutive attained levels lies in D(h, λ).
            Rational previous(0);
            for (const auto& v : side.positive_levels()) {
                generators.push_back(side.above((previous + v) / 2));
                previous = v;
            }
        }
    }
    const auto ring = generate_ring(ms.ground(), generators);
    const auto carrier = carrier_ring(ms);
    std::vector<Rational> masses;
    for (const auto& atom : ring.atoms()) masses.push_back(carrier.value(atom));
    return MeasureStructure(ring, std::move(masses));
}

}  // namespace famrep
