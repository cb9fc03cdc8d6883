#include "famrep/setcore.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

namespace famrep {

// ---------------------------------------------------------------------------
// GroundSet

GroundSet::GroundSet(std::vector<std::string> labels) {
    if (labels.empty()) throw InvariantError("ground set must be nonempty");
    auto data = std::make_shared<Data>();
    data->labels = std::move(labels);
    for (std::size_t i = 0; i < data->labels.size(); ++i) {
        if (!data->index.emplace(data->labels[i], i).second) {
            throw InvariantError("duplicate atom label '" + data->labels[i] + "'");
        }
    }
    data_ = std::move(data);
}

std::optional<std::size_t> GroundSet::find(std::string_view label) const {
    const auto it = data_->index.find(std::string(label));
    if (it == data_->index.end()) return std::nullopt;
    return it->second;
}

std::size_t GroundSet::index_of(std::string_view label) const {
    if (auto i = find(label)) return *i;
    throw std::out_of_range("unknown atom label '" + std::string(label) + "'");
}

Subset GroundSet::empty_set() const { return Subset(*this); }

Subset GroundSet::full_set() const {
    boost::dynamic_bitset<> bits(size());
    bits.set();
    return Subset(*this, std::move(bits));
}

Subset GroundSet::singleton(std::size_t i) const {
    Subset s(*this);
    s.insert(i);
    return s;
}

Subset GroundSet::subset(const std::vector<std::string>& labels) const {
    Subset s(*this);
    for (const auto& l : labels) s.insert(index_of(l));
    return s;
}

// ---------------------------------------------------------------------------
// Subset

namespace {

void require_same_ground(const GroundSet& a, const GroundSet& b) {
    if (!(a == b)) throw GroundMismatch();
}

}  // namespace

Subset::Subset(GroundSet ground) : ground_(std::move(ground)), bits_(ground_.size()) {}

Subset::Subset(GroundSet ground, boost::dynamic_bitset<> bits)
    : ground_(std::move(ground)), bits_(std::move(bits)) {
    if (bits_.size() != ground_.size()) throw InvariantError("subset width differs from ground set");
}

Subset Subset::of_indices(const GroundSet& ground, const std::vector<std::size_t>& indices) {
    Subset s(ground);
    for (auto i : indices) s.insert(i);
    return s;
}

std::vector<std::size_t> Subset::indices() const {
    std::vector<std::size_t> out;
    out.reserve(bits_.count());
    for (auto i = bits_.find_first(); i != boost::dynamic_bitset<>::npos; i = bits_.find_next(i)) {
        out.push_back(i);
    }
    return out;
}

std::vector<std::string> Subset::labels() const {
    std::vector<std::string> out;
    for (auto i : indices()) out.push_back(ground_.label(i));
    return out;
}

bool Subset::is_subset_of(const Subset& other) const {
    require_same_ground(ground_, other.ground_);
    return bits_.is_subset_of(other.bits_);
}

bool Subset::intersects(const Subset& other) const {
    require_same_ground(ground_, other.ground_);
    return bits_.intersects(other.bits_);
}

Subset& Subset::insert(std::size_t i) {
    if (i >= bits_.size()) throw std::out_of_range("atom index outside ground set");
    bits_.set(i);
    return *this;
}

Subset operator|(const Subset& a, const Subset& b) {
    require_same_ground(a.ground_, b.ground_);
    return Subset(a.ground_, a.bits_ | b.bits_);
}

Subset operator&(const Subset& a, const Subset& b) {
    require_same_ground(a.ground_, b.ground_);
    return Subset(a.ground_, a.bits_ & b.bits_);
}

Subset operator-(const Subset& a, const Subset& b) {
    require_same_ground(a.ground_, b.ground_);
    return Subset(a.ground_, a.bits_ - b.bits_);
}

Subset Subset::complement() const { return Subset(ground_, ~bits_); }

bool operator==(const Subset& a, const Subset& b) {
    return a.bits_ == b.bits_ && a.ground_ == b.ground_;
}

bool canonical_less(const Subset& a, const Subset& b) {
    const auto& x = a.bits();
    const auto& y = b.bits();
    constexpr auto npos = boost::dynamic_bitset<>::npos;
    auto i = x.find_first();
    auto j = y.find_first();
    while (i != npos && j != npos) {
        if (i != j) return i < j;
        i = x.find_next(i);
        j = y.find_next(j);
    }
    return i == npos && j != npos;
}

void sort_canonical(std::vector<Subset>& sets) {
    std::sort(sets.begin(), sets.end(), canonical_less);
}

std::string to_string(const Subset& s) {
    std::ostringstream os;
    os << '{';
    bool first = true;
    for (const auto& l : s.labels()) {
        os << (first ? "" : ",") << l;
        first = false;
    }
    os << '}';
    return os.str();
}

// ---------------------------------------------------------------------------
// SetRing

SetRing::SetRing(GroundSet ground, std::vector<Subset> atoms)
    : ground_(std::move(ground)), atoms_(std::move(atoms)), support_(ground_),
      atom_of_point_(ground_.size(), -1) {
    sort_canonical(atoms_);
    for (std::size_t k = 0; k < atoms_.size(); ++k) {
        const auto& a = atoms_[k];
        require_same_ground(ground_, a.ground());
        if (a.empty()) throw InvariantError("ring atoms must be nonempty");
        if (a.intersects(support_)) throw InvariantError("ring atoms must be disjoint");
        support_ = support_ | a;
        for (auto i : a.indices()) atom_of_point_[i] = static_cast<std::ptrdiff_t>(k);
    }
}

SetRing SetRing::from_atoms(GroundSet ground, std::vector<Subset> atoms) {
    return SetRing(std::move(ground), std::move(atoms));
}

SetRing SetRing::from_members(GroundSet ground, const std::vector<Subset>& members) {
    std::set<Subset, decltype(&canonical_less)> pool(canonical_less);
    for (const auto& m : members) {
        require_same_ground(ground, m.ground());
        pool.insert(m);
    }
    if (!pool.count(ground.empty_set())) throw InvariantError("ring must contain the empty set");
    for (const auto& a : pool) {
        for (const auto& b : pool) {
            if (!pool.count(a | b)) {
                throw InvariantError("not closed under union: " + to_string(a) + " ∪ " + to_string(b));
            }
            if (!pool.count(a - b)) {
                throw InvariantError("not closed under difference: " + to_string(a) + " \\ " +
                                     to_string(b));
            }
        }
    }
    // Atoms are the minimal nonempty members.
    std::vector<Subset> atoms;
    for (const auto& a : pool) {
        if (a.empty()) continue;
        const bool minimal = std::none_of(pool.begin(), pool.end(), [&](const Subset& b) {
            return !b.empty() && !(b == a) && b.is_subset_of(a);
        });
        if (minimal) atoms.push_back(a);
    }
    return SetRing(std::move(ground), std::move(atoms));
}

SetRing SetRing::power_set(GroundSet ground) {
    std::vector<Subset> atoms;
    for (std::size_t i = 0; i < ground.size(); ++i) atoms.push_back(ground.singleton(i));
    return SetRing(std::move(ground), std::move(atoms));
}

SetRing SetRing::trivial(GroundSet ground) { return SetRing(std::move(ground), {}); }

bool SetRing::contains(const Subset& set) const { return decompose(set).has_value(); }

std::optional<std::vector<std::size_t>> SetRing::decompose(const Subset& set) const {
    require_same_ground(ground_, set.ground());
    std::vector<std::size_t> ids;
    std::size_t covered = 0;
    for (auto i : set.indices()) {
        const auto k = atom_of_point_[i];
        if (k < 0) return std::nullopt;
        const auto uk = static_cast<std::size_t>(k);
        if (std::find(ids.begin(), ids.end(), uk) == ids.end()) {
            ids.push_back(uk);
            covered += atoms_[uk].count();
        }
    }
    if (covered != set.count()) return std::nullopt;
    std::sort(ids.begin(), ids.end());
    return ids;
}

std::optional<std::size_t> SetRing::atom_of(std::size_t point) const {
    const auto k = atom_of_point_.at(point);
    if (k < 0) return std::nullopt;
    return static_cast<std::size_t>(k);
}

std::size_t SetRing::member_count() const {
    if (atoms_.size() > 62) throw std::length_error("ring has more than 2^62 members");
    return std::size_t{1} << atoms_.size();
}

std::vector<Subset> SetRing::members() const {
    if (atoms_.size() > 20) throw std::length_error("refusing to enumerate more than 2^20 members");
    std::vector<Subset> out;
    out.reserve(member_count());
    for (std::size_t mask = 0; mask < member_count(); ++mask) {
        Subset s(ground_);
        for (std::size_t k = 0; k < atoms_.size(); ++k) {
            if (mask >> k & 1U) s = s | atoms_[k];
        }
        out.push_back(std::move(s));
    }
    sort_canonical(out);
    return out;
}

SetRing generate_ring(const GroundSet& ground, const std::vector<Subset>& generators) {
    // Points of the union are grouped by their membership pattern across the
    // generators; each group is an atom of the generated ring.
    std::map<std::vector<bool>, Subset> classes;
    for (std::size_t i = 0; i < ground.size(); ++i) {
        std::vector<bool> pattern(generators.size());
        bool any = false;
        for (std::size_t g = 0; g < generators.size(); ++g) {
            require_same_ground(ground, generators[g].ground());
            pattern[g] = generators[g].contains(i);
            any = any || pattern[g];
        }
        if (!any) continue;
        auto it = classes.try_emplace(std::move(pattern), ground).first;
        it->second.insert(i);
    }
    std::vector<Subset> atoms;
    atoms.reserve(classes.size());
    for (auto& [pattern, set] : classes) atoms.push_back(std::move(set));
    return SetRing::from_atoms(ground, std::move(atoms));
}

// ---------------------------------------------------------------------------
// AdditiveSetFunction

AdditiveSetFunction::AdditiveSetFunction(SetRing ring, std::vector<Rational> atom_masses)
    : ring_(std::move(ring)), masses_(std::move(atom_masses)) {
    if (masses_.size() != ring_.atom_count()) {
        throw InvariantError("expected one mass per ring atom");
    }
    for (const auto& m : masses_) {
        if (m < 0) throw InvariantError("set function values must be nonnegative");
    }
}

AdditiveSetFunction AdditiveSetFunction::from_values(
    SetRing ring, const std::vector<std::pair<Subset, Rational>>& values) {
    std::vector<std::optional<Rational>> masses(ring.atom_count());
    for (const auto& [set, value] : values) {
        if (set.empty()) {
            if (value != 0) throw InvariantError("value of the empty set must be 0");
            continue;
        }
        const auto ids = ring.decompose(set);
        if (!ids) throw InvariantError("set " + to_string(set) + " is not a ring member");
        if (ids->size() == 1) {
            auto& slot = masses[ids->front()];
            if (slot && *slot != value) {
                throw InvariantError("conflicting values for " + to_string(set));
            }
            slot = value;
        }
    }
    std::vector<Rational> out;
    for (std::size_t k = 0; k < masses.size(); ++k) {
        if (!masses[k]) {
            throw InvariantError("no value given for ring atom " + to_string(ring.atoms()[k]));
        }
        out.push_back(*masses[k]);
    }
    AdditiveSetFunction f(std::move(ring), std::move(out));
    for (const auto& [set, value] : values) {
        if (f(set) != value) {
            throw InvariantError("set function is not additive at " + to_string(set) + ": given " +
                                 to_string(value) + ", atoms sum to " + to_string(f(set)));
        }
    }
    return f;
}

Rational AdditiveSetFunction::operator()(const Subset& member) const {
    const auto ids = ring_.decompose(member);
    if (!ids) throw InvariantError("set " + to_string(member) + " is not a ring member");
    Rational s(0);
    for (auto k : *ids) s += masses_[k];
    return s;
}

Rational AdditiveSetFunction::total() const { return sum(masses_); }

// ---------------------------------------------------------------------------
// Outer / inner measures, carrier, extension order

ExtendedRational outer_measure(const MeasureStructure& ms, const Subset& e) {
    const auto& ring = ms.ring();
    require_same_ground(ring.ground(), e.ground());
    if (!e.is_subset_of(ring.support())) return ExtendedRational::infinity();
    Rational s(0);
    for (std::size_t k = 0; k < ring.atom_count(); ++k) {
        if (ring.atoms()[k].intersects(e)) s += ms.atom_masses()[k];
    }
    return ExtendedRational(s);
}

Rational inner_measure(const MeasureStructure& ms, const Subset& e) {
    const auto& ring = ms.ring();
    require_same_ground(ring.ground(), e.ground());
    Rational s(0);
    for (std::size_t k = 0; k < ring.atom_count(); ++k) {
        if (ring.atoms()[k].is_subset_of(e)) s += ms.atom_masses()[k];
    }
    return s;
}

MeasureStructure carrier_ring(const MeasureStructure& ms) {
    const auto& ring = ms.ring();
    std::vector<Subset> atoms;
    std::vector<Rational> masses;
    for (std::size_t k = 0; k < ring.atom_count(); ++k) {
        const auto& a = ring.atoms()[k];
        if (ms.atom_masses()[k] > 0) {
            atoms.push_back(a);
            masses.push_back(ms.atom_masses()[k]);
        } else {
            for (auto i : a.indices()) {
                atoms.push_back(ring.ground().singleton(i));
                masses.emplace_back(0);
            }
        }
    }
    // from_atoms sorts canonically; keep masses aligned.
    std::vector<std::size_t> order(atoms.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return canonical_less(atoms[x], atoms[y]); });
    std::vector<Subset> sorted_atoms;
    std::vector<Rational> sorted_masses;
    for (auto i : order) {
        sorted_atoms.push_back(atoms[i]);
        sorted_masses.push_back(masses[i]);
    }
    return MeasureStructure(SetRing::from_atoms(ring.ground(), std::move(sorted_atoms)),
                            std::move(sorted_masses));
}

bool is_extension(const MeasureStructure& small, const MeasureStructure& big) {
    require_same_ground(small.ground(), big.ground());
    const auto carrier = carrier_ring(big);
    for (std::size_t k = 0; k < small.ring().atom_count(); ++k) {
        const auto& a = small.ring().atoms()[k];
        if (!carrier.ring().contains(a)) return false;
        if (carrier.value(a) != small.atom_masses()[k]) return false;
    }
    return true;
}

}  // namespace famrep
