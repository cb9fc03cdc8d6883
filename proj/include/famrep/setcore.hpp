#pragma once

// Finite ground sets, rings of subsets and nonnegative additive set functions.
//
// A ring of subsets of a finite set is the family of all unions of a finite
// partition of its largest member (its atoms). Rings are stored through that
// partition; members() enumerates the explicit member list in canonical order
// when a caller needs it. Every value here is immutable after construction.

#include "famrep/errors.hpp"
#include "famrep/rational.hpp"

#include <boost/dynamic_bitset.hpp>

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace famrep {

class Subset;

/// Ordered list of distinct atom labels. Copies share the label storage.
class GroundSet {
public:
    /// Throws InvariantError when labels are empty or not unique.
    explicit GroundSet(std::vector<std::string> labels);

    std::size_t size() const { return data_->labels.size(); }
    const std::string& label(std::size_t i) const { return data_->labels.at(i); }
    const std::vector<std::string>& labels() const { return data_->labels; }

    std::optional<std::size_t> find(std::string_view label) const;
    /// Throws std::out_of_range for unknown labels.
    std::size_t index_of(std::string_view label) const;

    Subset empty_set() const;
    Subset full_set() const;
    Subset singleton(std::size_t i) const;
    Subset subset(const std::vector<std::string>& labels) const;

    friend bool operator==(const GroundSet& a, const GroundSet& b) {
        return a.data_ == b.data_ || a.data_->labels == b.data_->labels;
    }

private:
    struct Data {
        std::vector<std::string> labels;
        std::unordered_map<std::string, std::size_t> index;
    };
    std::shared_ptr<const Data> data_;
};

class Subset {
public:
    explicit Subset(GroundSet ground);
    Subset(GroundSet ground, boost::dynamic_bitset<> bits);
    static Subset of_indices(const GroundSet& ground, const std::vector<std::size_t>& indices);

    const GroundSet& ground() const { return ground_; }
    const boost::dynamic_bitset<>& bits() const { return bits_; }

    bool contains(std::size_t i) const { return bits_.test(i); }
    bool empty() const { return bits_.none(); }
    std::size_t count() const { return bits_.count(); }
    std::vector<std::size_t> indices() const;
    std::vector<std::string> labels() const;

    bool is_subset_of(const Subset& other) const;
    bool intersects(const Subset& other) const;

    Subset& insert(std::size_t i);

    friend Subset operator|(const Subset& a, const Subset& b);
    friend Subset operator&(const Subset& a, const Subset& b);
    friend Subset operator-(const Subset& a, const Subset& b);
    Subset complement() const;

    friend bool operator==(const Subset& a, const Subset& b);

private:
    GroundSet ground_;
    boost::dynamic_bitset<> bits_;
};

/// Canonical order: lexicographic on the sorted atom indices, so
/// {} < {0} < {0,1} < {0,1,2} < {0,2} < {1} < ...
bool canonical_less(const Subset& a, const Subset& b);
void sort_canonical(std::vector<Subset>& sets);

std::string to_string(const Subset& s);

/// Finite ring of subsets, stored by its atoms (a partition of the largest
/// member into nonempty blocks). The empty ring {∅} has no atoms.
class SetRing {
public:
    /// Ring of all unions of the given blocks. Throws InvariantError when a
    /// block is empty or two blocks overlap.
    static SetRing from_atoms(GroundSet ground, std::vector<Subset> atoms);
    /// Ring given by an explicit member list. Throws InvariantError unless the
    /// list contains ∅ and is closed under union and difference.
    static SetRing from_members(GroundSet ground, const std::vector<Subset>& members);
    static SetRing power_set(GroundSet ground);
    static SetRing trivial(GroundSet ground);

    const GroundSet& ground() const { return ground_; }
    const std::vector<Subset>& atoms() const { return atoms_; }
    const Subset& support() const { return support_; }
    std::size_t atom_count() const { return atoms_.size(); }

    bool contains(const Subset& set) const;
    /// Indices of the atoms whose union is `set`; nullopt if `set` is not a member.
    std::optional<std::vector<std::size_t>> decompose(const Subset& set) const;
    /// Index of the atom holding ground point i, if any.
    std::optional<std::size_t> atom_of(std::size_t point) const;

    /// 2^atom_count(); throws std::length_error beyond 2^62.
    std::size_t member_count() const;
    /// All members in canonical order. Throws std::length_error above 2^20 members.
    std::vector<Subset> members() const;

    friend bool operator==(const SetRing& a, const SetRing& b) {
        return a.ground_ == b.ground_ && a.atoms_ == b.atoms_;
    }

private:
    SetRing(GroundSet ground, std::vector<Subset> atoms);

    GroundSet ground_;
    std::vector<Subset> atoms_;
    Subset support_;
    std::vector<std::ptrdiff_t> atom_of_point_;
};

/// Smallest ring containing every generator.
SetRing generate_ring(const GroundSet& ground, const std::vector<Subset>& generators);

/// Nonnegative additive set function on a finite ring, stored by atom masses.
class AdditiveSetFunction {
public:
    /// Throws InvariantError on negative masses or a size mismatch.
    AdditiveSetFunction(SetRing ring, std::vector<Rational> atom_masses);

    /// Builds the set function from values on ring members. Every atom must
    /// be given; every other given value must equal the sum over its atoms
    /// (modularity). Throws InvariantError otherwise.
    static AdditiveSetFunction from_values(
        SetRing ring, const std::vector<std::pair<Subset, Rational>>& values);

    const SetRing& ring() const { return ring_; }
    const std::vector<Rational>& atom_masses() const { return masses_; }

    /// Value on a ring member; throws InvariantError for non-members.
    Rational operator()(const Subset& member) const;
    Rational total() const;

    friend bool operator==(const AdditiveSetFunction&, const AdditiveSetFunction&) = default;

private:
    SetRing ring_;
    std::vector<Rational> masses_;
};

/// A ring together with a nonnegative additive set function on it.
class MeasureStructure {
public:
    explicit MeasureStructure(AdditiveSetFunction lambda) : lambda_(std::move(lambda)) {}
    MeasureStructure(SetRing ring, std::vector<Rational> atom_masses)
        : lambda_(std::move(ring), std::move(atom_masses)) {}

    const AdditiveSetFunction& lambda() const { return lambda_; }
    const SetRing& ring() const { return lambda_.ring(); }
    const GroundSet& ground() const { return lambda_.ring().ground(); }
    const std::vector<Rational>& atom_masses() const { return lambda_.atom_masses(); }
    Rational value(const Subset& member) const { return lambda_(member); }

    friend bool operator==(const MeasureStructure&, const MeasureStructure&) = default;

private:
    AdditiveSetFunction lambda_;
};

/// inf { λ(A) : A in ring, E ⊆ A }, or infinity when no member covers E.
ExtendedRational outer_measure(const MeasureStructure& ms, const Subset& e);
/// sup { λ(B) : B in ring, B ⊆ E }; always finite since ∅ qualifies.
Rational inner_measure(const MeasureStructure& ms, const Subset& e);

/// The structure (A(λ), λ) where A(λ) = { E : outer(E) = inner(E) < ∞ }.
///
/// A set E is in A(λ) exactly when it lies inside the ring's support and
/// every atom that meets E without being contained in it carries zero mass.
/// The carrier ring is therefore generated by the positive-mass atoms plus the
/// single points of the null atoms.
MeasureStructure carrier_ring(const MeasureStructure& ms);

/// Extension order: every member of small.ring lies in A(big) and the unique
/// extension of big agrees with small there. Throws GroundMismatch.
bool is_extension(const MeasureStructure& small, const MeasureStructure& big);

}  // namespace famrep
