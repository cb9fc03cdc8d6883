#pragma once

// The universal map H = ι∘G on (0,1): G sends x to the index n of the dyadic
// cell (1 − 2^{-(n-1)}, 1 − 2^{-n}] containing it and ι enumerates the target
// points. Any finitely supported law is the image of a suitable measure on the
// cells, so the same H serves every target.

#include "famrep/rational.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace famrep {

/// Finite law or test function, keyed by point label.
using LabelMap = std::map<std::string, Rational>;

/// ι: position n (1-based) holds the n-th point.
struct Enumeration {
    std::vector<std::string> labels;

    /// Throws InvariantError on duplicate labels.
    void validate() const;
    /// 1-based index of `label`, or 0 when it is not enumerated.
    std::size_t index_of(const std::string& label) const;
    const std::string& at(std::size_t n) const { return labels.at(n - 1); }
};

/// Masses on the dyadic cells, keyed by cell index n >= 1. Cells not listed
/// carry no mass.
struct IntervalMeasure {
    std::map<std::size_t, Rational> masses;

    /// Throws InvariantError on index 0, negative masses or total above 1.
    void validate() const;
    Rational total() const;
};

/// Endpoints of cell n: (1 − 2^{-(n-1)}, 1 − 2^{-n}].
Rational cell_lower(std::size_t n);
Rational cell_upper(std::size_t n);

/// G(x): the smallest n >= 1 with 2^{-n} <= 1 − x. Throws PreconditionError
/// unless 0 < x < 1.
std::size_t universal_index(const Rational& x);

/// Cell n receives m(ι(n)). Throws PreconditionError when m has a
/// non-positive mass, does not sum to 1, or charges an unenumerated label.
IntervalMeasure pushforward_measure(const LabelMap& m, const Enumeration& enumeration);

/// Σ_s h(s) m(s) == Σ_n h(ι(n)) im(n) for every test h. Labels missing from
/// h count as 0. A charged cell beyond the enumeration makes the check fail.
bool verify_pushforward(const LabelMap& m, const Enumeration& enumeration, const IntervalMeasure& im,
                        const std::vector<LabelMap>& tests);

struct SampleReport {
    std::uint64_t draws = 0;
    std::uint64_t seed = 0;
    std::map<std::string, std::uint64_t> counts;
    LabelMap empirical;
    /// ½ Σ_s |empirical(s) − m(s)|, exact.
    Rational total_variation;
};

/// Draws N uniforms from mt19937_64 (53-bit grid midpoints, so every draw is
/// an exact rational strictly inside (0,1)), moves each into the cell
/// structure by inverse transform against the pushforward measure, and reads
/// off the label through H. Deterministic in (m, enumeration, N, seed).
/// Throws PreconditionError when N == 0 or m is not a law on enumerated labels.
SampleReport sample_companion(const LabelMap& m, const Enumeration& enumeration, std::uint64_t draws,
                              std::uint64_t seed);

}  // namespace famrep
