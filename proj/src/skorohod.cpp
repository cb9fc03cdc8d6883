#include "famrep/skorohod.hpp"

#include "famrep/errors.hpp"

#include <algorithm>
#include <random>
#include <set>

namespace famrep {

void Enumeration::validate() const {
    std::set<std::string> seen;
    for (const auto& l : labels) {
        if (!seen.insert(l).second) throw InvariantError("enumeration repeats label '" + l + "'");
    }
}

std::size_t Enumeration::index_of(const std::string& label) const {
    const auto it = std::find(labels.begin(), labels.end(), label);
    return it == labels.end() ? 0 : static_cast<std::size_t>(it - labels.begin()) + 1;
}

void IntervalMeasure::validate() const {
    for (const auto& [n, w] : masses) {
        if (n == 0) throw InvariantError("cells are numbered from 1");
        if (w < 0) throw InvariantError("negative mass on cell " + std::to_string(n));
    }
    if (total() > 1) throw InvariantError("interval measure has total mass above 1");
}

Rational IntervalMeasure::total() const {
    Rational t(0);
    for (const auto& [n, w] : masses) t += w;
    return t;
}

Rational cell_lower(std::size_t n) { return Rational(1) - pow2(-static_cast<long>(n) + 1); }
Rational cell_upper(std::size_t n) { return Rational(1) - pow2(-static_cast<long>(n)); }

std::size_t universal_index(const Rational& x) {
    if (x <= 0 || x >= 1) throw PreconditionError("universal_index needs 0 < x < 1, got " + to_string(x));
    const Rational gap = Rational(1) - x;
    // 2^-n <= p/q  <=>  q <= p·2^n; start from a bit-length estimate and walk up.
    const mpz_class p = gap.get_num();
    const mpz_class q = gap.get_den();
    const long qbits = static_cast<long>(mpz_sizeinbase(q.get_mpz_t(), 2));
    const long pbits = static_cast<long>(mpz_sizeinbase(p.get_mpz_t(), 2));
    long n = std::max(1L, qbits - pbits - 1);
    while (n > 1 && pow2(-(n - 1)) <= gap) --n;
    while (pow2(-n) > gap) ++n;
    return static_cast<std::size_t>(n);
}

namespace {

void require_law(const LabelMap& m, const Enumeration& enumeration) {
    enumeration.validate();
    if (m.empty()) throw PreconditionError("target law is empty");
    Rational total(0);
    for (const auto& [label, w] : m) {
        if (w <= 0) throw PreconditionError("target law gives non-positive mass to '" + label + "'");
        if (enumeration.index_of(label) == 0) {
            throw PreconditionError("label '" + label + "' is not enumerated");
        }
        total += w;
    }
    if (total != 1) throw PreconditionError("target law sums to " + to_string(total) + ", not 1");
}

Rational lookup(const LabelMap& h, const std::string& label) {
    const auto it = h.find(label);
    return it == h.end() ? Rational(0) : it->second;
}

}  // namespace

IntervalMeasure pushforward_measure(const LabelMap& m, const Enumeration& enumeration) {
    require_law(m, enumeration);
    IntervalMeasure im;
    for (const auto& [label, w] : m) im.masses[enumeration.index_of(label)] = w;
    return im;
}

bool verify_pushforward(const LabelMap& m, const Enumeration& enumeration, const IntervalMeasure& im,
                        const std::vector<LabelMap>& tests) {
    for (const auto& [n, w] : im.masses) {
        if (w != 0 && (n == 0 || n > enumeration.labels.size())) return false;
    }
    for (const auto& h : tests) {
        Rational lhs(0);
        Rational rhs(0);
        for (const auto& [label, w] : m) lhs += lookup(h, label) * w;
        for (const auto& [n, w] : im.masses) {
            if (w != 0) rhs += lookup(h, enumeration.at(n)) * w;
        }
        if (lhs != rhs) return false;
    }
    return true;
}

SampleReport sample_companion(const LabelMap& m, const Enumeration& enumeration, std::uint64_t draws,
                              std::uint64_t seed) {
    if (draws == 0) throw PreconditionError("sample_companion needs at least one draw");
    const IntervalMeasure im = pushforward_measure(m, enumeration);

    std::vector<std::size_t> cells;
    std::vector<Rational> cumulative;
    Rational acc(0);
    for (const auto& [n, w] : im.masses) {
        acc += w;
        cells.push_back(n);
        cumulative.push_back(acc);
    }

    SampleReport report;
    report.draws = draws;
    report.seed = seed;
    for (const auto& [label, w] : m) report.counts[label] = 0;

    std::mt19937_64 rng(seed);
    const Rational grid = pow2(-53);
    for (std::uint64_t i = 0; i < draws; ++i) {
        const std::uint64_t k = rng() >> 11;
        const Rational u = (Rational(mpz_class(std::to_string(k))) + Rational(1, 2)) * grid;
        // u lies in (F(j-1), F(j)] for exactly one j.
        const std::size_t j = static_cast<std::size_t>(
            std::lower_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
        const std::size_t n = cells[j];
        const Rational below = j == 0 ? Rational(0) : cumulative[j - 1];
        const Rational v = cell_lower(n) + (u - below) / im.masses.at(n) * pow2(-static_cast<long>(n));
        ++report.counts[enumeration.at(universal_index(v))];
    }

    Rational tv(0);
    for (const auto& [label, c] : report.counts) {
        Rational freq(mpz_class(std::to_string(c)), mpz_class(std::to_string(draws)));
        freq.canonicalize();
        report.empirical[label] = freq;
        tv += abs(freq - m.at(label));
    }
    report.total_variation = tv / 2;
    return report;
}

}  // namespace famrep
