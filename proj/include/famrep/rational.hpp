#pragma once

#include <gmpxx.h>

#include <compare>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace famrep {

/// Exact rational with arbitrary-precision numerator and denominator.
using Rational = mpq_class;

/// Parses "p", "-p" or "p/q". Throws std::invalid_argument on anything else
/// (including a zero denominator).
Rational parse_rational(std::string_view text);

/// Canonical "p/q" form; integers are written with denominator 1.
std::string to_string(const Rational& value);

Rational pow2(long exponent);

/// Nonnegative rational or +infinity. Houses the inf-over-empty convention of
/// the outer measure.
class ExtendedRational {
public:
    ExtendedRational() = default;
    ExtendedRational(Rational value) : value_(std::move(value)) {}

    static ExtendedRational infinity() {
        ExtendedRational r;
        r.value_.reset();
        return r;
    }

    bool is_infinite() const { return !value_.has_value(); }
    bool is_finite() const { return value_.has_value(); }

    /// Precondition: is_finite().
    const Rational& value() const { return *value_; }

    friend bool operator==(const ExtendedRational& a, const ExtendedRational& b) {
        if (a.is_infinite() || b.is_infinite()) return a.is_infinite() == b.is_infinite();
        return *a.value_ == *b.value_;
    }
    friend std::strong_ordering operator<=>(const ExtendedRational& a,
                                            const ExtendedRational& b) {
        if (a.is_infinite()) {
            return b.is_infinite() ? std::strong_ordering::equal
                                   : std::strong_ordering::greater;
        }
        if (b.is_infinite()) return std::strong_ordering::less;
        const int c = cmp(*a.value_, *b.value_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

private:
    std::optional<Rational> value_ = Rational(0);
};

std::string to_string(const ExtendedRational& value);
std::ostream& operator<<(std::ostream& os, const ExtendedRational& value);

Rational sum(const std::vector<Rational>& values);

}  // namespace famrep
