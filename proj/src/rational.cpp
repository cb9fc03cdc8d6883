#include "famrep/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace famrep {

namespace {

bool is_integer_literal(std::string_view s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    }
    return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    const auto slash = text.find('/');
    const std::string_view num = text.substr(0, slash);
    const std::string_view den =
        slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
    if (!is_integer_literal(num) || !is_integer_literal(den) || den[0] == '-' || den[0] == '+') {
        throw std::invalid_argument("not a rational literal: '" + std::string(text) + "'");
    }
    mpz_class p(std::string(num[0] == '+' ? num.substr(1) : num), 10);
    mpz_class q(std::string(den), 10);
    if (q == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    Rational r(p, q);
    r.canonicalize();
    return r;
}

std::string to_string(const Rational& value) {
    return value.get_num().get_str() + "/" + value.get_den().get_str();
}

Rational pow2(long exponent) {
    Rational r(1);
    if (exponent >= 0) {
        mpq_mul_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(exponent));
    } else {
        mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(-exponent));
    }
    return r;
}

std::string to_string(const ExtendedRational& value) {
    return value.is_infinite() ? std::string("inf") : to_string(value.value());
}

std::ostream& operator<<(std::ostream& os, const ExtendedRational& value) {
    return os << to_string(value);
}

Rational sum(const std::vector<Rational>& values) {
    Rational s(0);
    for (const auto& v : values) s += v;
    return s;
}

}  // namespace famrep
