#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace vblind {

using Integer = mpz_class;
using Rational = mpq_class;

// Rationals coming out of mpq arithmetic are already canonical; this is for
// values assembled from a numerator/denominator pair.
Rational make_rational(const Integer& num, const Integer& den);

Integer floor_of(const Rational& x);
Integer ceil_of(const Rational& x);

// 2^e as an exact rational, e may be negative.
Rational pow2(std::int64_t e);

// log2 of a positive rational, in floating point.
double log2_of(const Rational& x);
double log2_of(const Integer& x);

std::string to_string(const Rational& x); // "p/q", q >= 1 always printed
Rational parse_rational(std::string_view text); // accepts "p" or "p/q"

class Dyadic {
public:
    Dyadic() = default;
    Dyadic(Integer mantissa, std::int64_t exponent);
    static Dyadic from_int(std::int64_t v) { return Dyadic(Integer(static_cast<long>(v)), 0); }

    const Integer& mantissa() const { return mantissa_; }
    std::int64_t exponent() const { return exponent_; }
    bool is_zero() const { return mantissa_ == 0; }

    Rational to_rational() const;
    double to_double() const;

    friend Dyadic operator+(const Dyadic& a, const Dyadic& b);
    friend Dyadic operator-(const Dyadic& a, const Dyadic& b);
    friend Dyadic operator*(const Dyadic& a, const Dyadic& b);
    Dyadic operator-() const { return Dyadic(-mantissa_, exponent_); }

    friend int compare(const Dyadic& a, const Dyadic& b);
    friend bool operator==(const Dyadic& a, const Dyadic& b) {
        return a.exponent_ == b.exponent_ && a.mantissa_ == b.mantissa_;
    }
    friend bool operator<(const Dyadic& a, const Dyadic& b) { return compare(a, b) < 0; }
    friend bool operator<=(const Dyadic& a, const Dyadic& b) { return compare(a, b) <= 0; }
    friend bool operator>(const Dyadic& a, const Dyadic& b) { return compare(a, b) > 0; }
    friend bool operator>=(const Dyadic& a, const Dyadic& b) { return compare(a, b) >= 0; }

private:
    void normalize();

    Integer mantissa_{0};
    std::int64_t exponent_ = 0;
};

std::string to_string(const Dyadic& x); // "m*2^e"
Dyadic parse_dyadic(std::string_view text);

// Exact conversion; throws InvalidInput when x is not dyadic.
Dyadic to_dyadic(const Rational& x);

} // namespace vblind
