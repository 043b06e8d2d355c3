#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace ecps {

/// Exact arbitrary-precision rational; every mass in the library is one.
using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "num/den" or "num" (optional sign). Throws Error(invalid_argument).
Rational parse_rational(std::string_view text);

/// Always "num/den", also for integers ("3/1"), so CSV columns stay uniform.
std::string format_rational(const Rational& q);

/// p^k for any integer k (k < 0 gives 1/p^|k|).
Rational power(int p, int k);
Integer ipower(int p, unsigned k);

Integer floor(const Rational& q);
Integer ceil(const Rational& q);

/// Smallest l >= 0 with q * p^l integral, or nullopt if the denominator has a
/// prime factor not dividing p.
std::optional<int> padic_level(const Rational& q, int p);

/// Natural log of a positive rational, evaluated from the exact numerator and
/// denominator so that tiny values such as 2^-201 do not underflow.
double log_rational(const Rational& q);

bool fits_int64(const Integer& z) noexcept;
std::int64_t to_int64(const Integer& z);

}  // namespace ecps
