#pragma once

#include <span>
#include <string>

#include "ecps/rational.hpp"

namespace ecps {

/// Half-open interval [lo, hi) with exact endpoints.
struct Interval {
  Rational lo;
  Rational hi;

  Rational length() const { return hi - lo; }
  bool empty() const { return hi <= lo; }
  bool contains(const Interval& other) const { return lo <= other.lo && other.hi <= hi; }
  bool contains(const Rational& x) const { return lo <= x && x < hi; }

  friend bool operator==(const Interval& a, const Interval& b) { return a.lo == b.lo && a.hi == b.hi; }
};

Interval intersect(const Interval& a, const Interval& b);
Interval unit_interval();
Interval integer_interval(std::int64_t lo, std::int64_t hi);
std::string to_string(const Interval& i);

/// The p-adic cell [c p^-k, (c+1) p^-k). The level may be negative, in which
/// case the cell is p^|k| long.
struct PAdicInterval {
  int p = 2;
  int level = 0;
  Integer index = 0;

  Rational lo() const;
  Rational hi() const;
  Rational length() const { return power(p, -level); }
  Interval interval() const { return {lo(), hi()}; }

  /// j-th of the p equal subcells.
  PAdicInterval child(int j) const;
};

/// Maps (i_1, ..., i_n) to [sum i_j p^-j, sum i_j p^-j + p^-n). Throws
/// Error(invalid_word) if a digit falls outside 0..p-1.
PAdicInterval interval_of_word(int p, std::span<const int> word);

/// Orientation-preserving homothety x -> p^e x + b.
struct Homothety {
  int p = 2;
  int e = 0;
  Rational b = 0;

  static Homothety identity(int p) { return {p, 0, Rational(0)}; }
  /// rho_i(x) = p x - i, taking [i]_p onto [0, 1).
  static Homothety digit_zoom(int p, int i) { return {p, 1, Rational(-i)}; }
  /// t_x(y) = y - x.
  static Homothety translation(int p, const Rational& x) { return {p, 0, Rational(-x)}; }
  /// The unique homothety taking `from` onto `to`. Lengths must differ by a
  /// power of p.
  static Homothety between(int p, const Interval& from, const Interval& to);

  Rational operator()(const Rational& x) const { return power(p, e) * x + b; }
  Interval operator()(const Interval& i) const { return {(*this)(i.lo), (*this)(i.hi)}; }
  Homothety inverse() const;

  friend bool operator==(const Homothety& a, const Homothety& b) {
    return a.p == b.p && a.e == b.e && a.b == b.b;
  }
};

/// (outer o inner)(x) = outer(inner(x)).
Homothety compose(const Homothety& outer, const Homothety& inner);

/// Exponent k with |length| = p^k, or nullopt if the length is not a power of p.
std::optional<int> power_exponent(const Rational& length, int p);

}  // namespace ecps
