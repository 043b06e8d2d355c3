#include "ecps/padic.hpp"

#include <algorithm>

#include "ecps/error.hpp"

namespace ecps {

Interval intersect(const Interval& a, const Interval& b) {
  Interval r{std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
  if (r.hi < r.lo) r.hi = r.lo;
  return r;
}

Interval unit_interval() { return {Rational(0), Rational(1)}; }

Interval integer_interval(std::int64_t lo, std::int64_t hi) {
  return {Rational(Integer(static_cast<long>(lo))), Rational(Integer(static_cast<long>(hi)))};
}

std::string to_string(const Interval& i) {
  auto fmt = [](const Rational& q) { return q.get_den() == 1 ? q.get_num().get_str() : q.get_str(); };
  return "[" + fmt(i.lo) + ", " + fmt(i.hi) + ")";
}

Rational PAdicInterval::lo() const { return Rational(index) * power(p, -level); }
Rational PAdicInterval::hi() const { return Rational(index + 1) * power(p, -level); }

PAdicInterval PAdicInterval::child(int j) const {
  return {p, level + 1, index * p + j};
}

PAdicInterval interval_of_word(int p, std::span<const int> word) {
  if (p < 2) throw Error(ErrorCode::invalid_argument, "base must be at least 2");
  PAdicInterval cell{p, 0, 0};
  for (int d : word) {
    if (d < 0 || d >= p) {
      throw Error(ErrorCode::invalid_word, "digit " + std::to_string(d) + " outside 0.." + std::to_string(p - 1));
    }
    cell = cell.child(d);
  }
  return cell;
}

std::optional<int> power_exponent(const Rational& length, int p) {
  if (sgn(length) <= 0) return std::nullopt;
  const bool inverted = length < 1;
  Rational x = inverted ? Rational(1 / length) : length;
  if (x.get_den() != 1) return std::nullopt;
  Integer n = x.get_num();
  int k = 0;
  while (n > 1) {
    if (!mpz_divisible_ui_p(n.get_mpz_t(), static_cast<unsigned long>(p))) return std::nullopt;
    n /= p;
    ++k;
  }
  return inverted ? -k : k;
}

Homothety Homothety::between(int p, const Interval& from, const Interval& to) {
  const auto k = power_exponent(to.length() / from.length(), p);
  if (!k) {
    throw Error(ErrorCode::alignment, "no p-power homothety from " + to_string(from) + " to " + to_string(to));
  }
  Homothety h{p, *k, Rational(0)};
  h.b = to.lo - power(p, *k) * from.lo;
  return h;
}

Homothety Homothety::inverse() const {
  // y = p^e x + b  =>  x = p^-e y - p^-e b
  const Rational s = power(p, -e);
  return {p, -e, Rational(-s * b)};
}

Homothety compose(const Homothety& outer, const Homothety& inner) {
  if (outer.p != inner.p) throw Error(ErrorCode::invalid_argument, "composing homotheties of different bases");
  return {outer.p, outer.e + inner.e, Rational(power(outer.p, outer.e) * inner.b + outer.b)};
}

}  // namespace ecps
