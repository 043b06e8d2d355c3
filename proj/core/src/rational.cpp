#include "ecps/rational.hpp"

#include <cmath>

#include "ecps/error.hpp"

namespace ecps {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_word: return "invalid-word";
    case ErrorCode::alignment: return "alignment";
    case ErrorCode::undefined_psi: return "undefined-psi";
    case ErrorCode::window_exhausted: return "window-exhausted";
    case ErrorCode::resolution_exhausted: return "resolution-exhausted";
    case ErrorCode::cannot_advance: return "cannot-advance";
    case ErrorCode::depth_exhausted: return "depth-exhausted";
    case ErrorCode::index_out_of_range: return "index-out-of-range";
    case ErrorCode::consistency_violation: return "consistency-violation";
    case ErrorCode::combinatorial_budget: return "combinatorial-budget";
    case ErrorCode::budget_exceeded: return "budget-exceeded";
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::config: return "config";
  }
  return "unknown";
}

namespace {

bool valid_integer_text(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  return true;
}

Integer parse_integer(std::string_view s) {
  std::string text(s);
  if (!text.empty() && text[0] == '+') text.erase(0, 1);
  return Integer(text, 10);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  const auto num = text.substr(0, slash);
  const auto den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!valid_integer_text(num) || !valid_integer_text(den)) {
    throw Error(ErrorCode::invalid_argument, "not a rational: \"" + std::string(text) + "\"");
  }
  Integer d = parse_integer(den);
  if (d == 0) throw Error(ErrorCode::invalid_argument, "zero denominator in \"" + std::string(text) + "\"");
  Rational q(parse_integer(num), d);
  q.canonicalize();
  return q;
}

std::string format_rational(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Integer ipower(int p, unsigned k) {
  Integer z;
  mpz_ui_pow_ui(z.get_mpz_t(), static_cast<unsigned long>(p), k);
  return z;
}

Rational power(int p, int k) {
  if (k >= 0) return Rational(ipower(p, static_cast<unsigned>(k)));
  return Rational(Integer(1), ipower(p, static_cast<unsigned>(-k)));
}

Integer floor(const Rational& q) {
  Integer z;
  mpz_fdiv_q(z.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return z;
}

Integer ceil(const Rational& q) {
  Integer z;
  mpz_cdiv_q(z.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return z;
}

std::optional<int> padic_level(const Rational& q, int p) {
  const Integer& den = q.get_den();
  if (den == 1) return 0;
  Integer rest = den;
  for (;;) {
    Integer g;
    mpz_gcd_ui(g.get_mpz_t(), rest.get_mpz_t(), static_cast<unsigned long>(p));
    if (g == 1) break;
    rest /= g;
  }
  if (rest != 1) return std::nullopt;
  int level = 0;
  Integer pl = 1;
  while (!mpz_divisible_p(pl.get_mpz_t(), den.get_mpz_t())) {
    pl *= p;
    ++level;
  }
  return level;
}

double log_rational(const Rational& q) {
  if (sgn(q) <= 0) throw Error(ErrorCode::invalid_argument, "log of a non-positive rational");
  auto log_integer = [](const Integer& z) {
    long exp = 0;
    const double mant = mpz_get_d_2exp(&exp, z.get_mpz_t());
    return std::log(mant) + static_cast<double>(exp) * std::log(2.0);
  };
  return log_integer(q.get_num()) - log_integer(q.get_den());
}

bool fits_int64(const Integer& z) noexcept { return mpz_fits_slong_p(z.get_mpz_t()) != 0; }

std::int64_t to_int64(const Integer& z) {
  if (!fits_int64(z)) throw Error(ErrorCode::index_out_of_range, "integer exceeds 64-bit range: " + z.get_str());
  return static_cast<std::int64_t>(z.get_si());
}

}  // namespace ecps
