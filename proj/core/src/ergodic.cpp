#include "ecps/ergodic.hpp"

#include <algorithm>

#include "ecps/error.hpp"
#include "ecps/translation.hpp"

namespace ecps {

namespace {

Rational z(std::int64_t v) { return Rational(Integer(static_cast<long>(v))); }

Rational unit_mass(const GridMeasure& nu, std::int64_t k) { return nu.mass(integer_interval(k, k + 1)); }

Rational known_mass(const GridMeasure& nu, const Interval& region) {
  if (!nu.known(region)) {
    throw Error(ErrorCode::window_exhausted, to_string(region) + " leaves window " + to_string(nu.window()));
  }
  return nu.mass(region);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  for (;;) {
    const auto at = s.find(sep);
    out.push_back(s.substr(0, at));
    if (at == std::string_view::npos) return out;
    s.remove_prefix(at + 1);
  }
}

}  // namespace

Functional make_functional(std::string_view name) {
  const auto parts = split(name, ':');
  const std::string label(name);
  if (parts.size() == 1 && parts[0] == "one") {
    return {label, [](const GridMeasure&) { return Rational(1); }};
  }
  if (parts.size() == 2 && parts[0] == "occ") {
    const Rational k = parse_rational(parts[1]);
    if (k.get_den() != 1) throw Error(ErrorCode::invalid_argument, "occ needs an integer cell: " + label);
    const Interval cell{k, k + 1};
    return {label, [cell](const GridMeasure& nu) { return Rational(sgn(known_mass(nu, cell)) > 0 ? 1 : 0); }};
  }
  if (parts.size() == 3 && (parts[0] == "mass" || parts[0] == "capped_mass")) {
    const Interval region{parse_rational(parts[1]), parse_rational(parts[2])};
    if (region.empty()) throw Error(ErrorCode::invalid_argument, "empty interval in " + label);
    if (parts[0] == "mass") return {label, [region](const GridMeasure& nu) { return known_mass(nu, region); }};
    return {label, [region](const GridMeasure& nu) {
              Rational m = known_mass(nu, region);
              return m > 1 ? Rational(1) : m;
            }};
  }
  throw Error(ErrorCode::invalid_argument, "unknown functional \"" + label + "\"");
}

std::vector<std::string> functional_names() { return {"one", "occ:K", "mass:A:B", "capped_mass:A:B"}; }

UtPower u_t_power(const Functional& f, const ExtendedState& e, int n) {
  if (n < 0) throw Error(ErrorCode::invalid_argument, "U_T power must be nonnegative");
  if (n == 0) {
    const Rational v = f(e.nu);
    return {v, v};
  }
  Rational product = 1;
  ExtendedState cur = e;
  for (int j = 0; j < n; ++j) {
    const std::int64_t t = tau(cur);
    product *= unit_mass(cur.nu, t);
    cur = T_k(cur, t);
  }
  const auto taus = tau_n(e.nu, n);
  const Rational closed_mass = unit_mass(e.nu, taus.back());
  if (closed_mass != product) {
    throw Error(ErrorCode::consistency_violation, "U_T^" + std::to_string(n) + ": telescoped product " +
                                                      format_rational(product) + " vs nu[tau_n] " +
                                                      format_rational(closed_mass));
  }
  const Rational fv = f(cur.nu);
  return {fv * closed_mass, fv * product};
}

AverageSeries average_series(const Functional& f, const GridMeasure& nu,
                             const std::vector<std::int64_t>& checkpoints) {
  if (!std::is_sorted(checkpoints.begin(), checkpoints.end())) {
    throw Error(ErrorCode::invalid_argument, "checkpoints must be ascending");
  }
  AverageSeries series;
  Rational num = 0;
  Rational norm = 0;
  std::int64_t j = 0;
  for (const std::int64_t m : checkpoints) {
    if (m < 0) throw Error(ErrorCode::invalid_argument, "negative checkpoint");
    for (; j <= m; ++j) {
      const Interval cell = integer_interval(j, j + 1);
      const Rational w = known_mass(nu, cell);
      if (sgn(w) == 0) continue;
      norm += w;
      num += f(translate_normalize(nu, z(j))) * w;
    }
    if (sgn(norm) == 0) throw Error(ErrorCode::invalid_argument, "nu[0, m+1) vanishes");
    series.checkpoints.push_back(m);
    series.values.push_back({num, norm});
  }
  return series;
}

AverageValue discrete_average(const Functional& f, const GridMeasure& nu, std::int64_t m) {
  return average_series(f, nu, {m}).values.front();
}

AverageValue hurewicz_average(const Functional& f, const GridMeasure& nu, int n) {
  if (n < 1) throw Error(ErrorCode::invalid_argument, "Hurewicz average needs n >= 1");
  std::vector<std::int64_t> taus{0};
  if (n > 1) {
    const auto rest = tau_n(nu, n - 1);
    taus.insert(taus.end(), rest.begin(), rest.end());
  }
  Rational num = 0;
  Rational weights = 0;
  for (const std::int64_t t : taus) {
    const Rational w = unit_mass(nu, t);
    weights += w;
    num += f(translate_normalize(nu, z(t))) * w;
  }
  const Rational norm = known_mass(nu, integer_interval(0, taus.back() + 1));
  if (weights != norm) {
    throw Error(ErrorCode::consistency_violation, "visit weights do not add up to nu[0, tau_{n-1} + 1)");
  }
  return {num, norm};
}

AverageValue continuous_average(const Functional& f, const GridMeasure& nu, const Rational& a, const Rational& b,
                                int quad_level) {
  const Interval span{a, b};
  const Rational norm = known_mass(nu, span);
  if (sgn(norm) == 0) throw Error(ErrorCode::invalid_argument, "nu vanishes on " + to_string(span));
  const Rational width = power(nu.base(), -quad_level);
  Rational num = 0;
  for (const auto& [cell, m] : nu.cells(quad_level, span)) {
    const Rational x = Rational(Integer(static_cast<long>(cell))) * width;
    num += f(translate_normalize(nu, x)) * m;
  }
  return {num, norm};
}

Functional integrated_functional(const Functional& f, int quad_level) {
  return {"F[" + f.name + "]", [f, quad_level](const GridMeasure& nu) {
            return continuous_average(f, nu, std::int64_t{1}, quad_level).exact();
          }};
}

SpliceCheck splice_identity(const Functional& f, const GridMeasure& nu, const Rational& x, std::int64_t n_end,
                            int quad_level) {
  const Rational zero = 0;
  const Rational end = z(n_end);
  const AverageValue whole = continuous_average(f, nu, zero, end, quad_level);
  const AverageValue left = continuous_average(f, nu, zero, x, quad_level);
  const AverageValue right = continuous_average(f, nu, x, end, quad_level);
  const Rational split =
      (left.normalizer / whole.normalizer) * left.exact() + (right.normalizer / whole.normalizer) * right.exact();
  return {whole.exact(), split};
}

Rational chacon_ornstein_ratio(const GridMeasure& nu, int n) {
  if (n < 1) throw Error(ErrorCode::invalid_argument, "ratio needs n >= 1");
  const auto taus = tau_n(nu, n);
  Rational visits = unit_mass(nu, 0);
  for (const std::int64_t t : taus) visits += unit_mass(nu, t);
  const Rational norm = known_mass(nu, integer_interval(0, taus.back() + 1));
  if (visits != norm) throw Error(ErrorCode::consistency_violation, "normalizer identity fails");
  return unit_mass(nu, taus.back()) / norm;
}

}  // namespace ecps
