#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "ecps/extension.hpp"
#include "ecps/grid_measure.hpp"

namespace ecps {

/// A named bounded functional f(nu). Names:
///   one               f = 1
///   occ:K             1 if nu[K, K+1) > 0
///   mass:A:B          nu[A, B)              (A, B rationals, "num/den")
///   capped_mass:A:B   min(1, nu[A, B))
/// Evaluation outside the known window throws window-exhausted.
struct Functional {
  std::string name;
  std::function<Rational(const GridMeasure&)> eval;
  Rational operator()(const GridMeasure& nu) const { return eval(nu); }
};

Functional make_functional(std::string_view name);
std::vector<std::string> functional_names();

/// An exact average numerator / normalizer.
struct AverageValue {
  Rational numerator;
  Rational normalizer;
  Rational exact() const { return numerator / normalizer; }
  double value() const { return exact().get_d(); }
};

struct UtPower {
  Rational closed;   // f(T^n e) nu[tau_n, tau_n + 1)
  Rational product;  // f(T^n e) times the telescoped derivatives
};

/// U_T^n f(e); both forms are computed and must agree exactly (else
/// consistency-violation).
UtPower u_t_power(const Functional& f, const ExtendedState& e, int n);

/// A_m^f = (1/nu[0, m+1)) sum_{j<=m} f(t_j^* nu) nu[j, j+1). Zero-weight
/// terms are skipped without evaluating f.
AverageValue discrete_average(const Functional& f, const GridMeasure& nu, std::int64_t m);

struct AverageSeries {
  std::vector<std::int64_t> checkpoints;
  std::vector<AverageValue> values;
};

/// A_m^f at every checkpoint (ascending) in a single pass.
AverageSeries average_series(const Functional& f, const GridMeasure& nu, const std::vector<std::int64_t>& checkpoints);

/// Hurewicz block average over the first n visits (tau_0 = 0).
AverageValue hurewicz_average(const Functional& f, const GridMeasure& nu, int n);

/// (1/nu[a, b)) int_a^b f(t_x^* nu) dnu(x) by left-endpoint quadrature over
/// the positive level-q cells of [a, b).
AverageValue continuous_average(const Functional& f, const GridMeasure& nu, const Rational& a, const Rational& b,
                                int quad_level);
inline AverageValue continuous_average(const Functional& f, const GridMeasure& nu, std::int64_t t_end,
                                       int quad_level) {
  return continuous_average(f, nu, Rational(0), Rational(Integer(static_cast<long>(t_end))), quad_level);
}

/// F^f(nu) = A_0^1(f)(nu) at the given quadrature level, as a functional.
Functional integrated_functional(const Functional& f, int quad_level);

struct SpliceCheck {
  Rational whole;  // A_0^N
  Rational split;  // weighted A_0^x and A_x^N
};

SpliceCheck splice_identity(const Functional& f, const GridMeasure& nu, const Rational& x, std::int64_t n_end,
                            int quad_level);

/// nu[tau_n, tau_n + 1) / nu[0, tau_n + 1); the normalizer is also rebuilt as
/// sum_{k<=n} nu[tau_k, tau_k + 1) and compared exactly.
Rational chacon_ornstein_ratio(const GridMeasure& nu, int n);

}  // namespace ecps
