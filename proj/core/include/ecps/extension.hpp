#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "ecps/chain.hpp"
#include "ecps/grid_measure.hpp"

namespace ecps {

/// The well-based sequence compatible with a digit past: entry d is I_{-d},
/// for d = 0..depth. `past` lists i_{-(L-1)}..i_0 oldest first; depth <= L.
std::vector<Interval> compatible_intervals(int p, std::span<const int> past, int depth);

/// A point (nu, i_-) of the extended space, plus forward digits i_1, i_2, ...
/// when known. nu is exact on its window I_{-L} (L = past.size()) and unknown
/// beyond it.
struct ExtendedState {
  int p = 2;
  GridMeasure nu;
  std::vector<int> past;
  std::vector<int> forward;
  /// When set, this state equals T_offset(theta(*origin)); a deeper origin
  /// then reproduces it on a wider window.
  std::shared_ptr<const ChainState> origin;
  std::int64_t offset = 0;

  Interval window() const { return nu.window(); }
  int past_depth() const { return static_cast<int>(past.size()); }
};

/// mu~_n = N rho_{I_0}^{I_n} mu_n, supported in I_n.
GridMeasure mu_tilde(const ChainState& s, int n);

struct ThetaReport {
  /// lambda(n) with mu~_{n-1}|I_n = lambda(n) mu~_n|I_n; entry k is n = -k.
  std::vector<Rational> lambdas;
  /// Largest n such that lambda(m) = 1 for every stored m <= n, if any.
  std::optional<int> stable_from;
};

/// theta(mu_-, i_-) = (nu, i_-), nu read off the deepest mu~. Every stored
/// pair is checked against mu~_{n-1}|I_n = lambda mu~_n|I_n; a failure throws
/// consistency-violation.
ExtendedState theta(const ChainState& s, ThetaReport* report = nullptr);
ExtendedState theta(std::shared_ptr<const ChainState> s, ThetaReport* report = nullptr);

/// mu_n = N R rho_{I_n}^{I_0} (nu|I_n).
GridMeasure theta_inverse(const ExtendedState& e, int n);

/// M_p(nu, i) = (N rho_{i_1} nu, sigma(i)) using the stored forward digit.
ExtendedState magnify(const ExtendedState& e);
/// As above; when no forward digit is stored, draws i_1 with probability nu[j]_p.
ExtendedState magnify(const ExtendedState& e, Rng& rng);

}  // namespace ecps
