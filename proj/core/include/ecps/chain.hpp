#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ecps/grid_measure.hpp"
#include "ecps/random.hpp"

namespace ecps {

enum class SystemKind { cantor, bernoulli, history };

/// A chain system: either a self-similar digit process (cantor, bernoulli)
/// or an externally supplied legal history that is replayed as is.
struct ChainSystem {
  int p = 2;
  SystemKind kind = SystemKind::bernoulli;
  /// Digit weights w_0..w_{p-1}; empty for history systems.
  CellLaw weights;
  /// History systems only: the oldest measure and the digits that follow it.
  GridMeasure history_measure;
  std::vector<int> history_digits;

  static ChainSystem cantor();
  static ChainSystem bernoulli(int p, CellLaw weights);

  /// Parses {"type":"cantor"}, {"type":"bernoulli","p":2,"weights":["2/3","1/3"]}
  /// or {"type":"history","p":2,"resolution":r,"masses":[...],"digits":[...]}.
  /// Errors name the offending key.
  static ChainSystem parse(std::string_view json_text);

  bool self_similar() const { return kind != SystemKind::history; }
  /// Some digit has weight one, so the next digit is always determined.
  bool deterministic() const;
  /// The stationary measure mu with mu^j = mu for every j of positive weight.
  GridMeasure base_measure() const;
  std::string describe() const;
};

/// A truncated legal sequence (mu_n, i_n), n = -(m-1)..0. Measures are
/// stored oldest first, digits i_{-(m-2)}..i_0 likewise. Measures may be
/// zero (a digit of zero conditional probability); such states are legal
/// but cannot be advanced.
class ChainState {
 public:
  /// Builds mu_{-(m-1)} = oldest and every later measure by zooming along
  /// `digits`, so the result is legal by construction.
  ChainState(std::shared_ptr<const ChainSystem> system, GridMeasure oldest, std::vector<int> digits);

  /// Replays a history system; for self-similar systems starts from the base
  /// measure.
  static ChainState from_digits(std::shared_ptr<const ChainSystem> system, std::vector<int> digits);
  static ChainState from_history(std::shared_ptr<const ChainSystem> system);

  int base() const { return system_->p; }
  int depth() const { return static_cast<int>(measures_.size()); }
  /// mu_n for -(depth-1) <= n <= 0.
  const GridMeasure& measure(int n) const;
  /// i_n for -(depth-2) <= n <= 0.
  int digit(int n) const;
  std::span<const int> digits() const { return digits_; }
  const ChainSystem& system() const { return *system_; }
  const std::shared_ptr<const ChainSystem>& system_ptr() const { return system_; }

  /// Appends i_1 = digit and mu_1 = mu_0^digit, then relabels (left shift).
  ChainState advanced(int digit) const;
  /// Right shift sigma_-^j: forgets the newest j coordinates.
  ChainState shifted_back(int j) const;
  /// Replaces measures and digits from index `from` upward; used by S_a.
  ChainState with_suffix(int from, std::span<const int> new_digits) const;

  /// Exact legality check mu_{k+1} = mu_k^{i_{k+1}} on every stored pair.
  bool legal() const;

 private:
  ChainState() = default;

  std::shared_ptr<const ChainSystem> system_;
  std::vector<GridMeasure> measures_;
  std::vector<int> digits_;
};

/// Draws i_1 with probability mu_0[j]_p and advances.
ChainState sample_forward(const ChainState& s, Rng& rng);

/// Prepends `extra` i.i.d. digits with law (w_j). Self-similar systems only.
ChainState extend_past(const ChainState& s, int extra, Rng& rng);

/// mu_0[j_1..j_l]_{p^l}.
Rational word_probability(const ChainState& s, std::span<const int> word);

/// A stationary state with `depth` measures: depth-1 i.i.d. digits.
ChainState sample_state(std::shared_ptr<const ChainSystem> system, int depth, Rng& rng);

/// Empirical P(phi_0 < 1) over `samples` stationary depth-2 states.
double determinism_estimate(std::shared_ptr<const ChainSystem> system, int samples, Rng& rng);

}  // namespace ecps
