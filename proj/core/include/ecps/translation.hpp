#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ecps/chain.hpp"
#include "ecps/error.hpp"
#include "ecps/extension.hpp"
#include "ecps/random.hpp"

namespace ecps {

/// An element a of G_start: digits a_start..a_0, zero below `start`.
struct GroupWord {
  int p = 2;
  int start = 0;
  std::vector<int> digits{0};

  static GroupWord zero(int p) { return {p, 0, {0}}; }
  /// a_m, zero outside the stored range.
  int at(int m) const;
  bool is_zero() const;
  /// Drops leading zero digits (keeps at least a_0).
  GroupWord trimmed() const;
  std::string to_string() const;

  friend GroupWord operator+(const GroupWord& a, const GroupWord& b);
  friend GroupWord operator-(const GroupWord& a);
  friend bool operator==(const GroupWord& a, const GroupWord& b);
};

/// All p^{|n|+1} elements of G_n in odometer order.
std::vector<GroupWord> enumerate_group(int p, int n);

/// s_k(i_-): digits after index n0 replaced by the path from I_{n0} to
/// [k, k+1), where n0 is the shallowest index with [k, k+1) inside I_{n0}.
/// Throws depth-exhausted when no stored I_n contains [k, k+1).
std::vector<int> s_k(int p, std::span<const int> past, std::int64_t k);

/// S_a: digits become i_- + a, measures from a's start upward are rebuilt by
/// zooming so that the result is legal again.
ChainState S_a(const ChainState& s, const GroupWord& a);

/// T_k(nu, i_-) = (t_k^* nu, s_k(i_-)). Forward digits do not survive a
/// translation (k != 0).
ExtendedState T_k(const ExtendedState& e, std::int64_t k);

/// The a with s_k(i_-) = i_- + a.
GroupWord a_for_k(int p, std::span<const int> past, std::int64_t k);
/// The k with s_k(i_-) = i_- + a.
std::int64_t k_for_a(int p, std::span<const int> past, const GroupWord& a);

/// Smallest n >= 1 with nu[n, n+1) > 0 (resp. nu[-n, -n+1) > 0).
std::int64_t tau(const GridMeasure& nu);
std::int64_t tau_minus(const GridMeasure& nu);
inline std::int64_t tau(const ExtendedState& e) { return tau(e.nu); }
inline std::int64_t tau_minus(const ExtendedState& e) { return tau_minus(e.nu); }

/// T = T_tau and T^{-1} = T_{-tau_-}.
ExtendedState T_map(const ExtendedState& e);
ExtendedState T_map_inverse(const ExtendedState& e);

/// tau_1..tau_n by the recursion tau_j = tau_{j-1} + tau(t*_{tau_{j-1}} nu).
std::vector<std::int64_t> tau_n(const GridMeasure& nu, int n);
inline std::vector<std::int64_t> tau_n(const ExtendedState& e, int n) { return tau_n(e.nu, n); }

struct RetryBudget {
  int extend_by = 8;
  int max_retries = 6;
};

/// Re-runs a computation on a deeper past whenever it runs out of window or
/// stored digits. The state must remember its chain origin.
class Extender {
 public:
  explicit Extender(Rng rng, RetryBudget budget = {}) : rng_(std::move(rng)), budget_(budget) {}

  /// Same point with `extend_by` more past levels (wider window).
  ExtendedState deepen(const ExtendedState& e);

  /// Calls f(e); on window/depth exhaustion deepens e in place and retries.
  /// Gives up with budget-exceeded after max_retries deepenings.
  template <class F>
  auto run(ExtendedState& e, F&& f) -> decltype(f(e)) {
    for (int attempt = 0;; ++attempt) {
      try {
        return f(e);
      } catch (const Error& err) {
        if (!err.recoverable()) throw;
        if (attempt >= budget_.max_retries) {
          throw Error(ErrorCode::budget_exceeded,
                      "retry budget of " + std::to_string(budget_.max_retries) + " spent; last: " + err.what());
        }
      }
      e = deepen(e);
      ++retries_;
    }
  }

  int retries() const { return retries_; }
  const RetryBudget& budget() const { return budget_; }

 private:
  Rng rng_;
  RetryBudget budget_;
  int retries_ = 0;
};

}  // namespace ecps
