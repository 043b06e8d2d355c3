#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "ecps/chain.hpp"
#include "ecps/extension.hpp"
#include "ecps/stats.hpp"

namespace ecps {

/// phi_0 = mu_{-1}[i_0]_p.
Rational phi0(const ChainState& s);

/// phi_n = mu_{n-1}[i_n, ..., i_0], cross-checked against the product of
/// phi_0 along the right shift. A mismatch throws consistency-violation.
Rational phi_n(const ChainState& s, int n);

struct PhiRecord {
  int n = 0;
  Rational phi;
  /// -log(phi_n) / (|n| + 1)
  double rate = 0.0;
};

struct PhiTrace {
  std::uint64_t trajectory = 0;
  std::vector<PhiRecord> records;  // n = 0, -1, ..., -max_depth
};

/// phi_n for n = 0..-max_depth along one state, both forms compared at every
/// step. Needs depth >= max_depth + 2.
PhiTrace phi_trace(const ChainState& s, int max_depth, std::uint64_t trajectory = 0);

struct EntropyEstimate {
  /// -log(phi_{-depth}) / (depth + 1), one entry per trajectory.
  std::vector<double> trajectory_rates;
  /// Monte-Carlo accumulator of -log phi_0 over stationary states.
  RunningStats phi0_log;
  double mean() const { return phi0_log.mean(); }
  double standard_error() const { return phi0_log.standard_error(); }
  /// Mean is at least three standard errors above zero.
  bool positive() const;
};

/// Trajectories use streams 0..trajectories-1 of `seed`; the Monte-Carlo
/// samples draw from a separate stream so neither part shifts the other.
EntropyEstimate entropy_rate(std::shared_ptr<const ChainSystem> system, int trajectories, int depth, int samples,
                             std::uint64_t seed);

/// Monte-Carlo part only: `samples` draws of -log phi_0.
RunningStats phi0_log_samples(std::shared_ptr<const ChainSystem> system, int samples, Rng& rng);

/// Largest group the group-sum identities will enumerate by default.
inline constexpr std::uint64_t kDefaultGroupCap = 729;

/// sum over a in G_n of phi_n(S_a s); equals 1 on legal states.
Rational group_sum_check(const ChainState& s, int n, std::uint64_t cap = kDefaultGroupCap);

using StateFunctional = std::function<Rational(const ChainState&)>;

/// E(f | A_n)(s) = sum over a in G_n of f(S_a s) phi_n(S_a s).
Rational conditional_expectation_Gn(const StateFunctional& f, const ChainState& s, int n,
                                    std::uint64_t cap = kDefaultGroupCap);

/// phi(nu, i_-) = nu[tau, tau + 1), the derivative of T^{-1} against the
/// extended distribution.
Rational rn_derivative_T(const ExtendedState& e);

/// prod_{j<n} rn_derivative_T(T^j e), to be compared with nu[tau_n, tau_n + 1).
Rational rn_cocycle(const ExtendedState& e, int n);

}  // namespace ecps
