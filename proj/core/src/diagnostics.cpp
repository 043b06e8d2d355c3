#include "ecps/diagnostics.hpp"

#include <cmath>
#include <limits>

#include "ecps/error.hpp"
#include "ecps/translation.hpp"

namespace ecps {

namespace {

std::uint64_t group_size(int p, int n, std::uint64_t cap) {
  std::uint64_t size = 1;
  for (int k = 0; k < 1 - n; ++k) {
    size *= static_cast<std::uint64_t>(p);
    if (size > cap) {
      throw Error(ErrorCode::combinatorial_budget,
                  "G_" + std::to_string(n) + " exceeds the cap of " + std::to_string(cap) + " elements");
    }
  }
  return size;
}

Rational digit_mass(const GridMeasure& mu, int p, int digit) { return mass(mu, PAdicInterval{p, 1, digit}); }

}  // namespace

Rational phi0(const ChainState& s) {
  if (s.depth() < 2) throw Error(ErrorCode::depth_exhausted, "phi_0 needs depth at least 2");
  return digit_mass(s.measure(-1), s.base(), s.digit(0));
}

Rational phi_n(const ChainState& s, int n) {
  if (n > 0) throw Error(ErrorCode::index_out_of_range, "phi_n needs n <= 0");
  if (s.depth() < -n + 2) {
    throw Error(ErrorCode::depth_exhausted, "phi_" + std::to_string(n) + " needs depth " + std::to_string(-n + 2));
  }
  std::vector<int> word;
  word.reserve(static_cast<std::size_t>(1 - n));
  for (int m = n; m <= 0; ++m) word.push_back(s.digit(m));
  const Rational closed = mass(s.measure(n - 1), interval_of_word(s.base(), word));
  Rational product = 1;
  for (int j = n; j <= 0; ++j) product *= digit_mass(s.measure(j - 1), s.base(), s.digit(j));
  if (closed != product) {
    throw Error(ErrorCode::consistency_violation, "phi_" + std::to_string(n) + ": word mass " +
                                                      format_rational(closed) + " vs product " +
                                                      format_rational(product));
  }
  return closed;
}

PhiTrace phi_trace(const ChainState& s, int max_depth, std::uint64_t trajectory) {
  if (s.depth() < max_depth + 2) {
    throw Error(ErrorCode::depth_exhausted, "trace to depth " + std::to_string(max_depth) + " needs " +
                                                std::to_string(max_depth + 2) + " stored measures");
  }
  PhiTrace trace;
  trace.trajectory = trajectory;
  trace.records.reserve(static_cast<std::size_t>(max_depth) + 1);
  const int p = s.base();
  std::vector<int> word;  // i_n..i_0, grown at the front
  Rational product = 1;
  for (int n = 0; n >= -max_depth; --n) {
    word.insert(word.begin(), s.digit(n));
    product *= digit_mass(s.measure(n - 1), p, s.digit(n));
    const Rational closed = mass(s.measure(n - 1), interval_of_word(p, word));
    if (closed != product) {
      throw Error(ErrorCode::consistency_violation, "phi_" + std::to_string(n) + ": word mass and product differ");
    }
    PhiRecord rec{n, closed, 0.0};
    rec.rate = sgn(closed) > 0 ? -log_rational(closed) / (1 - n) : std::numeric_limits<double>::infinity();
    trace.records.push_back(std::move(rec));
  }
  return trace;
}

bool EntropyEstimate::positive() const {
  if (phi0_log.count() == 0) return false;
  return mean() > 0 && mean() - 3.0 * standard_error() > 0;
}

RunningStats phi0_log_samples(std::shared_ptr<const ChainSystem> system, int samples, Rng& rng) {
  RunningStats stats;
  for (int k = 0; k < samples; ++k) {
    const ChainState s = sample_state(system, 2, rng);
    stats.add(-log_rational(phi0(s)));
  }
  return stats;
}

EntropyEstimate entropy_rate(std::shared_ptr<const ChainSystem> system, int trajectories, int depth, int samples,
                             std::uint64_t seed) {
  if (depth < 1 || trajectories < 1) throw Error(ErrorCode::invalid_argument, "depth and trajectories must be positive");
  EntropyEstimate est;
  for (int t = 0; t < trajectories; ++t) {
    Rng rng(seed, static_cast<std::uint64_t>(t));
    const ChainState s = sample_state(system, depth + 2, rng);
    const Rational phi = phi_n(s, -depth);
    est.trajectory_rates.push_back(-log_rational(phi) / (depth + 1));
  }
  Rng mc(seed, static_cast<std::uint64_t>(trajectories) + (std::uint64_t{1} << 32));
  est.phi0_log = phi0_log_samples(std::move(system), samples, mc);
  return est;
}

Rational group_sum_check(const ChainState& s, int n, std::uint64_t cap) {
  return conditional_expectation_Gn([](const ChainState&) { return Rational(1); }, s, n, cap);
}

Rational conditional_expectation_Gn(const StateFunctional& f, const ChainState& s, int n, std::uint64_t cap) {
  group_size(s.base(), n, cap);
  Rational total = 0;
  for (const auto& a : enumerate_group(s.base(), n)) {
    const ChainState moved = S_a(s, a);
    const Rational w = phi_n(moved, n);
    if (sgn(w) != 0) total += f(moved) * w;
  }
  return total;
}

Rational rn_derivative_T(const ExtendedState& e) {
  const std::int64_t t = tau(e);
  return e.nu.mass(integer_interval(t, t + 1));
}

Rational rn_cocycle(const ExtendedState& e, int n) {
  Rational product = 1;
  ExtendedState cur = e;
  for (int j = 0; j < n; ++j) {
    product *= rn_derivative_T(cur);
    if (j + 1 < n) cur = T_map(cur);
  }
  return product;
}

}  // namespace ecps
