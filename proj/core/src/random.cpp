#include "ecps/random.hpp"

#include <vector>

#include "ecps/error.hpp"

namespace ecps {

namespace {

std::mt19937_64 seeded_engine(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    0x9e3779b9u};
  return std::mt19937_64(seq);
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream), engine_(seeded_engine(seed, stream)) {}

double Rng::uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

int Rng::categorical(std::span<const Rational> probs) {
  if (probs.empty()) throw Error(ErrorCode::invalid_argument, "categorical draw over an empty set");
  Integer common = 1;
  Rational total = 0;
  for (const auto& q : probs) {
    if (sgn(q) < 0) throw Error(ErrorCode::invalid_argument, "negative probability");
    mpz_lcm(common.get_mpz_t(), common.get_mpz_t(), q.get_den_mpz_t());
    total += q;
  }
  if (total != 1) throw Error(ErrorCode::invalid_argument, "probabilities sum to " + format_rational(total));

  // Integer cumulative thresholds over the common denominator.
  std::vector<Integer> cumulative(probs.size() + 1);
  cumulative[0] = 0;
  for (std::size_t j = 0; j < probs.size(); ++j) {
    Rational scaled = probs[j] * common;
    cumulative[j + 1] = cumulative[j] + scaled.get_num();
  }

  // U lies in [u / 2^k, (u + 1) / 2^k); refine until one bucket contains it.
  Integer u = 0;
  unsigned k = 0;
  for (;;) {
    u <<= 64;
    Integer chunk;
    const std::uint64_t bits = next();
    mpz_import(chunk.get_mpz_t(), 1, 1, sizeof(bits), 0, 0, &bits);
    u += chunk;
    k += 64;
    const Integer lo = u * common;
    const Integer hi = (u + 1) * common;
    for (std::size_t j = 0; j < probs.size(); ++j) {
      if (cumulative[j] == cumulative[j + 1]) continue;
      Integer left = cumulative[j] << k;
      Integer right = cumulative[j + 1] << k;
      if (left <= lo && hi <= right) return static_cast<int>(j);
    }
  }
}

}  // namespace ecps
