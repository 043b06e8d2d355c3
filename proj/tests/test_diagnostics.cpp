#include <doctest.h>

#include <cmath>
#include <memory>

#include "ecps/diagnostics.hpp"
#include "ecps/error.hpp"
#include "ecps/translation.hpp"
#include "oracles.hpp"

using namespace ecps;

namespace {

auto cantor_sys() { return std::make_shared<const ChainSystem>(ChainSystem::cantor()); }
auto bern(Rational a, Rational b) { return std::make_shared<const ChainSystem>(ChainSystem::bernoulli(2, {a, b})); }

Rational pow2inv(int k) {
  Integer d = 1;
  d <<= static_cast<unsigned>(k);
  return Rational(Integer(1), d);
}

}  // namespace

TEST_SUITE("diagnostics") {
  TEST_CASE("phi_0 equals the weight of the last digit") {
    Rng rng(3);
    const std::vector<Rational> w{Rational(2, 3), Rational(1, 3)};
    for (int t = 0; t < 20; ++t) {
      CHECK(phi0(sample_state(cantor_sys(), 3, rng)) == Rational(1, 2));
      const auto s = sample_state(bern(w[0], w[1]), 3, rng);
      CHECK(phi0(s) == w[static_cast<std::size_t>(s.digit(0))]);
    }
    CHECK(phi0(ChainState::from_digits(bern(1, 0), {0, 0})) == 1);
    CHECK_THROWS_AS(phi0(ChainState::from_digits(cantor_sys(), {})), Error);
  }

  TEST_CASE("phi_n closed form against the digit product") {
    Rng rng(17);
    const std::vector<Rational> w{Rational(2, 3), Rational(1, 3)};
    const auto s = sample_state(bern(w[0], w[1]), 30, rng);
    for (int n = 0; n >= -28; --n) {
      std::vector<int> word;
      for (int m = n; m <= 0; ++m) word.push_back(s.digit(m));
      CHECK(phi_n(s, n) == oracle::bernoulli_word_mass(w, word));
    }
    CHECK(phi_n(s, 0) == phi0(s));
    const auto c = sample_state(cantor_sys(), 40, rng);
    for (int n = 0; n >= -38; --n) CHECK(phi_n(c, n) == pow2inv(1 - n));
    CHECK_THROWS_AS(phi_n(c, -39), Error);
  }

  TEST_CASE("phi traces decay and record the rate") {
    Rng rng(2);
    const auto s = sample_state(bern(Rational(2, 3), Rational(1, 3)), 52, rng);
    const auto trace = phi_trace(s, 50, 4);
    CHECK(trace.trajectory == 4);
    REQUIRE(trace.records.size() == 51);
    for (std::size_t k = 1; k < trace.records.size(); ++k) {
      CHECK(trace.records[k].phi < trace.records[k - 1].phi);
      CHECK(trace.records[k].phi == phi_n(s, trace.records[k].n));
    }
    const auto c = sample_state(cantor_sys(), 12, rng);
    for (const auto& r : phi_trace(c, 10).records) CHECK(r.rate == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  }

  TEST_CASE("entropy estimates") {
    const auto cantor = entropy_rate(cantor_sys(), 4, 60, 1000, 1);
    for (double r : cantor.trajectory_rates) CHECK(r == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(cantor.mean() == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(cantor.phi0_log.stddev() == 0.0);
    CHECK(cantor.positive());

    const auto skew = entropy_rate(bern(Rational(2, 3), Rational(1, 3)), 2, 40, 20000, 5);
    const double h = oracle::shannon({2.0 / 3.0, 1.0 / 3.0});
    CHECK(std::abs(skew.mean() - h) < 3 * skew.standard_error());
    CHECK(skew.positive());

    const auto flat = entropy_rate(bern(1, 0), 2, 10, 100, 5);
    CHECK(flat.mean() == 0.0);
    CHECK_FALSE(flat.positive());
  }

  TEST_CASE("group sums are exactly one") {
    Rng rng(23);
    for (const auto& sys : {cantor_sys(), bern(Rational(2, 3), Rational(1, 3))}) {
      const auto s = sample_state(sys, 9, rng);
      for (int n = 0; n >= -4; --n) CHECK(group_sum_check(s, n) == 1);
    }
    const auto s = ChainState::from_digits(cantor_sys(), {0, 2, 0});
    int positive = 0;
    for (const auto& a : enumerate_group(3, -1)) positive += sgn(phi_n(S_a(s, a), -1)) > 0;
    CHECK(positive == 4);
    CHECK_THROWS_AS(group_sum_check(sample_state(cantor_sys(), 12, rng), -8), Error);
  }

  TEST_CASE("conditional expectations are invariant under G_n") {
    Rng rng(29);
    const auto sys = bern(Rational(2, 3), Rational(1, 3));
    const StateFunctional f = [](const ChainState& s) { return Rational(s.digit(0) + 2 * s.digit(-1) + 1); };
    const StateFunctional one = [](const ChainState&) { return Rational(1); };
    for (int t = 0; t < 20; ++t) {
      const auto s = sample_state(sys, 6, rng);
      const Rational v = conditional_expectation_Gn(f, s, -2);
      CHECK(conditional_expectation_Gn(one, s, -2) == 1);
      for (const auto& a : enumerate_group(2, -2)) CHECK(conditional_expectation_Gn(f, S_a(s, a), -2) == v);
    }
    // indicator of the word (1, 0) at indices -1, 0: only one translate survives
    const auto s = sample_state(sys, 6, rng);
    const StateFunctional ind = [](const ChainState& x) { return Rational(x.digit(-1) == 1 && x.digit(0) == 0); };
    GroupWord b{2, -1, {(1 + s.digit(-1)) % 2, s.digit(0) % 2}};
    CHECK(conditional_expectation_Gn(ind, s, -1) == phi_n(S_a(s, b), -1));
  }

  TEST_CASE("derivative of T") {
    const auto leb = theta(ChainState::from_digits(bern(Rational(1, 2), Rational(1, 2)), {1, 0}));
    CHECK(rn_derivative_T(leb) == 1);
    const auto cantor = theta(ChainState::from_digits(cantor_sys(), {2, 0}));
    CHECK(rn_derivative_T(cantor) == 1);
    const auto skew = theta(ChainState::from_digits(bern(Rational(2, 3), Rational(1, 3)), {0}));
    CHECK(rn_derivative_T(skew) == Rational(1, 2));
  }

  TEST_CASE("derivative cocycle telescopes") {
    const std::vector<Rational> w{Rational(2, 3), Rational(1, 3)};
    const auto sys = bern(w[0], w[1]);
    for (std::uint64_t stream = 0; stream < 5; ++stream) {
      Rng rng(55, stream);
      auto e = theta(std::make_shared<const ChainState>(sample_state(sys, 12, rng)));
      Extender ext(Rng(55, 100 + stream));
      ext.run(e, [&](const ExtendedState& x) {
        const auto taus = tau_n(x, 20);
        CHECK(rn_cocycle(x, 20) == x.nu.mass(integer_interval(taus.back(), taus.back() + 1)));
        return 0;
      });
    }
  }
}
