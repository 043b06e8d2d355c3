#include <doctest.h>

#include <memory>

#include "ecps/error.hpp"
#include "ecps/translation.hpp"
#include "oracles.hpp"

using namespace ecps;

namespace {

auto cantor_sys() { return std::make_shared<const ChainSystem>(ChainSystem::cantor()); }
auto bern(Rational a, Rational b) { return std::make_shared<const ChainSystem>(ChainSystem::bernoulli(2, {a, b})); }

/// A state whose intervals cover [-reach, reach], found by sampling with
/// fresh streams of the given seed.
ChainState covering_state(std::shared_ptr<const ChainSystem> sys, int depth, std::int64_t reach, std::uint64_t seed) {
  for (std::uint64_t stream = 0;; ++stream) {
    Rng rng(seed, stream);
    const auto s = sample_state(sys, depth, rng);
    const auto I = compatible_intervals(s.base(), s.digits(), depth - 1).back();
    if (I.lo <= -reach && I.hi > reach) return s;
  }
}

/// s_k by brute force: the digits whose well-based intervals equal I_n - k
/// deep down, found by walking the oracle interval tree.
std::vector<int> brute_s_k(int p, const std::vector<int>& past, std::int64_t k) {
  const int L = static_cast<int>(past.size());
  const auto lows = oracle::interval_lows(p, past, L);
  std::int64_t len = 1;
  for (int d = 0; d <= L; ++d) {
    if (lows[static_cast<std::size_t>(d)] <= k && k + 1 <= lows[static_cast<std::size_t>(d)] + len) {
      auto out = past;
      std::int64_t off = k - lows[static_cast<std::size_t>(d)];
      for (int m = 0; m < d; ++m) {
        out[static_cast<std::size_t>(L - 1 - m)] = static_cast<int>(off % p);
        off /= p;
      }
      return out;
    }
    len *= p;
  }
  return {};
}

}  // namespace

TEST_SUITE("translation") {
  TEST_CASE("group words add coordinatewise") {
    const GroupWord a{3, -2, {1, 2, 0}};
    const GroupWord b{3, -1, {2, 2}};
    CHECK((a + b) == GroupWord{3, -2, {1, 1, 2}});
    CHECK((a + (-a)).is_zero());
    CHECK((a + a + a).is_zero());
    CHECK(enumerate_group(3, -1).size() == 9);
    CHECK(GroupWord{3, -4, {0, 0, 1, 0, 2}}.trimmed() == GroupWord{3, -2, {1, 0, 2}});
  }

  TEST_CASE("s_k on small pasts") {
    const std::vector<int> past{0};
    CHECK(s_k(3, past, 0) == past);
    CHECK(s_k(3, past, 1) == std::vector<int>{1});
    const std::vector<int> deep{2, 0, 2, 0};
    CHECK_THROWS_AS(s_k(3, deep, 1000), Error);
    for (std::int64_t k = -60; k <= 20; ++k) {
      const auto expected = brute_s_k(3, deep, k);
      if (expected.empty()) {
        CHECK_THROWS_AS(s_k(3, deep, k), Error);
      } else {
        CHECK(s_k(3, deep, k) == expected);
      }
    }
  }

  TEST_CASE("translated intervals shift by k") {
    const auto s = covering_state(cantor_sys(), 14, 100, 31);
    const std::vector<int> past(s.digits().begin(), s.digits().end());
    const auto I = compatible_intervals(3, past, 13);
    for (std::int64_t k = -81; k <= 81; ++k) {
      const auto moved = s_k(3, past, k);
      const auto J = compatible_intervals(3, moved, 13);
      CHECK(J.back().lo == I.back().lo - Rational(Integer(static_cast<long>(k))));
    }
  }

  TEST_CASE("s_k composes additively") {
    const auto s = covering_state(cantor_sys(), 16, 170, 5);
    const std::vector<int> past(s.digits().begin(), s.digits().end());
    for (std::int64_t k = -81; k <= 81; k += 7) {
      for (std::int64_t l = -81; l <= 81; l += 5) {
        CHECK(s_k(3, s_k(3, past, k), l) == s_k(3, past, k + l));
      }
    }
  }

  TEST_CASE("S_a is a group action") {
    Rng rng(12);
    for (const auto& sys : {cantor_sys(), bern(Rational(2, 3), Rational(1, 3))}) {
      const auto s = sample_state(sys, 10, rng);
      CHECK(S_a(s, GroupWord::zero(sys->p)).digits().size() == s.digits().size());
      for (int t = 0; t < 10; ++t) {
        GroupWord a{sys->p, -5, {}};
        GroupWord b{sys->p, -3, {}};
        for (int k = 0; k < 6; ++k) a.digits.push_back(static_cast<int>(rng.next() % sys->p));
        for (int k = 0; k < 4; ++k) b.digits.push_back(static_cast<int>(rng.next() % sys->p));
        const auto lhs = S_a(S_a(s, b), a);
        const auto rhs = S_a(s, a + b);
        CHECK(std::equal(lhs.digits().begin(), lhs.digits().end(), rhs.digits().begin(), rhs.digits().end()));
        for (int n = 0; n > -s.depth(); --n) CHECK(lhs.measure(n) == rhs.measure(n));
        CHECK(lhs.legal());
      }
    }
  }

  TEST_CASE("flipping the last cantor digit keeps the measure") {
    const auto s = ChainState::from_digits(cantor_sys(), {2, 0});
    const auto moved = S_a(s, GroupWord{3, 0, {2}});
    CHECK(moved.digit(0) == 2);
    CHECK(moved.measure(0) == cantor_sys()->base_measure());
  }

  TEST_CASE("T_k action law and translation invariance") {
    const auto s = covering_state(cantor_sys(), 16, 170, 77);
    const auto e = theta(s);
    CHECK(T_k(e, 0).past == e.past);
    for (std::int64_t k = -81; k <= 81; k += 9) {
      for (std::int64_t l = -81; l <= 81; l += 11) {
        const auto lhs = T_k(T_k(e, k), l);
        const auto rhs = T_k(e, k + l);
        CHECK(lhs.past == rhs.past);
        CHECK(equal_on(lhs.nu, rhs.nu, intersect(lhs.window(), rhs.window())));
      }
    }
    const auto leb = theta(covering_state(bern(Rational(1, 2), Rational(1, 2)), 10, 100, 3));
    for (std::int64_t k = -50; k <= 50; k += 10) {
      const auto moved = T_k(leb, k);
      for (const auto& [c, m] : moved.nu.cells(0)) CHECK(m == 1);
    }
  }

  TEST_CASE("a and k correspond") {
    Rng rng(40);
    for (const auto& sys : {cantor_sys(), bern(Rational(2, 3), Rational(1, 3))}) {
      const auto s = covering_state(sys, 16, 90, 19);
      const std::vector<int> past(s.digits().begin(), s.digits().end());
      const auto e = theta(s);
      CHECK(a_for_k(sys->p, past, 0).is_zero());
      CHECK(k_for_a(sys->p, past, GroupWord::zero(sys->p)) == 0);
      for (std::int64_t k = -81; k <= 81; ++k) {
        const auto a = a_for_k(sys->p, past, k);
        CHECK(a.is_zero() == (k == 0));
        CHECK(k_for_a(sys->p, past, a) == k);
      }
      for (std::int64_t k : {-7, -2, 1, 3, 10, 40}) {
        const auto a = a_for_k(sys->p, past, k);
        const auto lhs = theta(S_a(s, a));
        const auto rhs = T_k(e, k);
        CHECK(lhs.past == rhs.past);
        CHECK(equal_on(lhs.nu, rhs.nu, intersect(lhs.window(), rhs.window())));
      }
    }
    const std::vector<int> one{0};
    CHECK(a_for_k(3, one, 1) == GroupWord{3, 0, {1}});
  }

  TEST_CASE("tau on worked examples") {
    const auto cantor = theta(ChainState::from_digits(cantor_sys(), {2, 0}));
    CHECK(tau(cantor) == 2);
    const auto mirror = theta(ChainState::from_digits(cantor_sys(), {0, 2}));
    CHECK(tau_minus(mirror) == 2);
    const auto leb = theta(ChainState::from_digits(bern(Rational(1, 2), Rational(1, 2)), {0, 1, 0}));
    CHECK(tau(leb) == 1);
    CHECK(T_map(leb).past == T_k(leb, 1).past);
    CHECK(T_map(cantor).past == T_k(cantor, 2).past);
    const auto edge = theta(ChainState::from_digits(cantor_sys(), {2, 2, 2}));
    try {
      tau(edge);
      FAIL("found mass right of the window");
    } catch (const Error& err) {
      CHECK(err.code() == ErrorCode::window_exhausted);
    }
  }

  TEST_CASE("tau_n enumerates occupied intervals") {
    Rng rng(6);
    const std::vector<Rational> w{Rational(2, 3), Rational(1, 3)};
    for (const auto& [sys, weights] : {std::pair{cantor_sys(), std::vector<Rational>{Rational(1, 2), 0, Rational(1, 2)}},
                                       std::pair{bern(w[0], w[1]), w}}) {
      const auto s = covering_state(sys, 12, 200, 9);
      const auto e = theta(s);
      const std::vector<int> past(s.digits().begin(), s.digits().end());
      const auto units = oracle::unit_masses(sys->p, weights, past);
      const auto expected = oracle::brute_tau_n(units, 10);
      REQUIRE(expected.size() == 10);
      CHECK(tau_n(e, 10) == expected);
      CHECK(tau_n(e, 1).front() == tau(e));
    }
  }

  TEST_CASE("T inverse undoes T") {
    Rng rng(14);
    for (const auto& sys : {cantor_sys(), bern(Rational(2, 3), Rational(1, 3))}) {
      for (int t = 0; t < 10; ++t) {
        auto origin = std::make_shared<const ChainState>(covering_state(sys, 12, 30, 100 + t));
        auto e = theta(origin);
        const auto back = T_map_inverse(T_map(e));
        CHECK(back.past == e.past);
        CHECK(equal_on(back.nu, e.nu, intersect(back.window(), e.window())));
      }
    }
  }

  TEST_CASE("extender deepens until the window suffices") {
    const auto sys = cantor_sys();
    auto origin = std::make_shared<const ChainState>(ChainState::from_digits(sys, {2, 2, 2}));
    auto e = theta(origin);
    Extender ext(Rng(1, 1));
    const auto t = ext.run(e, [](const ExtendedState& x) { return tau(x); });
    CHECK(t >= 1);
    CHECK(ext.retries() >= 1);
    CHECK(e.past.size() > 3);

    ExtendedState orphan = theta(ChainState::from_digits(sys, {2, 2, 2}));
    Extender none(Rng(1, 2));
    try {
      none.run(orphan, [](const ExtendedState& x) { return tau(x); });
      FAIL("ran without an origin");
    } catch (const Error& err) {
      CHECK(err.code() == ErrorCode::budget_exceeded);
    }
  }
}
