#include <doctest.h>

#include <memory>

#include "ecps/ergodic.hpp"
#include "ecps/error.hpp"
#include "ecps/translation.hpp"
#include "oracles.hpp"

using namespace ecps;

namespace {

auto cantor_sys() { return std::make_shared<const ChainSystem>(ChainSystem::cantor()); }
auto bern(Rational a, Rational b) { return std::make_shared<const ChainSystem>(ChainSystem::bernoulli(2, {a, b})); }

/// theta of a sampled state whose window covers [-reach, reach].
ExtendedState wide_state(std::shared_ptr<const ChainSystem> sys, int depth, std::int64_t reach, std::uint64_t seed) {
  for (std::uint64_t stream = 0;; ++stream) {
    Rng rng(seed, stream);
    auto s = std::make_shared<const ChainState>(sample_state(sys, depth, rng));
    auto e = theta(s);
    if (e.window().lo <= -reach && e.window().hi > reach) return e;
  }
}

}  // namespace

TEST_SUITE("ergodic") {
  TEST_CASE("functional registry") {
    const auto leb = GridMeasure::lebesgue(2);
    CHECK(make_functional("one")(leb) == 1);
    CHECK(make_functional("mass:0:1/2")(leb) == Rational(1, 2));
    CHECK(make_functional("capped_mass:0:1")(leb.scaled(3)) == 1);
    CHECK(make_functional("occ:0")(leb) == 1);
    CHECK(make_functional("occ:1")(leb) == 0);
    CHECK_THROWS_AS(make_functional("bogus"), Error);
    CHECK_THROWS_AS(make_functional("occ:1/2"), Error);
    const auto truncated = leb.with_window(unit_interval(), true);
    CHECK_THROWS_AS(make_functional("occ:3")(truncated), Error);
  }

  TEST_CASE("U_T powers") {
    const auto e = wide_state(bern(Rational(2, 3), Rational(1, 3)), 12, 100, 3);
    const auto f = make_functional("mass:0:1/2");
    CHECK(u_t_power(f, e, 0).closed == f(e.nu));
    const auto one = make_functional("one");
    for (int n = 1; n <= 8; ++n) {
      const auto u = u_t_power(one, e, n);
      const auto taus = tau_n(e, n);
      CHECK(u.closed == e.nu.mass(integer_interval(taus.back(), taus.back() + 1)));
      CHECK(u.closed == u.product);
    }
    const auto leb = wide_state(bern(Rational(1, 2), Rational(1, 2)), 10, 50, 4);
    for (int n = 1; n <= 5; ++n) {
      ExtendedState cur = leb;
      for (int j = 0; j < n; ++j) cur = T_map(cur);
      CHECK(u_t_power(f, leb, n).closed == f(cur.nu));
    }
  }

  TEST_CASE("discrete averages") {
    const auto e = wide_state(bern(Rational(2, 3), Rational(1, 3)), 12, 200, 8);
    const auto one = make_functional("one");
    for (std::int64_t m : {1, 5, 40, 150}) CHECK(discrete_average(one, e.nu, m).exact() == 1);
    const auto leb = wide_state(bern(Rational(1, 2), Rational(1, 2)), 10, 200, 8);
    const auto half = make_functional("mass:0:1/2");
    for (std::int64_t m : {1, 7, 100}) CHECK(discrete_average(half, leb.nu, m).exact() == Rational(1, 2));
  }

  TEST_CASE("block identity between discrete and Hurewicz averages") {
    const auto e = wide_state(cantor_sys(), 12, 300, 10);
    const auto f = make_functional("occ:2");
    const auto taus = tau_n(e, 12);
    for (int n = 1; n < 12; ++n) {
      const auto block = hurewicz_average(f, e.nu, n + 1).exact();
      for (std::int64_t m = taus[static_cast<std::size_t>(n - 1)]; m < taus[static_cast<std::size_t>(n)]; ++m) {
        CHECK(discrete_average(f, e.nu, m).exact() == block);
      }
      // cantor weights are all one: a plain average over visits
      Rational plain = f(e.nu);
      for (int k = 0; k < n; ++k) plain += f(translate_normalize(e.nu, Rational(Integer(static_cast<long>(taus[static_cast<std::size_t>(k)])))));
      CHECK(block == plain / (n + 1));
    }
    CHECK(hurewicz_average(f, e.nu, 1).exact() == f(e.nu));
  }

  TEST_CASE("average series matches one-off averages") {
    const auto e = wide_state(bern(Rational(2, 3), Rational(1, 3)), 12, 200, 12);
    const auto f = make_functional("occ:1");
    const std::vector<std::int64_t> cps{3, 10, 50, 120};
    const auto series = average_series(f, e.nu, cps);
    for (std::size_t k = 0; k < cps.size(); ++k) {
      CHECK(series.values[k].exact() == discrete_average(f, e.nu, cps[k]).exact());
      CHECK(series.values[k].normalizer == e.nu.mass(integer_interval(0, cps[k] + 1)));
    }
  }

  TEST_CASE("continuous averages") {
    const auto leb = wide_state(bern(Rational(1, 2), Rational(1, 2)), 10, 60, 13);
    const auto one = make_functional("one");
    const auto half = make_functional("mass:0:1/2");
    for (int q = 0; q <= 3; ++q) {
      CHECK(continuous_average(one, leb.nu, 5, q).exact() == 1);
      CHECK(continuous_average(half, leb.nu, 5, q).exact() == Rational(1, 2));
    }
    const auto e = wide_state(cantor_sys(), 10, 60, 14);
    const auto occ = make_functional("occ:2");
    for (std::int64_t n_end : {3, 9, 20}) {
      const auto direct = continuous_average(occ, e.nu, n_end, 3).exact();
      const auto reduced = discrete_average(integrated_functional(occ, 3), e.nu, n_end - 1).exact();
      CHECK(direct == reduced);
    }
  }

  TEST_CASE("splice identity") {
    const auto e = wide_state(bern(Rational(2, 3), Rational(1, 3)), 10, 40, 15);
    const auto f = make_functional("capped_mass:0:1/2");
    for (const Rational& x : {Rational(1), Rational(5, 2), Rational(7, 4)}) {
      const auto check = splice_identity(f, e.nu, x, 6, 2);
      CHECK(check.whole == check.split);
    }
  }

  TEST_CASE("Chacon-Ornstein ratios") {
    const auto c = wide_state(cantor_sys(), 12, 400, 16);
    for (int n = 1; n <= 20; ++n) CHECK(chacon_ornstein_ratio(c.nu, n) == Rational(1, n + 1));
    const auto leb = wide_state(bern(Rational(1, 2), Rational(1, 2)), 10, 50, 17);
    for (int n = 1; n <= 20; ++n) CHECK(chacon_ornstein_ratio(leb.nu, n) == Rational(1, n + 1));
    const auto skew = wide_state(bern(Rational(2, 3), Rational(1, 3)), 14, 200, 18);
    const Rational first = chacon_ornstein_ratio(skew.nu, 1);
    const Rational last = chacon_ornstein_ratio(skew.nu, 50);
    CHECK(sgn(last) > 0);
    CHECK(last < first);
  }
}
