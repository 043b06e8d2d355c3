#include <doctest.h>

#include <vector>

#include "ecps/error.hpp"
#include "ecps/grid_measure.hpp"
#include "oracles.hpp"

using namespace ecps;

namespace {

GridMeasure cantor() { return GridMeasure::self_similar(3, {Rational(1, 2), Rational(0), Rational(1, 2)}); }

Rational q(long n, long d = 1) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an ecps::Error");
  return ErrorCode::config;
}

}  // namespace

TEST_SUITE("padic_measure") {
  TEST_CASE("words map to p-adic cells") {
    std::vector<int> w0{0};
    CHECK(interval_of_word(3, w0).interval() == Interval{q(0), q(1, 3)});
    std::vector<int> w1{1, 2};
    CHECK(interval_of_word(3, w1).interval() == Interval{q(5, 9), q(6, 9)});
    std::vector<int> w2{1, 1, 1};
    CHECK(interval_of_word(2, w2).interval() == Interval{q(7, 8), q(1)});
    std::vector<int> bad{0, 3};
    CHECK(code_of([&] { interval_of_word(3, bad); }) == ErrorCode::invalid_word);
  }

  TEST_CASE("appending a digit picks the matching subcell") {
    std::vector<int> w{2, 0, 1};
    const auto parent = interval_of_word(3, w);
    for (int j = 0; j < 3; ++j) {
      auto longer = w;
      longer.push_back(j);
      const auto child = interval_of_word(3, longer);
      CHECK(child.interval() == parent.child(j).interval());
      CHECK(child.length() * 3 == parent.length());
    }
  }

  TEST_CASE("homothety composition follows the interval rule") {
    const Interval I{q(0), q(1)};
    const Interval J{q(-6), q(3)};
    const Interval K{q(2), q(2) + q(1, 3)};
    const auto ij = Homothety::between(3, I, J);
    const auto jk = Homothety::between(3, J, K);
    CHECK(compose(jk, ij) == Homothety::between(3, I, K));
    CHECK(compose(ij.inverse(), ij) == Homothety::identity(3));
  }

  TEST_CASE("cantor cell masses agree with the counting rule") {
    const auto mu = cantor();
    CHECK(mass(mu, Interval{q(0), q(1, 3)}) == q(1, 2));
    CHECK(mass(mu, Interval{q(1, 3), q(2, 3)}) == 0);
    CHECK(mass(mu, Interval{q(5), q(7)}) == 0);
    // every word up to length 6 against the oracle
    for (int n = 1; n <= 6; ++n) {
      std::vector<int> word(static_cast<std::size_t>(n), 0);
      for (;;) {
        CHECK(mass(mu, interval_of_word(3, word)) == oracle::cantor_word_mass(word));
        int k = n;
        while (k > 0 && word[static_cast<std::size_t>(k - 1)] == 2) word[static_cast<std::size_t>(--k)] = 0;
        if (k == 0) break;
        ++word[static_cast<std::size_t>(k - 1)];
      }
    }
  }

  TEST_CASE("deep words stay exact") {
    const auto mu = cantor();
    std::vector<int> word(201, 2);
    word[17] = 0;
    CHECK(mass(mu, interval_of_word(3, word)) == oracle::cantor_word_mass(word));
  }

  TEST_CASE("restriction keeps masses inside and drops the rest") {
    const auto mu = cantor();
    CHECK(restrict(mu, unit_interval()) == mu);
    CHECK(restrict(mu, Interval{q(1, 3), q(2, 3)}).is_zero());
    const auto leb = GridMeasure::from_cells(2, 1, unit_interval(), {{0, q(1, 2)}, {1, q(1, 2)}});
    const auto half = restrict(leb, Interval{q(0), q(1, 2)});
    CHECK(half.mass(unit_interval()) == q(1, 2));
    CHECK(half.cells(1) == std::vector<std::pair<std::int64_t, Rational>>{{0, q(1, 2)}});
  }

  TEST_CASE("finite-resolution measures reject misaligned queries") {
    const auto leb = GridMeasure::from_cells(2, 1, unit_interval(), {{0, q(1, 2)}, {1, q(1, 2)}});
    CHECK(code_of([&] { (void)leb.mass(Interval{q(0), q(1, 4)}); }) == ErrorCode::alignment);
    CHECK(code_of([&] { (void)leb.cells(3); }) == ErrorCode::resolution_exhausted);
    const auto coarse = GridMeasure::from_cells(2, 0, unit_interval(), {{0, q(1)}});
    CHECK(code_of([&] { zoom(coarse, 1); }) == ErrorCode::resolution_exhausted);
  }

  TEST_CASE("pushforward moves cells and keeps total mass") {
    const auto mu = cantor();
    const auto pushed = push(mu, Homothety::digit_zoom(3, 0));
    CHECK(pushed.mass(pushed.window()) == 1);
    // oracle: level-2 cells of mu inside [0, 1/3) scaled by 3
    Rational expected = 0;
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        const Rational lo = q(3 * a + b, 9);
        if (lo < Rational(1, 3)) expected += oracle::cantor_word_mass({a, b});
      }
    }
    CHECK(mass(pushed, unit_interval()) == expected);
    CHECK(push(mu, Homothety::identity(3)) == mu);
    const auto unit = GridMeasure::from_cells(3, 0, Interval{q(2), q(3)}, {{2, q(1)}});
    const auto moved = push(unit, Homothety::translation(3, q(2)));
    CHECK(moved.cells(0) == std::vector<std::pair<std::int64_t, Rational>>{{0, q(1)}});
    CHECK(code_of([&] { push(mu, Homothety{3, 0, q(1, 2)}); }) == ErrorCode::alignment);
  }

  TEST_CASE("psi and normalization") {
    const auto mu = cantor();
    CHECK(psi(mu) == 1);
    const auto one = GridMeasure::from_cells(3, 0, Interval{q(-9), q(9)}, {{1, q(1)}});
    CHECK(psi(one) == 2);
    const auto left = GridMeasure::from_cells(3, 0, Interval{q(-9), q(9)}, {{-3, q(1)}});
    CHECK(psi(left) == 4);
    CHECK(code_of([] { psi(GridMeasure::zero(3)); }) == ErrorCode::undefined_psi);
    CHECK(normalize(GridMeasure::zero(3)).is_zero());
    CHECK(normalize(mu) == mu);

    const auto leb12 = push(GridMeasure::lebesgue(2), Homothety::translation(2, q(-1)));
    const auto tripled = leb12.scaled(3);
    CHECK(normalize(tripled) == leb12);
    CHECK(normalize(normalize(tripled)) == normalize(tripled));
    CHECK(normalize(tripled.scaled(q(7, 5))) == normalize(tripled));
  }

  TEST_CASE("normalization commutes with pushforward up to scale") {
    const auto base = cantor().scaled(q(5, 7));
    for (const auto& rho : {Homothety{3, 2, q(-4)}, Homothety{3, -1, q(2)}, Homothety{3, 1, q(-1)}}) {
      CHECK(normalize(push(normalize(base), rho)) == normalize(push(base, rho)));
      const Homothety other{3, 1, q(3)};
      CHECK(push(push(base, rho), other) == push(base, compose(other, rho)));
    }
  }

  TEST_CASE("truncated windows report missing mass") {
    const auto far = GridMeasure::from_cells(3, 0, Interval{q(0), q(9)}, {{5, q(1)}}).with_window(
        Interval{q(0), q(9)}, true);
    CHECK(code_of([&] { psi(far); }) == ErrorCode::window_exhausted);
  }

  TEST_CASE("zooms of self-similar measures") {
    const auto mu = cantor();
    CHECK(zoom(mu, 0) == mu);
    CHECK(zoom(mu, 2) == mu);
    CHECK(mass(mu, Interval{q(1, 3), q(2, 3)}) == 0);
    CHECK(zoom(mu, 1).is_zero());
    const auto leb = GridMeasure::lebesgue(2);
    CHECK(zoom(leb, 0) == leb);
    CHECK(zoom(leb, 1) == leb);
  }

  TEST_CASE("equality falls back to cells when views differ") {
    // Lebesgue as a law and as explicit cells at resolution 3
    std::map<std::int64_t, Rational> cells;
    for (int c = 0; c < 8; ++c) cells.emplace(c, q(1, 8));
    const auto explicit_leb = GridMeasure::from_cells(2, 3, unit_interval(), cells);
    CHECK(equal_on(explicit_leb, GridMeasure::lebesgue(2), unit_interval()));
    const auto skew = GridMeasure::self_similar(2, {q(2, 3), q(1, 3)});
    CHECK_FALSE(equal_on(skew, GridMeasure::lebesgue(2), unit_interval()));
    CHECK(tv_distance(skew, GridMeasure::lebesgue(2), unit_interval(), 1) == q(1, 3));
  }
}
