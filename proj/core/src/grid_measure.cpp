#include "ecps/grid_measure.hpp"

#include <algorithm>
#include <limits>

#include "ecps/error.hpp"

namespace ecps {

namespace {

constexpr int kMaxSplitDepth = 4096;
constexpr std::size_t kMaxCompareCells = 4'000'000;

/// Mass assigned by the self-similar law to [0, u), for u in [0, 1].
Rational law_cdf(const CellLaw& w, const Rational& u, int p) {
  if (sgn(u) <= 0) return 0;
  if (u >= 1) return 1;
  if (!padic_level(u, p)) {
    throw Error(ErrorCode::alignment, "point " + u.get_str() + " is not p-adic");
  }
  Rational x = u;
  Rational weight = 1;
  Rational acc = 0;
  while (sgn(x) != 0 && sgn(weight) != 0) {
    x *= p;
    const Integer d = ecps::floor(x);
    x -= Rational(d);
    const long digit = d.get_si();
    for (long j = 0; j < digit; ++j) acc += weight * w[static_cast<std::size_t>(j)];
    weight *= w[static_cast<std::size_t>(digit)];
  }
  return acc;
}

bool same_law(const CellLaw* a, const CellLaw* b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

bool same_table(const std::shared_ptr<const CellTable>& a, const std::shared_ptr<const CellTable>& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->p != b->p || a->index.size() != b->index.size() || a->index.size() > 64) return false;
  return a->index == b->index && a->mass == b->mass && same_law(a->law.get(), b->law.get());
}

std::shared_ptr<const CellTable> singleton(int p, std::shared_ptr<const CellLaw> law) {
  std::map<std::int64_t, Rational> one;
  one.emplace(0, Rational(1));
  return CellTable::build(p, std::move(one), std::move(law));
}

int required_level(const Rational& q, int p) {
  const auto l = padic_level(q, p);
  if (!l) throw Error(ErrorCode::alignment, q.get_str() + " is not a p-adic rational");
  return *l;
}

}  // namespace

std::shared_ptr<const CellTable> CellTable::build(int p, std::map<std::int64_t, Rational> cells,
                                                  std::shared_ptr<const CellLaw> law) {
  auto t = std::make_shared<CellTable>();
  t->p = p;
  t->law = std::move(law);
  Rational running = 0;
  for (auto& [c, m] : cells) {
    if (sgn(m) < 0) throw Error(ErrorCode::invalid_argument, "negative mass in cell " + std::to_string(c));
    if (sgn(m) == 0) continue;
    t->index.push_back(c);
    t->prefix.push_back(running);
    running += m;
    t->mass.push_back(std::move(m));
  }
  t->prefix.push_back(running);
  return t;
}

GridMeasure::GridMeasure() : GridMeasure(2, nullptr, Homothety::identity(2), Rational(0), unit_interval(), false) {}

GridMeasure::GridMeasure(int p, std::shared_ptr<const CellTable> table, Homothety to_world, Rational scale,
                         Interval window, bool truncated)
    : p_(p),
      table_(std::move(table)),
      to_world_(std::move(to_world)),
      scale_(std::move(scale)),
      window_(std::move(window)),
      truncated_(truncated) {}

GridMeasure GridMeasure::zero(int p, Interval window, bool truncated) {
  if (p < 2) throw Error(ErrorCode::invalid_argument, "base must be at least 2");
  return GridMeasure(p, nullptr, Homothety::identity(p), Rational(0), std::move(window), truncated);
}

GridMeasure GridMeasure::from_cells(int p, int resolution, Interval window,
                                    const std::map<std::int64_t, Rational>& masses) {
  if (p < 2) throw Error(ErrorCode::invalid_argument, "base must be at least 2");
  const Rational width = power(p, -resolution);
  for (const auto& [c, m] : masses) {
    if (sgn(m) == 0) continue;
    const Interval cell{Rational(Integer(static_cast<long>(c))) * width,
                        Rational(Integer(static_cast<long>(c)) + 1) * width};
    if (!window.contains(cell)) {
      throw Error(ErrorCode::invalid_argument, "cell " + to_string(cell) + " outside window " + to_string(window));
    }
  }
  auto table = CellTable::build(p, masses, nullptr);
  return GridMeasure(p, std::move(table), Homothety{p, -resolution, Rational(0)}, Rational(1), std::move(window),
                     false);
}

GridMeasure GridMeasure::self_similar(int p, const CellLaw& weights) {
  if (p < 2) throw Error(ErrorCode::invalid_argument, "base must be at least 2");
  if (weights.size() != static_cast<std::size_t>(p)) {
    throw Error(ErrorCode::invalid_argument, "expected " + std::to_string(p) + " weights");
  }
  Rational total = 0;
  for (const auto& w : weights) {
    if (sgn(w) < 0) throw Error(ErrorCode::invalid_argument, "negative weight");
    total += w;
  }
  if (total != 1) throw Error(ErrorCode::invalid_argument, "weights sum to " + total.get_str() + ", not 1");
  auto law = std::make_shared<const CellLaw>(weights);
  return GridMeasure(p, singleton(p, std::move(law)), Homothety::identity(p), Rational(1), unit_interval(), false);
}

GridMeasure GridMeasure::lebesgue(int p) {
  return self_similar(p, CellLaw(static_cast<std::size_t>(p), Rational(1, p)));
}

bool GridMeasure::known(const Interval& region) const {
  return !truncated_ || region.empty() || window_.contains(region);
}

GridMeasure GridMeasure::scaled(const Rational& factor) const {
  if (sgn(factor) < 0) throw Error(ErrorCode::invalid_argument, "negative scale factor");
  GridMeasure r = *this;
  r.scale_ *= factor;
  return r;
}

GridMeasure GridMeasure::with_window(const Interval& window, bool truncated) const {
  GridMeasure r = *this;
  r.window_ = window;
  r.truncated_ = truncated;
  return r;
}

bool GridMeasure::same_view(const GridMeasure& other) const {
  return p_ == other.p_ && same_table(table_, other.table_) && to_world_ == other.to_world_ &&
         scale_ == other.scale_ && window_ == other.window_ && truncated_ == other.truncated_;
}

Rational GridMeasure::table_cdf(const Rational& t) const {
  const Integer fl = ecps::floor(t);
  const auto& idx = table_->index;
  if (idx.empty()) return 0;
  if (fl < idx.front()) return 0;
  if (fl > idx.back()) return table_->prefix.back();
  const std::int64_t c = to_int64(fl);
  const auto it = std::lower_bound(idx.begin(), idx.end(), c);
  const auto i = static_cast<std::size_t>(it - idx.begin());
  Rational g = table_->prefix[i];
  if (it != idx.end() && *it == c) {
    const Rational frac = t - Rational(fl);
    if (sgn(frac) != 0) {
      if (!table_->law) {
        throw Error(ErrorCode::alignment, "query point falls inside a stored cell of a finite-resolution measure");
      }
      g += table_->mass[i] * law_cdf(*table_->law, frac, p_);
    }
  }
  return g;
}

Rational GridMeasure::mass(const Interval& region) const {
  if (is_zero()) return 0;
  const Interval clip = intersect(region, window_);
  if (clip.empty()) return 0;
  const Homothety inv = to_world_.inverse();
  return scale_ * (table_cdf(inv(clip.hi)) - table_cdf(inv(clip.lo)));
}

void GridMeasure::for_each_atom(int level, const Interval& region, Direction dir,
                                const std::function<bool(const Atom&)>& visit) const {
  if (is_zero()) return;
  const Interval clip = intersect(region, window_);
  if (clip.empty()) return;
  const Homothety inv = to_world_.inverse();
  const Rational a = inv(clip.lo);
  const Rational b = inv(clip.hi);
  const Rational grid = power(p_, level);  // level-r cells per unit length
  const Rational table_len = power(p_, to_world_.e);

  // Depth-first walk; returns false once the visitor asks to stop.
  std::function<bool(const Rational&, int, const Rational&)> walk = [&](const Rational& u, int depth,
                                                                       const Rational& m) -> bool {
    const Rational len = power(p_, -depth);
    const Rational v = u + len;
    if (v <= a || u >= b) return true;
    const Rational wlo = to_world_(u);
    const Rational whi = to_world_(v);
    const Integer first = ecps::floor(wlo * grid);
    const Integer last = ecps::ceil(whi * grid) - 1;
    const bool inside = a <= u && v <= b;
    if (inside && first == last) {
      return visit(Atom{to_int64(first), wlo, table_len * len, scale_ * m});
    }
    if (!table_->law) {
      if (!inside) {
        throw Error(ErrorCode::alignment, "region boundary cuts a stored cell of a finite-resolution measure");
      }
      throw Error(ErrorCode::resolution_exhausted,
                  "level " + std::to_string(level) + " is finer than the stored resolution " +
                      std::to_string(resolution()));
    }
    if (depth >= kMaxSplitDepth) throw Error(ErrorCode::resolution_exhausted, "cell refinement too deep");
    const CellLaw& w = *table_->law;
    for (int k = 0; k < p_; ++k) {
      const int j = dir == Direction::forward ? k : p_ - 1 - k;
      const auto& wj = w[static_cast<std::size_t>(j)];
      if (sgn(wj) == 0) continue;
      if (!walk(u + Rational(j) * len / p_, depth + 1, m * wj)) return false;
    }
    return true;
  };

  // Region endpoints must sit on some p-adic grid or the walk would never end.
  required_level(a, p_);
  required_level(b, p_);

  const auto& idx = table_->index;
  const std::int64_t lo_cell = to_int64(ecps::floor(a));
  const std::int64_t hi_cell = to_int64(ecps::ceil(b));
  auto first = std::lower_bound(idx.begin(), idx.end(), lo_cell);
  auto last = std::lower_bound(idx.begin(), idx.end(), hi_cell);
  if (dir == Direction::forward) {
    for (auto it = first; it != last; ++it) {
      const auto i = static_cast<std::size_t>(it - idx.begin());
      if (!walk(Rational(Integer(static_cast<long>(*it))), 0, table_->mass[i])) return;
    }
  } else {
    for (auto it = last; it != first;) {
      --it;
      const auto i = static_cast<std::size_t>(it - idx.begin());
      if (!walk(Rational(Integer(static_cast<long>(*it))), 0, table_->mass[i])) return;
    }
  }
}

std::vector<std::pair<std::int64_t, Rational>> GridMeasure::cells(int level, const Interval& region) const {
  std::vector<std::pair<std::int64_t, Rational>> out;
  for_each_atom(level, region, Direction::forward, [&](const Atom& atom) {
    if (!out.empty() && out.back().first == atom.cell) {
      out.back().second += atom.mass;
    } else {
      if (out.size() >= kMaxCompareCells) {
        throw Error(ErrorCode::combinatorial_budget, "too many cells at level " + std::to_string(level));
      }
      out.emplace_back(atom.cell, atom.mass);
    }
    return true;
  });
  return out;
}

std::optional<std::int64_t> GridMeasure::positive_unit(std::int64_t from, Direction dir) const {
  std::optional<std::int64_t> found;
  const auto z = [](std::int64_t v) { return Rational(Integer(static_cast<long>(v))); };
  const Interval region = dir == Direction::forward ? Interval{z(from), std::max(window_.hi, z(from))}
                                                    : Interval{std::min(window_.lo, z(from + 1)), z(from + 1)};
  for_each_atom(0, region, dir, [&](const Atom& atom) {
    found = atom.cell;
    return false;
  });
  return found;
}

Rational mass(const GridMeasure& m, const PAdicInterval& cell) { return m.mass(cell.interval()); }
Rational mass(const GridMeasure& m, const Interval& region) { return m.mass(region); }

GridMeasure restrict(const GridMeasure& m, const Interval& region) {
  const Interval window = intersect(m.window_, region);
  const bool truncated = m.truncated_ && !m.window_.contains(region);
  if (m.is_zero() || window.empty()) return GridMeasure::zero(m.p_, window, truncated);
  const Rational total = m.mass(window);
  if (sgn(total) == 0) return GridMeasure::zero(m.p_, window, truncated);

  GridMeasure r = m;
  r.window_ = window;
  r.truncated_ = truncated;
  if (!m.table_->law) return r;

  // Re-anchor onto a single law cell when the window is a p-adic subcell of
  // one stored cell; deep zoom chains then stay O(1) per query.
  const Homothety inv = m.to_world_.inverse();
  const Rational a = inv(window.lo);
  const Rational b = inv(window.hi);
  const Integer c = ecps::floor(a);
  if (b > Rational(c + 1)) return r;
  const auto k = power_exponent(b - a, m.p_);
  if (!k || *k > 0) return r;
  const Rational offset = (a - Rational(c)) / (b - a);
  if (offset.get_den() != 1) return r;
  Homothety h{m.p_, *k, a};
  r.table_ = singleton(m.p_, m.table_->law);
  r.to_world_ = compose(m.to_world_, h);
  r.scale_ = total;
  return r;
}

GridMeasure restrict(const GridMeasure& m, const PAdicInterval& cell) { return restrict(m, cell.interval()); }

GridMeasure push(const GridMeasure& m, const Homothety& rho) {
  if (rho.p != m.p_) throw Error(ErrorCode::invalid_argument, "homothety base differs from measure base");
  if (!padic_level(rho.b, m.p_)) {
    throw Error(ErrorCode::alignment, "homothety offset " + rho.b.get_str() + " is off the p-adic grid");
  }
  GridMeasure r = m;
  r.to_world_ = compose(rho, m.to_world_);
  r.window_ = rho(m.window_);
  return r;
}

GridMeasure translate(const GridMeasure& m, const Rational& x) {
  return push(m, Homothety::translation(m.base(), x));
}

int psi(const GridMeasure& m) {
  if (m.is_zero()) throw Error(ErrorCode::undefined_psi, "psi of the zero measure");
  const auto right = m.positive_unit(0, Direction::forward);
  const auto left = m.positive_unit(-1, Direction::backward);
  if (!right && !left) {
    if (m.truncated()) throw Error(ErrorCode::window_exhausted, "no mass inside window " + to_string(m.window()));
    throw Error(ErrorCode::undefined_psi, "psi of the zero measure");
  }
  std::int64_t n = std::numeric_limits<std::int64_t>::max();
  if (right) n = *right + 1;
  if (left) n = std::min(n, -*left + 1);
  if (!m.known(integer_interval(-(n - 1), n))) {
    throw Error(ErrorCode::window_exhausted, "psi needs mass outside window " + to_string(m.window()));
  }
  if (n > std::numeric_limits<int>::max()) throw Error(ErrorCode::index_out_of_range, "psi too large");
  return static_cast<int>(n);
}

GridMeasure normalize(const GridMeasure& m) {
  if (m.is_zero()) return m;
  const int n = psi(m);
  const Rational total = m.mass(integer_interval(-(n - 1), n));
  return m.scaled(1 / total);
}

GridMeasure translate_normalize(const GridMeasure& m, const Rational& x) { return normalize(translate(m, x)); }

GridMeasure zoom(const GridMeasure& mu, int digit) {
  const int p = mu.base();
  if (digit < 0 || digit >= p) throw Error(ErrorCode::invalid_word, "digit " + std::to_string(digit));
  if (mu.is_zero()) return GridMeasure::zero(p);
  if (!mu.law() && mu.resolution() < 1) {
    throw Error(ErrorCode::resolution_exhausted, "zoom needs resolution at least 1");
  }
  GridMeasure r = restrict(push(mu, Homothety::digit_zoom(p, digit)), unit_interval());
  if (r.is_zero()) return GridMeasure::zero(p);
  return r.scaled(1 / r.mass(unit_interval()));
}

bool equal_cells(const GridMeasure& a, const GridMeasure& b, const Interval& region, int level) {
  return a.cells(level, region) == b.cells(level, region);
}

bool equal_on(const GridMeasure& a, const GridMeasure& b, const Interval& region, int extra_levels) {
  if (a.base() != b.base()) throw Error(ErrorCode::invalid_argument, "comparing measures of different bases");
  const GridMeasure ra = restrict(a, region);
  const GridMeasure rb = restrict(b, region);
  if (ra.is_zero() || rb.is_zero()) return ra.is_zero() && rb.is_zero();
  if (same_table(ra.table(), rb.table()) && ra.to_world() == rb.to_world() && ra.window() == rb.window()) {
    return ra.scale() == rb.scale();
  }
  const int p = a.base();
  int level = std::max({0, ra.resolution(), rb.resolution()});
  for (const GridMeasure* m : {&ra, &rb}) {
    level = std::max({level, required_level(m->to_world().b, p), required_level(m->window().lo, p),
                      required_level(m->window().hi, p)});
  }
  if (ra.law() && rb.law() && !same_law(ra.law(), rb.law())) ++level;
  return equal_cells(ra, rb, region, level + extra_levels);
}

bool operator==(const GridMeasure& a, const GridMeasure& b) {
  return a.window() == b.window() && a.truncated() == b.truncated() && equal_on(a, b, a.window());
}

Rational tv_distance(const GridMeasure& a, const GridMeasure& b, const Interval& region, int level) {
  if (!a.known(region) || !b.known(region)) {
    throw Error(ErrorCode::window_exhausted, "distance region " + to_string(region) + " leaves the window");
  }
  const auto ca = a.cells(level, region);
  const auto cb = b.cells(level, region);
  Rational d = 0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < ca.size() || j < cb.size()) {
    if (j == cb.size() || (i < ca.size() && ca[i].first < cb[j].first)) {
      d += ca[i++].second;
    } else if (i == ca.size() || cb[j].first < ca[i].first) {
      d += cb[j++].second;
    } else {
      d += abs(Rational(ca[i].second - cb[j].second));
      ++i;
      ++j;
    }
  }
  return d;
}

}  // namespace ecps
