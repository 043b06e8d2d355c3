#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "ecps/padic.hpp"
#include "ecps/rational.hpp"

namespace ecps {

/// Weights of a self-similar law on [0, 1): the mass of [i_1..i_n] is the
/// product of the weights of its digits.
using CellLaw = std::vector<Rational>;

/// Immutable storage shared between measure views. Cells live in "table
/// space": cell c occupies [c, c + 1). Only positive masses are stored.
struct CellTable {
  int p = 2;
  std::vector<std::int64_t> index;
  std::vector<Rational> mass;
  std::vector<Rational> prefix;  // prefix[i] = mass[0] + ... + mass[i-1]
  /// When present, the normalized restriction of the measure to every p-adic
  /// subcell of a stored cell is the image of this law. This is what lets
  /// self-similar measures be queried at any depth without materializing
  /// exponentially many cells.
  std::shared_ptr<const CellLaw> law;

  static std::shared_ptr<const CellTable> build(int p, std::map<std::int64_t, Rational> cells,
                                                std::shared_ptr<const CellLaw> law);
};

enum class Direction { forward, backward };

/// A positive-mass piece produced while walking a measure at a fixed level:
/// [lo, lo + width) lies inside the single level-r cell `cell`.
struct Atom {
  std::int64_t cell;
  Rational lo;
  Rational width;
  Rational mass;
};

/// A nonnegative measure on R known exactly on `window()`.
///
/// A GridMeasure is a view: a shared CellTable, a homothety taking table space
/// to the real line, and a scalar. Pushforward, scaling, translation and
/// restriction therefore cost O(1) and never copy cell data.
///
/// truncated() distinguishes "known zero" from "unknown": a truncated measure
/// is the restriction of something larger to its window, and any query that
/// needs mass outside the window raises window-exhausted.
class GridMeasure {
 public:
  /// Zero measure on [0, 1).
  GridMeasure();

  static GridMeasure zero(int p, Interval window = unit_interval(), bool truncated = false);

  /// Explicit masses on level-r cells (cell c is [c p^-r, (c+1) p^-r)). The
  /// window must contain every listed cell; the measure vanishes outside it.
  static GridMeasure from_cells(int p, int resolution, Interval window,
                                const std::map<std::int64_t, Rational>& masses);

  /// The self-similar probability measure on [0, 1) with the given digit
  /// weights (Cantor: p = 3, weights 1/2, 0, 1/2; Lebesgue: uniform).
  static GridMeasure self_similar(int p, const CellLaw& weights);
  static GridMeasure lebesgue(int p);

  int base() const { return p_; }
  /// World level of the stored cells: cells are p^-resolution long. May be
  /// negative after pushing forward by an expanding homothety.
  int resolution() const { return -to_world_.e; }
  const Interval& window() const { return window_; }
  bool truncated() const { return truncated_; }
  bool is_zero() const { return !table_ || table_->index.empty() || sgn(scale_) == 0; }
  /// Law used to refine stored cells, or nullptr for a finite-resolution measure.
  const CellLaw* law() const { return table_ ? table_->law.get() : nullptr; }

  /// Whether every point of `region` lies where this measure is known.
  bool known(const Interval& region) const;

  GridMeasure scaled(const Rational& factor) const;
  GridMeasure with_window(const Interval& window, bool truncated) const;

  /// Walks positive-mass atoms inside `region` (clipped to the window) in the
  /// requested order, refining stored cells through the law until each atom
  /// sits inside one level-r cell. Returning false from the visitor stops the
  /// walk. Throws resolution-exhausted when a cell must be split and there is
  /// no law.
  void for_each_atom(int level, const Interval& region, Direction dir,
                     const std::function<bool(const Atom&)>& visit) const;

  /// Nonzero masses of level-r cells inside `region`, sorted by cell index.
  std::vector<std::pair<std::int64_t, Rational>> cells(int level, const Interval& region) const;
  std::vector<std::pair<std::int64_t, Rational>> cells(int level) const { return cells(level, window_); }

  /// First (forward) or last (backward) integer k with positive mass on
  /// [k, k+1), searching [from, window.hi) or [window.lo, from + 1).
  std::optional<std::int64_t> positive_unit(std::int64_t from, Direction dir) const;

  /// Exact mass of region ∩ window.
  Rational mass(const Interval& region) const;

  /// Structural identity of the underlying view (same table, same map).
  bool same_view(const GridMeasure& other) const;

  // internal accessors used by free functions
  const Homothety& to_world() const { return to_world_; }
  const Rational& scale() const { return scale_; }
  const std::shared_ptr<const CellTable>& table() const { return table_; }

  friend GridMeasure push(const GridMeasure& m, const Homothety& rho);
  friend GridMeasure restrict(const GridMeasure& m, const Interval& region);

 private:
  GridMeasure(int p, std::shared_ptr<const CellTable> table, Homothety to_world, Rational scale,
              Interval window, bool truncated);

  Rational table_cdf(const Rational& t) const;

  int p_ = 2;
  std::shared_ptr<const CellTable> table_;
  Homothety to_world_;
  Rational scale_ = 0;
  Interval window_;
  bool truncated_ = false;
};

/// Mass of a p-adic cell; outside the window contributes 0.
Rational mass(const GridMeasure& m, const PAdicInterval& cell);
Rational mass(const GridMeasure& m, const Interval& region);

/// 1_A dm. The window shrinks to A ∩ window.
GridMeasure restrict(const GridMeasure& m, const Interval& region);
GridMeasure restrict(const GridMeasure& m, const PAdicInterval& cell);

/// Pushforward by an orientation-preserving homothety.
GridMeasure push(const GridMeasure& m, const Homothety& rho);

/// t_x m (the measure moved left by x).
GridMeasure translate(const GridMeasure& m, const Rational& x);

/// Smallest n >= 1 with m[-(n-1), n) > 0.
int psi(const GridMeasure& m);

/// N m: zero stays zero, otherwise m / m[-(psi-1), psi).
GridMeasure normalize(const GridMeasure& m);

/// t_x^* m = N t_x m.
GridMeasure translate_normalize(const GridMeasure& m, const Rational& x);

/// mu^i = R N rho_i mu for mu supported in [0, 1).
GridMeasure zoom(const GridMeasure& mu, int digit);

/// Exact equality of the two measures on `region`. Same-law views are
/// compared structurally when possible; otherwise cell by cell at the finer
/// of the two resolutions (never coarser than unit cells) plus `extra_levels`.
bool equal_on(const GridMeasure& a, const GridMeasure& b, const Interval& region, int extra_levels = 0);

/// Cell-by-cell comparison at a fixed level, no structural shortcut.
bool equal_cells(const GridMeasure& a, const GridMeasure& b, const Interval& region, int level);

/// Same window, same truncation, equal masses on the window.
bool operator==(const GridMeasure& a, const GridMeasure& b);

/// Total variation of the difference over the level-r cells of `region`.
/// Proxy for weak closeness only: it upper-bounds nothing beyond the region.
Rational tv_distance(const GridMeasure& a, const GridMeasure& b, const Interval& region, int level);

}  // namespace ecps
