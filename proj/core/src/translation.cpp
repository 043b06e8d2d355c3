#include "ecps/translation.hpp"

#include <algorithm>

namespace ecps {

namespace {

Rational z(std::int64_t v) { return Rational(Integer(static_cast<long>(v))); }

int mod_p(int x, int p) { return ((x % p) + p) % p; }

}  // namespace

int GroupWord::at(int m) const {
  if (m > 0 || m < start) return 0;
  return digits[static_cast<std::size_t>(m - start)];
}

bool GroupWord::is_zero() const {
  return std::all_of(digits.begin(), digits.end(), [](int d) { return d == 0; });
}

GroupWord GroupWord::trimmed() const {
  GroupWord r = *this;
  std::size_t lead = 0;
  while (lead + 1 < r.digits.size() && r.digits[lead] == 0) ++lead;
  r.digits.erase(r.digits.begin(), r.digits.begin() + static_cast<std::ptrdiff_t>(lead));
  r.start += static_cast<int>(lead);
  return r;
}

std::string GroupWord::to_string() const {
  std::string s = "G_" + std::to_string(start) + "(";
  for (std::size_t j = 0; j < digits.size(); ++j) s += (j ? "," : "") + std::to_string(digits[j]);
  return s + ")";
}

GroupWord operator+(const GroupWord& a, const GroupWord& b) {
  if (a.p != b.p) throw Error(ErrorCode::invalid_argument, "adding group words of different bases");
  GroupWord r{a.p, std::min(a.start, b.start), {}};
  for (int m = r.start; m <= 0; ++m) r.digits.push_back(mod_p(a.at(m) + b.at(m), a.p));
  return r;
}

GroupWord operator-(const GroupWord& a) {
  GroupWord r = a;
  for (int& d : r.digits) d = mod_p(-d, a.p);
  return r;
}

bool operator==(const GroupWord& a, const GroupWord& b) {
  if (a.p != b.p) return false;
  for (int m = std::min(a.start, b.start); m <= 0; ++m) {
    if (a.at(m) != b.at(m)) return false;
  }
  return true;
}

std::vector<GroupWord> enumerate_group(int p, int n) {
  if (n > 0) throw Error(ErrorCode::invalid_argument, "G_n needs n <= 0");
  const std::size_t len = static_cast<std::size_t>(1 - n);
  std::vector<GroupWord> out;
  std::vector<int> d(len, 0);
  for (;;) {
    out.push_back(GroupWord{p, n, d});
    std::size_t k = len;
    while (k > 0 && d[k - 1] == p - 1) d[--k] = 0;
    if (k == 0) break;
    ++d[k - 1];
  }
  return out;
}

std::vector<int> s_k(int p, std::span<const int> past, std::int64_t k) {
  std::vector<int> out(past.begin(), past.end());
  if (k == 0) return out;
  const int L = static_cast<int>(past.size());
  const auto intervals = compatible_intervals(p, past, L);
  const Interval unit{z(k), z(k) + 1};
  for (int d = 0; d <= L; ++d) {
    const Interval& I = intervals[static_cast<std::size_t>(d)];
    if (!I.contains(unit)) continue;
    // base-p digits of k - lo(I_{-d}), most significant first, become j_{-d+1}..j_0
    Integer off = unit.lo.get_num() - I.lo.get_num();
    for (int m = 0; m < d; ++m) {
      const Integer q = off / p;
      out[static_cast<std::size_t>(L - 1 - m)] = static_cast<int>(Integer(off - q * p).get_si());
      off = q;
    }
    return out;
  }
  throw Error(ErrorCode::depth_exhausted, "no stored I_n contains [" + std::to_string(k) + ", " +
                                              std::to_string(k + 1) + ")");
}

ChainState S_a(const ChainState& s, const GroupWord& a) {
  if (a.p != s.base()) throw Error(ErrorCode::invalid_argument, "group word base differs from state base");
  const GroupWord t = a.trimmed();
  if (t.is_zero()) return s;
  std::vector<int> j;
  j.reserve(t.digits.size());
  for (int m = t.start; m <= 0; ++m) j.push_back(mod_p(s.digit(m) + t.at(m), s.base()));
  return s.with_suffix(t.start, j);
}

ExtendedState T_k(const ExtendedState& e, std::int64_t k) {
  if (k == 0) return e;
  ExtendedState r;
  r.p = e.p;
  r.past = s_k(e.p, e.past, k);
  r.nu = translate_normalize(e.nu, z(k));
  r.origin = e.origin;
  r.offset = e.offset + k;
  return r;
}

GroupWord a_for_k(int p, std::span<const int> past, std::int64_t k) {
  const auto moved = s_k(p, past, k);
  const int L = static_cast<int>(past.size());
  int first = 0;  // index of the deepest changed digit
  for (int idx = 0; idx < L; ++idx) {
    if (moved[static_cast<std::size_t>(idx)] != past[static_cast<std::size_t>(idx)]) {
      first = idx - (L - 1);
      break;
    }
  }
  GroupWord a{p, first, {}};
  for (int m = first; m <= 0; ++m) {
    const auto i = static_cast<std::size_t>(L - 1 + m);
    a.digits.push_back(L == 0 ? 0 : mod_p(moved[i] - past[i], p));
  }
  return a;
}

std::int64_t k_for_a(int p, std::span<const int> past, const GroupWord& a) {
  const GroupWord t = a.trimmed();
  if (t.is_zero()) return 0;
  const int L = static_cast<int>(past.size());
  const int depth = 1 - t.start;  // J agrees with I at index start - 1
  if (depth > L) {
    throw Error(ErrorCode::depth_exhausted, "group word " + t.to_string() + " reaches past the stored digits");
  }
  const auto intervals = compatible_intervals(p, past, depth);
  Interval J = intervals.back();
  for (int m = t.start; m <= 0; ++m) {
    const int i = past[static_cast<std::size_t>(L - 1 + m)];
    const int j = mod_p(i + t.at(m), p);
    const Rational w = J.length() / p;
    J = {J.lo + j * w, J.lo + (j + 1) * w};
  }
  return to_int64(J.lo.get_num());
}

std::int64_t tau(const GridMeasure& nu) {
  const auto k = nu.positive_unit(1, Direction::forward);
  if (!k) throw Error(ErrorCode::window_exhausted, "no mass right of 1 inside " + to_string(nu.window()));
  return *k;
}

std::int64_t tau_minus(const GridMeasure& nu) {
  const auto k = nu.positive_unit(-1, Direction::backward);
  if (!k) throw Error(ErrorCode::window_exhausted, "no mass left of 0 inside " + to_string(nu.window()));
  return -*k;
}

ExtendedState T_map(const ExtendedState& e) { return T_k(e, tau(e)); }
ExtendedState T_map_inverse(const ExtendedState& e) { return T_k(e, -tau_minus(e)); }

std::vector<std::int64_t> tau_n(const GridMeasure& nu, int n) {
  std::vector<std::int64_t> out;
  out.reserve(static_cast<std::size_t>(std::max(n, 0)));
  GridMeasure cur = nu;
  std::int64_t acc = 0;
  for (int j = 1; j <= n; ++j) {
    const std::int64_t step = tau(cur);
    acc += step;
    out.push_back(acc);
    if (j < n) cur = translate_normalize(cur, z(step));
  }
  return out;
}

ExtendedState Extender::deepen(const ExtendedState& e) {
  if (!e.origin) {
    throw Error(ErrorCode::budget_exceeded, "state has no chain origin, so its past cannot be deepened");
  }
  auto origin = std::make_shared<const ChainState>(extend_past(*e.origin, budget_.extend_by, rng_));
  for (int attempt = 0;; ++attempt) {
    try {
      ExtendedState base = theta(origin);
      if (e.offset == 0) {
        base.forward = e.forward;
        return base;
      }
      return T_k(base, e.offset);
    } catch (const Error& err) {
      if (!err.recoverable() || attempt >= budget_.max_retries) throw;
    }
    origin = std::make_shared<const ChainState>(extend_past(*origin, budget_.extend_by, rng_));
  }
}

}  // namespace ecps
