#include "ecps/extension.hpp"

#include "ecps/error.hpp"

namespace ecps {

std::vector<Interval> compatible_intervals(int p, std::span<const int> past, int depth) {
  if (depth < 0 || depth > static_cast<int>(past.size())) {
    throw Error(ErrorCode::depth_exhausted, "need " + std::to_string(depth) + " past digits, have " +
                                                std::to_string(past.size()));
  }
  std::vector<Interval> out;
  out.reserve(static_cast<std::size_t>(depth) + 1);
  out.push_back(unit_interval());
  Rational len = 1;
  for (int d = 1; d <= depth; ++d) {
    // I_{-d}^{i} = I_{-d+1} where i = i_{-d+1}
    const int i = past[past.size() - static_cast<std::size_t>(d)];
    if (i < 0 || i >= p) throw Error(ErrorCode::invalid_word, "digit " + std::to_string(i));
    const Rational lo = out.back().lo - i * len;
    len *= p;
    out.push_back({lo, lo + len});
  }
  return out;
}

namespace {

std::vector<int> copy_digits(std::span<const int> d) { return {d.begin(), d.end()}; }

GridMeasure mu_tilde_with(const ChainState& s, const std::vector<Interval>& intervals, int n) {
  const Interval& I = intervals[static_cast<std::size_t>(-n)];
  const Homothety rho = Homothety::between(s.base(), unit_interval(), I);
  return normalize(push(s.measure(n), rho));
}

ExtendedState theta_impl(const ChainState& s, std::shared_ptr<const ChainState> origin, ThetaReport* report) {
  const int L = s.depth() - 1;
  const auto intervals = compatible_intervals(s.base(), s.digits(), L);
  GridMeasure shallow = mu_tilde_with(s, intervals, 0);
  ThetaReport local;
  for (int d = 1; d <= L; ++d) {
    GridMeasure deep = mu_tilde_with(s, intervals, -d);
    const Interval& I = intervals[static_cast<std::size_t>(d - 1)];
    const Rational a = deep.mass(I);
    const Rational b = shallow.mass(I);
    Rational lambda = 1;
    if (sgn(b) != 0) {
      lambda = a / b;
    } else if (sgn(a) != 0) {
      throw Error(ErrorCode::consistency_violation, "mu~ vanishes on I_" + std::to_string(-d + 1) +
                                                        " but its predecessor does not");
    }
    if (sgn(b) != 0 && !equal_on(deep, shallow.scaled(lambda), I)) {
      throw Error(ErrorCode::consistency_violation,
                  "no lambda(" + std::to_string(-d + 1) + ") relates consecutive mu~ on " + to_string(I));
    }
    local.lambdas.push_back(lambda);
    shallow = std::move(deep);
  }
  for (int d = L; d >= 1 && local.lambdas[static_cast<std::size_t>(d - 1)] == 1; --d) local.stable_from = -d + 1;
  if (report) *report = std::move(local);

  ExtendedState e;
  e.p = s.base();
  e.nu = shallow.with_window(intervals.back(), true);
  e.past = copy_digits(s.digits());
  e.origin = std::move(origin);
  return e;
}

}  // namespace

GridMeasure mu_tilde(const ChainState& s, int n) {
  if (n > 0 || -n >= s.depth()) {
    throw Error(ErrorCode::index_out_of_range, "mu~_" + std::to_string(n) + " outside stored depth");
  }
  const auto intervals = compatible_intervals(s.base(), s.digits(), -n);
  return mu_tilde_with(s, intervals, n);
}

ExtendedState theta(const ChainState& s, ThetaReport* report) { return theta_impl(s, nullptr, report); }

ExtendedState theta(std::shared_ptr<const ChainState> s, ThetaReport* report) {
  const ChainState& ref = *s;
  return theta_impl(ref, std::move(s), report);
}

GridMeasure theta_inverse(const ExtendedState& e, int n) {
  if (n > 0) throw Error(ErrorCode::index_out_of_range, "theta_inverse index must be <= 0");
  const auto intervals = compatible_intervals(e.p, e.past, -n);
  const Interval& I = intervals.back();
  if (!e.nu.known(I)) throw Error(ErrorCode::window_exhausted, to_string(I) + " leaves the window");
  const Homothety rho = Homothety::between(e.p, I, unit_interval());
  return normalize(restrict(push(restrict(e.nu, I), rho), unit_interval()));
}

ExtendedState magnify(const ExtendedState& e) {
  if (e.forward.empty()) throw Error(ErrorCode::cannot_advance, "no forward digit stored");
  const int i1 = e.forward.front();
  if (i1 < 0 || i1 >= e.p) throw Error(ErrorCode::invalid_word, "digit " + std::to_string(i1));
  ExtendedState r;
  r.p = e.p;
  r.nu = normalize(push(e.nu, Homothety::digit_zoom(e.p, i1)));
  r.past = e.past;
  r.past.push_back(i1);
  r.forward.assign(e.forward.begin() + 1, e.forward.end());
  if (e.origin && e.offset == 0) r.origin = std::make_shared<const ChainState>(e.origin->advanced(i1));
  return r;
}

ExtendedState magnify(const ExtendedState& e, Rng& rng) {
  if (!e.forward.empty()) return magnify(e);
  std::vector<Rational> probs;
  for (int j = 0; j < e.p; ++j) probs.push_back(e.nu.mass(PAdicInterval{e.p, 1, j}.interval()));
  Rational total = 0;
  for (const auto& q : probs) total += q;
  if (total != 1) throw Error(ErrorCode::cannot_advance, "nu[0,1) is not a probability");
  ExtendedState withdigit = e;
  withdigit.forward.push_back(rng.categorical(probs));
  return magnify(withdigit);
}

}  // namespace ecps
