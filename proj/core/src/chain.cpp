#include "ecps/chain.hpp"

#include <json.hpp>

#include "ecps/error.hpp"

namespace ecps {

namespace {

using nlohmann::json;

[[noreturn]] void bad_key(const std::string& key, const std::string& why) {
  throw Error(ErrorCode::config, "\"" + key + "\": " + why);
}

Rational rational_value(const json& v, const std::string& key) {
  try {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return Rational(Integer(v.get<long>()));
  } catch (const Error& e) {
    bad_key(key, e.what());
  }
  bad_key(key, "expected a rational written as \"num/den\"");
}

int int_value(const json& obj, const std::string& key, int fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) bad_key(key, "expected an integer");
  return v.get<int>();
}

void check_keys(const json& obj, std::initializer_list<std::string_view> allowed) {
  for (const auto& [k, v] : obj.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || k == a;
    if (!ok) bad_key(k, "unknown key");
  }
}

void validate_weights(const CellLaw& w, int p) {
  if (static_cast<int>(w.size()) != p) {
    bad_key("weights", "expected " + std::to_string(p) + " entries, got " + std::to_string(w.size()));
  }
  Rational total = 0;
  for (const auto& x : w) {
    if (sgn(x) < 0) bad_key("weights", "negative weight " + format_rational(x));
    total += x;
  }
  if (total != 1) bad_key("weights", "weights sum to " + format_rational(total) + ", not 1");
}

}  // namespace

ChainSystem ChainSystem::cantor() { return bernoulli(3, {Rational(1, 2), Rational(0), Rational(1, 2)}); }

ChainSystem ChainSystem::bernoulli(int p, CellLaw weights) {
  if (p < 2) throw Error(ErrorCode::config, "\"p\": base must be at least 2");
  validate_weights(weights, p);
  ChainSystem s;
  s.p = p;
  s.kind = SystemKind::bernoulli;
  s.weights = std::move(weights);
  if (p == 3 && s.weights == CellLaw{Rational(1, 2), Rational(0), Rational(1, 2)}) s.kind = SystemKind::cantor;
  return s;
}

ChainSystem ChainSystem::parse(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::config, std::string("malformed system spec: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::config, "system spec must be a JSON object");
  if (!doc.contains("type") || !doc["type"].is_string()) bad_key("type", "missing or not a string");
  const auto type = doc["type"].get<std::string>();

  if (type == "cantor") {
    check_keys(doc, {"type"});
    return cantor();
  }
  if (type == "bernoulli") {
    check_keys(doc, {"type", "p", "weights"});
    const int p = int_value(doc, "p", 2);
    if (p < 2) bad_key("p", "base must be at least 2");
    if (!doc.contains("weights") || !doc["weights"].is_array()) bad_key("weights", "missing or not an array");
    CellLaw w;
    for (const auto& v : doc["weights"]) w.push_back(rational_value(v, "weights"));
    return bernoulli(p, std::move(w));
  }
  if (type == "history") {
    check_keys(doc, {"type", "p", "resolution", "masses", "digits"});
    ChainSystem s;
    s.kind = SystemKind::history;
    s.p = int_value(doc, "p", 2);
    if (s.p < 2) bad_key("p", "base must be at least 2");
    const int r = int_value(doc, "resolution", -1);
    if (r < 1) bad_key("resolution", "must be a positive integer");
    if (!doc.contains("masses") || !doc["masses"].is_array()) bad_key("masses", "missing or not an array");
    const auto& masses = doc["masses"];
    if (Integer(static_cast<long>(masses.size())) != ipower(s.p, static_cast<unsigned>(r))) {
      bad_key("masses", "expected p^resolution entries");
    }
    std::map<std::int64_t, Rational> cells;
    Rational total = 0;
    for (std::size_t i = 0; i < masses.size(); ++i) {
      Rational m = rational_value(masses[i], "masses");
      if (sgn(m) < 0) bad_key("masses", "negative mass");
      total += m;
      cells.emplace(static_cast<std::int64_t>(i), m);
    }
    if (total != 1) bad_key("masses", "masses sum to " + format_rational(total) + ", not 1");
    s.history_measure = GridMeasure::from_cells(s.p, r, unit_interval(), cells);
    if (doc.contains("digits")) {
      if (!doc["digits"].is_array()) bad_key("digits", "not an array");
      for (const auto& d : doc["digits"]) {
        if (!d.is_number_integer() || d.get<int>() < 0 || d.get<int>() >= s.p) bad_key("digits", "digit out of range");
        s.history_digits.push_back(d.get<int>());
      }
    }
    if (static_cast<int>(s.history_digits.size()) > r) bad_key("digits", "more digits than stored resolution");
    return s;
  }
  bad_key("type", "unknown system type \"" + type + "\"");
}

bool ChainSystem::deterministic() const {
  if (kind == SystemKind::history) return false;
  for (const auto& w : weights) {
    if (w == 1) return true;
  }
  return false;
}

GridMeasure ChainSystem::base_measure() const {
  if (kind == SystemKind::history) return history_measure;
  return GridMeasure::self_similar(p, weights);
}

std::string ChainSystem::describe() const {
  if (kind == SystemKind::cantor) return "cantor";
  if (kind == SystemKind::history) return "history(p=" + std::to_string(p) + ")";
  std::string s = "bernoulli(p=" + std::to_string(p) + ",";
  for (std::size_t j = 0; j < weights.size(); ++j) s += (j ? " " : "") + format_rational(weights[j]);
  return s + ")";
}

ChainState::ChainState(std::shared_ptr<const ChainSystem> system, GridMeasure oldest, std::vector<int> digits)
    : system_(std::move(system)), digits_(std::move(digits)) {
  measures_.reserve(digits_.size() + 1);
  measures_.push_back(std::move(oldest));
  for (int d : digits_) {
    if (d < 0 || d >= system_->p) throw Error(ErrorCode::invalid_word, "digit " + std::to_string(d));
    measures_.push_back(zoom(measures_.back(), d));
  }
}

ChainState ChainState::from_digits(std::shared_ptr<const ChainSystem> system, std::vector<int> digits) {
  if (!system->self_similar()) throw Error(ErrorCode::invalid_argument, "from_digits needs a self-similar system");
  GridMeasure base = system->base_measure();
  return ChainState(std::move(system), std::move(base), std::move(digits));
}

ChainState ChainState::from_history(std::shared_ptr<const ChainSystem> system) {
  GridMeasure oldest = system->base_measure();
  std::vector<int> digits = system->history_digits;
  return ChainState(std::move(system), std::move(oldest), std::move(digits));
}

const GridMeasure& ChainState::measure(int n) const {
  if (n > 0 || -n >= depth()) {
    throw Error(ErrorCode::depth_exhausted, "mu_" + std::to_string(n) + " not stored (depth " +
                                                std::to_string(depth()) + ")");
  }
  return measures_[static_cast<std::size_t>(depth() - 1 + n)];
}

int ChainState::digit(int n) const {
  const int count = static_cast<int>(digits_.size());
  if (n > 0 || -n >= count) {
    throw Error(ErrorCode::depth_exhausted, "i_" + std::to_string(n) + " not stored");
  }
  return digits_[static_cast<std::size_t>(count - 1 + n)];
}

ChainState ChainState::advanced(int d) const {
  if (d < 0 || d >= base()) throw Error(ErrorCode::invalid_word, "digit " + std::to_string(d));
  ChainState s = *this;
  s.measures_.push_back(zoom(measures_.back(), d));
  s.digits_.push_back(d);
  return s;
}

ChainState ChainState::shifted_back(int j) const {
  if (j < 0 || j >= depth()) throw Error(ErrorCode::depth_exhausted, "cannot shift back by " + std::to_string(j));
  ChainState s;
  s.system_ = system_;
  s.measures_.assign(measures_.begin(), measures_.end() - j);
  s.digits_.assign(digits_.begin(), digits_.end() - j);
  return s;
}

ChainState ChainState::with_suffix(int from, std::span<const int> new_digits) const {
  // new_digits are j_from..j_0; mu_{from-1} is kept.
  if (from > 0 || static_cast<int>(new_digits.size()) != 1 - from) {
    throw Error(ErrorCode::invalid_argument, "suffix length does not match its start index");
  }
  if (1 - from >= depth()) {
    throw Error(ErrorCode::depth_exhausted, "suffix from " + std::to_string(from) + " reaches past the stored depth");
  }
  ChainState s = *this;
  const std::size_t keep = static_cast<std::size_t>(depth() - 1 + from);  // measures strictly older than `from`
  s.measures_.resize(keep);
  const std::size_t dkeep = digits_.size() - new_digits.size();
  s.digits_.resize(dkeep);
  for (int d : new_digits) {
    if (d < 0 || d >= base()) throw Error(ErrorCode::invalid_word, "digit " + std::to_string(d));
    s.measures_.push_back(zoom(s.measures_.back(), d));
    s.digits_.push_back(d);
  }
  return s;
}

bool ChainState::legal() const {
  for (std::size_t k = 0; k + 1 < measures_.size(); ++k) {
    if (!(zoom(measures_[k], digits_[k]) == measures_[k + 1])) return false;
  }
  return true;
}

ChainState sample_forward(const ChainState& s, Rng& rng) {
  const GridMeasure& mu = s.measure(0);
  if (mu.is_zero()) throw Error(ErrorCode::cannot_advance, "mu_0 is the zero measure");
  const int p = s.base();
  std::vector<Rational> probs;
  probs.reserve(static_cast<std::size_t>(p));
  for (int j = 0; j < p; ++j) probs.push_back(mass(mu, PAdicInterval{p, 1, j}));
  return s.advanced(rng.categorical(probs));
}

ChainState extend_past(const ChainState& s, int extra, Rng& rng) {
  if (extra < 0) throw Error(ErrorCode::invalid_argument, "negative extension");
  if (extra == 0) return s;
  const ChainSystem& sys = s.system();
  if (!sys.self_similar()) throw Error(ErrorCode::depth_exhausted, "a loaded history cannot be extended");
  std::vector<int> digits;
  digits.reserve(static_cast<std::size_t>(extra) + s.digits().size());
  for (int k = 0; k < extra; ++k) digits.push_back(rng.categorical(sys.weights));
  digits.insert(digits.end(), s.digits().begin(), s.digits().end());
  return ChainState(s.system_ptr(), sys.base_measure(), std::move(digits));
}

Rational word_probability(const ChainState& s, std::span<const int> word) {
  return mass(s.measure(0), interval_of_word(s.base(), word));
}

ChainState sample_state(std::shared_ptr<const ChainSystem> system, int depth, Rng& rng) {
  if (depth < 1) throw Error(ErrorCode::invalid_argument, "depth must be at least 1");
  if (!system->self_similar()) return ChainState::from_history(std::move(system));
  std::vector<int> digits;
  digits.reserve(static_cast<std::size_t>(depth - 1));
  for (int k = 0; k + 1 < depth; ++k) digits.push_back(rng.categorical(system->weights));
  return ChainState::from_digits(std::move(system), std::move(digits));
}

double determinism_estimate(std::shared_ptr<const ChainSystem> system, int samples, Rng& rng) {
  if (samples < 1) throw Error(ErrorCode::invalid_argument, "samples must be positive");
  int below = 0;
  for (int k = 0; k < samples; ++k) {
    const ChainState s = sample_state(system, 2, rng);
    if (mass(s.measure(-1), PAdicInterval{s.base(), 1, s.digit(0)}) < 1) ++below;
  }
  return static_cast<double>(below) / samples;
}

}  // namespace ecps
