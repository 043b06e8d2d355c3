#include "config.hpp"

#include <algorithm>
#include <limits>
#include <initializer_list>
#include <json.hpp>

#include "ecps/ergodic.hpp"
#include "ecps/error.hpp"

namespace ecps::cli {

using json = nlohmann::ordered_json;

namespace {

[[noreturn]] void bad(const std::string& key, const std::string& why) {
  throw Error(ErrorCode::config, "\"" + key + "\": " + why);
}

template <class T>
void read_positive(const json& doc, const char* key, T& out) {
  if (!doc.contains(key)) return;
  const auto& v = doc[key];
  if (!v.is_number_integer()) bad(key, "must be an integer");
  if (v.is_number_unsigned()) {
    const auto u = v.get<std::uint64_t>();
    if (u == 0) bad(key, "must be positive");
    if constexpr (sizeof(T) < sizeof(std::uint64_t)) {
      if (u > static_cast<std::uint64_t>(std::numeric_limits<T>::max())) bad(key, "out of range");
    }
    out = static_cast<T>(u);
    return;
  }
  if (v.get<std::int64_t>() <= 0) bad(key, "must be positive");
  out = static_cast<T>(v.get<std::int64_t>());
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::config, std::string("malformed config: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::config, "config must be a JSON object");
  if (doc.contains("type") && !doc.contains("system")) doc = json{{"system", doc}};

  static const std::initializer_list<const char*> known = {
      "system",     "seed",         "depth",  "resolution", "extend_by", "max_retries",     "trajectories",
      "checkpoints", "functional",  "output", "samples",    "max_k",     "proxy_halfwidth", "quad_level",
      "group_depth", "t_end"};
  for (const auto& item : doc.items()) {
    if (std::none_of(known.begin(), known.end(), [&](const char* k) { return item.key() == k; })) {
      bad(item.key(), "unknown key");
    }
  }

  ExperimentConfig c;
  if (!doc.contains("system")) bad("system", "missing");
  if (!doc["system"].is_object()) bad("system", "must be an object");
  c.system_json = doc["system"].dump();
  c.system = std::make_shared<const ChainSystem>(ChainSystem::parse(c.system_json));

  read_positive(doc, "seed", c.seed);
  read_positive(doc, "depth", c.depth);
  read_positive(doc, "resolution", c.resolution);
  read_positive(doc, "extend_by", c.extend_by);
  read_positive(doc, "max_retries", c.max_retries);
  read_positive(doc, "trajectories", c.trajectories);
  read_positive(doc, "samples", c.samples);
  read_positive(doc, "max_k", c.max_k);
  read_positive(doc, "proxy_halfwidth", c.proxy_halfwidth);
  read_positive(doc, "quad_level", c.quad_level);
  read_positive(doc, "group_depth", c.group_depth);
  read_positive(doc, "t_end", c.t_end);

  if (doc.contains("checkpoints")) {
    const auto& cp = doc["checkpoints"];
    if (!cp.is_array() || cp.empty()) bad("checkpoints", "must be a nonempty array");
    c.checkpoints.clear();
    for (const auto& v : cp) {
      if (!v.is_number_integer() || v.get<std::int64_t>() <= 0) bad("checkpoints", "entries must be positive integers");
      c.checkpoints.push_back(v.get<std::int64_t>());
    }
    std::sort(c.checkpoints.begin(), c.checkpoints.end());
    c.checkpoints.erase(std::unique(c.checkpoints.begin(), c.checkpoints.end()), c.checkpoints.end());
  }
  if (doc.contains("functional")) {
    if (!doc["functional"].is_string()) bad("functional", "must be a string");
    c.functional = doc["functional"].get<std::string>();
    try {
      make_functional(c.functional);
    } catch (const Error& e) {
      bad("functional", e.what());
    }
  }
  if (doc.contains("output")) {
    if (!doc["output"].is_string() || doc["output"].get<std::string>().empty()) bad("output", "must be a path");
    c.output = doc["output"].get<std::string>();
  }
  return c;
}

std::string ExperimentConfig::canonical() const {
  json j;
  j["system"] = json::parse(system_json);
  j["seed"] = seed;
  j["depth"] = depth;
  j["resolution"] = resolution;
  j["extend_by"] = extend_by;
  j["max_retries"] = max_retries;
  j["trajectories"] = trajectories;
  j["checkpoints"] = checkpoints;
  j["functional"] = functional;
  j["samples"] = samples;
  j["max_k"] = max_k;
  j["proxy_halfwidth"] = proxy_halfwidth;
  j["quad_level"] = quad_level;
  j["group_depth"] = group_depth;
  j["t_end"] = t_end;
  return j.dump();
}

std::uint64_t ExperimentConfig::hash() const {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : canonical()) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace ecps::cli
