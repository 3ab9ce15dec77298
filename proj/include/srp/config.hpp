#pragma once

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "srp/dispersion.hpp"
#include "srp/error.hpp"
#include "srp/scans.hpp"
#include "srp/spatial.hpp"
#include "srp/weights.hpp"

namespace srp {

using Json = nlohmann::json;

/// Structured configuration shared by every subcommand. Example:
///   {"weights": {"family": "power", "c": 1, "p": 2},
///    "dispersion": {"kind": "gaussian", "d": 3, "beta": 1},
///    "lattice": {"L": 4, "eps_cut": 30, "delta_trunc": 1e-8}}
namespace config {

inline Json load_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot read config " + path);
  try {
    return Json::parse(f);
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("config is not valid JSON: ") + e.what());
  }
}

/// Applies "a.b.c=value"; the value is parsed as JSON when possible, else kept
/// as a string.
inline void apply_override(Json& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  require(eq != std::string::npos && eq > 0, "override must look like key=value: " + assignment);
  const std::string key = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  Json value;
  try {
    value = Json::parse(raw);
  } catch (const Json::exception&) {
    value = raw;
  }
  Json* node = &cfg;
  std::size_t start = 0;
  for (;;) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    require(!part.empty(), "override key has an empty component: " + key);
    if (!node->is_object()) *node = Json::object();
    node = &(*node)[part];
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  *node = value;
}

template <class T>
T get(const Json& j, const std::string& key, const T& fallback) {
  if (!j.is_object() || !j.contains(key) || j.at(key).is_null()) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception&) {
    throw ValidationError("config key '" + key + "' has the wrong type");
  }
}

template <class T>
T need(const Json& j, const std::string& key) {
  if (!j.is_object() || !j.contains(key)) throw ValidationError("config key '" + key + "' is required");
  return get<T>(j, key, T{});
}

inline const Json& section(const Json& cfg, const std::string& key) {
  static const Json empty = Json::object();
  if (!cfg.contains(key)) return empty;
  require(cfg.at(key).is_object(), "config section '" + key + "' must be an object");
  return cfg.at(key);
}

/// families: zero | power {c, p} | first_only {alpha1} | custom {values, tail}
/// each optionally with "shift".
inline WeightSequence weights(const Json& cfg) {
  const Json& w = section(cfg, "weights");
  const std::string family = get<std::string>(w, "family", "zero");
  const double shift = get<double>(w, "shift", 0.0);
  WeightSequence base;
  if (family == "zero") {
    base = WeightSequence::zero();
  } else if (family == "power") {
    base = WeightSequence::power(need<double>(w, "c"), need<double>(w, "p"));
  } else if (family == "first_only") {
    base = WeightSequence::first_only(need<double>(w, "alpha1"));
  } else if (family == "custom") {
    Tail tail;
    if (w.contains("tail")) {
      const Json& t = w.at("tail");
      tail.kind = tail_kind_from_string(get<std::string>(t, "kind", "zero"));
      tail.c = get<double>(t, "c", 0.0);
      tail.p = get<double>(t, "p", 0.0);
    }
    base = WeightSequence(get<std::vector<double>>(w, "values", {}), tail);
  } else {
    throw ValidationError("unknown weight family '" + family + "'");
  }
  return shift == 0.0 ? base : base.shifted(shift);
}

/// kinds: gaussian {d, beta} | tabulated {d, k, eps, a, radius}
inline Dispersion dispersion(const Json& cfg) {
  const Json& d = section(cfg, "dispersion");
  const std::string kind = get<std::string>(d, "kind", "gaussian");
  const int dim = get<int>(d, "d", 3);
  if (kind == "gaussian") return Dispersion::gaussian(dim, get<double>(d, "beta", 1.0));
  if (kind == "tabulated")
    return Dispersion::tabulated(dim, need<std::vector<double>>(d, "k"), need<std::vector<double>>(d, "eps"),
                                 need<double>(d, "a"), need<double>(d, "radius"));
  throw ValidationError("unknown dispersion kind '" + kind + "'");
}

inline LatticeConfig lattice(const Json& cfg) {
  const Json& l = section(cfg, "lattice");
  LatticeConfig lc;
  lc.eps_cut = get<double>(l, "eps_cut", lc.eps_cut);
  lc.delta_trunc = get<double>(l, "delta_trunc", lc.delta_trunc);
  return lc;
}

inline MCParams mc(const Json& cfg, std::uint64_t seed) {
  const Json& m = section(cfg, "mc");
  MCParams p;
  p.burn_in = get<std::size_t>(m, "burn_in", p.burn_in);
  p.samples = get<std::size_t>(m, "samples", p.samples);
  p.thinning = get<std::size_t>(m, "thinning", p.thinning);
  p.sigma_x = get<double>(m, "sigma_x", p.sigma_x);
  p.p_displacement = get<double>(m, "p_displacement", p.p_displacement);
  p.tune = get<bool>(m, "tune", p.tune);
  p.seed = seed;
  if (m.contains("ranges"))
    for (const auto& r : m.at("ranges")) {
      require(r.is_array() && r.size() == 2, "mc.ranges entries must be [a, b]");
      p.ranges.emplace_back(r[0].get<std::size_t>(), r[1].get<std::size_t>());
    }
  p.validate();
  return p;
}

/// Grid given either as a list or as {"from", "to", "count"}.
inline std::vector<double> grid(const Json& cfg, const std::string& key, std::vector<double> fallback) {
  if (!cfg.contains(key)) return fallback;
  const Json& g = cfg.at(key);
  if (g.is_array()) return g.get<std::vector<double>>();
  require(g.is_object(), "grid '" + key + "' must be a list or {from, to, count}");
  const double a = need<double>(g, "from");
  const double b = need<double>(g, "to");
  const auto n = need<std::size_t>(g, "count");
  require(n >= 1, "grid '" + key + "' needs count >= 1");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  return out;
}

}  // namespace config
}  // namespace srp
