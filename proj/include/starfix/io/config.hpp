#pragma once

// JSON run configuration. The schema is documented in README.md; every key
// not listed there is rejected with its full path.

#include <cstdint>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "starfix/errors.hpp"
#include "starfix/fixpoint.hpp"
#include "starfix/gifs.hpp"
#include "starfix/group.hpp"
#include "starfix/space.hpp"

namespace starfix::io {

using json = nlohmann::json;

struct RunConfig {
  GifsSystem system;
  SolverConfig solver;
  std::uint64_t seed = 7;
  bool strip_1d = true;
  json echo;  // the parsed document, for the report
};

// Failure to read the file at all (exit code 4), as opposed to ConfigError.
struct IoError : Error {
  using Error::Error;
};

namespace detail {

class SchemaErrors {
 public:
  void add(const std::string& path, const std::string& what) {
    errors_.push_back(path + ": " + what);
  }
  bool empty() const { return errors_.empty(); }
  [[noreturn]] void raise() const {
    std::string msg = "configuration errors:";
    for (const auto& e : errors_) msg += "\n  " + e;
    throw ConfigError(msg);
  }

 private:
  std::vector<std::string> errors_;
};

inline bool object_with_keys(const json& j, const std::string& path,
                             const std::set<std::string>& allowed, SchemaErrors& err) {
  if (!j.is_object()) {
    err.add(path, "expected an object");
    return false;
  }
  for (const auto& [k, v] : j.items()) {
    if (!allowed.contains(k)) err.add(path.empty() ? k : path + "." + k, "unknown key");
  }
  return true;
}

inline std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

inline std::optional<double> number(const json& j, const std::string& path, SchemaErrors& err) {
  if (!j.is_number()) {
    err.add(path, "expected a number");
    return std::nullopt;
  }
  return j.get<double>();
}

inline std::optional<std::size_t> count(const json& j, const std::string& path,
                                        SchemaErrors& err) {
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    err.add(path, "expected a nonnegative integer");
    return std::nullopt;
  }
  return j.get<std::size_t>();
}

inline std::optional<std::vector<double>> numbers(const json& j, const std::string& path,
                                                  SchemaErrors& err) {
  if (!j.is_array()) {
    err.add(path, "expected an array of numbers");
    return std::nullopt;
  }
  std::vector<double> out;
  bool ok = true;
  for (std::size_t i = 0; i < j.size(); ++i) {
    auto v = number(j[i], path + "[" + std::to_string(i) + "]", err);
    ok = ok && v.has_value();
    out.push_back(v.value_or(0.0));
  }
  if (!ok) return std::nullopt;
  return out;
}

inline std::optional<Space> parse_space(const json& j, SchemaErrors& err) {
  const std::string path = "space";
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    err.add(path + ".kind", "required: \"grid\" or \"table\"");
    return std::nullopt;
  }
  const std::string kind = j["kind"];
  if (kind == "grid") {
    object_with_keys(j, path, {"kind", "box", "resolution", "metric"}, err);
    std::vector<Interval> box;
    std::vector<std::size_t> res;
    bool ok = true;
    if (!j.contains("box") || !j["box"].is_array() || j["box"].empty()) {
      err.add(path + ".box", "required: list of [lo, hi] intervals");
      ok = false;
    } else {
      for (std::size_t a = 0; a < j["box"].size(); ++a) {
        const std::string p = path + ".box[" + std::to_string(a) + "]";
        auto iv = numbers(j["box"][a], p, err);
        if (!iv || iv->size() != 2) {
          err.add(p, "expected [lo, hi]");
          ok = false;
        } else {
          box.push_back({(*iv)[0], (*iv)[1]});
        }
      }
    }
    if (!j.contains("resolution") || !j["resolution"].is_array()) {
      err.add(path + ".resolution", "required: node count per axis");
      ok = false;
    } else {
      for (std::size_t a = 0; a < j["resolution"].size(); ++a) {
        auto c = count(j["resolution"][a], path + ".resolution[" + std::to_string(a) + "]", err);
        ok = ok && c.has_value();
        res.push_back(c.value_or(0));
      }
    }
    GridMetric metric = GridMetric::chebyshev;
    if (j.contains("metric")) {
      const auto& m = j["metric"];
      if (m == "chebyshev") {
        metric = GridMetric::chebyshev;
      } else if (m == "euclidean") {
        metric = GridMetric::euclidean;
      } else {
        err.add(path + ".metric", "expected \"chebyshev\" or \"euclidean\"");
        ok = false;
      }
    }
    if (!ok) return std::nullopt;
    try {
      return Space(GridSpace(std::move(box), std::move(res), metric));
    } catch (const DomainError& e) {
      err.add(path, e.what());
      return std::nullopt;
    }
  }
  if (kind == "table") {
    object_with_keys(j, path, {"kind", "distances"}, err);
    if (!j.contains("distances") || !j["distances"].is_array()) {
      err.add(path + ".distances", "required: square distance matrix");
      return std::nullopt;
    }
    std::vector<std::vector<double>> d;
    bool ok = true;
    for (std::size_t i = 0; i < j["distances"].size(); ++i) {
      auto row = numbers(j["distances"][i], path + ".distances[" + std::to_string(i) + "]", err);
      ok = ok && row.has_value();
      d.push_back(row.value_or(std::vector<double>{}));
    }
    if (!ok) return std::nullopt;
    try {
      return Space(TableSpace(std::move(d)));
    } catch (const DomainError& e) {
      err.add(path + ".distances", e.what());
      return std::nullopt;
    }
  }
  err.add(path + ".kind", "expected \"grid\" or \"table\"");
  return std::nullopt;
}

inline std::optional<PermGroup> parse_group(const json& j, std::size_t m, SchemaErrors& err) {
  if (j.is_null()) return PermGroup::trivial(m);
  if (!object_with_keys(j, "group", {"generators"}, err)) return std::nullopt;
  if (!j.contains("generators")) return PermGroup::trivial(m);
  const auto& gens = j["generators"];
  if (!gens.is_array()) {
    err.add("group.generators", "expected a list of 1-based permutations");
    return std::nullopt;
  }
  std::vector<Permutation> perms;
  bool ok = true;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const std::string p = "group.generators[" + std::to_string(i) + "]";
    if (!gens[i].is_array() || gens[i].size() != m) {
      err.add(p, "permutation must have arity m = " + std::to_string(m));
      ok = false;
      continue;
    }
    Permutation perm;
    for (const auto& v : gens[i]) {
      if (!v.is_number_integer() || v.get<long long>() < 1 || v.get<long long>() > (long long)m) {
        err.add(p, "entries must be integers in 1.." + std::to_string(m));
        ok = false;
        break;
      }
      perm.push_back(static_cast<std::uint8_t>(v.get<int>() - 1));
    }
    perms.push_back(std::move(perm));
  }
  if (!ok) return std::nullopt;
  try {
    return PermGroup::generated(m, perms);
  } catch (const DomainError& e) {
    err.add("group.generators", e.what());
    return std::nullopt;
  }
}

inline std::optional<GifsMap> parse_map(const json& j, const std::string& path, std::size_t m,
                                        SchemaErrors& err) {
  if (!j.is_object()) {
    err.add(path, "expected an object with A/b or table");
    return std::nullopt;
  }
  if (j.contains("table")) {
    object_with_keys(j, path, {"table"}, err);
    if (!j["table"].is_array()) {
      err.add(path + ".table", "expected a list of point indices");
      return std::nullopt;
    }
    TableMap t;
    for (std::size_t k = 0; k < j["table"].size(); ++k) {
      auto c = count(j["table"][k], path + ".table[" + std::to_string(k) + "]", err);
      if (!c) return std::nullopt;
      t.image.push_back(*c);
    }
    return t;
  }
  object_with_keys(j, path, {"A", "b"}, err);
  if (!j.contains("A") || !j["A"].is_array() || j["A"].size() != m) {
    err.add(path + ".A", "required: m = " + std::to_string(m) + " row-major d*d blocks");
    return std::nullopt;
  }
  AffineMap f;
  for (std::size_t b = 0; b < m; ++b) {
    auto blk = numbers(j["A"][b], path + ".A[" + std::to_string(b) + "]", err);
    if (!blk) return std::nullopt;
    f.blocks.push_back(std::move(*blk));
  }
  if (!j.contains("b")) {
    err.add(path + ".b", "required: offset vector");
    return std::nullopt;
  }
  auto off = numbers(j["b"], path + ".b", err);
  if (!off) return std::nullopt;
  f.offset = std::move(*off);
  return f;
}

inline void parse_solver(const json& j, SolverConfig& s, SchemaErrors& err) {
  if (j.is_null()) return;
  if (!object_with_keys(j, "solver",
                        {"seed_strategy", "epsilon", "max_iter", "mode", "levels",
                         "support_floor", "contraction_samples"},
                        err)) {
    return;
  }
  if (j.contains("seed_strategy")) {
    try {
      s.seed = seed_strategy_from_name(j["seed_strategy"].is_string()
                                           ? j["seed_strategy"].get<std::string>()
                                           : std::string());
    } catch (const DomainError& e) {
      err.add("solver.seed_strategy", e.what());
    }
  }
  if (j.contains("epsilon")) {
    if (auto e = number(j["epsilon"], "solver.epsilon", err)) {
      if (*e > 0.0) {
        s.epsilon = *e;
      } else {
        err.add("solver.epsilon", "must be positive");
      }
    }
  }
  if (j.contains("max_iter")) {
    if (auto c = count(j["max_iter"], "solver.max_iter", err)) {
      if (*c >= 1) {
        s.max_iter = *c;
      } else {
        err.add("solver.max_iter", "must be >= 1");
      }
    }
  }
  if (j.contains("mode")) {
    if (j["mode"] == "hypograph") {
      s.mode = DistanceMode::hypograph;
    } else if (j["mode"] == "sup") {
      s.mode = DistanceMode::sup;
    } else {
      err.add("solver.mode", "expected \"hypograph\" or \"sup\"");
    }
  }
  if (j.contains("levels")) {
    if (auto c = count(j["levels"], "solver.levels", err)) {
      if (*c >= 1 && *c <= 65536) {
        s.levels = static_cast<int>(*c);
      } else {
        err.add("solver.levels", "must lie in [1, 65536]");
      }
    }
  }
  if (j.contains("support_floor")) {
    if (auto v = number(j["support_floor"], "solver.support_floor", err)) {
      if (*v >= 0.0 && *v < 1.0) {
        s.support_floor = *v;
      } else {
        err.add("solver.support_floor", "must lie in [0, 1)");
      }
    }
  }
  if (j.contains("contraction_samples")) {
    if (auto c = count(j["contraction_samples"], "solver.contraction_samples", err)) {
      if (*c >= 2) {
        s.contraction_samples = *c;
      } else {
        err.add("solver.contraction_samples", "must be >= 2");
      }
    }
  }
}

// Maps a validation message from gifs::validate onto a config key path.
inline std::string validation_path(const std::string& msg) {
  if (msg.rfind("map ", 0) == 0) {
    const auto colon = msg.find(':');
    return "gifs.maps[" + msg.substr(4, colon - 4) + "]";
  }
  if (msg.find("weight") != std::string::npos) return "gifs.weights";
  if (msg.find("group") != std::string::npos) return "group.generators";
  return "gifs";
}

}  // namespace detail

/// Parses and validates a configuration document. Throws ConfigError listing
/// every problem found, each prefixed by its key path.
inline RunConfig parse_config(const json& doc) {
  detail::SchemaErrors err;
  RunConfig rc;
  rc.echo = doc;
  if (!detail::object_with_keys(doc, "", {"space", "group", "gifs", "solver", "output", "seed"},
                                err)) {
    err.raise();
  }
  if (doc.contains("seed")) {
    if (auto c = detail::count(doc["seed"], "seed", err)) rc.seed = *c;
  }
  rc.solver.rng_seed = rc.seed;

  std::optional<Space> space;
  if (!doc.contains("space")) {
    err.add("space", "required");
  } else {
    space = detail::parse_space(doc["space"], err);
  }

  std::size_t m = 1;
  const json gifs = doc.value("gifs", json());
  if (gifs.is_null()) {
    err.add("gifs", "required");
    err.raise();
  }
  if (!detail::object_with_keys(gifs, "gifs", {"m", "maps", "weights", "tnorm"}, err)) err.raise();
  if (!gifs.contains("m")) {
    err.add("gifs.m", "required");
  } else if (auto c = detail::count(gifs["m"], "gifs.m", err)) {
    if (*c >= 1 && *c <= kMaxArity) {
      m = *c;
    } else {
      err.add("gifs.m", "must lie in [1, " + std::to_string(kMaxArity) + "]");
    }
  }
  rc.system.arity = m;

  if (!gifs.contains("tnorm") || !gifs["tnorm"].is_string()) {
    err.add("gifs.tnorm", "required: \"product\", \"min\" or \"lukasiewicz\"");
  } else {
    try {
      rc.system.tnorm = TNorm::from_name(gifs["tnorm"].get<std::string>());
    } catch (const DomainError& e) {
      err.add("gifs.tnorm", e.what());
    }
  }

  if (!gifs.contains("weights")) {
    err.add("gifs.weights", "required");
  } else if (auto w = detail::numbers(gifs["weights"], "gifs.weights", err)) {
    rc.system.weights = *w;
  }

  if (!gifs.contains("maps") || !gifs["maps"].is_array() || gifs["maps"].empty()) {
    err.add("gifs.maps", "required: nonempty list of maps");
  } else {
    for (std::size_t i = 0; i < gifs["maps"].size(); ++i) {
      if (auto f = detail::parse_map(gifs["maps"][i], "gifs.maps[" + std::to_string(i) + "]", m,
                                     err)) {
        rc.system.maps.push_back(std::move(*f));
      }
    }
  }

  if (auto g = detail::parse_group(doc.value("group", json()), m, err)) rc.system.group = *g;
  detail::parse_solver(doc.value("solver", json()), rc.solver, err);

  if (doc.contains("output")) {
    const auto& o = doc["output"];
    if (detail::object_with_keys(o, "output", {"strip_1d"}, err) && o.contains("strip_1d")) {
      if (o["strip_1d"].is_boolean()) {
        rc.strip_1d = o["strip_1d"];
      } else {
        err.add("output.strip_1d", "expected a boolean");
      }
    }
  }

  if (!err.empty()) err.raise();
  rc.system.space = std::make_shared<const Space>(std::move(*space));
  for (const auto& v : validate(rc.system).violations) {
    err.add(detail::validation_path(v), v);
  }
  if (!err.empty()) err.raise();
  return rc;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": parse error: " + e.what());
  }
  return parse_config(doc);
}

}  // namespace starfix::io
