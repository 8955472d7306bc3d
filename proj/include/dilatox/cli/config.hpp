/*
 *   Copyright 2026 The dilatox Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/**
 * @file
 *
 * Run configuration: JSON document plus command-line overrides, and the
 * model factory behind the "model" descriptor.
 */

#pragma once

#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "dilatox/core.hpp"
#include "dilatox/extrapolation.hpp"
#include "dilatox/models.hpp"

namespace dilatox::cli {

using json = nlohmann::ordered_json;

enum class Task { check_axioms, tangent, menelaos, normalize };

inline std::string to_string(Task t) {
  switch (t) {
    case Task::check_axioms: return "check-axioms";
    case Task::tangent: return "tangent";
    case Task::menelaos: return "menelaos";
    case Task::normalize: return "normalize";
  }
  return "?";
}

inline Task parse_task(std::string_view s) {
  if (s == "check-axioms") return Task::check_axioms;
  if (s == "tangent") return Task::tangent;
  if (s == "menelaos") return Task::menelaos;
  if (s == "normalize") return Task::normalize;
  throw Error(ErrorCode::ConfigParseError, "unknown task '" + std::string(s) + "'");
}

/// Kind plus free-form parameters; the factory validates them.
struct ModelSpec {
  std::string kind = "euclidean";
  json params = json::object();
};

struct Inputs {
  std::optional<Point> x, y, u, v;
  std::optional<double> eps, mu;
  std::optional<std::string> word;
};

struct RunConfig {
  ModelSpec model;
  std::optional<Task> task;
  std::optional<std::uint64_t> seed;  ///< resolved by the driver; 0 when nothing sets it
  ToleranceSchedule schedule;
  std::size_t samples = 1000;
  int grid = 3;
  std::optional<double> tol;
  Inputs inputs;
};

using Model = std::variant<ConicalStructure<EuclideanGroup>, ConicalStructure<HeisenbergGroup>,
                           ConicalStructure<Step2CarnotGroup>, SphereStructure>;

namespace detail {

[[noreturn]] inline void bad(const std::string& what) { throw Error(ErrorCode::ConfigParseError, what); }

inline double number(const json& j, const std::string& key) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return EuclideanGroup::kInfinity;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (!s.empty() && *end == '\0') return v;
  }
  bad("'" + key + "' must be a number");
}

inline std::uint64_t integer(const json& j, const std::string& key) {
  const double v = number(j, key);
  if (!(v >= 0.0) || v != static_cast<double>(static_cast<std::uint64_t>(v))) bad("'" + key + "' must be a nonnegative integer");
  return static_cast<std::uint64_t>(v);
}

inline Point point(const json& j, const std::string& key) {
  if (!j.is_array()) bad("'" + key + "' must be an array of numbers");
  std::vector<double> c;
  for (const auto& e : j) c.push_back(number(e, key));
  return Point(std::move(c));
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback) {
  if (!obj.contains(key)) return fallback;
  if constexpr (std::is_same_v<T, double>) return number(obj.at(key), key);
  else return static_cast<T>(integer(obj.at(key), key));
}

inline ModelDomain domain_of(const json& p, ModelDomain fallback) {
  if (!p.contains("domain")) return fallback;
  const auto& d = p.at("domain");
  return ModelDomain::with_radius(get_or(d, "A", fallback.A), get_or(d, "B", fallback.B));
}

inline json number_json(double v) {
  if (std::isinf(v)) return "inf";
  return v;
}

}  // namespace detail

inline Model make_model(const ModelSpec& m) {
  const json& p = m.params;
  const ModelDomain group_domain = detail::domain_of(p, ModelDomain::with_radius(2.0, 1.5));
  if (m.kind == "euclidean") {
    const double pe = p.contains("p") ? detail::number(p.at("p"), "p") : 2.0;
    return make_dilatation_structure(EuclideanGroup(detail::get_or<std::size_t>(p, "dim", 2), pe), group_domain);
  }
  if (m.kind == "heisenberg") return make_dilatation_structure(HeisenbergGroup(), group_domain);
  if (m.kind == "step2") {
    const auto d1 = detail::get_or<std::size_t>(p, "dim1", 3);
    const auto d2 = detail::get_or<std::size_t>(p, "dim2", 2);
    const double c = detail::get_or(p, "gauge_c", 1.0);
    if (p.contains("bracket")) {
      BracketTensor b;
      try {
        b = p.at("bracket").get<BracketTensor>();
      } catch (const json::exception&) {
        detail::bad("'bracket' must be a dim2 x dim1 x dim1 array");
      }
      return make_dilatation_structure(Step2CarnotGroup(d1, d2, std::move(b), c), group_domain);
    }
    const auto seed = detail::get_or<std::uint64_t>(p, "bracket_seed", 7);
    return make_dilatation_structure(Step2CarnotGroup::random(d1, d2, seed, c), group_domain);
  }
  if (m.kind == "sphere") {
    const double r = detail::get_or(p, "radius", 1.0);
    const Point base = p.contains("base") ? detail::point(p.at("base"), "base") : Point{0.0, 0.0, 1.0};
    return SphereStructure(r, base, detail::domain_of(p, ModelDomain::with_radius(1.2, 1.1)));
  }
  detail::bad("unknown model kind '" + m.kind + "'");
}

/// "kind:key=val,key=val"; values are numbers or "inf".
inline ModelSpec parse_model_flag(std::string_view text) {
  ModelSpec m;
  const auto colon = text.find(':');
  m.kind = std::string(text.substr(0, colon));
  if (colon == std::string_view::npos) return m;
  std::string_view rest = text.substr(colon + 1);
  while (!rest.empty()) {
    const auto comma = std::min(rest.find(','), rest.size());
    const std::string_view kv = rest.substr(0, comma);
    const auto eq = kv.find('=');
    if (eq == std::string_view::npos || eq == 0) detail::bad("model parameter '" + std::string(kv) + "' needs key=value");
    const std::string key(kv.substr(0, eq)), val(kv.substr(eq + 1));
    m.params[key] = detail::number_json(detail::number(json(val), key));
    rest = comma < rest.size() ? rest.substr(comma + 1) : std::string_view{};
  }
  return m;
}

/// "eps0:ratio:steps"
inline ToleranceSchedule parse_schedule_flag(std::string_view text) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (true) {
    const auto c = text.find(':', pos);
    parts.emplace_back(text.substr(pos, c == std::string_view::npos ? std::string_view::npos : c - pos));
    if (c == std::string_view::npos) break;
    pos = c + 1;
  }
  if (parts.size() != 3) detail::bad("schedule must be eps0:ratio:steps");
  ToleranceSchedule s{detail::number(json(parts[0]), "eps0"), detail::number(json(parts[1]), "ratio"),
                      static_cast<int>(detail::integer(json(parts[2]), "steps"))};
  s.validate();
  return s;
}

inline RunConfig parse_config(const json& j) {
  if (!j.is_object()) detail::bad("config must be a JSON object");
  static const char* known[] = {"model", "task", "seed", "schedule", "samples", "grid", "tol", "inputs"};
  for (const auto& [k, _] : j.items())
    if (std::find(std::begin(known), std::end(known), k) == std::end(known)) detail::bad("unknown config key '" + k + "'");

  RunConfig c;
  if (j.contains("model")) {
    const auto& m = j.at("model");
    if (m.is_string()) {
      c.model = parse_model_flag(m.get<std::string>());
    } else if (m.is_object() && m.contains("kind") && m.at("kind").is_string()) {
      c.model.kind = m.at("kind").get<std::string>();
      for (const auto& [k, v] : m.items())
        if (k != "kind") c.model.params[k] = v;
    } else {
      detail::bad("'model' must be a string or an object with a 'kind'");
    }
  }
  if (j.contains("task")) {
    if (!j.at("task").is_string()) detail::bad("'task' must be a string");
    c.task = parse_task(j.at("task").get<std::string>());
  }
  if (j.contains("seed")) c.seed = detail::integer(j.at("seed"), "seed");
  if (j.contains("schedule")) {
    const auto& s = j.at("schedule");
    if (s.is_string()) {
      c.schedule = parse_schedule_flag(s.get<std::string>());
    } else if (s.is_object()) {
      c.schedule.eps0 = detail::get_or(s, "eps0", c.schedule.eps0);
      c.schedule.ratio = detail::get_or(s, "ratio", c.schedule.ratio);
      c.schedule.steps = detail::get_or<int>(s, "steps", c.schedule.steps);
      c.schedule.validate();
    } else {
      detail::bad("'schedule' must be an object or eps0:ratio:steps");
    }
  }
  c.samples = detail::get_or<std::size_t>(j, "samples", c.samples);
  c.grid = detail::get_or<int>(j, "grid", c.grid);
  if (c.samples == 0) detail::bad("'samples' must be positive");
  if (c.grid < 1) detail::bad("'grid' must be positive");
  if (j.contains("tol")) {
    c.tol = detail::number(j.at("tol"), "tol");
    if (!(*c.tol > 0.0)) detail::bad("'tol' must be positive");
  }
  if (j.contains("inputs")) {
    const auto& in = j.at("inputs");
    if (!in.is_object()) detail::bad("'inputs' must be an object");
    for (const char* k : {"x", "y", "u", "v"}) {
      if (!in.contains(k)) continue;
      Point p = detail::point(in.at(k), k);
      (k[0] == 'x' ? c.inputs.x : k[0] == 'y' ? c.inputs.y : k[0] == 'u' ? c.inputs.u : c.inputs.v) = std::move(p);
    }
    if (in.contains("eps")) c.inputs.eps = detail::number(in.at("eps"), "eps");
    if (in.contains("mu")) c.inputs.mu = detail::number(in.at("mu"), "mu");
    if (in.contains("word")) {
      if (!in.at("word").is_string()) detail::bad("'word' must be a string");
      c.inputs.word = in.at("word").get<std::string>();
    }
  }
  return c;
}

inline RunConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    detail::bad(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(j);
}

/// Resolved configuration as echoed in reports; parse_config accepts it back.
inline json to_json(const RunConfig& c) {
  json j;
  json m;
  m["kind"] = c.model.kind;
  for (const auto& [k, v] : c.model.params.items()) m[k] = v;
  j["model"] = m;
  if (c.task) j["task"] = to_string(*c.task);
  j["seed"] = c.seed.value_or(0);
  j["schedule"] = {{"eps0", c.schedule.eps0}, {"ratio", c.schedule.ratio}, {"steps", c.schedule.steps}};
  j["samples"] = c.samples;
  j["grid"] = c.grid;
  if (c.tol) j["tol"] = *c.tol;
  json in = json::object();
  if (c.inputs.x) in["x"] = c.inputs.x->vec();
  if (c.inputs.y) in["y"] = c.inputs.y->vec();
  if (c.inputs.u) in["u"] = c.inputs.u->vec();
  if (c.inputs.v) in["v"] = c.inputs.v->vec();
  if (c.inputs.eps) in["eps"] = *c.inputs.eps;
  if (c.inputs.mu) in["mu"] = *c.inputs.mu;
  if (c.inputs.word) in["word"] = *c.inputs.word;
  j["inputs"] = in;
  return j;
}

/// DILATOX_SEED, or nullopt when unset or malformed.
inline std::optional<std::uint64_t> seed_from_env() {
  const char* s = std::getenv("DILATOX_SEED");
  if (!s || !*s) return std::nullopt;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s, &end, 10);
  if (*end != '\0') throw Error(ErrorCode::ConfigParseError, "DILATOX_SEED must be a nonnegative integer");
  return static_cast<std::uint64_t>(v);
}

}  // namespace dilatox::cli
