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
 * Report assembly and emission. Field order is fixed, so equal payloads
 * serialize to equal bytes.
 */

#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "dilatox/axioms.hpp"
#include "dilatox/check_report.hpp"
#include "dilatox/extrapolation.hpp"
#include "dilatox/menelaos.hpp"
#include "dilatox/semigroup.hpp"

namespace dilatox::cli {

using json = nlohmann::ordered_json;

inline constexpr const char* kReportSchema = "dilatox.report/1";

struct Report {
  json config = json::object();
  json results = json::object();
  bool pass = false;
  std::optional<double> wall_time_s;
  /// Present for menelaos runs; source of the CSV form.
  std::optional<IterationTrace> trace;
};

enum class Format { json, csv };

inline Format parse_format(std::string_view s) {
  if (s == "json") return Format::json;
  if (s == "csv") return Format::csv;
  throw Error(ErrorCode::UnsupportedFormat, "unknown format '" + std::string(s) + "'");
}

namespace detail {

inline json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline Point point_from(const json& j) { return Point(j.get<std::vector<double>>()); }

}  // namespace detail

inline json to_json(const CheckReport& r) {
  json j;
  j["id"] = r.id;
  j["samples"] = r.samples;
  j["max_residual"] = r.max_residual;
  j["tolerance"] = r.tolerance;
  j["metric_residual"] = r.metric_residual;
  json w = json::object();
  for (const auto& [k, p] : r.witness_points) w[k] = p.vec();
  for (const auto& [k, v] : r.witness_scalars) w[k] = v;
  j["witness"] = w;
  j["pass"] = r.pass;
  return j;
}

inline json to_json(const GridReport& g) {
  json j;
  j["id"] = g.id;
  j["triples"] = g.triples;
  j["converged"] = g.converged;
  j["stationary"] = g.stationary;
  j["max_error_estimate"] = g.max_error_estimate;
  j["order_min"] = detail::finite_or_null(g.order_min);
  j["order_max"] = detail::finite_or_null(g.order_max);
  j["max_sequence_spread"] = g.max_sequence_spread;
  j["first_failure"] = g.first_failure;
  j["pass"] = g.pass;
  return j;
}

template <typename T>
json to_json(const LimitEstimate<T>& e) {
  auto val = [](const T& v) -> json {
    if constexpr (std::is_same_v<T, double>) return v;
    else return v.vec();
  };
  json j;
  j["eps"] = e.eps;
  json vs = json::array();
  for (const auto& v : e.values) vs.push_back(val(v));
  j["values"] = vs;
  j["limit"] = val(e.limit);
  j["order"] = e.order ? json(*e.order) : json(nullptr);
  j["used_samples"] = e.used_samples;
  j["stationary"] = e.stationary;
  j["error_estimate"] = e.error_estimate;
  j["fit_residual"] = e.fit_residual;
  j["converged"] = e.converged;
  j["diagnostic"] = e.diagnostic;
  return j;
}

inline json to_json(const IterationTrace& t) {
  json j;
  j["eps"] = t.eps;
  j["mu"] = t.mu;
  j["inverted"] = t.inverted;
  j["iterations"] = t.iterations;
  j["converged"] = t.converged;
  j["w"] = t.w.vec();
  json rows = json::array();
  for (const auto& r : t.rows) rows.push_back({{"n", r.n}, {"x", r.x.vec()}, {"y", r.y.vec()}, {"gap", r.gap}});
  j["rows"] = rows;
  return j;
}

inline IterationTrace trace_from_json(const json& j) {
  IterationTrace t;
  t.eps = j.at("eps").get<double>();
  t.mu = j.at("mu").get<double>();
  t.inverted = j.at("inverted").get<bool>();
  t.iterations = j.at("iterations").get<int>();
  t.converged = j.at("converged").get<bool>();
  t.w = detail::point_from(j.at("w"));
  for (const auto& r : j.at("rows"))
    t.rows.push_back({r.at("n").get<int>(), detail::point_from(r.at("x")), detail::point_from(r.at("y")),
                      r.at("gap").get<double>()});
  return t;
}

inline json to_json(const CanonicalElement& e) {
  json j;
  switch (e.kind()) {
    case CanonicalElement::Kind::identity: j["kind"] = "identity"; break;
    case CanonicalElement::Kind::dilatation:
      j["kind"] = "dilatation";
      j["center"] = e.point().vec();
      j["coeff"] = e.coeff();
      break;
    case CanonicalElement::Kind::translation:
      j["kind"] = "translation";
      j["g"] = e.point().vec();
      break;
  }
  j["text"] = to_text(e);
  return j;
}

inline json to_json(const Report& r) {
  json j;
  j["schema"] = kReportSchema;
  j["config"] = r.config;
  j["results"] = r.results;
  j["pass"] = r.pass;
  if (r.wall_time_s) j["wall_time_s"] = *r.wall_time_s;
  return j;
}

inline Report report_from_json(const json& j) {
  try {
    if (j.at("schema").get<std::string>() != kReportSchema)
      throw Error(ErrorCode::ConfigParseError, "unknown report schema");
    Report r;
    r.config = j.at("config");
    r.results = j.at("results");
    r.pass = j.at("pass").get<bool>();
    if (j.contains("wall_time_s")) r.wall_time_s = j.at("wall_time_s").get<double>();
    if (r.results.contains("trace")) r.trace = trace_from_json(r.results.at("trace"));
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigParseError, std::string("malformed report: ") + e.what());
  }
}

inline std::string emit(const Report& r, Format f) {
  if (f == Format::csv) {
    if (!r.trace) throw Error(ErrorCode::UnsupportedFormat, "CSV output is only available for menelaos traces");
    std::ostringstream os;
    write_csv(os, *r.trace);
    return os.str();
  }
  return to_json(r).dump(2) + "\n";
}

/// Writes through a sibling temporary file and renames it into place.
inline void write_atomic(const std::filesystem::path& path, const std::string& bytes) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::ConfigParseError, "cannot open " + tmp.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw Error(ErrorCode::ConfigParseError, "write to " + tmp.string() + " failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorCode::ConfigParseError, "cannot move report into " + path.string());
  }
}

}  // namespace dilatox::cli
