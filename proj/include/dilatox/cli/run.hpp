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
 * Task dispatch. Each task runs against the model variant through std::visit
 * and returns a Report whose payload depends only on the configuration.
 */

#pragma once

#include <algorithm>
#include <vector>

#include "dilatox/axioms.hpp"
#include "dilatox/cli/config.hpp"
#include "dilatox/cli/report.hpp"
#include "dilatox/menelaos.hpp"
#include "dilatox/semigroup.hpp"
#include "dilatox/tangent.hpp"

namespace dilatox::cli {

/// Default tolerance of each task when the config leaves "tol" unset.
inline double default_tolerance(Task t) {
  switch (t) {
    case Task::check_axioms: return 1e-10;
    case Task::tangent: return 1e-9;
    case Task::menelaos: return 1e-9;
    case Task::normalize: return 1e-8;
  }
  return 1e-9;
}

/// Relative accuracy demanded of the gap ratio in menelaos runs.
inline constexpr double kGapLawTolerance = 1e-10;

namespace detail {

template <typename S>
std::vector<Point> sample_around(const S& s, const Point& x, double r, std::size_t n, Rng& rng) {
  std::vector<Point> pts;
  pts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) pts.push_back(s.sample_near(x, r, rng));
  return pts;
}

inline void record(json& results, const std::string& key, json value, bool& pass) {
  pass = pass && value.value("pass", true);
  results[key] = std::move(value);
}

template <typename S>
Report check_axioms(const S& s, const RunConfig& c, double tol) {
  Report rep;
  const std::uint64_t seed = c.seed.value_or(0);
  bool pass = true;
  json& out = rep.results;
  out["model"] = s.name();
  const auto samples = make_axiom_samples(s, c.samples, seed);
  record(out, "A1", to_json(check_a1(s, samples, tol)), pass);
  record(out, "A2", to_json(check_a2(s, samples, tol)), pass);
  if constexpr (is_conical_structure<S>::value) {
    json norms = json::array();
    for (const auto& r : check_norm_axioms(s.group(), c.samples, seed + 1, tol)) {
      pass = pass && r.pass;
      norms.push_back(to_json(r));
    }
    out["norm"] = norms;
  }
  record(out, "linearity", to_json(check_linearity(s, samples, tol)), pass);
  const auto grid = make_grid(s, c.grid, seed + 2);
  record(out, "A3", to_json(check_a3_grid(s, grid, c.schedule)), pass);
  record(out, "A4", to_json(check_a4_grid(s, grid, c.schedule)), pass);
  rep.pass = pass;
  return rep;
}

template <typename S>
Report tangent(const S& s, const RunConfig& c, double tol) {
  Report rep;
  Rng rng(c.seed.value_or(0));
  const double r = 0.25 * s.domain().closeness;
  const Point x = c.inputs.x ? *c.inputs.x : s.sample_point(rng);
  require_in_domain(s, x, "x");
  const Point u = c.inputs.u ? *c.inputs.u : s.sample_near(x, r, rng);
  const Point v = c.inputs.v ? *c.inputs.v : s.sample_near(x, r, rng);
  const TangentSpace<S> tan(s, x, c.schedule);
  json& out = rep.results;
  out["model"] = s.name();
  out["x"] = x.vec();
  out["u"] = u.vec();
  out["v"] = v.vec();
  const auto m = tan.metric_estimate(u, v);
  const auto op = tan.op_estimate(u, v);
  const auto inv = tan.inv_estimate(u);
  bool pass = m.converged && op.converged && inv.converged;
  out["metric"] = to_json(m);
  out["op"] = to_json(op);
  out["inv"] = to_json(inv);
  json con = json::array();
  const std::size_t n = std::min<std::size_t>(c.samples, 50);
  for (const auto& cr : verify_conical(s, x, n, c.seed.value_or(0) + 1, c.schedule, tol)) {
    pass = pass && cr.pass;
    con.push_back(to_json(cr));
  }
  out["conical"] = con;
  rep.pass = pass;
  return rep;
}

template <typename S>
Report menelaos(const S& s, const RunConfig& c, double tol) {
  Report rep;
  Rng rng(c.seed.value_or(0));
  const double r = 0.5 * s.domain().closeness;
  const Point x = c.inputs.x ? *c.inputs.x : s.sample_point(rng);
  require_in_domain(s, x, "x");
  const Point y = c.inputs.y ? *c.inputs.y : s.sample_near(x, r, rng);
  const Scalar eps = c.inputs.eps.value_or(0.5);
  const Scalar mu = c.inputs.mu.value_or(0.5);
  const std::vector<Point> pts = sample_around(s, x, r, std::min<std::size_t>(c.samples, 100), rng);

  json& out = rep.results;
  out["model"] = s.name();
  out["x"] = x.vec();
  out["y"] = y.vec();
  out["eps"] = eps.value();
  out["mu"] = mu.value();
  bool pass = true;

  if (s.linearity() == Linearity::exact) {
    const IterationTrace tr = paper_iteration(s, x, y, eps, mu);
    const FixedPoint fp = banach_iteration(s, x, y, eps, mu, x);
    out["w"] = tr.w.vec();
    const double agree = discrepancy(tr.w, fp.point);
    out["banach"] = {{"w", fp.point.vec()}, {"iterations", fp.iterations}, {"discrepancy", agree},
                     {"pass", agree <= tol}};
    pass = agree <= tol;
    record(out, "verify", to_json(verify_menelaos(s, x, y, eps, mu, tr.w, pts, tol)), pass);
    record(out, "invariance", to_json(check_invariance(s, tr, pts, tol)), pass);
    const double scale = std::max(x.max_abs(), y.max_abs());
    const double floor = resolvable_distance(s, scale, kGapLawTolerance);
    const double gap = gap_law_residual(tr, floor);
    out["gap_law"] = {{"kappa", tr.eps * tr.mu}, {"min_gap", floor}, {"max_relative_error", gap},
                      {"tolerance", kGapLawTolerance}, {"pass", gap <= kGapLawTolerance}};
    pass = pass && gap <= kGapLawTolerance;
    out["trace"] = to_json(tr);
    rep.trace = tr;
  } else {
    // No two-sequence construction without linearity; the fixed point of the
    // composite still exists and is tested against the dilatation it should be.
    const FixedPoint fp = banach_iteration(s, x, y, eps, mu, x);
    out["w"] = fp.point.vec();
    out["banach"] = {{"w", fp.point.vec()}, {"iterations", fp.iterations}};
    record(out, "verify", to_json(verify_menelaos(s, x, y, eps, mu, fp.point, pts, tol)), pass);
  }
  rep.pass = pass;
  return rep;
}

template <typename S>
Report normalize(const S& s, const RunConfig& c, double tol) {
  if (!c.inputs.word) throw Error(ErrorCode::ConfigParseError, "normalize needs inputs.word");
  Report rep;
  const Word w = parse_word(*c.inputs.word, s.dimension());
  const CanonicalElement e = normalize_word(s, w);
  Rng rng(c.seed.value_or(0));
  std::vector<Point> pts;
  for (std::size_t i = 0; i < std::min<std::size_t>(c.samples, 100); ++i) pts.push_back(s.sample_point(rng));
  double product = 1.0;
  for (const auto& f : w) product *= f.coeff.value();
  json& out = rep.results;
  out["model"] = s.name();
  out["word"] = to_text(w);
  out["factors"] = w.size();
  out["coefficient_product"] = product;
  out["normal_form"] = to_json(e);
  bool pass = true;
  record(out, "verify", to_json(verify_normal_form(s, w, e, pts, tol)), pass);
  rep.pass = pass;
  return rep;
}

}  // namespace detail

inline Report run(const RunConfig& c) {
  if (!c.task) throw Error(ErrorCode::ConfigParseError, "no task given");
  const Task task = *c.task;
  const double tol = c.tol.value_or(default_tolerance(task));
  const Model model = make_model(c.model);
  Report rep = std::visit(
      [&](const auto& s) {
        switch (task) {
          case Task::check_axioms: return detail::check_axioms(s, c, tol);
          case Task::tangent: return detail::tangent(s, c, tol);
          case Task::menelaos: return detail::menelaos(s, c, tol);
          case Task::normalize: return detail::normalize(s, c, tol);
        }
        throw Error(ErrorCode::ConfigParseError, "unknown task");
      },
      model);
  rep.config = to_json(c);
  rep.config["tol"] = tol;
  json res = json::object();
  res["task"] = to_string(task);
  for (auto& [k, v] : rep.results.items()) res[k] = v;
  rep.results = std::move(res);
  return rep;
}

/// Process exit status for a finished run or a failure code.
inline int exit_code(const Report& r) { return r.pass ? 0 : 1; }
inline int exit_code(ErrorCode c) { return c == ErrorCode::NoConvergence ? 3 : 2; }

}  // namespace dilatox::cli
