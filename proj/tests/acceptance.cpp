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

// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dilatox/axioms.hpp"
#include "dilatox/cli/config.hpp"
#include "dilatox/cli/report.hpp"
#include "dilatox/cli/run.hpp"
#include "dilatox/menelaos.hpp"
#include "dilatox/models.hpp"
#include "dilatox/semigroup.hpp"

namespace {

using namespace dilatox;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::ostringstream note;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) note << " first failure: " << what << ";";
      pass = false;
    }
  }
};

template <typename Fn>
void for_each_group_model(Fn&& fn) {
  for (std::size_t dim = 1; dim <= 3; ++dim)
    for (double p : {1.0, 2.0, std::numeric_limits<double>::infinity()})
      fn(make_dilatation_structure(EuclideanGroup(dim, p)));
  fn(make_dilatation_structure(HeisenbergGroup()));
  fn(make_dilatation_structure(Step2CarnotGroup::random(3, 2, 7)));
}

double max_abs_diff(const Point& a, const Point& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

template <typename T>
const T& lookup(const std::vector<std::pair<std::string, T>>& items, const std::string& key) {
  for (const auto& [k, v] : items)
    if (k == key) return v;
  throw std::out_of_range("missing witness " + key);
}

// 1. A1, A2, norm axioms (a)-(d) and linearity on every group model.
void axiom_suite(Outcome& out) {
  constexpr std::size_t kSamples = 10000;
  constexpr double kTol = 1e-10;
  const auto t0 = Clock::now();
  double worst = 0.0;
  std::size_t models = 0;
  for_each_group_model([&](const auto& s) {
    ++models;
    const auto samples = make_axiom_samples(s, kSamples, 1000 + models);
    std::vector<CheckReport> reps = {check_a1(s, samples, kTol), check_a2(s, samples, kTol),
                                     check_linearity(s, samples, kTol)};
    for (auto& r : check_norm_axioms(s.group(), kSamples, 2000 + models, kTol)) reps.push_back(r);
    for (const auto& r : reps) {
      worst = std::max(worst, r.max_residual);
      out.require(r.pass && r.samples >= kSamples, s.name() + " " + r.id);
    }
  });
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  out.require(secs <= 60.0, "runtime");
  out.note << " models=" << models << " samples=" << kSamples << " worst_residual=" << worst << " time_s=" << secs;
}

// 2. Tangent limits on a 5^3 grid.
void tangent_limits(Outcome& out) {
  const ToleranceSchedule sched;
  double spread = 0.0;
  std::size_t grids = 0;
  for_each_group_model([&](const auto& s) {
    const auto grid = make_grid(s, 5, 3000 + grids);
    ++grids;
    const GridReport a3 = check_a3_grid(s, grid, sched);
    const GridReport a4 = check_a4_grid(s, grid, sched);
    out.require(a3.triples == 125 && a3.converged == a3.triples, s.name() + " A3 converged");
    out.require(a4.triples == 125 && a4.converged == a4.triples, s.name() + " A4 converged");
    out.require(a3.max_sequence_spread <= 1e-9, s.name() + " A3 constant");
    spread = std::max(spread, a3.max_sequence_spread);
  });
  const SphereStructure sphere;
  const auto grid = make_grid(sphere, 5, 3999);
  const GridReport a3 = check_a3_grid(sphere, grid, sched);
  const GridReport a4 = check_a4_grid(sphere, grid, sched);
  out.require(a3.converged == a3.triples, "sphere A3 converged");
  out.require(a4.converged == a4.triples, "sphere A4 converged");
  out.require(a3.order_min >= 1.7 && a3.order_max <= 2.3, "sphere A3 order");
  out.note << " group_models=" << grids << " homogeneous_A3_spread=" << spread << " sphere_A3_order=["
           << a3.order_min << "," << a3.order_max << "]";
}

// 3. Two-sequence iteration against the Banach solver, the dilatation it
// produces, the gap law and the invariance of the pair composition.
void menelaos_reproduction(Outcome& out) {
  constexpr double kTol = 1e-9;
  double agree = 0.0, verify = 0.0, gap = 0.0, inv = 0.0;
  std::size_t cases = 0, models = 0;
  for_each_group_model([&](const auto& s) {
    Rng rng(4000 + models++);
    const double r = 0.5 * s.domain().closeness;
    for (int i = 0; i < 100; ++i) {
      const Point x = s.sample_point(rng);
      const Point y = s.sample_near(x, r, rng);
      double e = 0.0, m = 0.0;
      do {
        e = rng.uniform(0.1, 2.0);
        m = rng.uniform(0.1, 2.0);
      } while (std::abs(std::log(e * m)) < 0.2);
      const auto tr = paper_iteration(s, x, y, e, m);
      const auto fp = banach_iteration(s, x, y, e, m, x);
      std::vector<Point> pts;
      for (int k = 0; k < 100; ++k) pts.push_back(s.sample_near(x, r, rng));
      const double a = discrepancy(tr.w, fp.point);
      const auto v = verify_menelaos(s, x, y, e, m, tr.w, pts, kTol);
      const double floor = resolvable_distance(s, std::max(x.max_abs(), y.max_abs()), 1e-10);
      const double g = gap_law_residual(tr, floor);
      const auto iv = check_invariance(s, tr, pts, kTol);
      out.require(tr.converged && a <= kTol, s.name() + " paper vs banach");
      out.require(v.pass, s.name() + " verify_menelaos");
      out.require(g <= 1e-10, s.name() + " gap law");
      out.require(iv.pass, s.name() + " invariance");
      agree = std::max(agree, a);
      verify = std::max(verify, v.max_residual);
      gap = std::max(gap, g);
      inv = std::max(inv, iv.max_residual);
      ++cases;
    }
  });
  out.note << " cases=" << cases << " paper_vs_banach=" << agree << " verify=" << verify << " gap_ratio=" << gap
           << " invariance=" << inv;
}

// 4. Euclidean closed form and the worked case.
void euclidean_closed_form(Outcome& out) {
  Rng rng(5000);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const std::size_t dim = 1 + rng.below(3);
    const auto s = make_dilatation_structure(EuclideanGroup(dim, 2.0));
    const Point x = s.sample_point(rng);
    const Point y = s.sample_near(x, 0.5 * s.domain().closeness, rng);
    double e = 0.0, m = 0.0;
    do {
      e = rng.uniform(0.1, 2.0);
      m = rng.uniform(0.1, 2.0);
    } while (std::abs(std::log(e * m)) < 0.2);
    Point expect(dim);
    for (std::size_t k = 0; k < dim; ++k) expect[k] = ((1 - e) * x[k] + e * (1 - m) * y[k]) / (1 - e * m);
    const double d = discrepancy(paper_iteration(s, x, y, e, m).w, expect);
    worst = std::max(worst, d);
    out.require(d <= 1e-10, "closed form");
  }
  const auto line = make_dilatation_structure(EuclideanGroup(1, 2.0));
  const double w = paper_iteration(line, Point{0.0}, Point{1.0}, 0.5, 0.5).w[0];
  out.require(std::abs(w - 1.0 / 3.0) <= 1e-12, "worked case");
  out.note << " cases=1000 worst=" << worst << " worked_w=" << w;
}

// 5. Random words normalize to identity, dilatation or translation.
void semigroup_closure(Outcome& out) {
  static constexpr double kCoeffs[] = {0.25, 0.5, 0.75, 1.5, 2.0, 4.0};
  double resid = 0.0, coeff_err = 0.0, trans_err = 0.0;
  std::size_t words = 0, dilatations = 0, others = 0, models = 0;
  auto run = [&](const auto& s) {
    Rng rng(6000 + models++);
    for (int t = 0; t < 500; ++t) {
      Word w;
      const std::size_t n = 1 + rng.below(8);
      while (w.size() < n) {
        const double e = kCoeffs[rng.below(6)];
        w.push_back({s.sample_point(rng), e});
        if (w.size() < n && rng.uniform() < 0.3) w.push_back({s.sample_point(rng), 1.0 / e});
      }
      const CanonicalElement c = normalize_word(s, w);
      double product = 1.0;
      for (const auto& f : w) product *= f.coeff.value();
      if (std::abs(product - 1.0) > 1e-12) {
        ++dilatations;
        out.require(c.is_dilatation(), s.name() + " dilatation kind " + to_text(w));
        if (c.is_dilatation()) {
          const double err = std::abs(c.coeff() - product) / product;
          coeff_err = std::max(coeff_err, err);
          out.require(err <= 1e-14, s.name() + " coefficient product");
        }
      } else {
        ++others;
        out.require(!c.is_dilatation(), s.name() + " unit product kind " + to_text(w));
      }
      std::vector<Point> pts;
      for (int i = 0; i < 100; ++i) pts.push_back(s.sample_point(rng));
      const auto v = verify_normal_form(s, w, c, pts, 1e-8);
      resid = std::max(resid, v.max_residual);
      out.require(v.pass, s.name() + " verify_normal_form " + to_text(w));
      ++words;
    }
  };
  auto pair = [&](const auto& s) {
    const auto& g = s.group();
    Rng rng(6100 + models++);
    for (int t = 0; t < 100; ++t) {
      const Point x = s.sample_point(rng), y = s.sample_point(rng);
      const double e = kCoeffs[rng.below(6)];
      const CanonicalElement c = normalize_word(s, Word{{x, e}, {y, 1.0 / e}});
      const Point expect = g.mul(g.mul(x, g.dilation(e, g.mul(g.inv(x), y))), g.inv(y));
      out.require(c.is_translation(), s.name() + " two-factor kind");
      if (c.is_translation()) {
        const double err = max_abs_diff(c.point(), expect);
        trans_err = std::max(trans_err, err);
        out.require(err <= 1e-12, s.name() + " two-factor translation");
      }
    }
  };
  run(make_dilatation_structure(EuclideanGroup(2, 2.0)));
  run(make_dilatation_structure(HeisenbergGroup()));
  run(make_dilatation_structure(Step2CarnotGroup::random(3, 2, 7)));
  pair(make_dilatation_structure(HeisenbergGroup()));
  pair(make_dilatation_structure(Step2CarnotGroup::random(3, 2, 7)));
  out.note << " words=" << words << " dilatations=" << dilatations << " unit_product=" << others
           << " worst_residual=" << resid << " coeff_rel_err=" << coeff_err << " translation_err=" << trans_err;
}

// 6. The sphere satisfies A1-A4 but not linearity, and the Menelaos
// composition fails at the linearity witness.
void negative_control(Outcome& out) {
  const SphereStructure s;
  const auto samples = make_axiom_samples(s, 10000, 7000);
  const auto a1 = check_a1(s, samples, 1e-9);
  const auto a2 = check_a2(s, samples, 1e-9);
  const auto lin = check_linearity(s, samples, 1e-9);
  const auto grid = make_grid(s, 5, 7001);
  const auto a3 = check_a3_grid(s, grid, ToleranceSchedule{});
  const auto a4 = check_a4_grid(s, grid, ToleranceSchedule{});
  out.require(a1.pass, "A1");
  out.require(a2.pass, "A2");
  out.require(a3.pass, "A3");
  out.require(a4.pass, "A4");
  out.require(!lin.pass && lin.max_residual >= 1e-3, "linearity witness");
  const Point& x = lookup(lin.witness_points, "x");
  const Point& y = lookup(lin.witness_points, "y");
  const Point& z = lookup(lin.witness_points, "z");
  const double e = lookup(lin.witness_scalars, "eps"), m = lookup(lin.witness_scalars, "mu");
  double menelaos = 0.0;
  if (std::abs(e * m - 1.0) > 1e-6) {
    const auto fp = banach_iteration(s, x, y, e, m, x);
    const Point pts[] = {x, y, z, s.base()};
    const auto v = verify_menelaos(s, x, y, e, m, fp.point, pts, 1e-9);
    menelaos = v.max_residual;
    out.require(!v.pass, "verify_menelaos at witness");
  } else {
    out.require(false, "witness has unit coefficient product");
  }
  out.note << " A1=" << a1.max_residual << " A2=" << a2.max_residual << " A3_order=[" << a3.order_min << ","
           << a3.order_max << "] linearity_witness=" << lin.max_residual << " menelaos_residual=" << menelaos;
}

std::string capture(const std::string& cmd, int& status) {
  std::string text;
  FILE* f = popen(cmd.c_str(), "r");
  if (f == nullptr) {
    status = -1;
    return text;
  }
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), f)) > 0) text.append(buf.data(), n);
  const int raw = pclose(f);
  status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return text;
}

// 7. Identical config and seed give identical bytes, in process and through the binary.
void determinism(Outcome& out) {
  std::size_t configs = 0, runs = 0;
  for (const auto& entry : std::filesystem::directory_iterator(DILATOX_CONFIGS)) {
    if (entry.path().extension() != ".json") continue;
    std::ifstream in(entry.path());
    std::stringstream buf;
    buf << in.rdbuf();
    const cli::RunConfig cfg = cli::parse_config_text(buf.str());
    const std::string a = cli::emit(cli::run(cfg), cli::Format::json);
    const std::string b = cli::emit(cli::run(cfg), cli::Format::json);
    out.require(a == b, "in-process " + entry.path().filename().string());
    int s1 = 0, s2 = 0;
    const std::string cmd = std::string(DILATOX_CLI) + " --config " + entry.path().string() + " 2>/dev/null";
    const std::string c1 = capture(cmd, s1);
    const std::string c2 = capture(cmd, s2);
    out.require(s1 == s2 && (s1 == 0 || s1 == 1) && c1 == c2 && !c1.empty(), "binary " + entry.path().filename().string());
    out.require(c1 == a, "binary matches in-process " + entry.path().filename().string());
    ++configs;
    runs += 4;
  }
  out.require(configs > 0, "no configs found");
  out.note << " configs=" << configs << " runs=" << runs;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
      {"axiom suite", axiom_suite},
      {"tangent limits", tangent_limits},
      {"two-sequence iteration", menelaos_reproduction},
      {"euclidean closed form", euclidean_closed_form},
      {"semigroup closure", semigroup_closure},
      {"sphere negative control", negative_control},
      {"determinism", determinism},
  };
  bool all = true;
  int index = 0;
  for (const auto& [name, fn] : criteria) {
    ++index;
    Outcome out;
    try {
      fn(out);
    } catch (const std::exception& e) {
      out.pass = false;
      out.note << " exception: " << e.what();
    }
    std::cout << "criterion " << index << " " << (out.pass ? "PASS" : "FAIL") << " " << name << ":" << out.note.str()
              << std::endl;
    all = all && out.pass;
  }
  return all ? 0 : 1;
}
