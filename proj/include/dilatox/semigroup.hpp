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
 * Normal forms in the inverse semigroup generated by dilatations of a linear
 * structure. Every finite composition of dilatations is the identity, a
 * dilatation delta^w_kappa (kappa = product of the coefficients, kappa != 1),
 * or a left translation z -> g z (kappa = 1).
 *
 * Composition order: (a o b)(z) = a(b(z)). A word [f_1, ..., f_n] denotes
 * f_1 o ... o f_n, so f_n is applied first.
 *
 * Text form: "I", "D(c_1;...;c_n;eps)", "T(g_1;...;g_n)"; words are factors
 * separated by whitespace.
 */

#pragma once

#include <algorithm>
#include <cctype>
#include <cfloat>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "dilatox/check_report.hpp"
#include "dilatox/core.hpp"
#include "dilatox/menelaos.hpp"
#include "dilatox/models/conical.hpp"

namespace dilatox {

class CanonicalElement {
public:
  enum class Kind { identity, dilatation, translation };

  static CanonicalElement identity() { return CanonicalElement(Kind::identity, Point{}, 1.0); }

  /// Coefficient exactly 1 collapses to the identity.
  static CanonicalElement dilatation(Point center, Scalar coeff) {
    if (coeff.value() == 1.0) return identity();
    return CanonicalElement(Kind::dilatation, std::move(center), coeff.value());
  }

  /// The identity element collapses to Identity; callers pass the group's identity.
  static CanonicalElement translation(Point g, const Point& group_identity) {
    if (g == group_identity) return identity();
    return CanonicalElement(Kind::translation, std::move(g), 1.0);
  }

  Kind kind() const noexcept { return kind_; }
  bool is_identity() const noexcept { return kind_ == Kind::identity; }
  bool is_dilatation() const noexcept { return kind_ == Kind::dilatation; }
  bool is_translation() const noexcept { return kind_ == Kind::translation; }

  /// Dilatation center or translation element.
  const Point& point() const noexcept { return point_; }
  double coeff() const noexcept { return coeff_; }

  friend bool operator==(const CanonicalElement&, const CanonicalElement&) = default;

private:
  CanonicalElement(Kind k, Point p, double c) : kind_(k), point_(std::move(p)), coeff_(c) {}

  Kind kind_;
  Point point_;
  double coeff_;
};

using Word = std::vector<DilatationMap>;

struct NormalizeOptions {
  double solver_tol = 1e-13;   ///< fixed-point stopping tolerance
  double verify_tol = 1e-9;    ///< probe residual accepted for a numerical center
  double unit_tol = 1e-12;     ///< |kappa - 1| at or below this is a translation
  double identity_tol = 1e-14; ///< translation elements this close to e collapse
};

template <typename S>
struct is_conical_structure : std::false_type {};
template <ConicalGroup G>
struct is_conical_structure<ConicalStructure<G>> : std::true_type {};

namespace detail {

template <typename S>
void require_group_model(const S& s) {
  if constexpr (!is_conical_structure<S>::value)
    throw Error(ErrorCode::NotLinearModel, s.name() + " has no group of translations");
}

inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string join_coords(const Point& p) {
  std::string out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += ';';
    out += fmt_double(p[i]);
  }
  return out;
}

template <ConicalGroup G>
CanonicalElement translation_or_identity(const ConicalStructure<G>& s, Point g, const NormalizeOptions& opt) {
  const Point e = s.group().identity();
  if (discrepancy(g, e) <= opt.identity_tol) return CanonicalElement::identity();
  return CanonicalElement::translation(std::move(g), e);
}

/// Coefficients this close to 1 fall back to NoConvergence instead of iterating on.
inline constexpr int kMaxFixedPointIterations = 100000;

inline SolverOptions fixed_point_options(double kappa, double tol) {
  const double k = std::min(kappa, 1.0 / kappa);
  const double need = 2.0 * std::ceil(std::log(tol) / std::log(k)) + 50.0;
  return SolverOptions{tol, static_cast<int>(std::clamp(need, 200.0, double(kMaxFixedPointIterations)))};
}

}  // namespace detail

template <DilatationStructure S>
Point apply_canonical(const S& s, const CanonicalElement& e, const Point& z) {
  require_point(s, z, "argument");
  switch (e.kind()) {
    case CanonicalElement::Kind::identity: return z;
    case CanonicalElement::Kind::dilatation: return dilate(s, e.point(), e.coeff(), z);
    case CanonicalElement::Kind::translation:
      detail::require_group_model(s);
      if constexpr (is_conical_structure<S>::value) return group_mul(s.group(), e.point(), z);
  }
  return z;
}

template <DilatationStructure S>
CanonicalElement inverse(const S& s, const CanonicalElement& e) {
  switch (e.kind()) {
    case CanonicalElement::Kind::identity: return e;
    case CanonicalElement::Kind::dilatation: return CanonicalElement::dilatation(e.point(), 1.0 / e.coeff());
    case CanonicalElement::Kind::translation:
      detail::require_group_model(s);
      if constexpr (is_conical_structure<S>::value)
        return CanonicalElement::translation(s.group().inv(e.point()), s.group().identity());
  }
  return e;
}

/// The left translation equal to delta^x_eps delta^y_{1/eps}: g = x delta_eps(x^{-1} y) y^{-1}.
template <DilatationStructure S>
CanonicalElement translation_from_pair(const S& s, const Point& x, const Point& y, Scalar eps,
                                       const NormalizeOptions& opt = {}) {
  detail::require_group_model(s);
  if constexpr (is_conical_structure<S>::value) {
    const auto& G = s.group();
    require_point(s, x, "x");
    require_point(s, y, "y");
    Point g = G.mul(G.mul(x, G.dilation(eps.value(), G.mul(G.inv(x), y))), G.inv(y));
    return detail::translation_or_identity(s, std::move(g), opt);
  }
  return CanonicalElement::identity();
}

/// Canonical form of a o b.
template <DilatationStructure S>
CanonicalElement compose_canonical(const S& s, const CanonicalElement& a, const CanonicalElement& b,
                                   const NormalizeOptions& opt = {}) {
  if (s.linearity() != Linearity::exact)
    throw Error(ErrorCode::NotLinearModel, s.name() + " is not a linear dilatation structure");
  detail::require_group_model(s);
  if (a.is_identity()) return b;
  if (b.is_identity()) return a;

  if constexpr (is_conical_structure<S>::value) {
    const auto& G = s.group();
    using K = CanonicalElement::Kind;

    if (a.is_translation() && b.is_translation())
      return detail::translation_or_identity(s, G.mul(a.point(), b.point()), opt);

    const double kappa = a.coeff() * b.coeff();
    if (a.is_dilatation() && b.is_dilatation() && std::abs(kappa - 1.0) <= opt.unit_tol)
      return translation_from_pair(s, a.point(), b.point(), a.coeff(), opt);

    // The composite is a dilatation of coefficient kappa. Its center is the
    // fixed point of the composite, or of the inverse composite when kappa > 1.
    Point center;
    if (a.is_dilatation() && b.is_dilatation()) {
      const Point &x = a.point(), &y = b.point();
      const SolverOptions so = detail::fixed_point_options(kappa, opt.solver_tol);
      if (s.dist(x, y) < s.domain().closeness)
        center = paper_iteration(s, x, y, a.coeff(), b.coeff(), so).w;
      else
        center = banach_iteration(s, x, y, a.coeff(), b.coeff(), x, so).point;
    } else {
      const CanonicalElement ia = inverse(s, a), ib = inverse(s, b);
      auto forward = [&](const Point& z) { return apply_canonical(s, a, apply_canonical(s, b, z)); };
      auto backward = [&](const Point& z) { return apply_canonical(s, ib, apply_canonical(s, ia, z)); };
      const Point& seed = a.kind() == K::dilatation ? a.point() : b.point();
      const SolverOptions so = detail::fixed_point_options(kappa, opt.solver_tol);
      center = kappa < 1.0 ? contraction_fixed_point(s, forward, seed, so).point
                           : contraction_fixed_point(s, backward, seed, so).point;
    }
    require_in_domain(s, center, "composite center");

    CanonicalElement result = CanonicalElement::dilatation(center, kappa);
    // Accept the numerical center only if it reproduces the composite.
    const Point probes[] = {center, a.point(), b.point(), G.identity()};
    double worst = 0.0;
    for (const auto& z : probes)
      worst = std::max(worst, discrepancy(apply_canonical(s, a, apply_canonical(s, b, z)), apply_canonical(s, result, z)));
    if (worst > opt.verify_tol)
      throw Error(ErrorCode::NoConvergence, "composite center fails verification, residual " + detail::fmt_double(worst));
    return result;
  }
  return a;
}

/// f_1 o ... o f_n folded from the left.
template <DilatationStructure S>
CanonicalElement normalize_word(const S& s, const Word& w, const NormalizeOptions& opt = {}) {
  if (w.empty()) throw Error(ErrorCode::DomainViolation, "word must have at least one factor");
  if (s.linearity() != Linearity::exact)
    throw Error(ErrorCode::NotLinearModel, s.name() + " is not a linear dilatation structure");
  CanonicalElement acc = CanonicalElement::identity();
  bool first = true;
  for (const auto& f : w) {
    require_in_domain(s, f.center, "word center");
    const CanonicalElement e = CanonicalElement::dilatation(f.center, f.coeff);
    acc = first ? e : compose_canonical(s, acc, e, opt);
    first = false;
    if (!acc.is_identity()) require_in_domain(s, acc.point(), "normal form");
  }
  return acc;
}

/// Applies the factors one by one, rightmost first.
template <DilatationStructure S>
Point apply_word(const S& s, const Word& w, Point z) {
  for (auto it = w.rbegin(); it != w.rend(); ++it) z = dilate(s, it->center, it->coeff, z);
  return z;
}

/// Reversed word with inverted coefficients; denotes the inverse map.
inline Word inverse_word(const Word& w) {
  Word out;
  for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back({it->center, it->coeff.inverse()});
  return out;
}

template <DilatationStructure S>
CheckReport verify_normal_form(const S& s, const Word& w, const CanonicalElement& e,
                               std::span<const Point> sample_points, double tol = 1e-8) {
  CheckReport rep("normal_form", tol);
  WorstCase worst(rep);
  for (const auto& z : sample_points) {
    require_in_domain(s, z, "sample point");
    const Point lhs = apply_word(s, w, z);
    const Point rhs = apply_canonical(s, e, z);
    worst.offer(discrepancy(lhs, rhs), s.dist(lhs, rhs), [&](CheckReport& r) { r.witness_points = {{"z", z}}; });
  }
  rep.finish();
  return rep;
}

// ---- text form ---------------------------------------------------------------

inline std::string to_text(const CanonicalElement& e) {
  switch (e.kind()) {
    case CanonicalElement::Kind::identity: return "I";
    case CanonicalElement::Kind::dilatation:
      return "D(" + detail::join_coords(e.point()) + ";" + detail::fmt_double(e.coeff()) + ")";
    case CanonicalElement::Kind::translation: return "T(" + detail::join_coords(e.point()) + ")";
  }
  return "I";
}

inline std::string to_text(const Word& w) {
  std::string out;
  for (const auto& f : w) {
    if (!out.empty()) out += ' ';
    out += "D(" + detail::join_coords(f.center) + ";" + detail::fmt_double(f.coeff.value()) + ")";
  }
  return out;
}

namespace detail {

struct Factor {
  char tag = 'I';
  std::vector<double> numbers;
};

inline std::vector<Factor> parse_factors(std::string_view text) {
  std::vector<Factor> out;
  std::size_t i = 0;
  auto fail = [&](const std::string& why) -> void {
    throw Error(ErrorCode::ConfigParseError, "bad element text at offset " + std::to_string(i) + ": " + why);
  };
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == '*') {
      ++i;
      continue;
    }
    Factor f;
    f.tag = text[i];
    if (f.tag == 'I') {
      out.push_back(f);
      ++i;
      continue;
    }
    if (f.tag != 'D' && f.tag != 'T') fail("expected I, D(...) or T(...)");
    ++i;
    if (i >= text.size() || text[i] != '(') fail("expected '('");
    const std::size_t close = text.find(')', i);
    if (close == std::string_view::npos) fail("missing ')'");
    std::string body(text.substr(i + 1, close - i - 1));
    std::size_t pos = 0;
    while (pos <= body.size()) {
      const std::size_t semi = std::min(body.find(';', pos), body.size());
      const std::string tok = body.substr(pos, semi - pos);
      char* end = nullptr;
      const double v = std::strtod(tok.c_str(), &end);
      if (tok.empty() || end == tok.c_str() || *end != '\0') fail("'" + tok + "' is not a number");
      f.numbers.push_back(v);
      pos = semi + 1;
    }
    out.push_back(std::move(f));
    i = close + 1;
  }
  return out;
}

}  // namespace detail

/// Parses a whitespace-separated sequence of D(...) factors.
inline Word parse_word(std::string_view text, std::size_t dim) {
  Word w;
  for (auto& f : detail::parse_factors(text)) {
    if (f.tag != 'D') throw Error(ErrorCode::ConfigParseError, "words contain only D(...) factors");
    if (f.numbers.size() != dim + 1)
      throw Error(ErrorCode::DimensionMismatch, "D(...) factor needs " + std::to_string(dim) + " coordinates and a coefficient");
    const double c = f.numbers.back();
    f.numbers.pop_back();
    w.push_back({Point(std::move(f.numbers)), Scalar(c)});
  }
  if (w.empty()) throw Error(ErrorCode::ConfigParseError, "empty word");
  return w;
}

inline CanonicalElement parse_canonical(std::string_view text, std::size_t dim) {
  auto fs = detail::parse_factors(text);
  if (fs.size() != 1) throw Error(ErrorCode::ConfigParseError, "expected exactly one element");
  auto& f = fs.front();
  if (f.tag == 'I') return CanonicalElement::identity();
  if (f.tag == 'T') {
    if (f.numbers.size() != dim) throw Error(ErrorCode::DimensionMismatch, "T(...) needs " + std::to_string(dim) + " coordinates");
    return CanonicalElement::translation(Point(std::move(f.numbers)), Point(dim));
  }
  if (f.numbers.size() != dim + 1)
    throw Error(ErrorCode::DimensionMismatch, "D(...) needs " + std::to_string(dim) + " coordinates and a coefficient");
  const double c = f.numbers.back();
  f.numbers.pop_back();
  return CanonicalElement::dilatation(Point(std::move(f.numbers)), c);
}

}  // namespace dilatox
