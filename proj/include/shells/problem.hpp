#ifndef SHELLS_PROBLEM_HPP_
#define SHELLS_PROBLEM_HPP_

#include "candidate.hpp"
#include "errors.hpp"
#include "expression.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace shells {

/// Relative offset that closes an open box endpoint.
inline constexpr double open_endpoint_offset = 1e-9;

/// Feasibility tolerance for a condition with right-hand side `bound`.
[[nodiscard]] inline double feasibility_tolerance(double bound) { return 1e-9 * std::max(1.0, std::abs(bound)); }

struct interval {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_open = false;
  bool hi_open = false;

  [[nodiscard]] double width() const { return hi - lo; }
  [[nodiscard]] double effective_lo() const { return lo_open ? lo + open_endpoint_offset * width() : lo; }
  [[nodiscard]] double effective_hi() const { return hi_open ? hi - open_endpoint_offset * width() : hi; }

  [[nodiscard]] bool contains(interval const& other) const { return lo <= other.lo && hi >= other.hi; }

  friend bool operator==(interval const&, interval const&) = default;
};

/// g(x) <= bound.
struct constraint {
  expression expr;
  double bound = 0.0;
  bool monotone = false;  // declared strongly monotonically increasing
};

/**
 * A multiobjective maximization problem over a compact box intersected with
 * inequality constraints. Objectives are stored in maximization sense.
 */
struct problem_spec {
  std::string name;
  std::size_t n = 0;
  std::size_t k = 0;
  std::vector<expression> objectives;
  std::vector<bool> monotone_objectives;
  std::vector<constraint> constraints;
  std::vector<interval> box;
  bool binary = false;  // decision vectors restricted to {0,1}^n

  void validate() const {
    if (n == 0) throw problem_error("problem needs at least one variable");
    if (k < 2) throw problem_error("problem needs at least two objectives");
    if (objectives.size() != k) throw problem_error("objective count does not match k");
    if (monotone_objectives.size() != k) throw problem_error("monotone flag count does not match k");
    if (box.size() != n) throw problem_error("box size does not match n");
    for (std::size_t i = 0; i < n; ++i) {
      auto const& b = box[i];
      if (!std::isfinite(b.lo) || !std::isfinite(b.hi)) {
        throw problem_error("box of x" + std::to_string(i + 1) + " is unbounded");
      }
      if (b.lo > b.hi) throw problem_error("box of x" + std::to_string(i + 1) + " has lo > hi");
    }
    for (auto const& f : objectives) {
      if (f.empty() || f.arity() > n) throw problem_error("objective references a variable outside x1..xn");
    }
    for (auto const& c : constraints) {
      if (c.expr.empty() || c.expr.arity() > n) throw problem_error("constraint references a variable outside x1..xn");
      if (!std::isfinite(c.bound)) throw problem_error("constraint bound is not finite");
    }
  }
};

namespace detail {

struct residual_scan {
  double violation = -std::numeric_limits<double>::infinity();
  bool outside = false;
  bool boundary = false;

  void add(double r, double tol, bool banded = true) {
    violation = std::max(violation, r);
    if (r > tol) {
      outside = true;
    } else if (banded && r >= -tol) {
      boundary = true;
    }
  }
};

}  // namespace detail

/**
 * Evaluates objectives and constraints at x. A point is outside when some
 * residual exceeds its tolerance, on the boundary when none does but one is
 * within the tolerance band, and inside otherwise.
 */
[[nodiscard]] inline candidate_solution evaluate(problem_spec const& p, std::span<double const> x) {
  if (x.size() != p.n) throw dimension_error(p.n, x.size());
  candidate_solution c;
  c.x.assign(x.begin(), x.end());

  detail::residual_scan scan;
  char const* domain = nullptr;
  for (std::size_t j = 0; j < p.constraints.size(); ++j) {
    auto const& con = p.constraints[j];
    auto r = con.expr.evaluate(x);
    if (!r.ok()) {
      domain = r.domain_error;
      c.diagnostic = "constraint " + std::to_string(j + 1) + ": " + r.domain_error;
      break;
    }
    scan.add(r.value - con.bound, feasibility_tolerance(con.bound));
  }
  for (std::size_t i = 0; i < p.n; ++i) {
    auto const lo = p.box[i].effective_lo();
    auto const hi = p.box[i].effective_hi();
    // An open endpoint is already closed by a small offset; it gets no band of its own.
    scan.add(lo - x[i], p.box[i].lo_open ? 0.0 : feasibility_tolerance(lo));
    scan.add(x[i] - hi, p.box[i].hi_open ? 0.0 : feasibility_tolerance(hi));
    if (p.binary) {
      scan.add(std::min(std::abs(x[i]), std::abs(x[i] - 1.0)), 1e-9, false);
    }
  }

  std::vector<double> y(p.k);
  if (!domain) {
    for (std::size_t l = 0; l < p.k; ++l) {
      auto r = p.objectives[l].evaluate(x);
      if (!r.ok()) {
        domain = r.domain_error;
        c.diagnostic = "objective " + std::to_string(l + 1) + ": " + r.domain_error;
        break;
      }
      y[l] = r.value + 0.0;  // no negative zero
    }
  }

  c.violation = scan.violation;
  if (domain && !scan.outside) {
    c.where = region::domain_error;
    c.status = feasibility::infeasible;
    return c;
  }
  if (domain) {
    // Outside on the box or a constraint; the objectives stay undefined.
    c.where = region::outside;
    c.status = feasibility::infeasible;
    return c;
  }
  c.fx = objective_vector(std::move(y));
  c.where = scan.outside ? region::outside : scan.boundary ? region::boundary : region::inside;
  c.status = scan.outside ? feasibility::infeasible : feasibility::feasible;
  return c;
}

[[nodiscard]] inline candidate_solution evaluate(problem_spec const& p, std::vector<double> const& x) {
  return evaluate(p, std::span<double const>(x));
}

[[nodiscard]] inline region classify(problem_spec const& p, std::span<double const> x) { return evaluate(p, x).where; }

/// True iff x violates some condition of X_0 by more than its tolerance.
[[nodiscard]] inline bool is_outside(problem_spec const& p, std::span<double const> x) {
  return classify(p, x) == region::outside;
}

[[nodiscard]] inline bool is_strictly_inside(problem_spec const& p, std::span<double const> x) {
  return classify(p, x) == region::inside;
}

/**
 * Enlargement of a problem's feasible set. An empty `box` keeps the original
 * box; an empty `constraint_scale` keeps every bound.
 */
struct relaxation_descriptor {
  std::vector<interval> box;
  std::vector<double> constraint_scale;
  std::vector<std::size_t> dropped_constraints;

  [[nodiscard]] bool identity() const {
    return box.empty() && dropped_constraints.empty() &&
           std::all_of(constraint_scale.begin(), constraint_scale.end(), [](double r) { return r == 1.0; });
  }
};

/// Bound after scaling by rho >= 1; moves toward +infinity for either sign.
[[nodiscard]] inline double relaxed_bound(double bound, double rho) { return bound + (rho - 1.0) * std::abs(bound); }

/**
 * Descriptor that widens every box interval symmetrically by `box_factor`
 * (an interval starting at or above zero is not pushed below zero) and
 * scales every constraint bound by `rho`.
 */
[[nodiscard]] inline relaxation_descriptor scaled_relaxation(problem_spec const& p, double box_factor, double rho) {
  if (box_factor < 1.0) throw precondition_error("box factor must be at least 1");
  if (rho < 1.0) throw precondition_error("constraint scale must be at least 1");
  relaxation_descriptor r;
  if (box_factor != 1.0 && !p.binary) {
    for (auto const& b : p.box) {
      auto const half = 0.5 * box_factor * b.width();
      auto const mid = 0.5 * (b.lo + b.hi);
      interval w{mid - half, mid + half, false, false};
      if (b.lo >= 0.0) w.lo = std::max(w.lo, 0.0);
      if (w.lo >= b.lo) {
        w.lo = b.lo;
        w.lo_open = b.lo_open;
      }
      r.box.push_back(w);
    }
  }
  r.constraint_scale.assign(p.constraints.size(), rho);
  return r;
}

/// The relaxed problem; its feasible set contains the original one.
[[nodiscard]] inline problem_spec relax(problem_spec const& p, relaxation_descriptor const& r) {
  problem_spec q = p;
  if (!r.box.empty()) {
    if (r.box.size() != p.n) throw dimension_error(p.n, r.box.size());
    for (std::size_t i = 0; i < p.n; ++i) {
      auto const& old = p.box[i];
      auto b = r.box[i];
      if (!(b.lo <= old.lo && b.hi >= old.hi)) {
        throw precondition_error("relaxation shrinks the interval of x" + std::to_string(i + 1));
      }
      if (b.lo == old.lo && old.lo_open == false) b.lo_open = false;
      if (b.hi == old.hi && old.hi_open == false) b.hi_open = false;
      q.box[i] = b;
    }
  }
  if (!r.constraint_scale.empty()) {
    if (r.constraint_scale.size() != p.constraints.size()) {
      throw dimension_error(p.constraints.size(), r.constraint_scale.size());
    }
    for (std::size_t j = 0; j < p.constraints.size(); ++j) {
      if (!(r.constraint_scale[j] >= 1.0)) throw precondition_error("constraint scale must be at least 1");
      q.constraints[j].bound = relaxed_bound(p.constraints[j].bound, r.constraint_scale[j]);
    }
  }
  if (!r.dropped_constraints.empty()) {
    std::vector<constraint> kept;
    for (std::size_t j = 0; j < q.constraints.size(); ++j) {
      if (std::find(r.dropped_constraints.begin(), r.dropped_constraints.end(), j) == r.dropped_constraints.end()) {
        kept.push_back(q.constraints[j]);
      }
    }
    q.constraints = std::move(kept);
  }
  if (!r.identity()) q.name = p.name + "_relaxed";
  return q;
}

/// Uniform point of the (effective) box; binary problems draw bits.
template <typename Rng>
[[nodiscard]] std::vector<double> random_point(problem_spec const& p, Rng& rng) {
  std::vector<double> x(p.n);
  for (std::size_t i = 0; i < p.n; ++i) {
    if (p.binary) {
      x[i] = static_cast<double>(rng() & 1U);
    } else {
      std::uniform_real_distribution<double> u(p.box[i].effective_lo(), p.box[i].effective_hi());
      x[i] = u(rng);
    }
  }
  return x;
}

/**
 * Samples `samples` points of the original problem's box and counts those
 * feasible for `p` but not for `relaxed`. Zero means the superset property
 * held on every sample.
 */
[[nodiscard]] inline std::size_t relaxation_counterexamples(problem_spec const& p, problem_spec const& relaxed,
                                                            std::size_t samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::size_t bad = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    auto x = random_point(p, rng);
    if (evaluate(p, x).feasible() && !evaluate(relaxed, x).feasible()) ++bad;
  }
  return bad;
}

// ---------------------------------------------------------------------------
// JSON problem documents

namespace detail {

inline std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

template <typename T>
T required(nlohmann::json const& j, char const* key, std::string const& where) {
  if (!j.contains(key) || j.at(key).is_null()) throw problem_error(where + ": missing '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (nlohmann::json::exception const&) {
    throw problem_error(where + ": '" + key + "' has the wrong type");
  }
}

inline expression parse_expr_field(nlohmann::json const& j, std::size_t n, std::string const& where) {
  auto text = required<std::string>(j, "expr", where);
  try {
    return expression::parse(text, n);
  } catch (parse_error const& e) {
    throw problem_error(where + ": " + e.what());
  }
}

}  // namespace detail

/**
 * Reads a problem document:
 *
 *   {name, n, k, binary?, objectives: [{expr, sense}], constraints: [{expr, bound}],
 *    box: [{lo, hi, lo_open, hi_open}], monotone: {objectives: [bool], constraints: [bool]}}
 *
 * Objectives with sense "min" are negated so the result is in maximization sense.
 */
[[nodiscard]] inline problem_spec parse_problem(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (nlohmann::json::parse_error const& e) {
    auto [line, column] = detail::line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    throw parse_error("malformed problem document", line, column);
  }
  if (!doc.is_object()) throw problem_error("problem document must be a JSON object");

  problem_spec p;
  p.name = doc.value("name", std::string{"unnamed"});
  p.n = detail::required<std::size_t>(doc, "n", "problem");
  p.k = detail::required<std::size_t>(doc, "k", "problem");
  p.binary = doc.value("binary", false);

  auto const& objs = doc.at("objectives");
  for (std::size_t l = 0; l < objs.size(); ++l) {
    auto const where = "objective " + std::to_string(l + 1);
    auto e = detail::parse_expr_field(objs[l], p.n, where);
    auto sense = objs[l].value("sense", std::string{"max"});
    if (sense == "min") {
      e = e.negated();
    } else if (sense != "max") {
      throw problem_error(where + ": sense must be 'max' or 'min'");
    }
    p.objectives.push_back(std::move(e));
  }

  if (doc.contains("constraints")) {
    auto const& cons = doc.at("constraints");
    for (std::size_t j = 0; j < cons.size(); ++j) {
      auto const where = "constraint " + std::to_string(j + 1);
      constraint c;
      c.expr = detail::parse_expr_field(cons[j], p.n, where);
      c.bound = detail::required<double>(cons[j], "bound", where);
      p.constraints.push_back(std::move(c));
    }
  }

  if (!doc.contains("box")) throw problem_error("problem: missing 'box' (the feasible box must be bounded)");
  for (auto const& b : doc.at("box")) {
    interval iv;
    auto const where = "box of x" + std::to_string(p.box.size() + 1);
    if (!b.contains("lo") || !b.contains("hi") || !b.at("lo").is_number() || !b.at("hi").is_number()) {
      throw problem_error(where + " is unbounded");
    }
    iv.lo = b.at("lo").get<double>();
    iv.hi = b.at("hi").get<double>();
    iv.lo_open = b.value("lo_open", false);
    iv.hi_open = b.value("hi_open", false);
    p.box.push_back(iv);
  }

  p.monotone_objectives.assign(p.objectives.size(), false);
  if (doc.contains("monotone")) {
    auto const& m = doc.at("monotone");
    if (m.contains("objectives")) {
      auto flags = m.at("objectives").get<std::vector<bool>>();
      if (flags.size() != p.objectives.size()) throw problem_error("monotone.objectives has the wrong length");
      p.monotone_objectives = flags;
    }
    if (m.contains("constraints")) {
      auto flags = m.at("constraints").get<std::vector<bool>>();
      if (flags.size() != p.constraints.size()) throw problem_error("monotone.constraints has the wrong length");
      for (std::size_t j = 0; j < flags.size(); ++j) p.constraints[j].monotone = flags[j];
    }
  }

  p.validate();
  return p;
}

[[nodiscard]] inline nlohmann::json to_json(problem_spec const& p) {
  nlohmann::json doc;
  doc["name"] = p.name;
  doc["n"] = p.n;
  doc["k"] = p.k;
  if (p.binary) doc["binary"] = true;
  doc["objectives"] = nlohmann::json::array();
  for (auto const& f : p.objectives) {
    doc["objectives"].push_back({{"expr", f.to_string()}, {"sense", "max"}});
  }
  doc["constraints"] = nlohmann::json::array();
  std::vector<bool> mono_c;
  for (auto const& c : p.constraints) {
    doc["constraints"].push_back({{"expr", c.expr.to_string()}, {"bound", c.bound}});
    mono_c.push_back(c.monotone);
  }
  doc["box"] = nlohmann::json::array();
  for (auto const& b : p.box) {
    doc["box"].push_back({{"lo", b.lo}, {"hi", b.hi}, {"lo_open", b.lo_open}, {"hi_open", b.hi_open}});
  }
  doc["monotone"] = {{"objectives", p.monotone_objectives}, {"constraints", mono_c}};
  return doc;
}

[[nodiscard]] inline std::string serialize_problem(problem_spec const& p) { return to_json(p).dump(2) + "\n"; }

/// Same objectives, constraints and box, compared through the canonical document.
[[nodiscard]] inline bool same_problem(problem_spec const& a, problem_spec const& b) {
  auto ja = to_json(a);
  auto jb = to_json(b);
  ja.erase("name");
  jb.erase("name");
  return ja == jb;
}

/// Same decision space: box, constraints and binary flag agree.
[[nodiscard]] inline bool same_feasible_set(problem_spec const& a, problem_spec const& b) {
  auto ja = to_json(a);
  auto jb = to_json(b);
  return a.n == b.n && a.binary == b.binary && ja["box"] == jb["box"] && ja["constraints"] == jb["constraints"];
}

}  // namespace shells

#endif  // SHELLS_PROBLEM_HPP_
