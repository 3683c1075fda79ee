#ifndef SHELLS_BENCH_PROBLEMS_HPP_
#define SHELLS_BENCH_PROBLEMS_HPP_

#include "errors.hpp"
#include "expression.hpp"
#include "problem.hpp"

#include "json.hpp"

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace shells {

/**
 * Two concave paraboloids on [1,5]^2 with maximizers (3,4) and (4,1). With a
 * and b given, the box is [a,b]^2 instead (a < 1, b > 5), which relaxes the
 * original problem.
 */
[[nodiscard]] inline problem_spec example1_problem(std::optional<double> a = std::nullopt,
                                                   std::optional<double> b = std::nullopt) {
  if (a.has_value() != b.has_value()) throw std::invalid_argument("give both box ends or neither");
  if (a && !(*a < 1.0 && *b > 5.0)) throw std::invalid_argument("relaxed box needs a < 1 and b > 5");
  problem_spec p;
  p.name = a ? "example1_relaxed" : "example1";
  p.n = 2;
  p.k = 2;
  p.objectives = {expression::parse("-(x1-3)^2-(x2-4)^2", 2), expression::parse("-(x1-4)^2-(x2-1)^2", 2)};
  p.monotone_objectives = {false, false};
  auto const lo = a.value_or(1.0);
  auto const hi = b.value_or(5.0);
  p.box = {{lo, hi, false, false}, {lo, hi, false, false}};
  p.validate();
  return p;
}

/// Relaxation of example1 to the box [a,b]^2.
[[nodiscard]] inline relaxation_descriptor example1_relaxation(double a, double b) {
  if (!(a < 1.0 && b > 5.0)) throw std::invalid_argument("relaxed box needs a < 1 and b > 5");
  relaxation_descriptor r;
  r.box = {{a, b, false, false}, {a, b, false, false}};
  return r;
}

/// Hollow round beam; SI units.
struct beam_parameters {
  double force = 1e4;         // F, N
  double length = 3.0;        // l, m
  double density = 7.86e3;    // kg/m^3
  double young = 2.1e11;      // E, Pa
  double max_stress = 150e6;  // k_g, Pa
  interval d{0.0, 0.1, true, false};
  interval g{0.001, 0.1, false, false};

  void validate() const {
    if (!(force > 0.0 && length > 0.0 && density > 0.0 && young > 0.0 && max_stress > 0.0)) {
      throw std::invalid_argument("beam constants must be positive");
    }
    if (!(d.lo < d.hi && g.lo < g.hi)) throw std::invalid_argument("beam box is empty");
  }
};

namespace detail {

inline std::string num(double v) { return "(" + format_number(v) + ")"; }

}  // namespace detail

/// Beam expression text for the deflection term, with coefficient c: c/((x1+2*x2)^4-x1^4).
[[nodiscard]] inline std::string beam_deflection_text(double coefficient) {
  return detail::num(coefficient) + "/((x1+2*x2)^4-x1^4)";
}

/**
 * Minimizes mass pi(d+g)g rho l and deflection 4Fl^3/(3E pi((d+2g)^4-d^4))
 * (stored negated) subject to the bending stress
 * (8Fl/pi)(d+2g)/((d+2g)^4-d^4) <= k_g. Variables x1 = d, x2 = g.
 */
[[nodiscard]] inline problem_spec beam_problem(beam_parameters const& b = {}) {
  b.validate();
  using std::numbers::pi;
  problem_spec p;
  p.name = "beam";
  p.n = 2;
  p.k = 2;
  auto const mass = detail::num(pi * b.density * b.length) + "*(x1+x2)*x2";
  auto const deflection = 4.0 * b.force * b.length * b.length * b.length / (3.0 * b.young * pi);
  p.objectives = {expression::parse(mass, 2).negated(), expression::parse(beam_deflection_text(deflection), 2).negated()};
  p.monotone_objectives = {false, true};
  constraint stress;
  stress.expr = expression::parse(detail::num(8.0 * b.force * b.length / pi) + "*(x1+2*x2)/((x1+2*x2)^4-x1^4)", 2);
  stress.bound = b.max_stress;
  stress.monotone = false;
  p.constraints = {stress};
  p.box = {b.d, b.g};
  p.validate();
  return p;
}

/// The order-equivalent deflection objective: -4Fl/(3E pi((d+2g)^4-d^4)).
[[nodiscard]] inline expression beam_replacement_objective(beam_parameters const& b = {}) {
  using std::numbers::pi;
  return expression::parse(beam_deflection_text(4.0 * b.force * b.length / (3.0 * b.young * pi)), 2).negated();
}

/// Multi-constraint knapsack with two profit vectors.
struct knapsack_instance {
  std::vector<std::vector<double>> profits;  // 2 x n
  std::vector<std::vector<double>> weights;  // m x n
  std::vector<double> capacity;              // m
  std::uint64_t seed = 0;

  [[nodiscard]] std::size_t items() const { return profits.empty() ? 0 : profits.front().size(); }

  [[nodiscard]] nlohmann::json to_json() const {
    return {{"profits", profits}, {"weights", weights}, {"capacity", capacity}, {"seed", seed}};
  }
};

/// Profits and weights uniform integers in [1,100]; capacity half the total weight (rounded down).
[[nodiscard]] inline knapsack_instance generate_knapsack(std::size_t n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("knapsack needs at least one item");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coef(1, 100);
  knapsack_instance k;
  k.seed = seed;
  k.profits.assign(2, std::vector<double>(n));
  k.weights.assign(1, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    k.profits[0][i] = coef(rng);
    k.profits[1][i] = coef(rng);
    k.weights[0][i] = coef(rng);
  }
  double total = 0.0;
  for (auto w : k.weights[0]) total += w;
  k.capacity = {std::floor(total / 2.0)};
  return k;
}

namespace detail {

inline std::string linear_text(std::vector<double> const& c) {
  std::string s;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) s += "+";
    s += format_number(c[i]) + "*x" + std::to_string(i + 1);
  }
  return s;
}

}  // namespace detail

/**
 * Maximizes the profit vectors subject to weights * x <= capacity over
 * {0,1}^n, or over [0,1]^n when `binary` is false. Every coefficient must be
 * positive so that objectives and constraints are strongly increasing.
 */
[[nodiscard]] inline problem_spec knapsack_problem(knapsack_instance const& inst, bool binary = true) {
  auto const n = inst.items();
  if (n == 0 || inst.profits.size() < 2) throw problem_error("knapsack needs items and at least two profit vectors");
  if (inst.weights.size() != inst.capacity.size()) throw problem_error("one capacity per weight row");
  auto check_row = [&](std::vector<double> const& row, char const* what) {
    if (row.size() != n) throw problem_error(std::string(what) + " row has the wrong length");
    for (auto v : row) {
      if (!(v > 0.0)) throw problem_error(std::string(what) + " coefficients must be positive");
    }
  };
  for (auto const& r : inst.profits) check_row(r, "profit");
  for (auto const& r : inst.weights) check_row(r, "weight");
  for (auto c : inst.capacity) {
    if (!(c > 0.0)) throw problem_error("capacity must be positive");
  }

  problem_spec p;
  p.name = "knapsack_n" + std::to_string(n) + "_s" + std::to_string(inst.seed);
  p.n = n;
  p.k = inst.profits.size();
  p.binary = binary;
  for (auto const& r : inst.profits) p.objectives.push_back(expression::parse(detail::linear_text(r), n));
  p.monotone_objectives.assign(p.k, true);
  for (std::size_t j = 0; j < inst.weights.size(); ++j) {
    p.constraints.push_back({expression::parse(detail::linear_text(inst.weights[j]), n), inst.capacity[j], true});
  }
  p.box.assign(n, interval{0.0, 1.0, false, false});
  p.validate();
  return p;
}

}  // namespace shells

#endif  // SHELLS_BENCH_PROBLEMS_HPP_
