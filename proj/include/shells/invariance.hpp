#ifndef SHELLS_INVARIANCE_HPP_
#define SHELLS_INVARIANCE_HPP_

#include "dominance.hpp"
#include "errors.hpp"
#include "expression.hpp"
#include "problem.hpp"
#include "shell_conditions.hpp"

#include "json.hpp"

#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace shells {

// ---------------------------------------------------------------------------
// gEUD functions over dose vectors

namespace detail {

inline void require_doses(std::span<double const> d) {
  if (d.empty()) throw std::invalid_argument("empty dose vector");
  for (auto v : d) {
    if (!(v >= 0.0)) throw std::domain_error("dose components must be nonnegative");
  }
}

}  // namespace detail

/// ((1/v) sum d_j^a)^(1/a), a >= 1.
[[nodiscard]] inline double geud_power(std::span<double const> d, double a) {
  detail::require_doses(d);
  if (!(a >= 1.0) || !std::isfinite(a)) throw std::domain_error("gEUD exponent must satisfy 1 <= a < inf");
  double s = 0.0;
  for (auto v : d) s += std::pow(v, a);
  return std::pow(s / static_cast<double>(d.size()), 1.0 / a);
}

/// (1/v) sum d_j.
[[nodiscard]] inline double geud_linear(std::span<double const> d) {
  detail::require_doses(d);
  double s = 0.0;
  for (auto v : d) s += v;
  return s / static_cast<double>(d.size());
}

/// (1/v) sum d_j^a: a strictly increasing transform of geud_power.
[[nodiscard]] inline double geud_power_sum(std::span<double const> d, double a) {
  detail::require_doses(d);
  if (!(a >= 1.0) || !std::isfinite(a)) throw std::domain_error("gEUD exponent must satisfy 1 <= a < inf");
  double s = 0.0;
  for (auto v : d) s += std::pow(v, a);
  return s / static_cast<double>(d.size());
}

// ---------------------------------------------------------------------------
// Order agreement

/// A pair on which the two functions order the points differently.
struct order_violation {
  std::vector<double> u;
  std::vector<double> w;
  double original_u = 0.0;
  double original_w = 0.0;
  double replacement_u = 0.0;
  double replacement_w = 0.0;

  [[nodiscard]] nlohmann::json to_json() const {
    return {{"u", u},
            {"w", w},
            {"original", {original_u, original_w}},
            {"replacement", {replacement_u, replacement_w}}};
  }
};

struct order_verdict {
  std::size_t trials = 0;
  std::size_t compared = 0;  // pairs where both functions were defined
  std::size_t violations = 0;
  std::vector<order_violation> witnesses;

  [[nodiscard]] double agreement() const {
    return compared == 0 ? 1.0 : 1.0 - static_cast<double>(violations) / static_cast<double>(compared);
  }
  [[nodiscard]] bool same_order() const { return violations == 0; }

  [[nodiscard]] nlohmann::json to_json() const {
    nlohmann::json w = nlohmann::json::array();
    for (auto const& v : witnesses) w.push_back(v.to_json());
    return {{"trials", trials},
            {"compared", compared},
            {"violations", violations},
            {"agreement", agreement()},
            {"witnesses", w}};
  }
};

/// Relative tie tolerance for comparing two function values.
inline constexpr double order_tie_tolerance = 1e-12;

/// -1, 0 or +1, treating relative differences below the tie tolerance as 0.
[[nodiscard]] inline int order_sign(double a, double b) {
  auto const scale = std::max(std::abs(a), std::abs(b));
  if (std::abs(a - b) <= order_tie_tolerance * scale) return 0;
  return a < b ? -1 : 1;
}

/**
 * Draws `trials` point pairs with `draw(rng)` and records every pair on which
 * `original` and `replacement` disagree in the sign of their difference.
 * Functions return std::nullopt where undefined; such pairs are skipped.
 */
template <typename Draw, typename F, typename G>
[[nodiscard]] order_verdict same_linear_order_probe(F&& original, G&& replacement, Draw&& draw, std::size_t trials,
                                                    std::uint64_t seed, std::size_t max_witnesses = 8) {
  if (trials < 1) throw std::invalid_argument("probe needs at least one trial");
  std::mt19937_64 rng(seed);
  order_verdict v;
  v.trials = trials;
  for (std::size_t t = 0; t < trials; ++t) {
    std::vector<double> u = draw(rng);
    std::vector<double> w = draw(rng);
    std::optional<double> ou = original(u);
    std::optional<double> ow = original(w);
    std::optional<double> ru = replacement(u);
    std::optional<double> rw = replacement(w);
    if (!ou || !ow || !ru || !rw) continue;
    ++v.compared;
    if (order_sign(*ou, *ow) != order_sign(*ru, *rw)) {
      ++v.violations;
      if (v.witnesses.size() < max_witnesses) v.witnesses.push_back({u, w, *ou, *ow, *ru, *rw});
    }
  }
  return v;
}

/// Expression pair probed over a box (uniform points).
[[nodiscard]] inline order_verdict expression_order_probe(expression const& original, expression const& replacement,
                                                          std::span<interval const> box, std::size_t trials,
                                                          std::uint64_t seed) {
  std::vector<interval> b(box.begin(), box.end());
  auto draw = [&b](std::mt19937_64& rng) {
    std::vector<double> x(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) {
      std::uniform_real_distribution<double> u(b[i].effective_lo(), b[i].effective_hi());
      x[i] = u(rng);
    }
    return x;
  };
  auto wrap = [](expression const& e) {
    return [f = &e](std::vector<double> const& x) -> std::optional<double> {
      auto r = f->evaluate(x);
      if (!r.ok()) return std::nullopt;
      return r.value;
    };
  };
  return same_linear_order_probe(wrap(original), wrap(replacement), draw, trials, seed);
}

/// Uniform dose vectors of length v in [0, max_dose]^v.
[[nodiscard]] inline auto dose_sampler(std::size_t v, double max_dose = 1.0) {
  if (v < 1) throw std::invalid_argument("dose vector length must be positive");
  return [v, max_dose](std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, max_dose);
    std::vector<double> d(v);
    for (auto& x : d) x = u(rng);
    return d;
  };
}

/// Order agreement of the power-mean gEUD and the arithmetic mean.
[[nodiscard]] inline order_verdict geud_order_probe(std::size_t v, double a, std::size_t trials, std::uint64_t seed) {
  return same_linear_order_probe([a](std::vector<double> const& d) -> std::optional<double> { return geud_power(d, a); },
                                 [](std::vector<double> const& d) -> std::optional<double> { return geud_linear(d); },
                                 dose_sampler(v), trials, seed);
}

// ---------------------------------------------------------------------------
// Problem-level invariance

/// Copy of `p` with objective `l` (0-based) replaced.
[[nodiscard]] inline problem_spec replace_objective(problem_spec const& p, std::size_t l, expression e,
                                                   std::optional<bool> monotone = std::nullopt) {
  if (l >= p.k) throw std::out_of_range("objective index out of range");
  if (e.empty() || e.arity() > p.n) throw problem_error("replacement references a variable outside x1..xn");
  problem_spec q = p;
  q.objectives[l] = std::move(e);
  if (monotone) q.monotone_objectives[l] = *monotone;
  return q;
}

struct agreement_result {
  std::size_t trials = 0;
  std::size_t compared = 0;
  std::size_t disagreements = 0;
  std::vector<std::pair<std::vector<double>, std::vector<double>>> witnesses;

  [[nodiscard]] double agreement() const {
    return compared == 0 ? 1.0 : 1.0 - static_cast<double>(disagreements) / static_cast<double>(compared);
  }

  [[nodiscard]] nlohmann::json to_json() const {
    nlohmann::json w = nlohmann::json::array();
    for (auto const& [u, v] : witnesses) w.push_back({{"u", u}, {"w", v}});
    return {{"trials", trials},
            {"compared", compared},
            {"disagreements", disagreements},
            {"agreement", agreement()},
            {"witnesses", w}};
  }
};

/// Fraction of random box pairs (u, w) with compare(f(u), f(w)) equal under both problems.
[[nodiscard]] inline agreement_result dominance_agreement(problem_spec const& p, problem_spec const& q,
                                                          std::size_t trials, std::uint64_t seed,
                                                          std::size_t max_witnesses = 8) {
  if (p.n != q.n || p.k != q.k) throw precondition_error("problems differ in dimension");
  std::mt19937_64 rng(seed);
  agreement_result r;
  r.trials = trials;
  for (std::size_t t = 0; t < trials; ++t) {
    auto u = random_point(p, rng);
    auto w = random_point(p, rng);
    auto pu = evaluate(p, u);
    auto pw = evaluate(p, w);
    auto qu = evaluate(q, u);
    auto qw = evaluate(q, w);
    if (!pu.has_objectives() || !pw.has_objectives() || !qu.has_objectives() || !qw.has_objectives()) continue;
    ++r.compared;
    if (compare(pu.fx, pw.fx) != compare(qu.fx, qw.fx)) {
      ++r.disagreements;
      if (r.witnesses.size() < max_witnesses) r.witnesses.emplace_back(u, w);
    }
  }
  return r;
}

struct invariance_report {
  validation_report original;
  validation_report replaced;

  /// Both pass and every condition has the same verdict.
  [[nodiscard]] bool pass() const {
    return original.pass() && replaced.pass() && original.verdicts() == replaced.verdicts();
  }

  [[nodiscard]] nlohmann::json to_json() const {
    return {{"pass", pass()}, {"original", original.to_json()}, {"replaced", replaced.to_json()}};
  }
};

/**
 * Runs the validator for `role` under both problems. `reference` is the lower
 * shell for upper approximations and the efficient set for upper shells; it is
 * re-evaluated under each problem.
 */
[[nodiscard]] inline invariance_report check_invariance(std::span<candidate_solution const> set, shell_role role,
                                                        problem_spec const& p, problem_spec const& q,
                                                        std::span<candidate_solution const> reference = {}) {
  if (!same_feasible_set(p, q)) throw precondition_error("problems do not share the same feasible set");
  if (p.k != q.k) throw precondition_error("problems differ in objective count");

  auto under = [&](problem_spec const& problem) {
    switch (role) {
      case shell_role::lower_shell:
        return check_lower_shell(set, problem);
      case shell_role::upper_approximation:
        return check_upper_approximation(set, reference, problem);
      case shell_role::upper_shell: {
        std::vector<candidate_solution> efficient;
        for (auto const& e : reference) efficient.push_back(evaluate(problem, e.x));
        return check_upper_shell_oracle(set, efficient, problem);
      }
    }
    throw std::logic_error("unknown role");
  };
  return {under(p), under(q)};
}

// ---------------------------------------------------------------------------
// Timing

struct timing_result {
  std::size_t v = 0;
  double a = 0.0;
  std::size_t evaluations = 0;
  double power_seconds = 0.0;
  double linear_seconds = 0.0;

  [[nodiscard]] double ratio() const { return linear_seconds > 0.0 ? power_seconds / linear_seconds : 0.0; }

  [[nodiscard]] nlohmann::json to_json() const {
    return {{"v", v},
            {"a", a},
            {"evaluations", evaluations},
            {"power_seconds", power_seconds},
            {"linear_seconds", linear_seconds},
            {"ratio", ratio()},
            {"reference_ratio", 23}};
  }
};

/// Wall-clock cost of `evaluations` calls of each gEUD form on one random dose vector.
[[nodiscard]] inline timing_result geud_timing(std::size_t v, double a, std::size_t evaluations = 20000,
                                               std::uint64_t seed = 42) {
  if (evaluations < 1) throw std::invalid_argument("timing needs at least one evaluation");
  std::mt19937_64 rng(seed);
  auto d = dose_sampler(v)(rng);
  timing_result t{v, a, evaluations, 0.0, 0.0};
  volatile double sink = 0.0;
  using clock = std::chrono::steady_clock;

  auto start = clock::now();
  for (std::size_t i = 0; i < evaluations; ++i) {
    d[i % v] += 1e-12;
    sink = sink + geud_power(d, a);
  }
  t.power_seconds = std::chrono::duration<double>(clock::now() - start).count();

  start = clock::now();
  for (std::size_t i = 0; i < evaluations; ++i) {
    d[i % v] += 1e-12;
    sink = sink + geud_linear(d);
  }
  t.linear_seconds = std::chrono::duration<double>(clock::now() - start).count();
  return t;
}

}  // namespace shells

#endif  // SHELLS_INVARIANCE_HPP_
