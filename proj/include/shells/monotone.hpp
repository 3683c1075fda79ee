#ifndef SHELLS_MONOTONE_HPP_
#define SHELLS_MONOTONE_HPP_

#include "archive.hpp"
#include "candidate.hpp"
#include "errors.hpp"
#include "expression.hpp"
#include "problem.hpp"

#include "json.hpp"

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace shells {

/// A pair x <= x', x != x' with phi(x) >= phi(x').
struct monotonicity_witness {
  std::vector<double> lower;
  std::vector<double> upper;
  double value_lower = 0.0;
  double value_upper = 0.0;

  [[nodiscard]] nlohmann::json to_json() const {
    return {{"x", lower}, {"x_shifted", upper}, {"value", value_lower}, {"value_shifted", value_upper}};
  }
};

/**
 * Outcome of random falsification. A nonempty `violations` list is a proof
 * that the function is not strongly increasing; an empty one is only support.
 */
struct monotonicity_verdict {
  bool declared = false;
  std::size_t probe_trials = 0;
  std::size_t skipped = 0;  // pairs with a domain error at either end
  std::vector<monotonicity_witness> violations;

  [[nodiscard]] bool supported() const { return violations.empty(); }
  [[nodiscard]] bool accepted() const { return declared && supported(); }
};

/// The probing region: each interval doubled upward, [lo, hi + width].
[[nodiscard]] inline std::vector<interval> probe_region(std::span<interval const> box) {
  std::vector<interval> out;
  for (auto const& b : box) {
    auto const lo = b.effective_lo();
    auto const hi = b.effective_hi();
    out.push_back({lo, hi + (hi - lo), false, false});
  }
  return out;
}

/**
 * Samples pairs x <= x' = x + delta (delta >= 0, delta != 0) and records
 * every pair with phi(x) >= phi(x'). Half of the shifts move a single
 * coordinate; the rest move a random nonempty subset. Shift magnitudes are
 * log-uniform between 1e-6 and 1 times the interval width.
 */
[[nodiscard]] inline monotonicity_verdict probe_strong_monotonicity(expression const& phi,
                                                                    std::span<interval const> box,
                                                                    std::size_t trials, std::uint64_t seed,
                                                                    bool declared = true,
                                                                    std::size_t max_witnesses = 8) {
  if (trials < 1) throw std::invalid_argument("probe needs at least one trial");
  monotonicity_verdict v;
  v.declared = declared;
  v.probe_trials = trials;
  auto const region = probe_region(box);
  auto const n = region.size();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> coord(0, n - 1);

  std::vector<double> x(n);
  std::vector<double> xs(n);
  for (std::size_t t = 0; t < trials; ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = region[i].lo + unit(rng) * region[i].width();
    }
    xs = x;
    auto magnitude = [&](std::size_t i) {
      auto const w = region[i].width() > 0.0 ? region[i].width() : 1.0;
      return w * std::pow(10.0, -6.0 * unit(rng));
    };
    if (unit(rng) < 0.5 || n == 1) {
      auto const i = coord(rng);
      xs[i] += magnitude(i);
    } else {
      bool moved = false;
      for (std::size_t i = 0; i < n; ++i) {
        if (unit(rng) < 0.5) {
          xs[i] += magnitude(i);
          moved = true;
        }
      }
      if (!moved) {
        auto const i = coord(rng);
        xs[i] += magnitude(i);
      }
    }
    if (xs == x) continue;  // shift vanished in rounding
    auto a = phi.evaluate(x);
    auto b = phi.evaluate(xs);
    if (!a.ok() || !b.ok()) {
      ++v.skipped;
      continue;
    }
    if (a.value >= b.value && v.violations.size() < max_witnesses) {
      v.violations.push_back({x, xs, a.value, b.value});
    }
  }
  return v;
}

/**
 * Ray search parameters. Steps are fractions of each interval's width; the
 * first step is `initial_step` and grows by `growth` until the point leaves
 * X_0, after which bisection narrows the bracket to `refine_tolerance`
 * relative. `random_directions` adds that many random positive directions
 * per seed after the coordinate and all-ones rays.
 */
struct shift_schedule {
  double initial_step = 1e-3;
  double growth = 2.0;
  std::size_t max_steps = 60;
  double refine_tolerance = 1e-3;
  std::size_t random_directions = 0;

  void validate() const {
    if (!(initial_step > 0.0)) throw std::invalid_argument("shift step must be positive (delta != 0)");
    if (!(growth > 1.0)) throw std::invalid_argument("shift growth must exceed 1");
    if (max_steps < 1) throw std::invalid_argument("shift schedule needs at least one step");
    if (!(refine_tolerance > 0.0)) throw std::invalid_argument("refine tolerance must be positive");
  }
};

struct shifted_candidate {
  candidate_solution candidate;
  std::size_t seed_index = 0;
};

[[nodiscard]] inline auto objective_span(shifted_candidate const& s) -> std::span<double const> {
  return s.candidate.fx.values();
}

namespace detail {

inline std::vector<std::vector<double>> shift_directions(problem_spec const& p, shift_schedule const& s,
                                                         std::mt19937_64& rng) {
  std::vector<std::vector<double>> dirs;
  for (std::size_t i = 0; i < p.n; ++i) {
    std::vector<double> d(p.n, 0.0);
    d[i] = 1.0;
    dirs.push_back(std::move(d));
  }
  if (p.n > 1) dirs.emplace_back(p.n, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t r = 0; r < s.random_directions; ++r) {
    std::vector<double> d(p.n);
    for (auto& v : d) v = unit(rng);
    dirs.push_back(std::move(d));
  }
  return dirs;
}

// Moves from `origin` along `dir` (scaled by interval widths) until the point is
// accepted; returns the first accepted point after bisection, or nothing.
template <typename Accept>
std::optional<candidate_solution> ray_search(problem_spec const& p, std::vector<double> const& origin,
                                             std::vector<double> const& dir, shift_schedule const& s,
                                             Accept&& accept) {
  auto at = [&](double t) {
    std::vector<double> x(origin);
    for (std::size_t i = 0; i < p.n; ++i) {
      auto const w = p.box[i].width() > 0.0 ? p.box[i].width() : 1.0;
      x[i] += t * w * dir[i];
    }
    return x;
  };
  double inside = 0.0;
  double step = s.initial_step;
  for (std::size_t k = 0; k < s.max_steps; ++k, step *= s.growth) {
    auto c = evaluate(p, at(step));
    if (!c.has_objectives()) return std::nullopt;
    if (!accept(c)) {
      inside = step;
      continue;
    }
    double outside = step;
    while (outside - inside > s.refine_tolerance * outside) {
      auto const mid = 0.5 * (inside + outside);
      auto m = evaluate(p, at(mid));
      if (!m.has_objectives()) break;
      if (accept(m)) {
        outside = mid;
        c = std::move(m);
      } else {
        inside = mid;
      }
    }
    return c;
  }
  return std::nullopt;
}

}  // namespace detail

/// Pass/fail of the monotonicity declarations and probes a construction needs.
struct construction_refusal {
  std::string reason;
  std::string subject;  // e.g. "objective 1", "constraint 2"
  std::optional<monotonicity_witness> witness;

  [[nodiscard]] nlohmann::json to_json() const {
    return {{"reason", reason},
            {"subject", subject},
            {"witness", witness ? witness->to_json() : nlohmann::json(nullptr)}};
  }
};

[[nodiscard]] inline std::string refusal_reason(monotonicity_verdict const& v) {
  if (!v.declared && !v.supported()) return "not declared strongly increasing; probe found a violation";
  if (!v.declared) return "not declared strongly increasing";
  return "probe found a violation of strong monotonicity";
}

/**
 * Upward shifts of lower-shell elements that leave X_0. Needs at least one
 * objective declared and probed strongly increasing; each returned point is
 * then not dominated by its own seed. It can still be dominated by other
 * efficient points, so callers filter.
 */
[[nodiscard]] inline std::vector<shifted_candidate> shift_candidates(std::span<candidate_solution const> seeds,
                                                                     problem_spec const& p,
                                                                     shift_schedule const& schedule,
                                                                     std::uint64_t seed,
                                                                     std::size_t probe_trials = 10000) {
  schedule.validate();
  bool any = false;
  for (std::size_t l = 0; l < p.k && !any; ++l) {
    any = p.monotone_objectives[l] &&
          probe_strong_monotonicity(p.objectives[l], p.box, probe_trials, seed + l).supported();
  }
  if (!any) throw precondition_error("no objective is declared and probed strongly increasing");

  std::mt19937_64 rng(seed);
  std::vector<shifted_candidate> out;
  auto const dirs = detail::shift_directions(p, schedule, rng);
  for (std::size_t s = 0; s < seeds.size(); ++s) {
    auto const& origin = seeds[s].x;
    if (p.binary) {
      for (std::size_t i = 0; i < p.n; ++i) {
        if (origin[i] != 0.0) continue;
        auto x = origin;
        x[i] = 1.0;
        auto c = evaluate(p, x);
        if (c.outside()) out.push_back({std::move(c), s});
      }
      continue;
    }
    for (auto const& d : dirs) {
      auto c = detail::ray_search(p, origin, d, schedule, [](candidate_solution const& c) { return c.outside(); });
      if (c) out.push_back({std::move(*c), s});
    }
  }
  return out;
}

struct construction_result {
  std::vector<shifted_candidate> shell;
  std::optional<construction_refusal> refusal;
  std::vector<monotonicity_verdict> objective_verdicts;
  std::vector<monotonicity_verdict> constraint_verdicts;
  std::size_t generated = 0;  // distinct candidates before the antichain prune

  [[nodiscard]] bool refused() const { return refusal.has_value(); }

  [[nodiscard]] std::vector<candidate_solution> candidates() const {
    std::vector<candidate_solution> v;
    for (auto const& s : shell) v.push_back(s.candidate);
    return v;
  }
};

/**
 * Upper shell from a budget constraint g(x) <= b. Requires every objective
 * and every constraint to be declared and probed strongly increasing; refuses
 * otherwise, carrying the probe's witness. Each seed is shifted upward until
 * some constraint is exceeded; the results are pruned to an antichain and
 * each keeps a seed it strictly dominates.
 *
 * With seeds drawn from the efficient set the output is an upper shell; with
 * seeds from a lower shell it is an upper approximation of that shell.
 */
[[nodiscard]] inline construction_result construct_upper_shell_budget(problem_spec const& p,
                                                                      std::span<candidate_solution const> seeds,
                                                                      shift_schedule const& schedule,
                                                                      std::uint64_t seed,
                                                                      std::size_t probe_trials = 10000) {
  schedule.validate();
  construction_result out;
  for (std::size_t l = 0; l < p.k; ++l) {
    auto v = probe_strong_monotonicity(p.objectives[l], p.box, probe_trials, seed + l, p.monotone_objectives[l]);
    out.objective_verdicts.push_back(v);
    if (!out.refusal && !v.accepted()) {
      out.refusal = construction_refusal{
          refusal_reason(v),
          "objective " + std::to_string(l + 1),
          v.violations.empty() ? std::nullopt : std::optional(v.violations.front())};
    }
  }
  if (p.constraints.empty() && !out.refusal) {
    out.refusal = construction_refusal{"no budget constraint g(x) <= b", "constraints", std::nullopt};
  }
  for (std::size_t j = 0; j < p.constraints.size(); ++j) {
    auto v = probe_strong_monotonicity(p.constraints[j].expr, p.box, probe_trials, seed + p.k + j,
                                       p.constraints[j].monotone);
    out.constraint_verdicts.push_back(v);
    if (!out.refusal && !v.accepted()) {
      out.refusal = construction_refusal{
          refusal_reason(v),
          "constraint " + std::to_string(j + 1),
          v.violations.empty() ? std::nullopt : std::optional(v.violations.front())};
    }
  }
  if (out.refused()) return out;

  for (auto const& s : seeds) {
    if (!evaluate(p, s.x).feasible()) throw precondition_error("construction seed is not feasible");
  }

  auto budget_exceeded = [&](candidate_solution const& c) {
    for (auto const& con : p.constraints) {
      auto r = con.expr.evaluate(c.x);
      if (r.ok() && r.value > con.bound + feasibility_tolerance(con.bound)) return true;
    }
    return false;
  };

  std::mt19937_64 rng(seed);
  std::vector<shifted_candidate> generated;
  std::set<std::vector<double>> seen;  // several seeds can reach the same point
  auto keep = [&](candidate_solution c, std::size_t s) {
    if (seen.insert(c.x).second) generated.push_back({std::move(c), s});
  };
  auto const dirs = detail::shift_directions(p, schedule, rng);
  for (std::size_t s = 0; s < seeds.size(); ++s) {
    auto const& origin = seeds[s].x;
    if (p.binary) {
      for (std::size_t i = 0; i < p.n; ++i) {
        if (origin[i] != 0.0) continue;
        auto x = origin;
        x[i] = 1.0;
        auto c = evaluate(p, x);
        if (c.has_objectives() && budget_exceeded(c)) keep(std::move(c), s);
      }
      continue;
    }
    for (auto const& d : dirs) {
      auto c = detail::ray_search(p, origin, d, schedule, budget_exceeded);
      if (c) keep(std::move(*c), s);
    }
  }
  out.generated = generated.size();
  out.shell = prune_to_antichain(std::move(generated));
  return out;
}

}  // namespace shells

#endif  // SHELLS_MONOTONE_HPP_
