#ifndef SHELLS_RELAXATION_HPP_
#define SHELLS_RELAXATION_HPP_

#include "archive.hpp"
#include "candidate.hpp"
#include "errors.hpp"
#include "problem.hpp"
#include "sampler.hpp"
#include "shell_conditions.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <future>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

namespace shells {

/// Candidates of a relaxed lower shell that form an upper approximation, with the discard tally.
struct theta_result {
  std::vector<candidate_solution> theta;
  std::size_t discarded_feasible = 0;   // not outside X_0
  std::size_t discarded_dominated = 0;  // dominated by the lower shell
  std::size_t discarded_nadir = 0;      // not above the lower shell's nadir
  std::size_t source_size = 0;

  [[nodiscard]] nlohmann::json to_json() const {
    return {{"theta_size", theta.size()},
            {"discarded_feasible", discarded_feasible},
            {"discarded_dominated", discarded_dominated},
            {"discarded_nadir", discarded_nadir},
            {"source_size", source_size}};
  }
};

/**
 * Keeps the elements x of `relaxed_shell` with x outside X_0, f(x) not
 * dominated by any element of `shell`, and y_nad(shell) << f(x). The result
 * is an antichain because it is a subset of a lower shell.
 */
[[nodiscard]] inline theta_result extract_theta(std::span<candidate_solution const> relaxed_shell,
                                                std::span<candidate_solution const> shell, problem_spec const& p,
                                                problem_spec const& relaxed) {
  auto const lower = check_lower_shell(shell, p);
  if (!lower.pass()) throw precondition_error("shell is not a lower shell: " + lower.to_json().dump());
  auto const relaxed_lower = check_lower_shell(relaxed_shell, relaxed);
  if (!relaxed_lower.pass()) {
    throw precondition_error("relaxed shell is not a lower shell of the relaxed problem: " +
                             relaxed_lower.to_json().dump());
  }

  theta_result out;
  out.source_size = relaxed_shell.size();
  auto const nad = nadir(shell);
  dominator_index<candidate_solution> const dominators(shell);
  for (auto const& x : relaxed_shell) {
    auto c = evaluate(p, x.x);
    if (c.where != region::outside) {
      ++out.discarded_feasible;
      continue;
    }
    auto y = objective_span(c);
    if (dominators.find(y)) {
      ++out.discarded_dominated;
      continue;
    }
    if (!dominated_by(nad.values(), y)) {
      ++out.discarded_nadir;
      continue;
    }
    out.theta.push_back(std::move(c));
  }
  return out;
}

struct objective_bounds {
  double lower = 0.0;  // min over f_l(S_L)
  std::optional<double> upper;  // max over f_l(theta)
};

struct two_sided_result {
  std::vector<candidate_solution> shell;
  std::vector<candidate_solution> relaxed_shell;
  theta_result theta;
  std::optional<validation_report> report;  // present when theta is nonempty
  std::vector<objective_bounds> bounds;
  std::optional<double> gap;  // max over theta of the Chebyshev distance to the nearest shell image
  problem_spec relaxed;

  [[nodiscard]] bool pass() const { return !report || report->pass(); }

  [[nodiscard]] nlohmann::json metrics_json() const {
    nlohmann::json b = nlohmann::json::array();
    for (auto const& o : bounds) {
      b.push_back({{"lower_min_over_shell", o.lower},
                   {"upper_max_over_theta", o.upper ? nlohmann::json(*o.upper) : nlohmann::json(nullptr)}});
    }
    return {{"shell_size", shell.size()},
            {"relaxed_shell_size", relaxed_shell.size()},
            {"theta", theta.to_json()},
            {"descriptive_bounds", b},
            {"gap", gap ? nlohmann::json(*gap) : nlohmann::json(nullptr)}};
  }
};

/// max over a in A of the Chebyshev distance from f(a) to the nearest f(s), s in S.
[[nodiscard]] inline double chebyshev_gap(std::span<candidate_solution const> a, std::span<candidate_solution const> s) {
  if (s.empty()) throw precondition_error("gap against an empty set");
  // Sorted by f1, the scan around each query stops once |f1 difference| alone exceeds the best distance.
  std::vector<std::size_t> order(s.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return s[i].fx[0] < s[j].fx[0]; });
  auto distance = [](candidate_solution const& u, candidate_solution const& v) {
    double d = 0.0;
    for (std::size_t l = 0; l < u.fx.size(); ++l) d = std::max(d, std::abs(u.fx[l] - v.fx[l]));
    return d;
  };
  double gap = 0.0;
  for (auto const& t : a) {
    auto const pos = static_cast<std::size_t>(
        std::lower_bound(order.begin(), order.end(), t.fx[0], [&](std::size_t i, double v) { return s[i].fx[0] < v; }) -
        order.begin());
    double nearest = std::numeric_limits<double>::infinity();
    for (auto i = pos; i < order.size() && s[order[i]].fx[0] - t.fx[0] < nearest; ++i) {
      nearest = std::min(nearest, distance(t, s[order[i]]));
    }
    for (auto i = pos; i > 0 && t.fx[0] - s[order[i - 1]].fx[0] < nearest; --i) {
      nearest = std::min(nearest, distance(t, s[order[i - 1]]));
    }
    gap = std::max(gap, nearest);
  }
  return gap;
}

/**
 * Samples a lower shell of `p` and of its relaxation, then extracts theta and
 * validates it as an upper approximation. The relaxed run uses seed + 1.
 * With `jobs` > 1 the two sampler runs execute concurrently.
 */
[[nodiscard]] inline two_sided_result run_two_sided(problem_spec const& p, relaxation_descriptor const& r,
                                                    sampler_config const& cfg, std::size_t jobs = 1) {
  cfg.validate();
  two_sided_result out;
  out.relaxed = relax(p, r);
  auto relaxed_cfg = cfg;
  relaxed_cfg.seed = cfg.seed + 1;

  if (jobs > 1) {
    auto relaxed_future = std::async(std::launch::async, [&] { return sample_lower_shell(out.relaxed, relaxed_cfg); });
    out.shell = sample_lower_shell(p, cfg);
    out.relaxed_shell = relaxed_future.get();
  } else {
    out.shell = sample_lower_shell(p, cfg);
    out.relaxed_shell = sample_lower_shell(out.relaxed, relaxed_cfg);
  }

  out.theta = extract_theta(out.relaxed_shell, out.shell, p, out.relaxed);
  if (!out.theta.theta.empty()) {
    out.report = check_upper_approximation(out.theta.theta, out.shell, p);
  }

  for (std::size_t l = 0; l < p.k; ++l) {
    objective_bounds b;
    b.lower = std::min_element(out.shell.begin(), out.shell.end(), [&](auto const& a, auto const& c) {
                return a.fx[l] < c.fx[l];
              })->fx[l];
    if (!out.theta.theta.empty()) {
      b.upper = std::max_element(out.theta.theta.begin(), out.theta.theta.end(), [&](auto const& a, auto const& c) {
                  return a.fx[l] < c.fx[l];
                })->fx[l];
    }
    out.bounds.push_back(b);
  }
  if (!out.theta.theta.empty()) out.gap = chebyshev_gap(out.theta.theta, out.shell);
  return out;
}

}  // namespace shells

#endif  // SHELLS_RELAXATION_HPP_
