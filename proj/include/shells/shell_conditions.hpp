#ifndef SHELLS_SHELL_CONDITIONS_HPP_
#define SHELLS_SHELL_CONDITIONS_HPP_

#include "archive.hpp"
#include "candidate.hpp"
#include "dominance.hpp"
#include "errors.hpp"
#include "problem.hpp"

#include "json.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace shells {

enum class shell_role { lower_shell, upper_shell, upper_approximation };

[[nodiscard]] inline auto to_string(shell_role r) -> std::string {
  switch (r) {
    case shell_role::lower_shell:
      return "lower_shell";
    case shell_role::upper_shell:
      return "upper_shell";
    case shell_role::upper_approximation:
      return "upper_approximation";
  }
  return "unknown";
}

[[nodiscard]] inline auto parse_role(std::string_view s) -> shell_role {
  if (s == "lower_shell") return shell_role::lower_shell;
  if (s == "upper_shell") return shell_role::upper_shell;
  if (s == "upper_approximation") return shell_role::upper_approximation;
  throw std::invalid_argument("unknown role '" + std::string(s) + "'");
}

/// Condition identifiers used as report keys.
namespace condition {
inline constexpr char const* lower_feasible = "LS-feasible";
inline constexpr char const* lower_antichain = "LS-2";
inline constexpr char const* upper_outside = "US-outside";
inline constexpr char const* upper_antichain = "US-3";
inline constexpr char const* upper_undominated = "US-4";
inline constexpr char const* upper_above_nadir = "US-5";
inline constexpr char const* approx_outside = "UA-outside";
inline constexpr char const* approx_antichain = "UA-6";
inline constexpr char const* approx_undominated = "UA-7";
inline constexpr char const* approx_above_nadir = "UA-8";
inline constexpr char const* outer_region = "L1-region";
inline constexpr char const* image_disjoint = "L2-disjoint";
inline constexpr char const* strict_outer = "L3-strict-outer";
inline constexpr char const* dominates_efficient = "C16-strong";
}  // namespace condition

/// Element that breaks a condition; `partner` is the counterexample, when there is one.
struct witness {
  std::size_t element = 0;
  std::optional<std::size_t> partner;
  std::string detail;
};

struct condition_result {
  bool pass = true;
  std::size_t failures = 0;
  std::vector<witness> witnesses;

  void fail(witness w, std::size_t max_witnesses) {
    pass = false;
    ++failures;
    if (witnesses.size() < max_witnesses) witnesses.push_back(std::move(w));
  }
};

struct validation_report {
  shell_role role = shell_role::lower_shell;
  std::map<std::string, condition_result> conditions;
  std::size_t elements_checked = 0;
  double tolerance = 0.0;

  [[nodiscard]] bool pass() const {
    return std::all_of(conditions.begin(), conditions.end(), [](auto const& kv) { return kv.second.pass; });
  }

  [[nodiscard]] condition_result const& at(std::string const& id) const { return conditions.at(id); }

  /// Per-condition verdicts without witnesses, for comparing two reports.
  [[nodiscard]] std::map<std::string, bool> verdicts() const {
    std::map<std::string, bool> v;
    for (auto const& [id, r] : conditions) v[id] = r.pass;
    return v;
  }

  [[nodiscard]] nlohmann::json to_json() const {
    nlohmann::json j;
    j["role"] = to_string(role);
    j["pass"] = pass();
    j["elements_checked"] = elements_checked;
    j["tolerance"] = tolerance;
    auto& conds = j["conditions"] = nlohmann::json::object();
    for (auto const& [id, r] : conditions) {
      nlohmann::json c;
      c["pass"] = r.pass;
      c["failures"] = r.failures;
      c["witnesses"] = nlohmann::json::array();
      for (auto const& w : r.witnesses) {
        nlohmann::json wj;
        wj["element"] = w.element;
        wj["partner"] = w.partner ? nlohmann::json(*w.partner) : nlohmann::json(nullptr);
        wj["detail"] = w.detail;
        c["witnesses"].push_back(std::move(wj));
      }
      conds[id] = std::move(c);
    }
    return j;
  }
};

struct check_options {
  /// Slack for oracle comparisons: the oracle front is treated as possibly
  /// `tolerance` higher in every component than enumerated.
  double tolerance = 0.0;
  /// Read y_nad << f(a) as strict in every component.
  bool strict_nadir = false;
  std::size_t max_witnesses = 16;
};

namespace detail {

inline std::string describe(std::span<double const> y) {
  std::string s = "(";
  for (std::size_t l = 0; l < y.size(); ++l) {
    if (l) s += ", ";
    s += format_number(y[l]);
  }
  return s + ")";
}

template <typename T>
void antichain_condition(std::span<T const> set, condition_result& out, std::size_t max_witnesses) {
  bool biobjective = !set.empty();
  for (auto const& a : set) biobjective = biobjective && objective_span(a).size() == 2;
  if (!biobjective) {
    for (std::size_t i = 0; i < set.size(); ++i) {
      for (std::size_t j = 0; j < set.size(); ++j) {
        if (i != j && dominated_by(objective_span(set[i]), objective_span(set[j]))) {
          out.fail({i, j, "element " + std::to_string(i) + " is dominated by element " + std::to_string(j)},
                   max_witnesses);
          break;
        }
      }
    }
    return;
  }

  // Descending lexicographic sweep: an element is dominated iff an earlier,
  // different element has an f2 at least as large.
  std::vector<std::size_t> order(set.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    auto ya = objective_span(set[a]);
    auto yb = objective_span(set[b]);
    return std::lexicographical_compare(yb.begin(), yb.end(), ya.begin(), ya.end());
  });
  std::vector<std::pair<std::size_t, std::size_t>> dominated;
  std::optional<std::size_t> best;
  for (std::size_t g = 0; g < order.size();) {
    auto const yg = objective_span(set[order[g]]);
    auto e = g;
    while (e < order.size() && std::ranges::equal(objective_span(set[order[e]]), yg)) ++e;
    if (best && objective_span(set[*best])[1] >= yg[1]) {
      for (auto j = g; j < e; ++j) dominated.emplace_back(order[j], *best);
    }
    if (!best || objective_span(set[*best])[1] < yg[1]) best = order[g];
    g = e;
  }
  std::sort(dominated.begin(), dominated.end());
  for (auto [i, j] : dominated) {
    out.fail({i, j, "element " + std::to_string(i) + " is dominated by element " + std::to_string(j)}, max_witnesses);
  }
}

// nadir << y, or nadir < y in every component when strict.
inline bool above_nadir(std::span<double const> nad, std::span<double const> y, double raise, bool strict) {
  if (strict) {
    for (std::size_t l = 0; l < y.size(); ++l) {
      if (!(nad[l] + raise < y[l])) return false;
    }
    return true;
  }
  return dominated_by_raised(nad, y, -raise);
}

inline void outside_condition(std::span<candidate_solution const> set, condition_result& out,
                              std::size_t max_witnesses) {
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (set[i].where != region::outside) {
      out.fail({i, std::nullopt, "element is " + to_string(set[i].where) + ", not outside X_0"}, max_witnesses);
    }
  }
}

inline void require_objectives(std::span<candidate_solution const> set, char const* what) {
  for (auto const& c : set) {
    if (!c.has_objectives()) throw precondition_error(std::string(what) + " contains an unevaluated element");
  }
}

}  // namespace detail

/// Every element feasible and no element dominated by another.
[[nodiscard]] inline validation_report check_lower_shell(std::span<candidate_solution const> shell,
                                                         problem_spec const& p, check_options const& opt = {}) {
  if (shell.empty()) throw precondition_error("a lower shell is a finite nonempty set");
  validation_report r;
  r.role = shell_role::lower_shell;
  r.elements_checked = shell.size();
  auto& feas = r.conditions[condition::lower_feasible];
  std::vector<candidate_solution> fresh;
  fresh.reserve(shell.size());
  for (std::size_t i = 0; i < shell.size(); ++i) {
    fresh.push_back(evaluate(p, shell[i].x));
    if (!fresh.back().feasible()) {
      feas.fail({i, std::nullopt, "element is " + to_string(fresh.back().where) + " (violation " +
                                      format_number(fresh.back().violation) + ")"},
                opt.max_witnesses);
    }
  }
  auto& anti = r.conditions[condition::lower_antichain];
  std::vector<candidate_solution> evaluated;
  std::vector<std::size_t> index;
  for (std::size_t i = 0; i < fresh.size(); ++i) {
    if (fresh[i].has_objectives()) {
      evaluated.push_back(fresh[i]);
      index.push_back(i);
    }
  }
  condition_result local;
  detail::antichain_condition<candidate_solution>(evaluated, local, opt.max_witnesses);
  anti.pass = local.pass;
  anti.failures = local.failures;
  for (auto w : local.witnesses) {
    w.element = index[w.element];
    w.partner = index[*w.partner];
    anti.witnesses.push_back(std::move(w));
  }
  return r;
}

/**
 * Upper approximation with respect to the lower shell `lower`: every element
 * outside X_0, an antichain, undominated by `lower`, and above its nadir.
 */
[[nodiscard]] inline validation_report check_upper_approximation(std::span<candidate_solution const> set,
                                                                 std::span<candidate_solution const> lower,
                                                                 problem_spec const& p,
                                                                 check_options const& opt = {}) {
  if (set.empty()) throw precondition_error("an upper approximation is a finite nonempty set");
  auto const lower_report = check_lower_shell(lower, p, opt);
  if (!lower_report.pass()) {
    throw precondition_error("the reference set is not a lower shell: " + lower_report.to_json().dump());
  }
  std::vector<candidate_solution> fresh;
  for (auto const& a : set) fresh.push_back(evaluate(p, a.x));
  std::vector<candidate_solution> reference;
  for (auto const& s : lower) reference.push_back(evaluate(p, s.x));

  validation_report r;
  r.role = shell_role::upper_approximation;
  r.elements_checked = set.size();
  detail::outside_condition(fresh, r.conditions[condition::approx_outside], opt.max_witnesses);

  std::vector<candidate_solution> evaluated;
  std::vector<std::size_t> index;
  for (std::size_t i = 0; i < fresh.size(); ++i) {
    if (fresh[i].has_objectives()) {
      evaluated.push_back(fresh[i]);
      index.push_back(i);
    }
  }
  condition_result anti;
  detail::antichain_condition<candidate_solution>(evaluated, anti, opt.max_witnesses);
  for (auto& w : anti.witnesses) {
    w.element = index[w.element];
    w.partner = index[*w.partner];
  }
  r.conditions[condition::approx_antichain] = anti;

  auto& undom = r.conditions[condition::approx_undominated];
  auto& above = r.conditions[condition::approx_above_nadir];
  auto const nad = nadir(reference);
  dominator_index<candidate_solution> const dominators(reference);
  for (std::size_t e = 0; e < evaluated.size(); ++e) {
    auto y = objective_span(evaluated[e]);
    if (auto s = dominators.find(y)) {
      undom.fail({index[e], *s, "f(a) = " + detail::describe(y) + " is dominated by lower-shell element " +
                                    std::to_string(*s)},
                 opt.max_witnesses);
    }
    if (!detail::above_nadir(nad.values(), y, 0.0, opt.strict_nadir)) {
      above.fail({index[e], std::nullopt,
                  "f(a) = " + detail::describe(y) + " is not above the nadir " + detail::describe(nad.values())},
                 opt.max_witnesses);
    }
  }
  for (std::size_t i = 0; i < fresh.size(); ++i) {
    if (!fresh[i].has_objectives()) {
      undom.fail({i, std::nullopt, "objectives undefined: " + fresh[i].diagnostic}, opt.max_witnesses);
      above.fail({i, std::nullopt, "objectives undefined: " + fresh[i].diagnostic}, opt.max_witnesses);
    }
  }
  return r;
}

/**
 * Upper-shell conditions checked against an enumerated efficient set. With a
 * positive tolerance the oracle front is raised by that amount, so a pass
 * survives an oracle that underestimates the true front by up to the
 * tolerance.
 */
[[nodiscard]] inline validation_report check_upper_shell_oracle(std::span<candidate_solution const> set,
                                                                std::span<candidate_solution const> efficient,
                                                                problem_spec const& p,
                                                                check_options const& opt = {}) {
  if (efficient.empty()) throw precondition_error("empty efficient-set oracle");
  if (set.empty()) throw precondition_error("an upper shell is a finite nonempty set");
  detail::require_objectives(efficient, "oracle");
  std::vector<candidate_solution> fresh;
  for (auto const& a : set) fresh.push_back(evaluate(p, a.x));

  validation_report r;
  r.role = shell_role::upper_shell;
  r.elements_checked = set.size();
  r.tolerance = opt.tolerance;
  detail::outside_condition(fresh, r.conditions[condition::upper_outside], opt.max_witnesses);

  std::vector<candidate_solution> evaluated;
  std::vector<std::size_t> index;
  for (std::size_t i = 0; i < fresh.size(); ++i) {
    if (fresh[i].has_objectives()) {
      evaluated.push_back(fresh[i]);
      index.push_back(i);
    }
  }
  condition_result anti;
  detail::antichain_condition<candidate_solution>(evaluated, anti, opt.max_witnesses);
  for (auto& w : anti.witnesses) {
    w.element = index[w.element];
    w.partner = index[*w.partner];
  }
  r.conditions[condition::upper_antichain] = anti;

  auto& undom = r.conditions[condition::upper_undominated];
  auto& above = r.conditions[condition::upper_above_nadir];
  auto const nad = nadir(efficient);
  dominator_index<candidate_solution> const dominators(efficient);
  for (std::size_t e = 0; e < evaluated.size(); ++e) {
    auto y = objective_span(evaluated[e]);
    std::optional<std::size_t> partner;
    if (opt.tolerance == 0.0) {
      partner = dominators.find(y);
    } else {
      for (std::size_t s = 0; s < efficient.size() && !partner; ++s) {
        if (dominated_by_raised(y, objective_span(efficient[s]), opt.tolerance)) partner = s;
      }
    }
    if (partner) {
      undom.fail({index[e], *partner, "f(a) = " + detail::describe(y) + " is dominated by efficient element " +
                                          std::to_string(*partner)},
                 opt.max_witnesses);
    }
    if (!detail::above_nadir(nad.values(), y, opt.tolerance, opt.strict_nadir)) {
      above.fail({index[e], std::nullopt,
                  "f(a) = " + detail::describe(y) + " is not above the nadir " + detail::describe(nad.values())},
                 opt.max_witnesses);
    }
  }
  for (std::size_t i = 0; i < fresh.size(); ++i) {
    if (!fresh[i].has_objectives()) {
      undom.fail({i, std::nullopt, "objectives undefined: " + fresh[i].diagnostic}, opt.max_witnesses);
      above.fail({i, std::nullopt, "objectives undefined: " + fresh[i].diagnostic}, opt.max_witnesses);
    }
  }
  return r;
}

/**
 * Every image lies outside P - R^k_+ with margin: for each a and each front
 * point p some component has f_l(a) > p_l + tol.
 */
template <typename T, typename U>
[[nodiscard]] validation_report check_outer_region(std::span<T const> set, std::span<U const> front,
                                                   double tol = 0.0, std::size_t max_witnesses = 16) {
  if (front.empty()) throw precondition_error("empty front oracle");
  validation_report r;
  r.role = shell_role::upper_shell;
  r.elements_checked = set.size();
  r.tolerance = tol;
  auto& c = r.conditions[condition::outer_region];
  for (std::size_t i = 0; i < set.size(); ++i) {
    auto y = objective_span(set[i]);
    for (std::size_t s = 0; s < front.size(); ++s) {
      auto p = objective_span(front[s]);
      detail::require_same_length(y, p);
      bool exceeds = false;
      for (std::size_t l = 0; l < y.size() && !exceeds; ++l) exceeds = y[l] > p[l] + tol;
      if (!exceeds) {
        c.fail({i, s, detail::describe(y) + " lies in P - R^k_+ at front point " + detail::describe(p)},
               max_witnesses);
        break;
      }
    }
  }
  return r;
}

/// No sampled feasible image z satisfies z >= f(a) componentwise.
template <typename T, typename U>
[[nodiscard]] validation_report check_image_disjoint(std::span<T const> set, std::span<U const> images,
                                                     std::size_t max_witnesses = 16) {
  validation_report r;
  r.role = shell_role::upper_shell;
  r.elements_checked = set.size();
  auto& c = r.conditions[condition::image_disjoint];
  for (std::size_t i = 0; i < set.size(); ++i) {
    auto y = objective_span(set[i]);
    for (std::size_t s = 0; s < images.size(); ++s) {
      auto z = objective_span(images[s]);
      detail::require_same_length(y, z);
      bool covers = true;
      for (std::size_t l = 0; l < y.size() && covers; ++l) covers = z[l] >= y[l];
      if (covers) {
        c.fail({i, s, "feasible image " + detail::describe(z) + " lies in f(a) + R^k_+"}, max_witnesses);
        break;
      }
    }
  }
  return r;
}

/// Each image lies in P + int(R^k_+) with margin: some p has p_l + tol < f_l(a) for all l.
template <typename T, typename U>
[[nodiscard]] validation_report check_strict_outer(std::span<T const> set, std::span<U const> front,
                                                   double tol = 0.0, std::size_t max_witnesses = 16) {
  if (front.empty()) throw precondition_error("empty front oracle");
  validation_report r;
  r.role = shell_role::upper_shell;
  r.elements_checked = set.size();
  r.tolerance = tol;
  auto& c = r.conditions[condition::strict_outer];
  for (std::size_t i = 0; i < set.size(); ++i) {
    auto y = objective_span(set[i]);
    bool found = false;
    for (std::size_t s = 0; s < front.size() && !found; ++s) {
      auto p = objective_span(front[s]);
      detail::require_same_length(y, p);
      bool all = true;
      for (std::size_t l = 0; l < y.size() && all; ++l) all = p[l] + tol < y[l];
      found = all;
    }
    if (!found) {
      c.fail({i, std::nullopt, detail::describe(y) + " is not strictly above any front point"}, max_witnesses);
    }
  }
  return r;
}

/// Every element strictly dominates some element of `efficient`.
template <typename T, typename U>
[[nodiscard]] validation_report check_dominates_efficient(std::span<T const> set, std::span<U const> efficient,
                                                          std::size_t max_witnesses = 16) {
  validation_report r;
  r.role = shell_role::upper_shell;
  r.elements_checked = set.size();
  auto& c = r.conditions[condition::dominates_efficient];
  for (std::size_t i = 0; i < set.size(); ++i) {
    auto y = objective_span(set[i]);
    bool found = false;
    for (std::size_t s = 0; s < efficient.size() && !found; ++s) {
      found = dominated_by(objective_span(efficient[s]), y);
    }
    if (!found) {
      c.fail({i, std::nullopt, detail::describe(y) + " dominates no efficient element"}, max_witnesses);
    }
  }
  return r;
}

}  // namespace shells

#endif  // SHELLS_SHELL_CONDITIONS_HPP_
