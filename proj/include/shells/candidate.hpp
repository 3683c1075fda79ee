#ifndef SHELLS_CANDIDATE_HPP_
#define SHELLS_CANDIDATE_HPP_

#include "dominance.hpp"

#include <span>
#include <string>
#include <vector>

namespace shells {

enum class feasibility { feasible, infeasible, unevaluated };

/**
 * Where a decision vector sits relative to the feasible set. `boundary` is the
 * tolerance band around a constraint or box face: such points count as
 * feasible but are never offered as outside points.
 */
enum class region { inside, boundary, outside, domain_error };

[[nodiscard]] inline auto to_string(region r) -> std::string {
  switch (r) {
    case region::inside:
      return "inside";
    case region::boundary:
      return "boundary";
    case region::outside:
      return "outside";
    case region::domain_error:
      return "domain_error";
  }
  return "unknown";
}

/// A decision vector together with its cached evaluation.
struct candidate_solution {
  std::vector<double> x;
  objective_vector fx;  // empty unless evaluated without a domain error
  feasibility status = feasibility::unevaluated;
  region where = region::domain_error;
  double violation = 0.0;  // max over constraint and box residuals
  std::string diagnostic;

  [[nodiscard]] bool feasible() const { return status == feasibility::feasible; }
  [[nodiscard]] bool outside() const { return where == region::outside; }
  [[nodiscard]] bool has_objectives() const { return !fx.empty(); }
};

[[nodiscard]] inline auto objective_span(candidate_solution const& c) -> std::span<double const> {
  return c.fx.values();
}

}  // namespace shells

#endif  // SHELLS_CANDIDATE_HPP_
