#ifndef SHELLS_SAMPLER_HPP_
#define SHELLS_SAMPLER_HPP_

#include "archive.hpp"
#include "candidate.hpp"
#include "problem.hpp"

#include "json.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace shells {

enum class sampler_mode { pure_random, evolutionary };

struct sampler_config {
  std::size_t budget = 100000;
  std::size_t population = 100;
  double mutation_scale = 0.1;  // fraction of box width
  std::uint64_t seed = 42;
  sampler_mode mode = sampler_mode::evolutionary;
  /// Keep a nondominated archive of infeasible evaluations as well.
  bool keep_infeasible = false;

  void validate() const {
    if (budget < 1) throw std::invalid_argument("sampler budget must be positive");
    if (population < 1 || population > budget) {
      throw std::invalid_argument("sampler population must lie in [1, budget]");
    }
    if (!(mutation_scale > 0.0 && mutation_scale <= 1.0)) {
      throw std::invalid_argument("mutation scale must lie in (0, 1]");
    }
  }

  [[nodiscard]] nlohmann::json to_json() const {
    return {{"budget", budget},
            {"population", population},
            {"mutation_scale", mutation_scale},
            {"seed", seed},
            {"mode", mode == sampler_mode::evolutionary ? "evolutionary" : "pure_random"},
            {"keep_infeasible", keep_infeasible}};
  }
};

/// No feasible point was found within the evaluation budget.
class sampler_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct sampler_result {
  std::vector<candidate_solution> shell;
  std::vector<candidate_solution> side_pool;  // nondominated infeasible evaluations
  std::size_t evaluations = 0;
  std::size_t feasible = 0;
  std::size_t domain_errors = 0;
};

/**
 * Randomized search feeding a nondominated archive of feasible points.
 *
 * The evolutionary mode starts from `population` uniform points, then
 * repeatedly picks a parent by a two-way nondomination tournament among
 * archive members, applies box-clipped Gaussian mutation (bit flips for
 * binary problems) and offers the child to the archive. One draw in ten is
 * a fresh uniform point. Infeasible children are discarded unless
 * `keep_infeasible` is set.
 */
[[nodiscard]] inline sampler_result sample(problem_spec const& p, sampler_config const& cfg) {
  cfg.validate();
  std::mt19937_64 rng(cfg.seed);
  pareto_archive archive;
  pareto_archive side;
  sampler_result out;

  auto offer = [&](candidate_solution c) {
    ++out.evaluations;
    if (!c.has_objectives()) {
      ++out.domain_errors;
      return;
    }
    if (c.feasible()) {
      ++out.feasible;
      archive.insert(std::move(c));
    } else if (cfg.keep_infeasible) {
      side.insert(std::move(c));
    }
  };

  // Initial population; kept for parent selection while the archive is empty.
  std::vector<candidate_solution> init;
  auto const init_size = cfg.mode == sampler_mode::pure_random ? cfg.budget : cfg.population;
  for (std::size_t i = 0; i < init_size; ++i) {
    auto c = evaluate(p, random_point(p, rng));
    if (cfg.mode == sampler_mode::evolutionary) init.push_back(c);
    offer(std::move(c));
  }

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  auto pick = [&](std::vector<candidate_solution> const& pool) -> candidate_solution const& {
    std::uniform_int_distribution<std::size_t> idx(0, pool.size() - 1);
    auto const& a = pool[idx(rng)];
    auto const& b = pool[idx(rng)];
    if (!a.has_objectives()) return b;
    if (!b.has_objectives()) return a;
    if (a.feasible() != b.feasible()) return a.feasible() ? a : b;
    if (!a.feasible()) return a.violation <= b.violation ? a : b;
    auto const v = compare(a.fx, b.fx);
    if (v == dominance::first_dominated) return b;
    if (v == dominance::second_dominated) return a;
    return unit(rng) < 0.5 ? a : b;
  };

  while (out.evaluations < cfg.budget) {
    if (unit(rng) < 0.1) {
      offer(evaluate(p, random_point(p, rng)));
      continue;
    }
    auto x = archive.empty() ? pick(init).x : pick(archive.members()).x;
    if (p.binary) {
      std::uniform_int_distribution<std::size_t> coord(0, p.n - 1);
      bool flipped = false;
      for (std::size_t i = 0; i < p.n; ++i) {
        if (unit(rng) < 1.0 / static_cast<double>(p.n)) {
          x[i] = 1.0 - x[i];
          flipped = true;
        }
      }
      if (!flipped) {
        auto const i = coord(rng);
        x[i] = 1.0 - x[i];
      }
    } else {
      for (std::size_t i = 0; i < p.n; ++i) {
        auto const lo = p.box[i].effective_lo();
        auto const hi = p.box[i].effective_hi();
        x[i] = std::clamp(x[i] + cfg.mutation_scale * (hi - lo) * gauss(rng), lo, hi);
      }
    }
    offer(evaluate(p, x));
  }

  out.shell = std::move(archive).release();
  out.side_pool = std::move(side).release();
  return out;
}

/// Lower shell of `p`; throws sampler_error when nothing feasible was found.
[[nodiscard]] inline std::vector<candidate_solution> sample_lower_shell(problem_spec const& p,
                                                                        sampler_config const& cfg) {
  auto r = sample(p, cfg);
  if (r.shell.empty()) {
    throw sampler_error("no feasible point in " + std::to_string(r.evaluations) + " evaluations (feasibility rate 0/" +
                        std::to_string(r.evaluations) + ", " + std::to_string(r.domain_errors) + " domain errors)");
  }
  return std::move(r.shell);
}

}  // namespace shells

#endif  // SHELLS_SAMPLER_HPP_
