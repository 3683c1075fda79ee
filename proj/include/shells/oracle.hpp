#ifndef SHELLS_ORACLE_HPP_
#define SHELLS_ORACLE_HPP_

#include "archive.hpp"
#include "candidate.hpp"
#include "dominance.hpp"
#include "errors.hpp"
#include "problem.hpp"

#include "json.hpp"

#include <algorithm>
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

/// The lattice would exceed the point budget.
class oracle_refusal : public std::runtime_error {
 public:
  explicit oracle_refusal(double estimate)
      : std::runtime_error("grid of about " + format_number(estimate) + " points exceeds the enumeration guard")
      , m_estimate(estimate) {}

  [[nodiscard]] double estimate() const { return m_estimate; }

 private:
  double m_estimate;
};

/// Axis values of one lattice dimension: endpoints included, spacing at most h.
[[nodiscard]] inline std::vector<double> lattice_axis(interval const& b, double h) {
  auto const lo = b.effective_lo();
  auto const hi = b.effective_hi();
  if (!(hi > lo)) return {lo};
  auto const m = static_cast<std::size_t>(std::ceil((hi - lo) / h - 1e-9));
  std::vector<double> axis(m + 1);
  for (std::size_t j = 0; j <= m; ++j) axis[j] = lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(m);
  axis.back() = hi;
  return axis;
}

/// Number of lattice points of `box` at spacing h (as a double, to detect overflow).
[[nodiscard]] inline double lattice_size(std::span<interval const> box, double h) {
  double total = 1.0;
  for (auto const& b : box) total *= static_cast<double>(lattice_axis(b, h).size());
  return total;
}

namespace detail {

// Calls visit(x) for every lattice point of `box`, first coordinate slowest.
template <typename Visit>
void for_each_lattice_point(std::span<interval const> box, double h, bool binary, Visit&& visit) {
  std::vector<std::vector<double>> axes;
  for (auto const& b : box) axes.push_back(binary ? std::vector<double>{0.0, 1.0} : lattice_axis(b, h));
  std::vector<std::size_t> idx(box.size(), 0);
  std::vector<double> x(box.size());
  while (true) {
    for (std::size_t i = 0; i < box.size(); ++i) x[i] = axes[i][idx[i]];
    visit(x);
    std::size_t i = box.size();
    while (i > 0) {
      --i;
      if (++idx[i] < axes[i].size()) break;
      idx[i] = 0;
      if (i == 0) return;
    }
    if (box.empty()) return;
  }
}

inline double enumeration_size(std::span<interval const> box, double h, bool binary) {
  return binary ? std::ldexp(1.0, static_cast<int>(box.size())) : lattice_size(box, h);
}

}  // namespace detail

/**
 * Brute-force approximation of N and P. For binary problems the enumeration
 * is exhaustive and exact.
 */
struct grid_oracle {
  double step = 0.0;
  std::size_t lattice_points = 0;
  std::vector<candidate_solution> feasible_points;
  std::vector<candidate_solution> efficient_set;
  std::vector<objective_vector> front;
  double tau = 0.0;  // 2 L h, zero for exhaustive enumeration
  double lipschitz = 0.0;
  bool exact = false;

  [[nodiscard]] nlohmann::json to_json() const {
    return {{"step", step},
            {"lattice_points", lattice_points},
            {"feasible_points", feasible_points.size()},
            {"efficient_points", efficient_set.size()},
            {"tau_grid", tau},
            {"lipschitz_estimate", lipschitz},
            {"exact", exact}};
  }
};

/**
 * Largest objective gradient norm seen at `samples` random points and every
 * box corner (central differences). Points with a domain error are skipped.
 */
[[nodiscard]] inline double estimate_lipschitz(problem_spec const& p, std::size_t samples = 2000,
                                               std::uint64_t seed = 7) {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<double>> points;
  for (std::size_t s = 0; s < samples; ++s) {
    std::vector<double> x(p.n);
    for (std::size_t i = 0; i < p.n; ++i) {
      std::uniform_real_distribution<double> u(p.box[i].effective_lo(), p.box[i].effective_hi());
      x[i] = u(rng);
    }
    points.push_back(std::move(x));
  }
  if (p.n <= 12) {
    for (std::size_t mask = 0; mask < (std::size_t{1} << p.n); ++mask) {
      std::vector<double> x(p.n);
      for (std::size_t i = 0; i < p.n; ++i) x[i] = (mask >> i) & 1U ? p.box[i].effective_hi() : p.box[i].effective_lo();
      points.push_back(std::move(x));
    }
  }

  double best = 0.0;
  for (auto const& x : points) {
    for (auto const& f : p.objectives) {
      double norm2 = 0.0;
      bool ok = true;
      for (std::size_t i = 0; i < p.n && ok; ++i) {
        auto const w = p.box[i].width() > 0.0 ? p.box[i].width() : 1.0;
        auto const d = 1e-6 * w;
        auto xp = x;
        auto xm = x;
        xp[i] += d;
        xm[i] -= d;
        auto a = f.evaluate(xp);
        auto b = f.evaluate(xm);
        ok = a.ok() && b.ok();
        if (ok) {
          auto const g = (a.value - b.value) / (2.0 * d);
          norm2 += g * g;
        }
      }
      if (ok) best = std::max(best, std::sqrt(norm2));
    }
  }
  return best;
}

/**
 * Enumerates the box lattice at spacing h (or {0,1}^n for binary problems),
 * keeps feasible points, and prunes them to the efficient set.
 */
[[nodiscard]] inline grid_oracle grid_enumerate(problem_spec const& p, double h, double max_points = 1e7) {
  if (!p.binary && !(h > 0.0)) throw std::invalid_argument("grid step must be positive");
  if (p.binary && p.n > 24) throw oracle_refusal(std::ldexp(1.0, static_cast<int>(p.n)));
  auto const size = detail::enumeration_size(p.box, h, p.binary);
  if (size > max_points) throw oracle_refusal(size);

  grid_oracle g;
  g.step = p.binary ? 1.0 : h;
  g.exact = p.binary;
  detail::for_each_lattice_point(p.box, h, p.binary, [&](std::vector<double> const& x) {
    ++g.lattice_points;
    auto c = evaluate(p, x);
    if (c.feasible()) g.feasible_points.push_back(std::move(c));
  });
  g.efficient_set = prune_to_antichain(g.feasible_points);
  for (auto const& c : g.efficient_set) g.front.push_back(c.fx);
  if (!p.binary) {
    g.lipschitz = estimate_lipschitz(p);
    g.tau = 2.0 * g.lipschitz * h;
  }
  return g;
}

/**
 * Grid evidence that a problem has no upper shell. Every lattice point of the
 * relaxed box that lies outside X_0 is tested against the grid efficient set:
 * US-4 fails when f(x) is dominated by some f(x'), x' in N_grid; US-5 fails
 * when the grid nadir is not dominated by f(x). The certificate is granted
 * when no outside point passes both. This is evidence at resolution h, not a
 * proof.
 *
 * US-4 failures against grid points are exact: a grid point is feasible, so
 * it is dominated by or equal to an efficient point. `robust_failures`
 * additionally counts the US-5 failures that survive lowering the nadir by
 * tau_grid.
 */
struct no_upper_shell_certificate {
  double step = 0.0;
  double tau = 0.0;
  std::size_t lattice_points = 0;
  std::size_t outside_points = 0;
  std::size_t boundary_excluded = 0;
  std::size_t undefined_excluded = 0;  // outside, but an objective is undefined there
  std::size_t fail_us4 = 0;
  std::size_t fail_us5 = 0;
  std::size_t fail_both = 0;
  std::size_t robust_failures = 0;
  std::optional<std::size_t> tradeoff_outside;  // outside points with no common ascent direction (k = 2)
  std::size_t efficient_points = 0;
  objective_vector grid_nadir;
  std::vector<candidate_solution> survivors;  // outside points passing both, first few
  std::size_t survivor_count = 0;

  [[nodiscard]] bool granted() const { return outside_points > 0 && survivor_count == 0; }

  [[nodiscard]] double failure_fraction() const {
    return outside_points == 0 ? 0.0
                               : static_cast<double>(outside_points - survivor_count) / static_cast<double>(outside_points);
  }

  [[nodiscard]] nlohmann::json to_json() const {
    nlohmann::json s = nlohmann::json::array();
    for (auto const& c : survivors) s.push_back({{"x", c.x}, {"f", std::vector<double>(c.fx.begin(), c.fx.end())}});
    return {{"granted", granted()},
            {"step", step},
            {"tau_grid", tau},
            {"lattice_points", lattice_points},
            {"outside_points", outside_points},
            {"boundary_excluded", boundary_excluded},
            {"undefined_excluded", undefined_excluded},
            {"fail_us4", fail_us4},
            {"fail_us5", fail_us5},
            {"fail_both", fail_both},
            {"failure_fraction", failure_fraction()},
            {"robust_failures", robust_failures},
            {"tradeoff_points_outside", tradeoff_outside ? nlohmann::json(*tradeoff_outside) : nlohmann::json(nullptr)},
            {"efficient_points", efficient_points},
            {"grid_nadir", std::vector<double>(grid_nadir.begin(), grid_nadir.end())},
            {"survivor_count", survivor_count},
            {"survivors", s},
            {"note", "grid evidence at the stated resolution, not a proof"}};
  }
};

namespace detail {

// No direction increases both objectives: gradients are antiparallel or one vanishes.
inline bool no_common_ascent(problem_spec const& p, std::vector<double> const& x) {
  std::vector<std::vector<double>> grads;
  for (auto const& f : p.objectives) {
    std::vector<double> g(p.n);
    for (std::size_t i = 0; i < p.n; ++i) {
      auto const d = 1e-6 * std::max(1.0, std::abs(x[i]));
      auto xp = x;
      auto xm = x;
      xp[i] += d;
      xm[i] -= d;
      g[i] = (f(xp) - f(xm)) / (2.0 * d);
    }
    grads.push_back(std::move(g));
  }
  double dot = 0.0;
  double n0 = 0.0;
  double n1 = 0.0;
  for (std::size_t i = 0; i < p.n; ++i) {
    dot += grads[0][i] * grads[1][i];
    n0 += grads[0][i] * grads[0][i];
    n1 += grads[1][i] * grads[1][i];
  }
  if (n0 < 1e-18 || n1 < 1e-18) return true;
  return dot / std::sqrt(n0 * n1) <= -1.0 + 1e-9;
}

}  // namespace detail

[[nodiscard]] inline no_upper_shell_certificate certify_no_upper_shell(problem_spec const& p,
                                                                       relaxation_descriptor const& r, double h,
                                                                       double max_points = 1e7,
                                                                       std::size_t max_survivors = 16) {
  auto const oracle = grid_enumerate(p, h, max_points);
  if (oracle.efficient_set.empty()) throw precondition_error("grid oracle found no feasible point");
  auto const relaxed = relax(p, r);
  auto const size = detail::enumeration_size(relaxed.box, h, relaxed.binary);
  if (size > max_points) throw oracle_refusal(size);

  no_upper_shell_certificate cert;
  cert.step = oracle.step;
  cert.tau = oracle.tau;
  cert.efficient_points = oracle.efficient_set.size();
  cert.grid_nadir = nadir(oracle.efficient_set);
  if (p.k == 2) cert.tradeoff_outside = 0;
  auto const nad = cert.grid_nadir.values();
  dominator_index<candidate_solution> const dominators(oracle.efficient_set);

  detail::for_each_lattice_point(relaxed.box, h, relaxed.binary, [&](std::vector<double> const& x) {
    ++cert.lattice_points;
    auto c = evaluate(p, x);
    if (c.where == region::boundary) ++cert.boundary_excluded;
    if (c.where != region::outside) return;
    if (!c.has_objectives()) {
      ++cert.undefined_excluded;
      return;
    }
    ++cert.outside_points;
    auto y = objective_span(c);
    bool const us4 = dominators.find(y).has_value();
    bool const us5 = !dominated_by(nad, y);
    bool const us5_robust = !dominated_by_raised(nad, y, cert.tau);
    if (us4) ++cert.fail_us4;
    if (us5) ++cert.fail_us5;
    if (us4 && us5) ++cert.fail_both;
    if (us4 || us5_robust) ++cert.robust_failures;
    if (!us4 && !us5) {
      ++cert.survivor_count;
      if (cert.survivors.size() < max_survivors) cert.survivors.push_back(c);
    }
    if (cert.tradeoff_outside && detail::no_common_ascent(p, x)) ++*cert.tradeoff_outside;
  });
  return cert;
}

}  // namespace shells

#endif  // SHELLS_ORACLE_HPP_
