#ifndef SHELLS_ARCHIVE_HPP_
#define SHELLS_ARCHIVE_HPP_

#include "candidate.hpp"
#include "dominance.hpp"
#include "errors.hpp"

#include <algorithm>
#include <cstddef>
#include <functional>
#include <iterator>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace shells {

enum class insert_status { inserted, rejected_dominated, rejected_duplicate };

struct insert_outcome {
  insert_status status;
  std::size_t removed = 0;

  friend bool operator==(insert_outcome const&, insert_outcome const&) = default;
};

/**
 * An antichain under the dominance relation. In general insertion is a
 * linear scan. With two objectives and exact comparison the members are also
 * kept in an ordered index on f1 (along which f2 is nondecreasing), so an
 * insertion costs O(log n) plus the members it removes.
 *
 * `T` must provide an `objective_span(T const&)` overload. Member order is
 * unspecified.
 */
template <typename T>
class basic_pareto_archive {
 public:
  using value_type = T;

  explicit basic_pareto_archive(double tolerance = 0.0, bool dedupe = false)
      : m_tolerance(tolerance)
      , m_dedupe(dedupe) {
    if (tolerance < 0.0) {
      throw std::invalid_argument("dominance tolerance must be nonnegative");
    }
  }

  basic_pareto_archive(basic_pareto_archive const& other)
      : m_members(other.m_members)
      , m_tolerance(other.m_tolerance)
      , m_dedupe(other.m_dedupe)
      , m_biobjective(other.m_biobjective) {
    reindex();
  }

  basic_pareto_archive& operator=(basic_pareto_archive const& other) {
    if (this != &other) {
      m_members = other.m_members;
      m_tolerance = other.m_tolerance;
      m_dedupe = other.m_dedupe;
      m_biobjective = other.m_biobjective;
      reindex();
    }
    return *this;
  }

  basic_pareto_archive(basic_pareto_archive&&) noexcept = default;
  basic_pareto_archive& operator=(basic_pareto_archive&&) noexcept = default;
  ~basic_pareto_archive() = default;

  insert_outcome insert(T item) {
    auto y = objective_span(item);
    if (y.empty()) {
      throw precondition_error("archive insert needs an evaluated objective vector");
    }
    if (m_members.empty() && m_index.empty()) {
      m_biobjective = m_tolerance == 0.0 && y.size() == 2;
    }
    if (m_biobjective) {
      return insert_biobjective(std::move(item));
    }
    for (auto const& m : m_members) {
      auto const v = compare(y, objective_span(m), m_tolerance);
      if (v == dominance::first_dominated) {
        return {insert_status::rejected_dominated, 0};
      }
      if (m_dedupe && v == dominance::equal) {
        return {insert_status::rejected_duplicate, 0};
      }
    }
    auto const before = m_members.size();
    std::erase_if(m_members, [&](T const& m) { return dominated_by(objective_span(m), y, m_tolerance); });
    auto const removed = before - m_members.size();
    m_members.push_back(std::move(item));
    return {insert_status::inserted, removed};
  }

  [[nodiscard]] auto members() const -> std::vector<T> const& { return m_members; }
  [[nodiscard]] auto size() const { return m_members.size(); }
  [[nodiscard]] auto empty() const { return m_members.empty(); }
  [[nodiscard]] auto begin() const { return m_members.begin(); }
  [[nodiscard]] auto end() const { return m_members.end(); }
  [[nodiscard]] auto tolerance() const { return m_tolerance; }

  [[nodiscard]] auto release() && -> std::vector<T> {
    m_index.clear();
    m_where.clear();
    return std::move(m_members);
  }

 private:
  using index_type = std::multimap<double, std::size_t, std::greater<>>;

  void reindex() {
    m_index.clear();
    m_where.clear();
    if (!m_biobjective) {
      return;
    }
    for (std::size_t i = 0; i < m_members.size(); ++i) {
      m_where.push_back(m_index.emplace(objective_span(m_members[i])[0], i));
    }
  }

  double second(std::size_t i) const { return objective_span(m_members[i])[1]; }

  void remove(typename index_type::iterator it) {
    auto const pos = it->second;
    m_index.erase(it);
    auto const last = m_members.size() - 1;
    if (pos != last) {
      m_members[pos] = std::move(m_members[last]);
      m_where[pos] = m_where[last];
      m_where[pos]->second = pos;
    }
    m_members.pop_back();
    m_where.pop_back();
  }

  insert_outcome insert_biobjective(T item) {
    auto y = objective_span(item);
    if (y.size() != 2) {
      throw dimension_error(2, y.size());
    }
    auto const y1 = y[0];
    auto const y2 = y[1];
    auto [lo, hi] = m_index.equal_range(y1);
    // The member with the smallest f1 above y1 has the largest f2 among those.
    if (lo != m_index.begin() && second(std::prev(lo)->second) >= y2) {
      return {insert_status::rejected_dominated, 0};
    }
    bool equal = false;
    for (auto it = lo; it != hi; ++it) {
      auto const m2 = second(it->second);
      if (m2 > y2) {
        return {insert_status::rejected_dominated, 0};
      }
      equal = equal || m2 == y2;
    }
    if (equal && m_dedupe) {
      return {insert_status::rejected_duplicate, 0};
    }
    std::size_t removed = 0;
    if (!equal) {
      // Dominated members follow contiguously: f1 <= y1 and f2 <= y2.
      auto it = lo;
      while (it != m_index.end() && second(it->second) <= y2) {
        auto next = std::next(it);
        remove(it);
        it = next;
        ++removed;
      }
    }
    m_members.push_back(std::move(item));
    m_where.push_back(m_index.emplace(y1, m_members.size() - 1));
    return {insert_status::inserted, removed};
  }

  std::vector<T> m_members;
  double m_tolerance;
  bool m_dedupe;
  bool m_biobjective = false;
  index_type m_index;
  std::vector<typename index_type::iterator> m_where;
};

using pareto_archive = basic_pareto_archive<candidate_solution>;

namespace detail {

template <typename T>
bool all_biobjective(std::vector<T> const& points) {
  if (points.empty() || objective_span(points.front()).size() != 2) {
    return false;
  }
  for (auto const& p : points) {
    require_same_length(objective_span(points.front()), objective_span(p));
  }
  return true;
}

}  // namespace detail

/**
 * Keeps the maximal elements of `points`. The result equals inserting every
 * point into an empty archive, in any order; the exact path (tol = 0, no
 * dedupe) also preserves input order.
 */
template <typename T>
[[nodiscard]] std::vector<T> prune_to_antichain(std::vector<T> points, double tol = 0.0, bool dedupe = false) {
  if (tol != 0.0 || dedupe) {
    basic_pareto_archive<T> archive(tol, dedupe);
    for (auto& p : points) {
      archive.insert(std::move(p));
    }
    return std::move(archive).release();
  }

  // Exact dominance is transitive and every dominator of a point is
  // lexicographically larger, so one pass in descending lexicographic order
  // only needs to look at points already kept.
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    auto ya = objective_span(points[a]);
    auto yb = objective_span(points[b]);
    return std::lexicographical_compare(yb.begin(), yb.end(), ya.begin(), ya.end());
  });

  std::vector<std::size_t> kept;
  std::vector<char> keep(points.size(), 0);
  if (detail::all_biobjective(points)) {
    // In this order a point is dominated exactly when an earlier, different
    // point has an f2 at least as large.
    double best = 0.0;
    bool seen = false;
    for (std::size_t g = 0; g < order.size();) {
      auto const yg = objective_span(points[order[g]]);
      auto e = g;
      while (e < order.size() && std::ranges::equal(objective_span(points[order[e]]), yg)) {
        ++e;
      }
      if (!seen || best < yg[1]) {
        for (auto j = g; j < e; ++j) {
          keep[order[j]] = 1;
        }
      }
      best = seen ? std::max(best, yg[1]) : yg[1];
      seen = true;
      g = e;
    }
    order.clear();
  }
  for (auto i : order) {
    auto yi = objective_span(points[i]);
    bool const dominated =
        std::any_of(kept.begin(), kept.end(), [&](std::size_t j) { return dominated_by(yi, objective_span(points[j])); });
    if (!dominated) {
      kept.push_back(i);
      keep[i] = 1;
    }
  }

  std::vector<T> result;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (keep[i]) {
      result.push_back(std::move(points[i]));
    }
  }
  return result;
}

/**
 * Answers "which point of the set dominates y, if any". With two objectives
 * the points are sorted by f1 with prefix maxima of f2, giving O(log n)
 * queries; otherwise the query is a linear scan.
 */
template <typename T>
class dominator_index {
 public:
  explicit dominator_index(std::span<T const> points)
      : m_points(points) {
    m_biobjective = !points.empty();
    for (auto const& p : points) {
      m_biobjective = m_biobjective && objective_span(p).size() == 2;
    }
    if (!m_biobjective) {
      return;
    }
    m_order.resize(points.size());
    std::iota(m_order.begin(), m_order.end(), std::size_t{0});
    std::stable_sort(m_order.begin(), m_order.end(),
                     [&](std::size_t a, std::size_t b) { return first(a) > first(b); });
    m_best.resize(m_order.size());
    for (std::size_t i = 0; i < m_order.size(); ++i) {
      m_best[i] = i == 0 || second(m_order[i]) > second(m_best[i - 1]) ? m_order[i] : m_best[i - 1];
    }
  }

  [[nodiscard]] std::optional<std::size_t> find(std::span<double const> y) const {
    if (!m_biobjective) {
      for (std::size_t j = 0; j < m_points.size(); ++j) {
        if (dominated_by(y, objective_span(m_points[j]))) {
          return j;
        }
      }
      return std::nullopt;
    }
    if (y.size() != 2) {
      throw dimension_error(2, y.size());
    }
    auto above = [&](double bound, bool strict) {
      return static_cast<std::size_t>(
          std::partition_point(m_order.begin(), m_order.end(),
                               [&](std::size_t i) { return strict ? first(i) > bound : first(i) >= bound; }) -
          m_order.begin());
    };
    // Points with f1 > y1 dominate y when f2 >= y2; points with f1 = y1 need f2 > y2.
    auto const gt = above(y[0], true);
    if (gt > 0 && second(m_best[gt - 1]) >= y[1]) {
      return m_best[gt - 1];
    }
    auto const ge = above(y[0], false);
    if (ge > 0 && second(m_best[ge - 1]) > y[1]) {
      return m_best[ge - 1];
    }
    return std::nullopt;
  }

 private:
  double first(std::size_t i) const { return objective_span(m_points[i])[0]; }
  double second(std::size_t i) const { return objective_span(m_points[i])[1]; }

  std::span<T const> m_points;
  bool m_biobjective = false;
  std::vector<std::size_t> m_order;
  std::vector<std::size_t> m_best;  // index of the largest f2 among m_order[0..i]
};

/// Componentwise minimum of the objective vectors of a nonempty set.
template <typename T>
[[nodiscard]] objective_vector nadir(std::span<T const> points) {
  if (points.empty()) {
    throw precondition_error("nadir of an empty set");
  }
  auto first = objective_span(points.front());
  std::vector<double> y(first.begin(), first.end());
  for (auto const& p : points.subspan(1)) {
    auto v = objective_span(p);
    detail::require_same_length(y, v);
    for (std::size_t l = 0; l < y.size(); ++l) {
      y[l] = std::min(y[l], v[l]);
    }
  }
  return objective_vector(std::move(y));
}

template <typename T>
[[nodiscard]] objective_vector nadir(std::vector<T> const& points) {
  return nadir(std::span<T const>(points));
}

/// Componentwise maximum; the ideal point of a finite set.
template <typename T>
[[nodiscard]] objective_vector ideal(std::span<T const> points) {
  if (points.empty()) {
    throw precondition_error("ideal point of an empty set");
  }
  auto first = objective_span(points.front());
  std::vector<double> y(first.begin(), first.end());
  for (auto const& p : points.subspan(1)) {
    auto v = objective_span(p);
    detail::require_same_length(y, v);
    for (std::size_t l = 0; l < y.size(); ++l) {
      y[l] = std::max(y[l], v[l]);
    }
  }
  return objective_vector(std::move(y));
}

}  // namespace shells

#endif  // SHELLS_ARCHIVE_HPP_
