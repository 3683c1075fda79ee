#ifndef SHELLS_DOMINANCE_HPP_
#define SHELLS_DOMINANCE_HPP_

#include "errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace shells {

/**
 * A point in objective space. Every objective is maximized, so larger is
 * better in every component. Components are finite by construction.
 */
class objective_vector {
 public:
  objective_vector() = default;

  explicit objective_vector(std::vector<double> values)
      : m_values(std::move(values)) {
    if (m_values.size() < 2) {
      throw std::invalid_argument("objective vector needs at least two components");
    }
    for (auto v : m_values) {
      if (!std::isfinite(v)) {
        throw std::invalid_argument("objective vector component is not finite");
      }
    }
  }

  objective_vector(std::initializer_list<double> values)
      : objective_vector(std::vector<double>(values)) {}

  [[nodiscard]] auto size() const { return m_values.size(); }
  [[nodiscard]] auto empty() const { return m_values.empty(); }
  [[nodiscard]] auto operator[](std::size_t l) const { return m_values[l]; }
  [[nodiscard]] auto values() const -> std::span<double const> { return m_values; }
  [[nodiscard]] auto begin() const { return m_values.begin(); }
  [[nodiscard]] auto end() const { return m_values.end(); }

  friend bool operator==(objective_vector const&, objective_vector const&) = default;
  friend auto operator<=>(objective_vector const&, objective_vector const&) = default;

 private:
  std::vector<double> m_values;
};

[[nodiscard]] inline auto objective_span(objective_vector const& y) -> std::span<double const> {
  return y.values();
}

enum class dominance { first_dominated, second_dominated, incomparable, equal };

[[nodiscard]] inline auto to_string(dominance d) -> std::string {
  switch (d) {
    case dominance::first_dominated:
      return "first_dominated";
    case dominance::second_dominated:
      return "second_dominated";
    case dominance::incomparable:
      return "incomparable";
    case dominance::equal:
      return "equal";
  }
  return "unknown";
}

namespace detail {

inline void require_same_length(std::span<double const> u, std::span<double const> v) {
  if (u.size() != v.size()) {
    throw dimension_error(u.size(), v.size());
  }
}

// u_l <= v_l + all_slack for every l, and u_l < v_l + strict_slack for some l.
[[nodiscard]] inline bool below(std::span<double const> u, std::span<double const> v, double all_slack,
                                double strict_slack) {
  require_same_length(u, v);
  bool strict = false;
  for (std::size_t l = 0; l < u.size(); ++l) {
    if (u[l] > v[l] + all_slack) {
      return false;
    }
    if (u[l] < v[l] + strict_slack) {
      strict = true;
    }
  }
  return strict;
}

}  // namespace detail

/**
 * The relation u << v: u_l <= v_l + tol for every l and u_l < v_l - tol for
 * at least one l. With tol = 0 this is exactly Pareto dominance of v over u
 * in the maximization sense.
 */
[[nodiscard]] inline bool dominated_by(std::span<double const> u, std::span<double const> v, double tol = 0.0) {
  return detail::below(u, v, tol, -tol);
}

[[nodiscard]] inline bool dominated_by(objective_vector const& u, objective_vector const& v, double tol = 0.0) {
  return dominated_by(u.values(), v.values(), tol);
}

/// u << v + shift·1, i.e. dominance against a copy of v raised by `shift` in every component.
[[nodiscard]] inline bool dominated_by_raised(std::span<double const> u, std::span<double const> v, double shift) {
  return detail::below(u, v, shift, shift);
}

[[nodiscard]] inline dominance compare(std::span<double const> u, std::span<double const> v, double tol = 0.0) {
  detail::require_same_length(u, v);
  double gap = 0.0;
  for (std::size_t l = 0; l < u.size(); ++l) {
    gap = std::max(gap, std::abs(u[l] - v[l]));
  }
  if (gap <= tol) {
    return dominance::equal;
  }
  if (dominated_by(u, v, tol)) {
    return dominance::first_dominated;
  }
  if (dominated_by(v, u, tol)) {
    return dominance::second_dominated;
  }
  return dominance::incomparable;
}

[[nodiscard]] inline dominance compare(objective_vector const& u, objective_vector const& v, double tol = 0.0) {
  return compare(u.values(), v.values(), tol);
}

}  // namespace shells

#endif  // SHELLS_DOMINANCE_HPP_
