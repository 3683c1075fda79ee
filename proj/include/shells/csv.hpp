#ifndef SHELLS_CSV_HPP_
#define SHELLS_CSV_HPP_

#include "candidate.hpp"
#include "errors.hpp"
#include "expression.hpp"

#include <cstddef>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace shells {

/**
 * One row per point: x1..xn, f1..fk, feasible, violation. Numbers use 17
 * significant digits so that a file read back reproduces the points exactly.
 */
inline void write_csv(std::ostream& out, std::vector<candidate_solution> const& points, std::size_t n,
                      std::size_t k) {
  for (std::size_t i = 0; i < n; ++i) out << "x" << i + 1 << ",";
  for (std::size_t l = 0; l < k; ++l) out << "f" << l + 1 << ",";
  out << "feasible,violation\n";
  for (auto const& c : points) {
    if (c.x.size() != n) throw dimension_error(n, c.x.size());
    for (auto v : c.x) out << format_number(v) << ",";
    for (std::size_t l = 0; l < k; ++l) out << (c.has_objectives() ? format_number(c.fx[l]) : "nan") << ",";
    out << (c.feasible() ? 1 : 0) << "," << format_number(c.violation) << "\n";
  }
}

[[nodiscard]] inline std::string to_csv(std::vector<candidate_solution> const& points, std::size_t n, std::size_t k) {
  std::ostringstream s;
  write_csv(s, points, n, k);
  return s.str();
}

/// Decision vectors from a CSV with x1..xn columns; other columns are ignored.
[[nodiscard]] inline std::vector<std::vector<double>> read_csv_points(std::istream& in, std::size_t n) {
  std::string line;
  if (!std::getline(in, line)) throw parse_error("empty CSV file", 1, 1);
  std::vector<std::size_t> column(n, static_cast<std::size_t>(-1));
  {
    std::istringstream header(line);
    std::string cell;
    for (std::size_t c = 0; std::getline(header, cell, ','); ++c) {
      if (!cell.empty() && cell.back() == '\r') cell.pop_back();
      for (std::size_t i = 0; i < n; ++i) {
        if (cell == "x" + std::to_string(i + 1)) column[i] = c;
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (column[i] == static_cast<std::size_t>(-1)) throw parse_error("missing column x" + std::to_string(i + 1), 1, 1);
  }

  std::vector<std::vector<double>> rows;
  for (std::size_t row = 2; std::getline(in, line); ++row) {
    if (line.empty() || line == "\r") continue;
    std::vector<std::string> cells;
    std::istringstream s(line);
    std::string cell;
    while (std::getline(s, cell, ',')) cells.push_back(cell);
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (column[i] >= cells.size()) throw parse_error("short row", row, 1);
      try {
        std::size_t used = 0;
        x[i] = std::stod(cells[column[i]], &used);
      } catch (std::exception const&) {
        throw parse_error("not a number: '" + cells[column[i]] + "'", row, column[i] + 1);
      }
    }
    rows.push_back(std::move(x));
  }
  return rows;
}

}  // namespace shells

#endif  // SHELLS_CSV_HPP_
