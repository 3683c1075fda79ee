#ifndef SHELLS_EXPRESSION_HPP_
#define SHELLS_EXPRESSION_HPP_

#include "errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace shells {

/// Formats a double so that parsing it back yields the same value.
[[nodiscard]] inline auto format_number(double v) -> std::string {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct evaluation {
  double value = 0.0;
  char const* domain_error = nullptr;  // null when the value is valid

  [[nodiscard]] bool ok() const { return domain_error == nullptr; }
};

/**
 * Arithmetic expression over decision variables x1..xn.
 *
 * Grammar (usual precedence, unary minus binds looser than ^):
 *
 *   expr    := term (('+' | '-') term)*
 *   term    := unary (('*' | '/') unary)*
 *   unary   := '-' unary | power
 *   power   := primary ('^' exponent)?
 *   exponent:= ['-'] number | '(' ['-'] number ')'
 *   primary := number | 'x' index | '(' expr ')'
 */
class expression {
 public:
  enum class op : std::uint8_t { constant, variable, add, sub, mul, div, pow, neg };

  expression() = default;

  static expression parse(std::string_view text, std::size_t num_variables) {
    parser p{text, num_variables, {}};
    expression e;
    e.m_root = p.parse_expr(e);
    p.skip_ws();
    if (p.pos != text.size()) {
      p.fail("unexpected character '" + std::string(1, text[p.pos]) + "'");
    }
    return e;
  }

  static expression constant(double v) {
    expression e;
    e.m_root = e.push({op::constant, v, 0, -1, -1});
    return e;
  }

  static expression variable(std::size_t index) {
    expression e;
    e.m_root = e.push({op::variable, 0.0, static_cast<std::uint32_t>(index), -1, -1});
    return e;
  }

  [[nodiscard]] expression negated() const {
    expression e = *this;
    e.m_root = e.push({op::neg, 0.0, 0, m_root, -1});
    return e;
  }

  [[nodiscard]] bool empty() const { return m_root < 0; }

  /// Evaluates at x; reports division by zero, 0 to a negative power and
  /// non-finite results as domain errors.
  [[nodiscard]] evaluation evaluate(std::span<double const> x) const {
    evaluation out;
    if (m_root < 0) {
      out.domain_error = "empty expression";
      return out;
    }
    out.value = eval(m_root, x, out.domain_error);
    if (out.ok() && !std::isfinite(out.value)) {
      out.domain_error = "non-finite value";
    }
    return out;
  }

  /// Value at x, or NaN on a domain error.
  [[nodiscard]] double operator()(std::span<double const> x) const {
    auto r = evaluate(x);
    return r.ok() ? r.value : std::numeric_limits<double>::quiet_NaN();
  }

  [[nodiscard]] std::string to_string() const { return m_root < 0 ? std::string{} : print(m_root); }

  /// Largest variable index used plus one (0 if no variables).
  [[nodiscard]] std::size_t arity() const {
    std::size_t a = 0;
    for (auto const& n : m_nodes) {
      if (n.kind == op::variable) {
        a = std::max<std::size_t>(a, n.var + 1);
      }
    }
    return a;
  }

 private:
  struct node {
    op kind;
    double value;
    std::uint32_t var;
    std::int32_t lhs;
    std::int32_t rhs;
  };

  std::int32_t push(node n) {
    m_nodes.push_back(n);
    return static_cast<std::int32_t>(m_nodes.size() - 1);
  }

  double eval(std::int32_t i, std::span<double const> x, char const*& err) const {
    auto const& n = m_nodes[static_cast<std::size_t>(i)];
    switch (n.kind) {
      case op::constant:
        return n.value;
      case op::variable:
        return x[n.var];
      case op::neg:
        return -eval(n.lhs, x, err);
      case op::add:
        return eval(n.lhs, x, err) + eval(n.rhs, x, err);
      case op::sub:
        return eval(n.lhs, x, err) - eval(n.rhs, x, err);
      case op::mul:
        return eval(n.lhs, x, err) * eval(n.rhs, x, err);
      case op::div: {
        auto const num = eval(n.lhs, x, err);
        auto const den = eval(n.rhs, x, err);
        if (den == 0.0) {
          if (!err) err = "division by zero";
          return 0.0;
        }
        return num / den;
      }
      case op::pow: {
        auto const base = eval(n.lhs, x, err);
        auto const e = n.value;
        if (base == 0.0 && e < 0.0) {
          if (!err) err = "zero raised to a negative power";
          return 0.0;
        }
        if (base < 0.0 && e != std::floor(e)) {
          if (!err) err = "negative base with a fractional exponent";
          return 0.0;
        }
        if (e == 2.0) return base * base;
        return std::pow(base, e);
      }
    }
    return 0.0;
  }

  std::string print(std::int32_t i) const {
    auto const& n = m_nodes[static_cast<std::size_t>(i)];
    switch (n.kind) {
      case op::constant:
        return n.value < 0.0 ? "(" + format_number(n.value) + ")" : format_number(n.value);
      case op::variable:
        return "x" + std::to_string(n.var + 1);
      case op::neg:
        return "(-" + print(n.lhs) + ")";
      case op::add:
        return "(" + print(n.lhs) + " + " + print(n.rhs) + ")";
      case op::sub:
        return "(" + print(n.lhs) + " - " + print(n.rhs) + ")";
      case op::mul:
        return "(" + print(n.lhs) + " * " + print(n.rhs) + ")";
      case op::div:
        return "(" + print(n.lhs) + " / " + print(n.rhs) + ")";
      case op::pow:
        return print(n.lhs) + "^" + (n.value < 0.0 ? "(" + format_number(n.value) + ")" : format_number(n.value));
    }
    return {};
  }

  struct parser {
    std::string_view text;
    std::size_t num_variables;
    std::size_t pos;

    [[noreturn]] void fail(std::string const& message) const {
      std::size_t line = 1;
      std::size_t column = 1;
      for (std::size_t i = 0; i < pos && i < text.size(); ++i) {
        if (text[i] == '\n') {
          ++line;
          column = 1;
        } else {
          ++column;
        }
      }
      throw parse_error(message, line, column);
    }

    void skip_ws() {
      while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\n' || text[pos] == '\r')) {
        ++pos;
      }
    }

    bool accept(char c) {
      skip_ws();
      if (pos < text.size() && text[pos] == c) {
        ++pos;
        return true;
      }
      return false;
    }

    double number() {
      skip_ws();
      auto const start = pos;
      while (pos < text.size() && (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.')) {
        ++pos;
      }
      if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
        auto save = pos++;
        if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) ++pos;
        if (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
          while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        } else {
          pos = save;
        }
      }
      if (start == pos) {
        fail("expected a number");
      }
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(text.data() + start, text.data() + pos, v);
      if (ec != std::errc{} || ptr != text.data() + pos) {
        pos = start;
        fail("malformed number");
      }
      return v;
    }

    std::int32_t parse_expr(expression& e) {
      auto lhs = parse_term(e);
      while (true) {
        if (accept('+')) {
          lhs = e.push({op::add, 0.0, 0, lhs, parse_term(e)});
        } else if (accept('-')) {
          lhs = e.push({op::sub, 0.0, 0, lhs, parse_term(e)});
        } else {
          return lhs;
        }
      }
    }

    std::int32_t parse_term(expression& e) {
      auto lhs = parse_unary(e);
      while (true) {
        if (accept('*')) {
          lhs = e.push({op::mul, 0.0, 0, lhs, parse_unary(e)});
        } else if (accept('/')) {
          lhs = e.push({op::div, 0.0, 0, lhs, parse_unary(e)});
        } else {
          return lhs;
        }
      }
    }

    std::int32_t parse_unary(expression& e) {
      if (accept('-')) {
        return e.push({op::neg, 0.0, 0, parse_unary(e), -1});
      }
      return parse_power(e);
    }

    std::int32_t parse_power(expression& e) {
      auto base = parse_primary(e);
      if (!accept('^')) {
        return base;
      }
      double exponent = 0.0;
      if (accept('(')) {
        bool const neg = accept('-');
        exponent = neg ? -number() : number();
        if (!accept(')')) fail("expected ')' after exponent");
      } else {
        bool const neg = accept('-');
        skip_ws();
        if (pos >= text.size() || !(std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.')) {
          fail("exponent must be a literal constant");
        }
        exponent = neg ? -number() : number();
      }
      skip_ws();
      if (pos < text.size() && text[pos] == '^') {
        fail("chained exponents are not supported");
      }
      return e.push({op::pow, exponent, 0, base, -1});
    }

    std::int32_t parse_primary(expression& e) {
      skip_ws();
      if (pos >= text.size()) {
        fail("unexpected end of expression");
      }
      auto const c = text[pos];
      if (c == '(') {
        ++pos;
        auto inner = parse_expr(e);
        if (!accept(')')) fail("expected ')'");
        return inner;
      }
      if (c == 'x') {
        auto const start = pos++;
        std::size_t index = 0;
        auto const digits = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
          index = index * 10 + static_cast<std::size_t>(text[pos] - '0');
          ++pos;
        }
        if (digits == pos) {
          pos = start;
          fail("expected a variable index after 'x'");
        }
        if (index < 1 || index > num_variables) {
          pos = start;
          fail("unknown variable x" + std::to_string(index) + " (problem has " + std::to_string(num_variables) +
               " variables)");
        }
        return e.push({op::variable, 0.0, static_cast<std::uint32_t>(index - 1), -1, -1});
      }
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        return e.push({op::constant, number(), 0, -1, -1});
      }
      fail("unexpected character '" + std::string(1, c) + "'");
    }
  };

  std::vector<node> m_nodes;
  std::int32_t m_root = -1;
};

}  // namespace shells

#endif  // SHELLS_EXPRESSION_HPP_
