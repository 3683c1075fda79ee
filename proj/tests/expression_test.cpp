#include "shells/expression.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

namespace shells {
namespace {

double at(char const* text, std::vector<double> x) { return expression::parse(text, x.size())(x); }

TEST(Expression, PrecedenceAndAssociativity) {
  EXPECT_DOUBLE_EQ(at("1+2*3", {}), 7.0);
  EXPECT_DOUBLE_EQ(at("(1+2)*3", {}), 9.0);
  EXPECT_DOUBLE_EQ(at("8-3-2", {}), 3.0);
  EXPECT_DOUBLE_EQ(at("8/4/2", {}), 1.0);
}

TEST(Expression, UnaryMinusBindsLooserThanPower) {
  EXPECT_DOUBLE_EQ(at("-2^2", {}), -4.0);
  EXPECT_DOUBLE_EQ(at("(-2)^2", {}), 4.0);
  EXPECT_DOUBLE_EQ(at("2^-1", {}), 0.5);
  EXPECT_DOUBLE_EQ(at("2^(-2)", {}), 0.25);
}

TEST(Expression, VariablesAreOneBased) {
  EXPECT_DOUBLE_EQ(at("x1-2*x2", {5, 1}), 3.0);
  EXPECT_DOUBLE_EQ(at("-(x1-3)^2-(x2-4)^2", {3, 4}), 0.0);
  EXPECT_DOUBLE_EQ(at("-(x1-4)^2-(x2-1)^2", {3, 4}), -10.0);
}

TEST(Expression, ScientificNotation) {
  EXPECT_DOUBLE_EQ(at("1.5e3+2E-1", {}), 1500.2);
  EXPECT_DOUBLE_EQ(at("150e6", {}), 150e6);
}

TEST(Expression, DomainErrorsAreReportedNotThrown) {
  auto const e = expression::parse("1/(x1-x2)", 2);
  auto const r = e.evaluate(std::vector<double>{1, 1});
  EXPECT_FALSE(r.ok());
  EXPECT_STREQ(r.domain_error, "division by zero");
  EXPECT_TRUE(std::isnan(e(std::vector<double>{1, 1})));

  EXPECT_FALSE(expression::parse("x1^(-1)", 1).evaluate(std::vector<double>{0}).ok());
  EXPECT_FALSE(expression::parse("x1^0.5", 1).evaluate(std::vector<double>{-1}).ok());
  EXPECT_FALSE(expression::parse("1e300*1e300", 0).evaluate(std::vector<double>{}).ok());
}

TEST(Expression, SyntaxErrorsCarryAPosition) {
  try {
    (void)expression::parse("x1 + * 2", 1);
    FAIL() << "expected parse_error";
  } catch (parse_error const& e) {
    EXPECT_EQ(e.line(), 1U);
    EXPECT_EQ(e.column(), 6U);
  }
  EXPECT_THROW((void)expression::parse("x3", 2), parse_error);
  EXPECT_THROW((void)expression::parse("x0", 2), parse_error);
  EXPECT_THROW((void)expression::parse("(1+2", 0), parse_error);
  EXPECT_THROW((void)expression::parse("2^x1", 1), parse_error);
  EXPECT_THROW((void)expression::parse("2^2^2", 0), parse_error);
  EXPECT_THROW((void)expression::parse("1 2", 0), parse_error);
  EXPECT_THROW((void)expression::parse("", 0), parse_error);
}

TEST(Expression, NegatedFlipsTheSign) {
  auto const e = expression::parse("x1*x2", 2);
  std::vector<double> x{2, 3};
  EXPECT_DOUBLE_EQ(e.negated()(x), -6.0);
  EXPECT_DOUBLE_EQ(e.negated().negated()(x), 6.0);
}

TEST(Expression, PrintedFormParsesBackToTheSameFunction) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  for (char const* text : {"-(x1-3)^2-(x2-4)^2", "(74078.75477164732)*(x1+x2)*x2", "x1/(x2^4+1)-2^-1*x1",
                           "-x1^3+0.1*x2"}) {
    auto const e = expression::parse(text, 2);
    auto const back = expression::parse(e.to_string(), 2);
    for (int t = 0; t < 50; ++t) {
      std::vector<double> x{u(rng), u(rng)};
      EXPECT_EQ(e(x), back(x)) << text << " printed as " << e.to_string();
    }
  }
}

TEST(Expression, ArityIsTheLargestVariableIndex) {
  EXPECT_EQ(expression::parse("3", 4).arity(), 0U);
  EXPECT_EQ(expression::parse("x1+x3", 4).arity(), 3U);
}

TEST(FormatNumber, RoundTripsExactly) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int t = 0; t < 1000; ++t) {
    auto const v = u(rng);
    EXPECT_EQ(std::stod(format_number(v)), v);
  }
}

}  // namespace
}  // namespace shells
