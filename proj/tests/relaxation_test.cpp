#include "shells/bench_problems.hpp"
#include "shells/oracle.hpp"
#include "shells/relaxation.hpp"

#include "oracles/brute_force.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace shells {
namespace {

sampler_config budget(std::size_t b, std::uint64_t seed = 42) {
  sampler_config cfg;
  cfg.budget = b;
  cfg.seed = seed;
  return cfg;
}

relaxation_descriptor beam_relaxation(problem_spec const& p) { return scaled_relaxation(p, 1.5, 1.2); }

TEST(ExtractTheta, IdentityRelaxationLeavesNothing) {
  auto const p = beam_problem();
  auto const shell = sample_lower_shell(p, budget(5000));
  auto const other = sample_lower_shell(p, budget(5000, 7));
  auto const t = extract_theta(other, shell, p, p);
  EXPECT_TRUE(t.theta.empty());
  EXPECT_EQ(t.discarded_feasible, t.source_size);
  EXPECT_EQ(t.source_size, other.size());
}

TEST(ExtractTheta, BeamThetaLeavesTheFeasibleSet) {
  auto const p = beam_problem();
  auto const r = run_two_sided(p, beam_relaxation(p), budget(100000));
  ASSERT_FALSE(r.theta.theta.empty());
  for (auto const& a : r.theta.theta) {
    auto const d = a.x[0];
    auto const g = a.x[1];
    bool const off_box = d <= 0.0 || d > 0.1 || g < 0.001 || g > 0.1;
    EXPECT_TRUE(off_box || oracle::beam(d, g).stress > 150e6) << d << ", " << g;
  }
  EXPECT_EQ(r.theta.theta.size() + r.theta.discarded_feasible + r.theta.discarded_dominated +
                r.theta.discarded_nadir,
            r.theta.source_size);
}

TEST(ExtractTheta, FilterAgreesWithTheDefinition) {
  auto const p = beam_problem();
  auto const r = run_two_sided(p, beam_relaxation(p), budget(20000, 5));
  auto const shell = testing_util::images(r.shell);
  auto const nad = oracle::nadir(shell);
  std::size_t expected = 0;
  for (auto const& x : r.relaxed_shell) {
    auto const b = oracle::beam(x.x[0], x.x[1]);
    bool const outside = b.stress > 150e6 * (1 + 1e-9) || x.x[0] > 0.1 || x.x[1] > 0.1 || x.x[1] < 0.001;
    if (!outside) continue;
    bool dominated = false;
    for (auto const& s : shell) dominated = dominated || oracle::dominated(b.f, s);
    if (!dominated && oracle::dominated(nad, b.f)) ++expected;
  }
  EXPECT_EQ(r.theta.theta.size(), expected);
}

TEST(RunTwoSided, BeamDefaultRunPassesTheValidator) {
  auto const p = beam_problem();
  auto const r = run_two_sided(p, beam_relaxation(p), budget(100000));
  EXPECT_GE(r.shell.size(), 50U);
  ASSERT_FALSE(r.theta.theta.empty());
  ASSERT_TRUE(r.report.has_value());
  EXPECT_TRUE(r.pass()) << r.report->to_json().dump();
  for (auto id : {condition::approx_antichain, condition::approx_undominated, condition::approx_above_nadir}) {
    EXPECT_TRUE(r.report->at(id).pass) << id;
  }
  ASSERT_EQ(r.bounds.size(), 2U);
  for (std::size_t l = 0; l < 2; ++l) {
    ASSERT_TRUE(r.bounds[l].upper.has_value());
    EXPECT_GT(*r.bounds[l].upper, r.bounds[l].lower);
  }
}

TEST(RunTwoSided, ConcurrentRunsGiveTheSameResult) {
  auto const p = beam_problem();
  auto const a = run_two_sided(p, beam_relaxation(p), budget(10000), 1);
  auto const b = run_two_sided(p, beam_relaxation(p), budget(10000), 2);
  EXPECT_EQ(testing_util::images(a.theta.theta), testing_util::images(b.theta.theta));
  EXPECT_EQ(testing_util::images(a.shell), testing_util::images(b.shell));
}

TEST(RunTwoSided, ZeroBudgetIsAnError) {
  auto const p = beam_problem();
  EXPECT_THROW((void)run_two_sided(p, beam_relaxation(p), budget(0)), std::invalid_argument);
}

TEST(RunTwoSided, Example1ThetaIsNotAnUpperShell) {
  auto const p = example1_problem();
  auto const r = run_two_sided(p, example1_relaxation(0, 6), budget(20000));
  if (r.theta.theta.empty()) {
    SUCCEED() << "theta empty";
    return;
  }
  auto const grid = grid_enumerate(p, 0.05);
  // Every element on its own fails US-4 or US-5 against the grid oracle.
  for (std::size_t i = 0; i < r.theta.theta.size(); ++i) {
    std::vector<candidate_solution> one{r.theta.theta[i]};
    auto const rep = check_upper_shell_oracle(one, grid.efficient_set, p);
    EXPECT_FALSE(rep.at(condition::upper_undominated).pass && rep.at(condition::upper_above_nadir).pass)
        << "element " << i;
  }
}

TEST(ChebyshevGap, MatchesABruteForceScan) {
  std::mt19937_64 rng(8);
  for (int round = 0; round < 50; ++round) {
    auto const as = testing_util::points(testing_util::uniform_points(40, 2, rng));
    auto const ss = testing_util::points(testing_util::uniform_points(60, 2, rng));
    double want = 0.0;
    for (auto const& a : as) {
      double nearest = std::numeric_limits<double>::infinity();
      for (auto const& s : ss) {
        nearest = std::min(nearest, std::max(std::abs(a.fx[0] - s.fx[0]), std::abs(a.fx[1] - s.fx[1])));
      }
      want = std::max(want, nearest);
    }
    EXPECT_DOUBLE_EQ(chebyshev_gap(as, ss), want);
  }
  EXPECT_THROW((void)chebyshev_gap(testing_util::points({{0, 0}}), {}), precondition_error);
}

}  // namespace
}  // namespace shells
