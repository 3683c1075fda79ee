#include "shells/bench_problems.hpp"
#include "shells/monotone.hpp"
#include "shells/oracle.hpp"
#include "shells/sampler.hpp"
#include "shells/shell_conditions.hpp"

#include "oracles/brute_force.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <vector>

namespace shells {
namespace {

std::vector<interval> unit_box(std::size_t n) { return std::vector<interval>(n, interval{0, 1, false, false}); }

// max x1, max x2 subject to x1 + x2 <= 1 on [0,1]^2.
problem_spec linear_problem() {
  problem_spec p;
  p.name = "linear";
  p.n = 2;
  p.k = 2;
  p.objectives = {expression::parse("2*x1+x2", 2), expression::parse("x1+2*x2", 2)};
  p.monotone_objectives = {true, true};
  p.constraints = {{expression::parse("x1+x2", 2), 1.0, true}};
  p.box = unit_box(2);
  p.validate();
  return p;
}

TEST(ProbeStrongMonotonicity, PositiveLinearFormHasNoViolations) {
  auto const v = probe_strong_monotonicity(expression::parse("3*x1+2*x2", 2), unit_box(2), 10000, 1);
  EXPECT_TRUE(v.supported());
  EXPECT_TRUE(v.accepted());
  EXPECT_EQ(v.probe_trials, 10000U);
}

TEST(ProbeStrongMonotonicity, BeamMassIsNotIncreasing) {
  auto const p = beam_problem();
  auto const v = probe_strong_monotonicity(p.objectives[0], p.box, 10000, 1, p.monotone_objectives[0]);
  ASSERT_FALSE(v.supported());
  auto const& w = v.violations.front();
  for (std::size_t i = 0; i < 2; ++i) EXPECT_LE(w.lower[i], w.upper[i]);
  EXPECT_NE(w.lower, w.upper);
  EXPECT_GE(w.value_lower, w.value_upper);
  EXPECT_EQ(w.value_lower, p.objectives[0](w.lower));
}

TEST(ProbeStrongMonotonicity, BeamDeflectionIsIncreasing) {
  auto const p = beam_problem();
  EXPECT_TRUE(probe_strong_monotonicity(p.objectives[1], p.box, 10000, 1).supported());
}

TEST(ProbeStrongMonotonicity, ConstantIsNotStrictlyIncreasing) {
  EXPECT_FALSE(probe_strong_monotonicity(expression::parse("2+0*x1", 1), unit_box(1), 100, 1).supported());
}

TEST(ProbeStrongMonotonicity, ProbeRegionDoublesTheBoxUpward) {
  auto const r = probe_region(std::vector<interval>{{1, 5, false, false}});
  EXPECT_EQ(r[0].lo, 1.0);
  EXPECT_EQ(r[0].hi, 9.0);
  EXPECT_THROW((void)probe_strong_monotonicity(expression::parse("x1", 1), unit_box(1), 0, 1), std::invalid_argument);
}

TEST(ShiftSchedule, ZeroStepIsRejected) {
  shift_schedule s;
  s.initial_step = 0.0;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  auto const p = linear_problem();
  auto const seeds = std::vector<candidate_solution>{evaluate(p, std::vector<double>{0.5, 0.5})};
  EXPECT_THROW((void)shift_candidates(seeds, p, s, 1), std::invalid_argument);
  s.initial_step = 1e-3;
  s.growth = 1.0;
  EXPECT_THROW(s.validate(), std::invalid_argument);
}

TEST(ShiftCandidates, BeamSeedsLeaveTheFeasibleSet) {
  auto const p = beam_problem();
  sampler_config cfg;
  cfg.budget = 5000;
  auto const seeds = sample_lower_shell(p, cfg);
  auto const out = shift_candidates(seeds, p, {}, 1);
  ASSERT_FALSE(out.empty());
  for (auto const& s : out) {
    EXPECT_TRUE(s.candidate.outside());
    auto const& origin = seeds[s.seed_index];
    EXPECT_FALSE(oracle::dominated(std::vector<double>(s.candidate.fx.begin(), s.candidate.fx.end()),
                                   std::vector<double>(origin.fx.begin(), origin.fx.end())));
  }
}

TEST(ShiftCandidates, ShiftThatStaysInsideIsDiscarded) {
  auto const p = linear_problem();
  shift_schedule s;
  s.initial_step = 1e-6;
  s.max_steps = 1;
  auto const seeds = std::vector<candidate_solution>{evaluate(p, std::vector<double>{0.2, 0.2})};
  EXPECT_TRUE(shift_candidates(seeds, p, s, 1).empty());
}

TEST(ShiftCandidates, NeedsAMonotoneObjective) {
  auto const p = example1_problem();
  auto const seeds = std::vector<candidate_solution>{evaluate(p, std::vector<double>{3, 4})};
  EXPECT_THROW((void)shift_candidates(seeds, p, {}, 1), precondition_error);
}

TEST(ConstructUpperShellBudget, Example1IsRefusedWithAWitness) {
  auto const p = example1_problem();
  auto const seeds = std::vector<candidate_solution>{evaluate(p, std::vector<double>{3, 4})};
  auto const r = construct_upper_shell_budget(p, seeds, {}, 1);
  ASSERT_TRUE(r.refused());
  EXPECT_EQ(r.refusal->subject, "objective 1");
  ASSERT_TRUE(r.refusal->witness.has_value());
  auto const& w = *r.refusal->witness;
  EXPECT_GE(oracle::example1(w.lower[0], w.lower[1])[0], oracle::example1(w.upper[0], w.upper[1])[0]);
  EXPECT_TRUE(r.shell.empty());
  EXPECT_EQ(r.refusal->to_json()["subject"], "objective 1");
}

TEST(ConstructUpperShellBudget, NonMonotoneConstraintIsRefused) {
  auto p = linear_problem();
  p.constraints[0].monotone = false;
  auto const seeds = std::vector<candidate_solution>{evaluate(p, std::vector<double>{0.5, 0.5})};
  auto const r = construct_upper_shell_budget(p, seeds, {}, 1);
  ASSERT_TRUE(r.refused());
  EXPECT_EQ(r.refusal->subject, "constraint 1");
  EXPECT_EQ(r.refusal->reason, "not declared strongly increasing");
  EXPECT_FALSE(r.refusal->witness.has_value());
}

TEST(ConstructUpperShellBudget, NoConstraintIsRefused) {
  auto p = linear_problem();
  p.constraints.clear();
  auto const r = construct_upper_shell_budget(p, std::vector<candidate_solution>{}, {}, 1);
  ASSERT_TRUE(r.refused());
  EXPECT_EQ(r.refusal->subject, "constraints");
}

TEST(ConstructUpperShellBudget, InfeasibleSeedIsAPreconditionError) {
  auto const p = linear_problem();
  auto const seeds = std::vector<candidate_solution>{evaluate(p, std::vector<double>{0.9, 0.9})};
  EXPECT_THROW((void)construct_upper_shell_budget(p, seeds, {}, 1), precondition_error);
}

TEST(ConstructUpperShellBudget, SmallKnapsackMatchesTheEnumeration) {
  knapsack_instance inst;
  inst.profits = {{1, 2, 3}, {3, 2, 1}};
  inst.weights = {{1, 1, 1}};
  inst.capacity = {2};
  auto const p = knapsack_problem(inst);
  auto const packs = oracle::enumerate_packs(inst.profits, inst.weights, inst.capacity);
  auto const front = oracle::knapsack_front(packs);
  EXPECT_EQ(oracle::as_multiset(front), oracle::as_multiset({{3, 5}, {4, 4}, {5, 3}}));

  std::vector<candidate_solution> seeds;
  for (auto const& pk : packs) {
    if (!pk.feasible) continue;
    if (std::find(front.begin(), front.end(), pk.profit) == front.end()) continue;
    std::vector<double> x(3);
    for (std::size_t i = 0; i < 3; ++i) x[i] = pk.bits >> i & 1U;
    seeds.push_back(evaluate(p, x));
  }
  auto const r = construct_upper_shell_budget(p, seeds, {}, 1);
  ASSERT_FALSE(r.refused());
  // Every efficient pack has one free item, and flipping it gives (1,1,1).
  ASSERT_EQ(r.shell.size(), 1U);
  EXPECT_EQ(r.shell[0].candidate.x, (std::vector<double>{1, 1, 1}));
  EXPECT_EQ(r.shell[0].candidate.fx, (objective_vector{6, 6}));
  EXPECT_TRUE(oracle::upper_shell_images(testing_util::images(r.candidates()), front));
}

TEST(ConstructUpperShellBudget, RandomKnapsacksPassTheExhaustiveOracle) {
  for (std::uint64_t s = 11; s <= 14; ++s) {
    auto const inst = generate_knapsack(10, s);
    auto const p = knapsack_problem(inst);
    auto const packs = oracle::enumerate_packs(inst.profits, inst.weights, inst.capacity);
    auto const front = oracle::knapsack_front(packs);
    std::vector<candidate_solution> seeds;
    for (auto const& pk : packs) {
      if (!pk.feasible || std::find(front.begin(), front.end(), pk.profit) == front.end()) continue;
      std::vector<double> x(10);
      for (std::size_t i = 0; i < 10; ++i) x[i] = pk.bits >> i & 1U;
      seeds.push_back(evaluate(p, x));
    }
    auto const r = construct_upper_shell_budget(p, seeds, {}, s);
    ASSERT_FALSE(r.refused());
    ASSERT_FALSE(r.shell.empty());
    auto const a = r.candidates();
    for (auto const& c : a) EXPECT_TRUE(c.outside());
    EXPECT_TRUE(oracle::upper_shell_images(testing_util::images(a), front)) << "seed " << s;
    EXPECT_TRUE(check_upper_shell_oracle(a, seeds, p).pass());
    // Each element strictly dominates the seed it came from.
    for (auto const& sc : r.shell) {
      auto const y = std::vector<double>(sc.candidate.fx.begin(), sc.candidate.fx.end());
      auto const z = std::vector<double>(seeds[sc.seed_index].fx.begin(), seeds[sc.seed_index].fx.end());
      EXPECT_TRUE(oracle::dominated(z, y));
    }
  }
}

TEST(ConstructUpperShellBudget, LinearContinuousProblemPassesTheGridOracle) {
  auto const p = linear_problem();
  auto const grid = grid_enumerate(p, 1.0 / 49.0);
  EXPECT_EQ(grid.lattice_points, 2500U);
  auto const r = construct_upper_shell_budget(p, grid.efficient_set, {}, 3);
  ASSERT_FALSE(r.refused());
  ASSERT_FALSE(r.shell.empty());
  auto const a = r.candidates();
  EXPECT_TRUE(check_upper_shell_oracle(a, grid.efficient_set, p).pass());
  for (auto const& c : a) EXPECT_GT(c.x[0] + c.x[1], 1.0);
}

}  // namespace
}  // namespace shells
