#include "shells/bench_problems.hpp"
#include "shells/csv.hpp"
#include "shells/sampler.hpp"
#include "shells/shell_conditions.hpp"

#include "oracles/brute_force.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace shells {
namespace {

// Front of Example 1 on the 0.05 lattice of [1,5]^2, computed without the library.
std::vector<std::vector<double>> example1_grid_front() {
  std::vector<std::vector<double>> images;
  for (int i = 0; i <= 80; ++i) {
    for (int j = 0; j <= 80; ++j) images.push_back(oracle::example1(1 + i * 0.05, 1 + j * 0.05));
  }
  return oracle::maximal(images);
}

TEST(Sampler, Example1ShellApproachesTheFront) {
  auto const p = example1_problem();
  sampler_config cfg;
  cfg.budget = 10000;
  cfg.seed = 42;
  auto const shell = sample_lower_shell(p, cfg);
  EXPECT_TRUE(check_lower_shell(shell, p).pass());

  auto const front = example1_grid_front();
  double worst = 0.0;
  for (auto const& c : shell) {
    double best = std::numeric_limits<double>::infinity();
    for (auto const& q : front) best = std::min(best, std::hypot(c.fx[0] - q[0], c.fx[1] - q[1]));
    worst = std::max(worst, best);
  }
  EXPECT_LE(worst, 0.5);
  EXPECT_GE(shell.size(), 50U);
}

TEST(Sampler, BeamShellMembersSatisfyTheStressConstraint) {
  auto const p = beam_problem();
  sampler_config cfg;
  cfg.budget = 100000;
  auto const shell = sample_lower_shell(p, cfg);
  EXPECT_GE(shell.size(), 50U);
  for (auto const& c : shell) {
    EXPECT_LE(oracle::beam(c.x[0], c.x[1]).stress, 150e6 * (1 + 1e-9));
  }
  EXPECT_TRUE(check_lower_shell(shell, p).pass());
}

TEST(Sampler, ShellIsTheMaximalSubsetOfWhatWasSeen) {
  auto const p = example1_problem();
  sampler_config cfg;
  cfg.budget = 2000;
  cfg.mode = sampler_mode::pure_random;
  auto const r = sample(p, cfg);
  EXPECT_EQ(r.evaluations, 2000U);
  EXPECT_EQ(r.feasible, 2000U);

  // Pure random sampling draws exactly the same points as this replay.
  std::mt19937_64 rng(cfg.seed);
  std::vector<std::vector<double>> seen;
  for (int i = 0; i < 2000; ++i) {
    auto x = random_point(p, rng);
    seen.push_back(oracle::example1(x[0], x[1]));
  }
  EXPECT_EQ(oracle::as_multiset(testing_util::images(r.shell)), oracle::as_multiset(oracle::maximal(seen)));
}

TEST(Sampler, SameSeedSameShell) {
  auto const p = beam_problem();
  sampler_config cfg;
  cfg.budget = 5000;
  cfg.seed = 9;
  auto const a = sample_lower_shell(p, cfg);
  auto const b = sample_lower_shell(p, cfg);
  EXPECT_EQ(to_csv(a, 2, 2), to_csv(b, 2, 2));
  cfg.seed = 10;
  EXPECT_NE(to_csv(sample_lower_shell(p, cfg), 2, 2), to_csv(a, 2, 2));
}

TEST(Sampler, BinaryProblemsStayOnTheCube) {
  auto const p = knapsack_problem(generate_knapsack(10, 1));
  sampler_config cfg;
  cfg.budget = 3000;
  auto const shell = sample_lower_shell(p, cfg);
  for (auto const& c : shell) {
    for (auto v : c.x) EXPECT_TRUE(v == 0.0 || v == 1.0);
  }
  EXPECT_TRUE(check_lower_shell(shell, p).pass());
}

TEST(Sampler, KeepInfeasibleFillsTheSidePool) {
  auto const p = beam_problem();
  sampler_config cfg;
  cfg.budget = 3000;
  cfg.keep_infeasible = true;
  auto const r = sample(p, cfg);
  ASSERT_FALSE(r.side_pool.empty());
  for (auto const& c : r.side_pool) EXPECT_FALSE(c.feasible());
  EXPECT_TRUE(oracle::is_antichain(testing_util::images(r.side_pool)));
}

TEST(Sampler, ConfigurationErrors) {
  auto const p = example1_problem();
  sampler_config cfg;
  cfg.budget = 0;
  EXPECT_THROW((void)sample(p, cfg), std::invalid_argument);
  cfg.budget = 10;
  cfg.population = 20;
  EXPECT_THROW((void)sample(p, cfg), std::invalid_argument);
  cfg.population = 5;
  cfg.mutation_scale = 0.0;
  EXPECT_THROW((void)sample(p, cfg), std::invalid_argument);
}

TEST(Sampler, NothingFeasibleIsAnError) {
  auto p = example1_problem();
  p.constraints = {{expression::parse("-x1", 2), -10.0, false}};  // x1 >= 10, impossible on [1,5]
  sampler_config cfg;
  cfg.budget = 1;
  cfg.population = 1;
  EXPECT_THROW((void)sample_lower_shell(p, cfg), sampler_error);
}

}  // namespace
}  // namespace shells
