#include "shells/archive.hpp"

#include "oracles/brute_force.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <vector>

namespace shells {
namespace {

using testing_util::images;
using testing_util::point;
using testing_util::points;
using vecs = std::vector<std::vector<double>>;

TEST(ParetoArchive, InsertingADominatedPointIsRejected) {
  pareto_archive a;
  EXPECT_EQ(a.insert(point({1, 1})).status, insert_status::inserted);
  EXPECT_EQ(a.insert(point({0, 1})).status, insert_status::rejected_dominated);
  EXPECT_EQ(a.size(), 1U);
}

TEST(ParetoArchive, InsertingADominatingPointEvictsMembers) {
  pareto_archive a;
  a.insert(point({0, 3}));
  a.insert(point({1, 2}));
  a.insert(point({3, 0}));
  auto const out = a.insert(point({2, 3}));
  EXPECT_EQ(out.status, insert_status::inserted);
  EXPECT_EQ(out.removed, 2U);
  EXPECT_EQ(oracle::as_multiset(images(a.members())), oracle::as_multiset({{2, 3}, {3, 0}}));
}

TEST(ParetoArchive, DuplicatesAreKeptUnlessDeduplicating) {
  pareto_archive keep;
  keep.insert(point({1, 2}));
  EXPECT_EQ(keep.insert(point({1, 2})).status, insert_status::inserted);
  EXPECT_EQ(keep.size(), 2U);

  pareto_archive dedupe(0.0, true);
  dedupe.insert(point({1, 2}));
  EXPECT_EQ(dedupe.insert(point({1, 2})).status, insert_status::rejected_duplicate);
  EXPECT_EQ(dedupe.size(), 1U);
}

TEST(ParetoArchive, ThreeObjectivesUseTheGeneralPath) {
  pareto_archive a;
  a.insert(point({1, 0, 0}));
  a.insert(point({0, 1, 0}));
  a.insert(point({0, 0, 1}));
  EXPECT_EQ(a.insert(point({0, 0, 0})).status, insert_status::rejected_dominated);
  EXPECT_EQ(a.insert(point({1, 1, 0})).removed, 2U);
  EXPECT_EQ(a.size(), 2U);
}

TEST(ParetoArchive, ToleranceTreatsNearPointsAsEqual) {
  basic_pareto_archive<candidate_solution> a(0.1, true);
  a.insert(point({1, 1}));
  EXPECT_EQ(a.insert(point({1.05, 1.05})).status, insert_status::rejected_duplicate);
  EXPECT_EQ(a.insert(point({1.2, 1.0})).status, insert_status::inserted);
}

TEST(ParetoArchive, NegativeToleranceAndUnevaluatedPointsAreRejected) {
  EXPECT_THROW(pareto_archive(-1.0), std::invalid_argument);
  pareto_archive a;
  EXPECT_THROW(a.insert(candidate_solution{}), precondition_error);
}

TEST(ParetoArchive, CopiesKeepAWorkingIndex) {
  pareto_archive a;
  for (double t = 0; t < 10; ++t) a.insert(point({t, 10 - t}));
  pareto_archive b = a;
  EXPECT_EQ(b.insert(point({20, 20})).removed, 10U);
  EXPECT_EQ(a.size(), 10U);
  a = b;
  EXPECT_EQ(a.insert(point({19, 19})).status, insert_status::rejected_dominated);
}

TEST(ParetoArchive, BiobjectiveArchiveMatchesTheQuadraticScan) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> coarse(0, 30);
  for (int round = 0; round < 200; ++round) {
    vecs ys(200, std::vector<double>(2));
    for (auto& y : ys) {
      y[0] = coarse(rng);
      y[1] = coarse(rng);
    }
    pareto_archive a;
    for (auto const& y : ys) a.insert(point(y));
    ASSERT_EQ(oracle::as_multiset(images(a.members())), oracle::as_multiset(oracle::maximal(ys)));
  }
}

TEST(PruneToAntichain, MatchesTheQuadraticScanAcrossDimensions) {
  std::mt19937_64 rng(17);
  for (std::size_t k : {2U, 3U, 4U}) {
    for (int round = 0; round < 20; ++round) {
      auto ys = testing_util::uniform_points(300, k, rng);
      auto const kept = prune_to_antichain(points(ys));
      ASSERT_EQ(oracle::as_multiset(images(kept)), oracle::as_multiset(oracle::maximal(ys)));
    }
  }
}

TEST(PruneToAntichain, ExactPathPreservesInputOrder) {
  auto const kept = prune_to_antichain(points({{0, 3}, {1, 1}, {3, 0}, {0, 0}, {2, 2}}));
  EXPECT_EQ(images(kept), (vecs{{0, 3}, {3, 0}, {2, 2}}));
}

TEST(PruneToAntichain, KeepsEqualMaximalPoints) {
  auto const kept = prune_to_antichain(points({{1, 1}, {1, 1}, {0, 0}}));
  EXPECT_EQ(kept.size(), 2U);
  auto const deduped = prune_to_antichain(points({{1, 1}, {1, 1}, {0, 0}}), 0.0, true);
  EXPECT_EQ(deduped.size(), 1U);
}

TEST(PruneToAntichain, IsPermutationIndependent) {
  std::mt19937_64 rng(23);
  auto ys = testing_util::uniform_points(500, 2, rng);
  auto const reference = oracle::as_multiset(images(prune_to_antichain(points(ys))));
  for (int s = 0; s < 20; ++s) {
    std::shuffle(ys.begin(), ys.end(), rng);
    pareto_archive a;
    for (auto const& y : ys) a.insert(point(y));
    EXPECT_EQ(oracle::as_multiset(images(a.members())), reference);
  }
}

TEST(DominatorIndex, AgreesWithALinearScan) {
  std::mt19937_64 rng(29);
  std::uniform_int_distribution<int> coarse(0, 20);
  for (std::size_t k : {2U, 3U}) {
    vecs set(150, std::vector<double>(k));
    for (auto& y : set) {
      for (auto& v : y) v = coarse(rng);
    }
    auto const cs = points(set);
    dominator_index<candidate_solution> const index{std::span<candidate_solution const>(cs)};
    for (int q = 0; q < 2000; ++q) {
      std::vector<double> y(k);
      for (auto& v : y) v = coarse(rng);
      bool expected = false;
      for (auto const& s : set) expected = expected || oracle::dominated(y, s);
      auto const found = index.find(y);
      ASSERT_EQ(found.has_value(), expected);
      if (found) EXPECT_TRUE(oracle::dominated(y, set[*found]));
    }
  }
}

TEST(DominatorIndex, EmptySetDominatesNothing) {
  std::vector<candidate_solution> none;
  dominator_index<candidate_solution> const index{std::span<candidate_solution const>(none)};
  EXPECT_FALSE(index.find(std::vector<double>{0, 0}).has_value());
}

TEST(Nadir, ComponentwiseMinimumAndIdealMaximum) {
  auto const cs = points({{0, -10}, {-10, 0}, {-5, -5}});
  EXPECT_EQ(nadir(cs), (objective_vector{-10, -10}));
  EXPECT_EQ(ideal(std::span<candidate_solution const>(cs)), (objective_vector{0, 0}));
  EXPECT_THROW((void)nadir(std::vector<candidate_solution>{}), precondition_error);
}

}  // namespace
}  // namespace shells
