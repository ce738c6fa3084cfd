#include "spinex/pareto.hpp"

#include <gtest/gtest.h>

using namespace spinex;

namespace {

using Rows = std::vector<std::vector<double>>;

// O(n^2 m) oracle written against the textbook definition.
std::vector<std::size_t> brute_front(const Rows& f) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < f.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < f.size(); ++j) {
      if (i == j) continue;
      bool all_le = true, any_lt = false;
      for (std::size_t k = 0; k < f[i].size(); ++k) {
        all_le = all_le && f[j][k] <= f[i][k];
        any_lt = any_lt || f[j][k] < f[i][k];
      }
      if (all_le && any_lt) dominated = true;
    }
    if (!dominated) out.push_back(i);
  }
  return out;
}

Rows random_rows(std::size_t n, std::size_t m, Rng& rng, int levels = 0) {
  std::uniform_real_distribution<double> u(0, 1);
  std::uniform_int_distribution<int> q(0, std::max(levels, 1));
  Rows r(n, std::vector<double>(m));
  for (auto& row : r)
    for (double& v : row) v = levels ? q(rng) : u(rng);
  return r;
}

}  // namespace

TEST(Dominates, Examples) {
  EXPECT_TRUE(dominates(std::vector<double>{1, 2}, std::vector<double>{2, 2}));
  EXPECT_FALSE(dominates(std::vector<double>{1, 2}, std::vector<double>{1, 2}));
  EXPECT_FALSE(dominates(std::vector<double>{1, 3}, std::vector<double>{2, 2}));
  EXPECT_THROW(dominates(std::vector<double>{1}, std::vector<double>{1, 2}), dimension_error);
}

TEST(ParetoFront, Example) {
  Rows s{{0}, {1}, {2}, {3}};
  Rows f{{1, 4}, {2, 2}, {3, 3}, {4, 1}};
  auto a = pareto_front(s, f);
  EXPECT_EQ(a.fitness, (Rows{{1, 4}, {2, 2}, {4, 1}}));
  EXPECT_EQ(a.solutions, (Rows{{0}, {1}, {3}}));
}

TEST(ParetoFront, MatchesBruteForceOracle) {
  Rng rng(31);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 1 + t % 40, m = 2 + t % 3;
    Rows f = random_rows(n, m, rng, t % 2 ? 3 : 0);
    EXPECT_EQ(pareto_indices(f), brute_front(f));
  }
}

TEST(ParetoFront, MembersMutuallyNonDominated) {
  Rng rng(32);
  Rows f = random_rows(200, 3, rng);
  auto idx = pareto_indices(f);
  for (auto i : idx)
    for (auto j : idx) EXPECT_FALSE(dominates(f[i], f[j]));
}

TEST(ParetoFront, MatrixOverload) {
  Matrix s(3, 1), f(3, 2);
  s << 0, 1, 2;
  f << 1, 1, 2, 2, 0, 3;
  auto a = pareto_front(s, f);
  ASSERT_EQ(a.size(), 2u);
  EXPECT_EQ(a.solutions[0], std::vector<double>{0});
  EXPECT_EQ(a.solutions[1], std::vector<double>{2});
}

TEST(UpdateParetoFront, ReEvaluatesAndDedupes) {
  std::size_t calls = 0;
  Evaluator ev = [&](std::span<const double> x) {
    ++calls;
    return std::vector<double>{x[0], 1 - x[0]};
  };
  ParetoArchive a;
  a.solutions = {{0.2}, {0.4}};
  a.fitness = {{9, 9}, {9, 9}};  // stale values get replaced
  auto u = update_pareto_front(a, {{0.4}, {0.6}}, ev);
  EXPECT_EQ(calls, 3u);
  EXPECT_EQ(u.solutions, (Rows{{0.2}, {0.4}, {0.6}}));
  EXPECT_EQ(u.fitness[1], (std::vector<double>{0.4, 0.6}));
}

TEST(CrowdingDistance, Example) {
  Rows f{{0, 4}, {1, 2}, {2, 1}, {4, 0}};
  auto d = crowding_distance(f);
  EXPECT_TRUE(std::isinf(d[0]));
  EXPECT_TRUE(std::isinf(d[3]));
  EXPECT_NEAR(d[1], 2.0 / 4 + 3.0 / 4, 1e-15);
  EXPECT_NEAR(d[2], 3.0 / 4 + 2.0 / 4, 1e-15);
  EXPECT_TRUE(std::isinf(crowding_distance(Rows{{1, 2}, {2, 1}})[0]));
}

TEST(PruneByCrowding, KeepsExtremesAndCap) {
  Rows f;
  for (int i = 0; i <= 20; ++i) f.push_back({i / 20.0, 1 - i / 20.0});
  ParetoArchive a{f, f};
  prune_by_crowding(a, 5);
  ASSERT_EQ(a.size(), 5u);
  EXPECT_NE(std::find(a.fitness.begin(), a.fitness.end(), std::vector<double>{0, 1}), a.fitness.end());
  EXPECT_NE(std::find(a.fitness.begin(), a.fitness.end(), std::vector<double>{1, 0}), a.fitness.end());
}

TEST(IdealPoint, ComponentwiseMin) {
  EXPECT_EQ(ideal_point(Rows{{1, 4}, {3, 0}, {2, 2}}), (std::vector<double>{1, 0}));
  EXPECT_TRUE(ideal_point(Rows{}).empty());
}

TEST(ParetoFront, SpecCases) {
  EXPECT_EQ(pareto_indices(Rows{{1, 2}, {2, 1}, {3, 3}}), (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(pareto_indices(Rows{{5, 5}}), (std::vector<std::size_t>{0}));
  EXPECT_EQ(pareto_indices(Rows{{1, 1}, {1, 1}, {1, 1}}).size(), 3u);
  EXPECT_TRUE(pareto_front(Rows{}, Rows{}).empty());
  EXPECT_THROW(pareto_front(Rows{{1}}, Rows{}), dimension_error);
}

TEST(ParetoFront, Idempotent) {
  Rng rng(33);
  Rows f = random_rows(100, 2, rng);
  Rows s = f;
  auto a = pareto_front(s, f);
  auto b = pareto_front(a.solutions, a.fitness);
  EXPECT_EQ(a.fitness, b.fitness);
}

TEST(UpdateParetoFront, EvictsDominatedAndKeepsArchive) {
  Evaluator ev = [](std::span<const double> x) { return std::vector<double>{x[0], x[1]}; };
  ParetoArchive empty;
  auto a = update_pareto_front(empty, {{1, 2}, {2, 1}, {3, 3}}, ev);
  EXPECT_EQ(a.solutions, (Rows{{1, 2}, {2, 1}}));
  auto b = update_pareto_front(a, {{0.5, 1.5}}, ev);
  EXPECT_EQ(b.solutions, (Rows{{2, 1}, {0.5, 1.5}}));
  auto c = update_pareto_front(b, {{4, 4}, {3, 2}}, ev);
  EXPECT_EQ(c.solutions, b.solutions);
}
