#include "spinex/explain.hpp"
#include "spinex/similarity.hpp"

#include <gtest/gtest.h>

using namespace spinex;

namespace {

Matrix uniform(Eigen::Index r, Eigen::Index c, Rng& rng) {
  std::uniform_real_distribution<double> u(0, 1);
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = u(rng);
  return m;
}

double parse_after(const std::string& text, const std::string& label) {
  const auto pos = text.find(label);
  if (pos == std::string::npos) return std::numeric_limits<double>::quiet_NaN();
  return std::stod(text.substr(pos + label.size()));
}

}  // namespace

TEST(IdentifyNeighbors, Examples) {
  Matrix s(3, 3);
  s << 1, 0.9, 0.1, 0.9, 1, 0.5, 0.1, 0.5, 1;
  EXPECT_EQ(identify_neighbors(s, 1)[0], std::vector<std::size_t>{1});
  auto id = identify_neighbors(Matrix::Identity(3, 3), 2);
  EXPECT_EQ(id[0], (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ(id[2], (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(identify_neighbors(Matrix::Identity(4, 4), 10)[0].size(), 3u);
  EXPECT_TRUE(identify_neighbors(Matrix::Identity(1, 1), 5)[0].empty());
  EXPECT_THROW(identify_neighbors(Matrix::Zero(2, 3)), dimension_error);
}

TEST(IdentifyNeighbors, MatchesArgsortOracleAndExcludesSelf) {
  Rng rng(2);
  for (int t = 0; t < 100; ++t) {
    Matrix s = uniform(12, 12, rng);
    auto nb = identify_neighbors(s, 5);
    for (std::size_t i = 0; i < 12; ++i) {
      std::vector<std::pair<double, std::size_t>> row;
      for (std::size_t j = 0; j < 12; ++j)
        if (j != i) row.push_back({-s(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)), j});
      std::sort(row.begin(), row.end());
      ASSERT_EQ(nb[i].size(), 5u);
      for (std::size_t k = 0; k < 5; ++k) {
        EXPECT_EQ(nb[i][k], row[k].second);
        EXPECT_NE(nb[i][k], i);
      }
    }
  }
}

TEST(NeighborInfluence, Examples) {
  Matrix f2(2, 1);
  f2 << 1, 2;
  EXPECT_DOUBLE_EQ(neighbor_influence(f2, {{1}, {0}})(0), -1.0);
  Matrix f3(3, 1);
  f3 << 3, 1, 2;
  EXPECT_DOUBLE_EQ(neighbor_influence(f3, {{1, 2}, {0}, {0}})(0), 1.5);
  EXPECT_TRUE(neighbor_influence(Matrix::Constant(4, 1, 2.0), {{1, 2}, {0}, {3}, {1}}).isZero());
  EXPECT_EQ(neighbor_influence(f2, {{}, {0}})(0), 0.0);
}

TEST(NeighborInfluence, MultiObjectiveAveragesObjectives) {
  Matrix f(2, 2);
  f << 1, 5, 3, 1;
  EXPECT_DOUBLE_EQ(neighbor_influence(f, {{1}, {0}})(0), ((1 - 3) + (5 - 1)) / 2.0);
}

TEST(NeighborDiversity, Examples) {
  Matrix s(3, 3);
  s << 1, 0.5, 0.7, 0.5, 1, 1, 0.7, 1, 1;
  auto d = neighbor_diversity(s, {{1, 2}, {2}, {1}});
  EXPECT_NEAR(d(0), 0.4, 1e-15);
  EXPECT_EQ(d(1), 0.0);
  EXPECT_EQ(neighbor_diversity(Matrix::Identity(2, 2), {{1}, {}})(0), 1.0);
  EXPECT_EQ(neighbor_diversity(Matrix::Identity(2, 2), {{1}, {}})(1), 1.0);
}

TEST(NeighborMetrics, BestHasNonPositiveInfluenceAndDiversityInRange) {
  Rng rng(3);
  for (int t = 0; t < 200; ++t) {
    Matrix x = uniform(15, 3, rng);
    Matrix f = uniform(15, 1, rng);
    Matrix s = combined_similarity(x, all_similarity_methods(), {false, {}, [](const std::string&) {}});
    auto nb = identify_neighbors(s, 5);
    Vector inf = neighbor_influence(f, nb);
    Vector div = neighbor_diversity(s, nb);
    Eigen::Index best = 0;
    f.col(0).minCoeff(&best);
    EXPECT_LE(inf(best), 0.0);
    EXPECT_GE(div.minCoeff(), 0.0);
    EXPECT_LE(div.maxCoeff(), 2.0);
  }
}

TEST(NeighborDiversity, RelabelingPermutesScores) {
  Rng rng(4);
  Matrix x = uniform(8, 3, rng);
  std::vector<Eigen::Index> perm{5, 2, 7, 0, 1, 6, 3, 4};
  Matrix px(8, 3);
  for (Eigen::Index i = 0; i < 8; ++i) px.row(i) = x.row(perm[static_cast<std::size_t>(i)]);
  Matrix s = euclidean_similarity(x), ps = euclidean_similarity(px);
  Vector d = neighbor_diversity(s, identify_neighbors(s, 3));
  Vector pd = neighbor_diversity(ps, identify_neighbors(ps, 3));
  for (Eigen::Index i = 0; i < 8; ++i) EXPECT_NEAR(pd(i), d(perm[static_cast<std::size_t>(i)]), 1e-14);
}

TEST(ExplainIteration, CoversAtMostThreeSolutions) {
  Rng rng(5);
  Matrix x2 = uniform(2, 2, rng);
  std::string t2 = explain_iteration(x2, euclidean_similarity(x2), uniform(2, 1, rng), 4);
  EXPECT_NE(t2.find("Iteration 4 Explanation:"), std::string::npos);
  EXPECT_NE(t2.find("Solution 1:"), std::string::npos);
  EXPECT_EQ(t2.find("Solution 2:"), std::string::npos);

  Matrix x = uniform(10, 2, rng);
  std::string t = explain_iteration(x, euclidean_similarity(x), uniform(10, 1, rng), 0);
  EXPECT_NE(t.find("Solution 2:"), std::string::npos);
  EXPECT_EQ(t.find("Solution 3:"), std::string::npos);
  EXPECT_NE(t.find("Top 3 similar neighbors: ["), std::string::npos);
}

TEST(ExplainIteration, UniformPopulationHasZeroDiversity) {
  Matrix x = Matrix::Constant(5, 2, 0.3);
  Matrix s = Matrix::Ones(5, 5);
  std::string t = explain_iteration(x, s, Matrix::Zero(5, 1), 1);
  EXPECT_NE(t.find("Average neighbor diversity: 0.0000"), std::string::npos);
}

TEST(ExplainIteration, MeanInfluenceParsesBack) {
  Rng rng(6);
  for (int t = 0; t < 50; ++t) {
    Matrix x = uniform(12, 3, rng);
    Matrix f = uniform(12, 1, rng) * 100.0;
    Matrix s = euclidean_similarity(x);
    std::string text = explain_iteration(x, s, f, static_cast<std::size_t>(t));
    const double mean = neighbor_influence(f, identify_neighbors(s, 5)).mean();
    EXPECT_NEAR(parse_after(text, "Average neighbor influence: "), mean, 1e-4);
  }
}

TEST(MakeSnapshot, CommonLength) {
  Rng rng(7);
  Matrix x = uniform(6, 2, rng);
  Matrix s = combined_similarity(x, all_similarity_methods(), {false, {}, {}});
  Matrix f = uniform(6, 1, rng);
  auto snap = make_snapshot(x, s, f, 30);
  EXPECT_EQ(snap.iteration, 30u);
  EXPECT_EQ(snap.influence.size(), 6);
  EXPECT_EQ(snap.diversity.size(), 6);
  EXPECT_EQ(snap.fitness_values.rows(), 6);
  EXPECT_EQ(snap.similarities.rows(), 6);
  EXPECT_EQ(snap.solution_space.rows(), 6);
}
