#include "spinex/core.hpp"

#include <gtest/gtest.h>

using namespace spinex;

TEST(ScaleToDomain, Corners) {
  std::vector<Bound> b{{-5, 5}, {-5, 5}};
  EXPECT_EQ(scale_to_domain(std::vector<double>{0, 0}, b), (std::vector<double>{-5, -5}));
  std::vector<Bound> b2{{-5, 5}, {0, 10}};
  EXPECT_EQ(scale_to_domain(std::vector<double>{1, 1}, b2), (std::vector<double>{5, 10}));
  std::vector<Bound> b3{{-32.768, 32.768}};
  EXPECT_DOUBLE_EQ(scale_to_domain(std::vector<double>{0.5}, b3)[0], 0.0);
}

TEST(ScaleToDomain, LengthMismatchThrows) {
  std::vector<Bound> b{{0, 1}};
  EXPECT_THROW(scale_to_domain(std::vector<double>{0.1, 0.2}, b), dimension_error);
}

TEST(ScaleToDomain, MonotonePerCoordinate) {
  Rng rng(7);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<Bound> b{{-3, 2}, {10, 11}, {-1e3, 1e3}};
  for (int t = 0; t < 500; ++t) {
    std::vector<double> a(3), c(3);
    for (int i = 0; i < 3; ++i) {
      a[i] = u(rng);
      c[i] = a[i] + (1 - a[i]) * u(rng);
    }
    auto pa = scale_to_domain(a, b), pc = scale_to_domain(c, b);
    for (int i = 0; i < 3; ++i) EXPECT_LE(pa[i], pc[i]);
  }
}

TEST(NormalizeFitness, Examples) {
  EXPECT_EQ(normalize_fitness(std::vector<double>{1, 2, 3}), (std::vector<double>{0, 0.5, 1}));
  EXPECT_EQ(normalize_fitness(std::vector<double>{7, 7, 7}), (std::vector<double>{1, 1, 1}));
  EXPECT_EQ(normalize_fitness(std::vector<double>{5}), (std::vector<double>{1}));
}

TEST(NormalizeFitness, RangeAndArgExtremaPreserved) {
  Rng rng(3);
  std::normal_distribution<double> g(0, 10);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> v(17);
    for (double& x : v) x = g(rng);
    auto n = normalize_fitness(v);
    for (double x : n) {
      EXPECT_GE(x, 0.0);
      EXPECT_LE(x, 1.0);
    }
    EXPECT_EQ(std::min_element(v.begin(), v.end()) - v.begin(), std::min_element(n.begin(), n.end()) - n.begin());
    EXPECT_EQ(std::max_element(v.begin(), v.end()) - v.begin(), std::max_element(n.begin(), n.end()) - n.begin());
  }
}

TEST(InitSolutionSpace, ShapeRangeDeterminism) {
  Rng a(11), b(11);
  Matrix m = init_solution_space(2, 3, a);
  EXPECT_EQ(m.rows(), 2);
  EXPECT_EQ(m.cols(), 3);
  EXPECT_TRUE((m.array() >= 0).all() && (m.array() < 1).all());
  EXPECT_EQ(m, init_solution_space(2, 3, b));
}

TEST(InitSolutionSpace, ColumnMeansSeed42) {
  Rng rng(42);
  Matrix m = init_solution_space(100, 2, rng);
  for (Eigen::Index j = 0; j < 2; ++j) {
    EXPECT_GE(m.col(j).mean(), 0.35);
    EXPECT_LE(m.col(j).mean(), 0.65);
  }
}

TEST(PopulationStd, MatchesDirectFormula) {
  std::vector<double> v{2, 4, 4, 4, 5, 5, 7, 9};
  EXPECT_DOUBLE_EQ(population_std(v), 2.0);
  Matrix f(3, 2);
  f << 1, 0, 2, 0, 3, 0;
  EXPECT_NEAR(fitness_diversity(f), std::sqrt(2.0 / 3.0) / 2.0, 1e-15);
}

TEST(OptimizerConfig, Validation) {
  OptimizerConfig c;
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(c.population_size, 100u);
  EXPECT_EQ(c.max_iterations, 1000u);
  EXPECT_EQ(c.similarity_methods.size(), 4u);
  c.step_size_min = 0.5;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.similarity_methods.clear();
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(EngineState, WeightsUniform) {
  OptimizerConfig c;
  auto s = EngineState::from_config(c);
  double sum = 0;
  for (double w : s.weights) sum += w;
  EXPECT_NEAR(sum, 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(s.step_size, 0.1);
}

namespace {
Problem quad() {
  Problem p;
  p.name = "quad";
  p.n_variables = 2;
  p.bounds = {{-1, 1}, {-1, 1}};
  p.evaluate = [](std::span<const double> x) { return std::vector<double>{x[0] * x[0] + x[1] * x[1]}; };
  return p;
}
}  // namespace

TEST(Problem, ValidateRejectsBadBounds) {
  auto p = quad();
  EXPECT_NO_THROW(p.validate());
  p.bounds[1] = {1, 1};
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = quad();
  p.bounds.pop_back();
  EXPECT_THROW(p.validate(), dimension_error);
}

TEST(CountingObjective, CountsClampsAndEnforcesBudget) {
  auto p = quad();
  CountingObjective f(p, 3);
  EXPECT_DOUBLE_EQ(f.scalar(std::vector<double>{0.5, 0.5}), 0.0);
  // genotype 2 clamps to 1 -> phenotype 1
  EXPECT_DOUBLE_EQ(f.scalar(std::vector<double>{2.0, 0.5}), 1.0);
  EXPECT_DOUBLE_EQ(f.scalar(std::vector<double>{-1.0, 0.5}), 1.0);
  EXPECT_EQ(f.count(), 3u);
  EXPECT_EQ(f.remaining(), 0u);
  EXPECT_THROW(f.scalar(std::vector<double>{0.5, 0.5}), budget_exhausted);
  EXPECT_EQ(f.count(), 3u);
}

TEST(CountingObjective, ArityChecked) {
  auto p = quad();
  p.n_objectives = 2;
  CountingObjective f(p);
  EXPECT_THROW(f(std::vector<double>{0.5, 0.5}), dimension_error);
}

TEST(CountingObjective, EvaluateRowsInRowOrder) {
  auto p = quad();
  CountingObjective f(p);
  Matrix s(3, 2);
  s << 0.5, 0.5, 1, 0.5, 0.5, 0;
  Matrix out = f.evaluate_rows(s);
  EXPECT_DOUBLE_EQ(out(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(out(1, 0), 1.0);
  EXPECT_DOUBLE_EQ(out(2, 0), 1.0);
  EXPECT_EQ(f.count(), 3u);
}
