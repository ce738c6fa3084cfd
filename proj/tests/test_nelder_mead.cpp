#include "spinex/nelder_mead.hpp"

#include <gtest/gtest.h>

using namespace spinex;

TEST(NelderMead, OneDimensionalQuadratic) {
  auto f = [](std::span<const double> x) { return x[0] * x[0]; };
  auto r = nelder_mead_search(f, {1.0});
  EXPECT_LE(std::abs(r.x[0]), 1e-3);
}

TEST(NelderMead, SphereFromOffCentre) {
  auto f = [](std::span<const double> x) { return x[0] * x[0] + x[1] * x[1]; };
  auto r = nelder_mead_search(f, {0.8, 0.8});
  EXPECT_LE(std::hypot(r.x[0], r.x[1]), 1e-3);
}

TEST(NelderMead, NeverWorseThanStart) {
  Rng rng(3);
  std::uniform_real_distribution<double> u(-2, 2);
  auto rastrigin = [](std::span<const double> x) {
    double s = 10.0 * static_cast<double>(x.size());
    for (double v : x) s += v * v - 10 * std::cos(2 * std::numbers::pi * v);
    return s;
  };
  for (int t = 0; t < 50; ++t) {
    std::vector<double> x0{u(rng), u(rng), u(rng)};
    NelderMeadOptions o;
    o.max_iterations = 20;
    auto r = nelder_mead_search(rastrigin, x0, o);
    EXPECT_LE(r.fx, rastrigin(x0));
    EXPECT_DOUBLE_EQ(r.fx, rastrigin(r.x));
  }
}

TEST(NelderMead, ConstantFunctionReturnsStart) {
  auto f = [](std::span<const double>) { return 3.0; };
  auto r = nelder_mead_search(f, {0.2, 0.7});
  EXPECT_EQ(r.x, (std::vector<double>{0.2, 0.7}));
  EXPECT_EQ(r.fx, 3.0);
}

TEST(NelderMead, BudgetExhaustionStopsEarly) {
  std::size_t calls = 0;
  auto f = [&](std::span<const double> x) {
    if (calls == 7) throw budget_exhausted();
    ++calls;
    return x[0] * x[0] + x[1] * x[1];
  };
  auto r = nelder_mead_search(f, {1.0, 1.0});
  EXPECT_TRUE(r.budget_hit);
  EXPECT_EQ(r.evaluations, 7u);
  EXPECT_LE(r.fx, 2.0);
}

TEST(NelderMead, IterationCap) {
  auto f = [](std::span<const double> x) { return x[0] * x[0]; };
  auto r = nelder_mead_search(f, {1.0}, {.max_iterations = 3});
  EXPECT_LE(r.iterations, 3u);
}

TEST(NelderMead, ConvenienceWrapper) {
  auto f = [](std::span<const double> x) { return (x[0] - 0.3) * (x[0] - 0.3); };
  EXPECT_NEAR(nelder_mead(f, {0.9}, 200)[0], 0.3, 1e-4);
}
