#include "spinex/similarity.hpp"

#include <gtest/gtest.h>

using namespace spinex;

namespace {

// Plain-loop oracles, written independently of the library code paths.
double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i] / n;
    mb += b[i] / n;
  }
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

std::vector<double> ordinal_ranks(const std::vector<double>& x) {
  // rank = 1 + #{j : x_j < x_i} + #{j < i : x_j == x_i}
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    std::size_t c = 0;
    for (std::size_t j = 0; j < x.size(); ++j)
      if (x[j] < x[i] || (x[j] == x[i] && j < i)) ++c;
    r[i] = static_cast<double>(c + 1);
  }
  return r;
}

std::vector<double> column(const Matrix& m, Eigen::Index j) {
  std::vector<double> c;
  for (Eigen::Index i = 0; i < m.rows(); ++i) c.push_back(m(i, j));
  return c;
}

Matrix spearman_oracle(const Matrix& x) {
  std::vector<std::vector<double>> ranks;
  for (Eigen::Index j = 0; j < x.cols(); ++j) ranks.push_back(ordinal_ranks(column(x, j)));
  Matrix s(x.cols(), x.cols());
  for (Eigen::Index a = 0; a < x.cols(); ++a)
    for (Eigen::Index b = 0; b < x.cols(); ++b) s(a, b) = pearson(ranks[a], ranks[b]);
  return s;
}

Matrix random_matrix(Eigen::Index r, Eigen::Index c, Rng& rng) {
  std::uniform_real_distribution<double> u(0, 1);
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = u(rng);
  return m;
}

Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
  std::vector<std::vector<double>> v;
  for (auto r : rows) v.emplace_back(r);
  return from_rows(v);
}

const std::vector<SimilarityMethod> kAll = all_similarity_methods();

SimilarityOptions quiet() {
  SimilarityOptions o;
  o.on_warning = [](const std::string&) {};
  return o;
}

}  // namespace

TEST(RankData, Examples) {
  EXPECT_EQ(rank_data(std::vector<double>{10, 20, 30}), (std::vector<double>{1, 2, 3}));
  EXPECT_EQ(rank_data(std::vector<double>{30, 10, 20}), (std::vector<double>{3, 1, 2}));
  EXPECT_EQ(rank_data(std::vector<double>{5, 5}), (std::vector<double>{1, 2}));
}

TEST(RankData, MatchesCountingOracleWithTies) {
  Rng rng(5);
  std::uniform_int_distribution<int> u(0, 4);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> x(9);
    for (double& v : x) v = u(rng);
    EXPECT_EQ(rank_data(x), ordinal_ranks(x));
  }
}

TEST(Correlation, Examples) {
  EXPECT_NEAR(correlation_similarity(mat({{1, 2}, {2, 4}, {3, 6}}))(0, 1), 1.0, 1e-12);
  EXPECT_NEAR(correlation_similarity(mat({{1, 2}, {2, 1}, {3, 3}}))(0, 1), 0.5, 1e-12);
  EXPECT_NEAR(correlation_similarity(mat({{1, -1}, {2, -2}, {4, -4}}))(0, 1), -1.0, 1e-12);
}

TEST(Correlation, ZeroVarianceColumnSanitized) {
  Matrix s = correlation_similarity(mat({{1, 5}, {2, 5}, {3, 5}}));
  EXPECT_EQ(s(0, 1), 0.0);
  EXPECT_EQ(s(1, 0), 0.0);
  EXPECT_EQ(s(1, 1), 1.0);
}

TEST(Correlation, MatchesPairwiseOracle) {
  Rng rng(9);
  Matrix x = random_matrix(7, 4, rng);
  Matrix s = correlation_similarity(x);
  for (Eigen::Index a = 0; a < 4; ++a)
    for (Eigen::Index b = 0; b < 4; ++b) EXPECT_NEAR(s(a, b), pearson(column(x, a), column(x, b)), 1e-12);
}

TEST(Cosine, Examples) {
  EXPECT_NEAR(cosine_similarity(mat({{1, 0}, {0, 1}}))(0, 1), 0.0, 1e-15);
  EXPECT_NEAR(cosine_similarity(mat({{1, 1}, {2, 2}}))(0, 1), 1.0, 1e-12);
  EXPECT_NEAR(cosine_similarity(mat({{1, 0}, {1, 1}}))(0, 1), 0.70711, 1e-5);
  // zero row -> 0 against everything
  Matrix z = cosine_similarity(mat({{0, 0}, {1, 1}}));
  EXPECT_EQ(z(0, 1), 0.0);
  EXPECT_EQ(z(0, 0), 0.0);
}

TEST(Spearman, Examples) {
  EXPECT_NEAR(spearman_similarity(mat({{1, 10}, {2, 30}, {3, 31}, {4, 100}}))(0, 1), 1.0, 1e-12);
  EXPECT_NEAR(spearman_similarity(mat({{1, 10}, {2, 3}, {3, 1}, {4, -5}}))(0, 1), -1.0, 1e-12);
}

TEST(Spearman, MatchesPearsonOfRanksOracle) {
  Rng rng(21);
  for (int t = 0; t < 200; ++t) {
    const Eigen::Index r = 4 + t % 3, c = 3 + t % 2;
    Matrix x = random_matrix(r, c, rng);
    Matrix s = spearman_similarity(x);
    Matrix o = spearman_oracle(x);
    ASSERT_EQ(s.rows(), o.rows());
    EXPECT_LE((s - o).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Euclidean, Examples) {
  Matrix s = euclidean_similarity(mat({{0, 0}, {1, 0}, {3, 0}, {0, 0}}));
  EXPECT_NEAR(s(0, 1), 0.5, 1e-12);
  EXPECT_NEAR(s(1, 2), 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(s(0, 2), 0.25, 1e-12);
  EXPECT_NEAR(s(0, 3), 1.0 / (1.0 + 1e-4), 1e-12);
  EXPECT_NEAR(s(0, 0), 1.0 / (1.0 + 1e-4), 1e-12);
}

TEST(Combined, SingleMethodIsExact) {
  Rng rng(2);
  Matrix x = random_matrix(6, 3, rng);
  for (auto m : kAll) {
    std::vector<SimilarityMethod> one{m};
    EXPECT_EQ(combined_similarity(x, one, quiet()), method_similarity(x, m, false)) << to_string(m);
  }
}

TEST(Combined, PaddingExample) {
  Matrix x = mat({{0.1, 0.9}, {0.4, 0.2}, {0.8, 0.5}});
  std::vector<SimilarityMethod> ms{SimilarityMethod::correlation, SimilarityMethod::euclidean};
  Matrix s = combined_similarity(x, ms, quiet());
  Matrix e = euclidean_similarity(x);
  Matrix c = correlation_similarity(x);
  ASSERT_EQ(s.rows(), 3);
  EXPECT_NEAR(s(2, 2), e(2, 2) / 2.0, 1e-15);
  EXPECT_NEAR(s(0, 1), (c(0, 1) + e(0, 1)) / 2.0, 1e-15);
  EXPECT_NEAR(s(1, 2), e(1, 2) / 2.0, 1e-15);
}

TEST(Combined, DegenerateInputsGiveIdentity) {
  EXPECT_EQ(combined_similarity(mat({{0.3, 0.4}}), kAll, quiet()), Matrix::Identity(1, 1));
  Matrix onecol = mat({{0.1}, {0.2}, {0.3}});
  EXPECT_EQ(combined_similarity(onecol, kAll, quiet()), Matrix::Identity(3, 3));
}

TEST(Combined, WeightedMean) {
  Rng rng(4);
  Matrix x = random_matrix(5, 3, rng);
  std::vector<SimilarityMethod> ms{SimilarityMethod::cosine, SimilarityMethod::euclidean};
  auto o = quiet();
  o.weights = {0.75, 0.25};
  Matrix s = combined_similarity(x, ms, o);
  Matrix ref = 0.75 * cosine_similarity(x) + 0.25 * euclidean_similarity(x);
  EXPECT_LE((s - ref).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Combined, ConsistentShapesGivesSampleSizedMatrices) {
  Rng rng(8);
  Matrix x = random_matrix(6, 3, rng);
  auto o = quiet();
  o.consistent_shapes = true;
  for (auto m : kAll) EXPECT_EQ(method_similarity(x, m, true).rows(), 6);
  EXPECT_EQ(combined_similarity(x, kAll, o).rows(), 6);
}

TEST(Combined, SymmetricFiniteOverRandomPopulations) {
  Rng rng(13);
  std::uniform_int_distribution<int> rows(2, 30), cols(2, 8);
  for (int t = 0; t < 1000; ++t) {
    Matrix x = random_matrix(rows(rng), cols(rng), rng);
    if (t % 7 == 0) x.col(0).setConstant(0.5);  // zero-variance column
    Matrix s = combined_similarity(x, kAll, quiet());
    ASSERT_TRUE(s.allFinite());
    ASSERT_LE((s - s.transpose()).cwiseAbs().maxCoeff(), 1e-12);
    Matrix e = euclidean_similarity(x);
    ASSERT_TRUE((e.array() > 0).all() && (e.array() <= 1).all());
  }
}

TEST(Similarity, PermutationEquivariance) {
  Rng rng(17);
  Matrix x = random_matrix(6, 3, rng);
  std::vector<Eigen::Index> perm{3, 0, 5, 1, 4, 2};
  Matrix px(6, 3);
  for (Eigen::Index i = 0; i < 6; ++i) px.row(i) = x.row(perm[static_cast<std::size_t>(i)]);
  for (auto f : {cosine_similarity, euclidean_similarity}) {
    Matrix s = f(x), ps = f(px);
    for (Eigen::Index i = 0; i < 6; ++i)
      for (Eigen::Index j = 0; j < 6; ++j)
        EXPECT_NEAR(ps(i, j), s(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]), 1e-14);
  }
}

TEST(Sanitize, ReplacesNonFinite) {
  Matrix m(1, 3);
  m << std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::infinity(),
      -std::numeric_limits<double>::infinity();
  sanitize(m);
  EXPECT_EQ(m(0, 0), 0.0);
  EXPECT_EQ(m(0, 1), 1.0);
  EXPECT_EQ(m(0, 2), -1.0);
}

TEST(UpdateSimilarity, UnchangedReturnsOld) {
  Rng rng(1);
  Matrix x = random_matrix(5, 3, rng);
  Matrix old = Matrix::Constant(5, 5, 0.123);
  EXPECT_EQ(update_similarity_matrix(old, x, x, kAll, quiet()), old);
}

TEST(UpdateSimilarity, ChangedRowsMatchFullRecompute) {
  Rng rng(6);
  std::vector<SimilarityMethod> ms{SimilarityMethod::cosine, SimilarityMethod::euclidean};
  Matrix x = random_matrix(6, 3, rng);
  Matrix old = combined_similarity(x, ms, quiet());
  Matrix y = x;
  y.row(2) = random_matrix(1, 3, rng);
  Matrix up = update_similarity_matrix(old, x, y, ms, quiet());
  Matrix full = combined_similarity(y, ms, quiet());
  EXPECT_LE((up.row(2) - full.row(2)).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LE((up.col(2) - full.col(2)).cwiseAbs().maxCoeff(), 1e-10);
  for (Eigen::Index i = 0; i < 6; ++i)
    for (Eigen::Index j = 0; j < 6; ++j)
      if (i != 2 && j != 2) {
        EXPECT_EQ(up(i, j), old(i, j));
      }

  Matrix z = random_matrix(6, 3, rng);
  EXPECT_LE((update_similarity_matrix(old, x, z, ms, quiet()) - combined_similarity(z, ms, quiet())).cwiseAbs().maxCoeff(),
            1e-10);
}
