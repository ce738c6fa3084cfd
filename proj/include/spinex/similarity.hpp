#pragma once

// Pairwise similarity metrics, their padded combination and incremental update.
//
// correlation and spearman correlate *columns* (variables) and produce an
// n_variables square matrix; cosine and euclidean compare *rows* (candidates)
// and produce a population_size square matrix. combined_similarity zero-pads
// every matrix to the largest size before averaging. With
// SimilarityOptions::consistent_shapes the two column metrics are replaced by
// their row-wise counterparts so every matrix is population_size square.

#include "spinex/core.hpp"

#include <iostream>
#include <numeric>
#include <optional>

namespace spinex {

// Ordinal 1-based ranks; ties resolved by original index (stable sort).
inline std::vector<double> rank_data(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(x.size());
  for (std::size_t pos = 0; pos < order.size(); ++pos) ranks[order[pos]] = static_cast<double>(pos + 1);
  return ranks;
}

// NaN -> 0, +inf -> 1, -inf -> -1.
inline void sanitize(Matrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    double& v = m.data()[i];
    if (std::isnan(v))
      v = 0.0;
    else if (std::isinf(v))
      v = v > 0 ? 1.0 : -1.0;
  }
}

namespace detail {

// Pearson correlation between the columns of x. A zero-variance column
// correlates 0 with everything else and 1 with itself.
inline Matrix pearson_of_columns(const Matrix& x) {
  const Eigen::Index n = x.rows();
  const Eigen::Index d = x.cols();
  Eigen::MatrixXd centered = x;
  const Eigen::RowVectorXd mean = centered.colwise().mean();
  centered.rowwise() -= mean;
  Eigen::VectorXd norms(d);
  for (Eigen::Index j = 0; j < d; ++j) norms(j) = centered.col(j).norm();
  Matrix out(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    out(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < d; ++j) {
      double r = 0.0;
      // relative guard: a column of identical floats can leave ~1e-17 residue
      const double eps_i = 1e-12 * (std::abs(mean(i)) + 1.0) * std::sqrt(static_cast<double>(n));
      const double eps_j = 1e-12 * (std::abs(mean(j)) + 1.0) * std::sqrt(static_cast<double>(n));
      if (norms(i) > eps_i && norms(j) > eps_j) {
        r = centered.col(i).dot(centered.col(j)) / (norms(i) * norms(j));
        r = std::clamp(r, -1.0, 1.0);
      }
      out(i, j) = r;
      out(j, i) = r;
    }
  }
  return out;
}

inline Matrix rank_columns(const Matrix& x) {
  Matrix ranks(x.rows(), x.cols());
  std::vector<double> col(static_cast<std::size_t>(x.rows()));
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) col[static_cast<std::size_t>(i)] = x(i, j);
    auto r = rank_data(col);
    for (Eigen::Index i = 0; i < x.rows(); ++i) ranks(i, j) = r[static_cast<std::size_t>(i)];
  }
  return ranks;
}

inline void require_shape(const Matrix& x, Eigen::Index min_rows, Eigen::Index min_cols, const char* what) {
  if (x.rows() < min_rows || x.cols() < min_cols)
    throw dimension_error(std::string(what) + ": need at least " + std::to_string(min_rows) + " rows and " +
                          std::to_string(min_cols) + " columns, got " + std::to_string(x.rows()) + "x" +
                          std::to_string(x.cols()));
}

}  // namespace detail

inline Matrix correlation_similarity(const Matrix& x) {
  detail::require_shape(x, 2, 2, "correlation_similarity");
  return detail::pearson_of_columns(x);
}

inline Matrix cosine_similarity(const Matrix& x) {
  detail::require_shape(x, 1, 1, "cosine_similarity");
  const Eigen::Index n = x.rows();
  Eigen::VectorXd norms(n);
  for (Eigen::Index i = 0; i < n; ++i) norms(i) = x.row(i).norm();
  Matrix out = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const double denom = norms(i) * norms(j);
      if (denom == 0.0) continue;
      const double c = std::clamp(x.row(i).dot(x.row(j)) / denom, -1.0, 1.0);
      out(i, j) = c;
      out(j, i) = c;
    }
  }
  return out;
}

inline Matrix spearman_similarity(const Matrix& x) {
  detail::require_shape(x, 2, 2, "spearman_similarity");
  return detail::pearson_of_columns(detail::rank_columns(x));
}

// 1 / (1 + d) with squared distances floored at 1e-8.
inline Matrix euclidean_similarity(const Matrix& x) {
  detail::require_shape(x, 1, 1, "euclidean_similarity");
  const Eigen::Index n = x.rows();
  Matrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const double sq = std::max((x.row(i) - x.row(j)).squaredNorm(), 1e-8);
      const double s = 1.0 / (1.0 + std::sqrt(sq));
      out(i, j) = s;
      out(j, i) = s;
    }
  }
  return out;
}

// Row-wise Pearson correlation (candidate x candidate).
inline Matrix row_correlation_similarity(const Matrix& x) {
  detail::require_shape(x, 2, 2, "row_correlation_similarity");
  Matrix t = x.transpose();
  return detail::pearson_of_columns(t);
}

// Row-wise Spearman correlation (candidate x candidate).
inline Matrix row_spearman_similarity(const Matrix& x) {
  detail::require_shape(x, 2, 2, "row_spearman_similarity");
  Matrix t = x.transpose();
  return detail::pearson_of_columns(detail::rank_columns(t));
}

struct SimilarityOptions {
  bool consistent_shapes = false;
  // Per-method weights for the average; empty means unweighted mean.
  std::vector<double> weights;
  std::function<void(const std::string&)> on_warning = [](const std::string& msg) {
    std::clog << "[spinex] " << msg << '\n';
  };
};

inline Matrix method_similarity(const Matrix& x, SimilarityMethod method, bool consistent_shapes) {
  switch (method) {
    case SimilarityMethod::correlation:
      return consistent_shapes ? row_correlation_similarity(x) : correlation_similarity(x);
    case SimilarityMethod::cosine: return cosine_similarity(x);
    case SimilarityMethod::spearman:
      return consistent_shapes ? row_spearman_similarity(x) : spearman_similarity(x);
    case SimilarityMethod::euclidean: return euclidean_similarity(x);
  }
  throw std::invalid_argument("unknown similarity method");
}

// Element-wise (weighted) mean of the zero-padded per-method matrices.
inline Matrix combined_similarity(const Matrix& x, std::span<const SimilarityMethod> methods,
                                  const SimilarityOptions& opts = {}) {
  const Eigen::Index n = x.rows();
  if (methods.empty()) throw std::invalid_argument("combined_similarity: methods must be nonempty");
  if (n < 2 || x.cols() < 2) return Matrix::Identity(n, n);
  if (!opts.weights.empty() && opts.weights.size() != methods.size())
    throw dimension_error("combined_similarity: weights length does not match methods");

  std::vector<Matrix> mats;
  std::vector<double> w;
  for (std::size_t k = 0; k < methods.size(); ++k) {
    try {
      mats.push_back(method_similarity(x, methods[k], opts.consistent_shapes));
      w.push_back(opts.weights.empty() ? 1.0 : opts.weights[k]);
    } catch (const std::exception& e) {
      if (opts.on_warning) opts.on_warning(std::string("error calculating ") + to_string(methods[k]) + " similarity: " + e.what());
    }
  }
  if (mats.empty()) return Matrix::Identity(n, n);

  Eigen::Index size = 0;
  for (const auto& m : mats) size = std::max(size, m.rows());
  const double wsum = std::accumulate(w.begin(), w.end(), 0.0);
  Matrix out = Matrix::Zero(size, size);
  for (std::size_t k = 0; k < mats.size(); ++k)
    out.topLeftCorner(mats[k].rows(), mats[k].cols()) += (w[k] / wsum) * mats[k];
  sanitize(out);
  // averaging can leave last-bit asymmetry only if inputs were asymmetric; enforce exactly
  for (Eigen::Index i = 0; i < size; ++i)
    for (Eigen::Index j = i + 1; j < size; ++j) out(j, i) = out(i, j);
  return out;
}

// Replaces the rows/columns of candidates that changed between old_space and
// new_space with freshly computed values; everything else is kept.
inline Matrix update_similarity_matrix(const Matrix& old, const Matrix& old_space, const Matrix& new_space,
                                       std::span<const SimilarityMethod> methods,
                                       const SimilarityOptions& opts = {}) {
  if (old_space.rows() != new_space.rows() || old_space.cols() != new_space.cols())
    throw dimension_error("update_similarity_matrix: spaces differ in shape");
  std::vector<Eigen::Index> changed;
  for (Eigen::Index i = 0; i < new_space.rows(); ++i)
    if ((old_space.row(i).array() != new_space.row(i).array()).any()) changed.push_back(i);
  if (changed.empty()) return old;

  Matrix fresh = combined_similarity(new_space, methods, opts);
  if (fresh.rows() != old.rows() || fresh.cols() != old.cols()) return fresh;
  Matrix out = old;
  for (Eigen::Index k : changed) {
    out.row(k) = fresh.row(k);
    out.col(k) = fresh.col(k);
  }
  return out;
}

}  // namespace spinex
