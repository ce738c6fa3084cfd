#pragma once

#include "spinex/core.hpp"

#include <limits>
#include <numeric>

namespace spinex {

struct NelderMeadOptions {
  std::size_t max_iterations = 100;
  double initial_edge = 0.05;
  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;
  // Stop once both the simplex diameter and the vertex value spread fall below these.
  double xtol = 1e-14;
  double ftol = 1e-14;
};

struct NelderMeadResult {
  std::vector<double> x;
  double fx = std::numeric_limits<double>::infinity();
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
  bool budget_hit = false;
};

using ScalarObjective = std::function<double(std::span<const double>)>;

// Downhill simplex. The returned point is the best vertex ever evaluated, so
// f(result) <= f(x0). A budget_exhausted thrown by f ends the search early and
// the best point seen so far is returned.
inline NelderMeadResult nelder_mead_search(const ScalarObjective& f, std::vector<double> x0,
                                           const NelderMeadOptions& opt = {}) {
  NelderMeadResult res;
  res.x = x0;
  const std::size_t n = x0.size();
  if (n == 0) return res;

  auto eval = [&](const std::vector<double>& x) {
    const double v = f(x);
    ++res.evaluations;
    const double fv = std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    if (fv < res.fx) {
      res.fx = fv;
      res.x = x;
    }
    return fv;
  };

  try {
    const double f0 = f(x0);
    ++res.evaluations;
    if (!std::isfinite(f0)) {
      res.fx = f0;
      return res;
    }
    res.fx = f0;

    std::vector<std::vector<double>> simplex(n + 1, x0);
    std::vector<double> values(n + 1, f0);
    for (std::size_t i = 0; i < n; ++i) {
      simplex[i + 1][i] += opt.initial_edge;
      values[i + 1] = eval(simplex[i + 1]);
    }

    std::vector<std::size_t> order(n + 1);
    std::vector<double> centroid(n), xr(n), xe(n), xc(n);
    auto point = [&](std::vector<double>& out, double t, const std::vector<double>& from) {
      // out = centroid + t * (from - centroid)
      for (std::size_t k = 0; k < n; ++k) out[k] = centroid[k] + t * (from[k] - centroid[k]);
    };

    while (res.iterations < opt.max_iterations) {
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
      {
        std::vector<std::vector<double>> s2(n + 1);
        std::vector<double> v2(n + 1);
        for (std::size_t i = 0; i <= n; ++i) {
          s2[i] = std::move(simplex[order[i]]);
          v2[i] = values[order[i]];
        }
        simplex = std::move(s2);
        values = std::move(v2);
      }

      double diam = 0.0;
      for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t k = 0; k < n; ++k) diam = std::max(diam, std::abs(simplex[i][k] - simplex[0][k]));
      const double spread = values[n] - values[0];
      if (diam <= opt.xtol && spread <= opt.ftol) break;

      ++res.iterations;
      std::fill(centroid.begin(), centroid.end(), 0.0);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) centroid[k] += simplex[i][k] / static_cast<double>(n);

      point(xr, -opt.reflection, simplex[n]);
      const double fr = eval(xr);
      if (fr < values[0]) {
        point(xe, -opt.reflection * opt.expansion, simplex[n]);
        const double fe = eval(xe);
        if (fe < fr) {
          simplex[n] = xe;
          values[n] = fe;
        } else {
          simplex[n] = xr;
          values[n] = fr;
        }
        continue;
      }
      if (fr < values[n - 1]) {
        simplex[n] = xr;
        values[n] = fr;
        continue;
      }
      bool do_shrink = false;
      if (fr < values[n]) {
        point(xc, opt.contraction, xr);
        const double fc = eval(xc);
        if (fc <= fr) {
          simplex[n] = xc;
          values[n] = fc;
        } else {
          do_shrink = true;
        }
      } else {
        point(xc, opt.contraction, simplex[n]);
        const double fc = eval(xc);
        if (fc < values[n]) {
          simplex[n] = xc;
          values[n] = fc;
        } else {
          do_shrink = true;
        }
      }
      if (do_shrink) {
        for (std::size_t i = 1; i <= n; ++i) {
          for (std::size_t k = 0; k < n; ++k)
            simplex[i][k] = simplex[0][k] + opt.shrink * (simplex[i][k] - simplex[0][k]);
          values[i] = eval(simplex[i]);
        }
      }
    }
  } catch (const budget_exhausted&) {
    res.budget_hit = true;
  }
  return res;
}

// Refined point from a bounded downhill-simplex run starting at x0.
inline std::vector<double> nelder_mead(const ScalarObjective& f, const std::vector<double>& x0,
                                       std::size_t max_iterations = 100) {
  NelderMeadOptions opt;
  opt.max_iterations = max_iterations;
  return nelder_mead_search(f, x0, opt).x;
}

}  // namespace spinex
