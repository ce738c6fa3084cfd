#pragma once

// Benchmark functions, their multi-objective extensions and the realistic
// design scenarios, all exposed as Problem instances.
//
// Formulas and domains follow the usual published definitions of each
// function. Notes on specific choices:
//   bukin          Bukin N.4: 100 y^2 + 0.01 |x + 10|
//   dejong         De Jong F1 (sum of squares) on [-5.12, 5.12]
//   sphere         sum of squares on [-5, 5]
//   perm0db        Perm 0,d,beta with d = 2, beta = 10 on [-2, 2]
//   schaffer_n2/4  n-D forms sum the 2-D kernel over consecutive pairs
//   bohachevsky    Bohachevsky N.1, n-D form sums over consecutive pairs
//   cosine_mixture -0.1 sum cos(5 pi x) + sum x^2 on [-1, 1]
//
// Multi-objective extension: objective k evaluates the base function at the
// phenotype shifted by delta_k * (upper - lower) per coordinate, with
// delta_k = k / (2 m), i.e. the k-th objective's optimum moves by delta_k in
// genotype units.

#include "spinex/core.hpp"

#include "json.hpp"

#include <numbers>
#include <numeric>

namespace spinex {

struct BenchmarkDescriptor {
  std::string id;
  std::size_t fixed_dims = 0;  // 0: any dimension
  std::function<std::vector<Bound>(std::size_t)> bounds;
  std::function<double(std::span<const double>)> f;
  std::function<std::optional<double>(std::size_t)> optimum_value;
  std::function<std::optional<std::vector<double>>(std::size_t)> optimum_location;
  // false when the published optimum is a rounded numerical value
  bool closed_form_optimum = true;
};

namespace bench {

using std::numbers::e;
using std::numbers::pi;

inline double sq(double x) { return x * x; }

inline double ackley(std::span<const double> x) {
  const double n = static_cast<double>(x.size());
  double s1 = 0, s2 = 0;
  for (double v : x) {
    s1 += v * v;
    s2 += std::cos(2 * pi * v);
  }
  return -20.0 * std::exp(-0.2 * std::sqrt(s1 / n)) - std::exp(s2 / n) + 20.0 + e;
}
inline double beale(std::span<const double> v) {
  const double x = v[0], y = v[1];
  return sq(1.5 - x + x * y) + sq(2.25 - x + x * y * y) + sq(2.625 - x + x * y * y * y);
}
inline double bent_cigar(std::span<const double> x) {
  double s = x[0] * x[0];
  for (std::size_t i = 1; i < x.size(); ++i) s += 1e6 * x[i] * x[i];
  return s;
}
inline double booth(std::span<const double> v) { return sq(v[0] + 2 * v[1] - 7) + sq(2 * v[0] + v[1] - 5); }
inline double branin(std::span<const double> v) {
  const double b = 5.1 / (4 * pi * pi), c = 5 / pi, t = 1 / (8 * pi);
  return sq(v[1] - b * v[0] * v[0] + c * v[0] - 6) + 10 * (1 - t) * std::cos(v[0]) + 10;
}
inline double bukin_n4(std::span<const double> v) { return 100 * v[1] * v[1] + 0.01 * std::abs(v[0] + 10); }
inline double bukin_n6(std::span<const double> v) {
  return 100 * std::sqrt(std::abs(v[1] - 0.01 * v[0] * v[0])) + 0.01 * std::abs(v[0] + 10);
}
inline double cosine_mixture(std::span<const double> x) {
  double c = 0, s = 0;
  for (double v : x) {
    c += std::cos(5 * pi * v);
    s += v * v;
  }
  return -0.1 * c + s;
}
inline double cross_in_tray(std::span<const double> v) {
  const double r = std::sqrt(v[0] * v[0] + v[1] * v[1]);
  const double inner = std::abs(std::sin(v[0]) * std::sin(v[1]) * std::exp(std::abs(100 - r / pi)));
  return -0.0001 * std::pow(inner + 1, 0.1);
}
inline double sum_squares(std::span<const double> x) {
  double s = 0;
  for (double v : x) s += v * v;
  return s;
}
inline double dixon_price(std::span<const double> x) {
  double s = sq(x[0] - 1);
  for (std::size_t i = 1; i < x.size(); ++i) s += static_cast<double>(i + 1) * sq(2 * x[i] * x[i] - x[i - 1]);
  return s;
}
inline double drop_wave(std::span<const double> v) {
  const double r2 = v[0] * v[0] + v[1] * v[1];
  return -(1 + std::cos(12 * std::sqrt(r2))) / (0.5 * r2 + 2);
}
inline double eggholder(std::span<const double> v) {
  const double x = v[0], y = v[1];
  return -(y + 47) * std::sin(std::sqrt(std::abs(y + x / 2 + 47))) - x * std::sin(std::sqrt(std::abs(x - (y + 47))));
}
inline double griewank(std::span<const double> x) {
  double s = 0, p = 1;
  for (std::size_t i = 0; i < x.size(); ++i) {
    s += x[i] * x[i] / 4000.0;
    p *= std::cos(x[i] / std::sqrt(static_cast<double>(i + 1)));
  }
  return s - p + 1;
}
inline double himmelblau(std::span<const double> v) {
  return sq(v[0] * v[0] + v[1] - 11) + sq(v[0] + v[1] * v[1] - 7);
}
inline double levy(std::span<const double> x) {
  const std::size_t d = x.size();
  auto w = [&](std::size_t i) { return 1 + (x[i] - 1) / 4; };
  double s = sq(std::sin(pi * w(0)));
  for (std::size_t i = 0; i + 1 < d; ++i) s += sq(w(i) - 1) * (1 + 10 * sq(std::sin(pi * w(i) + 1)));
  s += sq(w(d - 1) - 1) * (1 + sq(std::sin(2 * pi * w(d - 1))));
  return s;
}
inline double matyas(std::span<const double> v) { return 0.26 * (v[0] * v[0] + v[1] * v[1]) - 0.48 * v[0] * v[1]; }
inline double perm0db(std::span<const double> x, double beta = 10.0) {
  const std::size_t d = x.size();
  double outer = 0;
  for (std::size_t i = 1; i <= d; ++i) {
    double inner = 0;
    for (std::size_t j = 1; j <= d; ++j) {
      const double jd = static_cast<double>(j);
      const double id = static_cast<double>(i);
      inner += (jd + beta) * (std::pow(x[j - 1], id) - 1.0 / std::pow(jd, id));
    }
    outer += inner * inner;
  }
  return outer;
}
inline double rastrigin(std::span<const double> x) {
  double s = 10.0 * static_cast<double>(x.size());
  for (double v : x) s += v * v - 10 * std::cos(2 * pi * v);
  return s;
}
inline double rosenbrock(std::span<const double> x) {
  double s = 0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) s += 100 * sq(x[i + 1] - x[i] * x[i]) + sq(x[i] - 1);
  return s;
}
inline double salomon(std::span<const double> x) {
  const double r = std::sqrt(sum_squares(x));
  return 1 - std::cos(2 * pi * r) + 0.1 * r;
}
inline double schaffer_n2_kernel(double x, double y) {
  return 0.5 + (sq(std::sin(x * x - y * y)) - 0.5) / sq(1 + 0.001 * (x * x + y * y));
}
inline double schaffer_n4_kernel(double x, double y) {
  return 0.5 + (sq(std::cos(std::sin(std::abs(x * x - y * y)))) - 0.5) / sq(1 + 0.001 * (x * x + y * y));
}
inline double pairwise(std::span<const double> x, double (*kernel)(double, double)) {
  if (x.size() == 1) return kernel(x[0], 0.0);
  double s = 0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) s += kernel(x[i], x[i + 1]);
  return s;
}
inline double schaffer_n2(std::span<const double> x) { return pairwise(x, schaffer_n2_kernel); }
inline double schaffer_n4(std::span<const double> x) { return pairwise(x, schaffer_n4_kernel); }
inline double schwefel(std::span<const double> x) {
  double s = 418.9829 * static_cast<double>(x.size());
  for (double v : x) s -= v * std::sin(std::sqrt(std::abs(v)));
  return s;
}
inline double six_hump_camel(std::span<const double> v) {
  const double x = v[0], y = v[1];
  return (4 - 2.1 * x * x + x * x * x * x / 3) * x * x + x * y + (-4 + 4 * y * y) * y * y;
}
inline double step(std::span<const double> x) {
  double s = 0;
  for (double v : x) s += sq(std::floor(v + 0.5));
  return s;
}
inline double three_hump_camel(std::span<const double> v) {
  const double x = v[0], y = v[1];
  return 2 * x * x - 1.05 * std::pow(x, 4) + std::pow(x, 6) / 6 + x * y + y * y;
}
inline double trid(std::span<const double> x) {
  double s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    s += sq(x[i] - 1);
    if (i > 0) s -= x[i] * x[i - 1];
  }
  return s;
}
inline double zakharov(std::span<const double> x) {
  double s1 = 0, s2 = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    s1 += x[i] * x[i];
    s2 += 0.5 * static_cast<double>(i + 1) * x[i];
  }
  return s1 + s2 * s2 + s2 * s2 * s2 * s2;
}
inline double alpine(std::span<const double> x) {
  double s = 0;
  for (double v : x) s += std::abs(v * std::sin(v) + 0.1 * v);
  return s;
}
inline double bohachevsky_kernel(double x, double y) {
  return x * x + 2 * y * y - 0.3 * std::cos(3 * pi * x) - 0.4 * std::cos(4 * pi * y) + 0.7;
}
inline double bohachevsky(std::span<const double> x) { return pairwise(x, bohachevsky_kernel); }
inline double michalewicz(std::span<const double> x) {
  double s = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    s -= std::sin(x[i]) * std::pow(std::sin(static_cast<double>(i + 1) * x[i] * x[i] / pi), 20);
  return s;
}
inline double qing(std::span<const double> x) {
  double s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) s += sq(x[i] * x[i] - static_cast<double>(i + 1));
  return s;
}
inline double styblinski_tang(std::span<const double> x) {
  double s = 0;
  for (double v : x) s += v * v * v * v - 16 * v * v + 5 * v;
  return 0.5 * s;
}

inline std::function<std::vector<Bound>(std::size_t)> box(double lo, double hi) {
  return [lo, hi](std::size_t d) { return std::vector<Bound>(d, Bound{lo, hi}); };
}
inline std::function<std::optional<double>(std::size_t)> value(double v) {
  return [v](std::size_t) { return std::optional<double>(v); };
}
inline std::function<std::optional<std::vector<double>>(std::size_t)> at(double v) {
  return [v](std::size_t d) { return std::optional<std::vector<double>>(std::vector<double>(d, v)); };
}
inline std::function<std::optional<std::vector<double>>(std::size_t)> at2(double x, double y) {
  return [x, y](std::size_t) { return std::optional<std::vector<double>>(std::vector<double>{x, y}); };
}
inline auto none_value() {
  return [](std::size_t) { return std::optional<double>(); };
}
inline auto none_location() {
  return [](std::size_t) { return std::optional<std::vector<double>>(); };
}

}  // namespace bench

// Every math function known to the library, keyed by id.
inline const std::vector<BenchmarkDescriptor>& benchmark_catalog() {
  using namespace bench;
  static const std::vector<BenchmarkDescriptor> catalog = [] {
    std::vector<BenchmarkDescriptor> c;
    auto add = [&](std::string id, std::size_t fixed, auto bounds, auto fn, auto val, auto loc, bool closed = true) {
      c.push_back({std::move(id), fixed, bounds, fn, val, loc, closed});
    };
    add("ackley", 0, box(-32.768, 32.768), ackley, value(0), at(0));
    add("beale", 2, box(-4.5, 4.5), beale, value(0), at2(3, 0.5));
    add("bent_cigar", 0, box(-100, 100), bent_cigar, value(0), at(0));
    add("booth", 2, box(-10, 10), booth, value(0), at2(1, 3));
    add("branin", 2, [](std::size_t) { return std::vector<Bound>{{-5, 10}, {0, 15}}; }, branin,
        value(5.0 / (4.0 * pi)), at2(pi, 2.275));
    add("bukin", 2, [](std::size_t) { return std::vector<Bound>{{-15, -5}, {-3, 3}}; }, bukin_n4, value(0),
        at2(-10, 0));
    add("bukin_n6", 2, [](std::size_t) { return std::vector<Bound>{{-15, -5}, {-3, 3}}; }, bukin_n6, value(0),
        at2(-10, 1));
    add("cosine_mixture", 0, box(-1, 1), cosine_mixture,
        [](std::size_t d) { return std::optional<double>(-0.1 * static_cast<double>(d)); }, at(0));
    add("cross_in_tray", 2, box(-10, 10), cross_in_tray, value(-2.062611870822739),
        at2(1.349406608602084, 1.349406608602084), false);
    add("dejong", 0, box(-5.12, 5.12), sum_squares, value(0), at(0));
    add("dixon_price", 0, box(-10, 10), dixon_price, value(0), [](std::size_t d) {
      std::vector<double> x(d);
      for (std::size_t i = 1; i <= d; ++i)
        x[i - 1] = std::pow(2.0, -(std::pow(2.0, static_cast<double>(i)) - 2.0) / std::pow(2.0, static_cast<double>(i)));
      return std::optional<std::vector<double>>(x);
    });
    add("drop_wave", 2, box(-5.12, 5.12), drop_wave, value(-1), at(0));
    add("eggholder", 2, box(-512, 512), eggholder, value(-959.640662720851), at2(512, 404.2318052), false);
    add("griewank", 0, box(-600, 600), griewank, value(0), at(0));
    add("himmelblau", 2, box(-5, 5), himmelblau, value(0), at2(3, 2));
    add("levy", 0, box(-10, 10), levy, value(0), at(1));
    add("matyas", 2, box(-10, 10), matyas, value(0), at(0));
    add("perm0db", 2, box(-2, 2), [](std::span<const double> x) { return perm0db(x); }, value(0), at2(1, 0.5));
    add("rastrigin", 0, box(-5.12, 5.12), rastrigin, value(0), at(0));
    add("rosenbrock", 0, box(-5, 10), rosenbrock, value(0), at(1));
    add("salomon", 0, box(-100, 100), salomon, value(0), at(0));
    add("schaffer_n2", 0, box(-100, 100), schaffer_n2, value(0), at(0));
    add("schaffer_n4", 2, box(-100, 100), schaffer_n4, value(0.2925786320359806), at2(0, 1.253131833684197), false);
    // the textbook constant 418.9829 leaves a residual of about 1.27e-5 per coordinate
    add("schwefel", 0, box(-500, 500), schwefel,
        [](std::size_t d) { return std::optional<double>((418.9829 - 418.9828872724331) * static_cast<double>(d)); },
        at(420.9687483919706), false);
    add("six_hump_camel", 2, [](std::size_t) { return std::vector<Bound>{{-3, 3}, {-2, 2}}; }, six_hump_camel,
        value(-1.0316284534898774), at2(0.08984201368301331, -0.7126564032704135), false);
    add("sphere", 0, box(-5, 5), sum_squares, value(0), at(0));
    add("step", 0, box(-100, 100), step, value(0), at(0));
    add("three_hump_camel", 2, box(-5, 5), three_hump_camel, value(0), at(0));
    add("trid", 0,
        [](std::size_t d) {
          const double r = static_cast<double>(d * d);
          return std::vector<Bound>(d, Bound{-r, r});
        },
        trid,
        [](std::size_t d) {
          const double dd = static_cast<double>(d);
          return std::optional<double>(-dd * (dd + 4) * (dd - 1) / 6);
        },
        [](std::size_t d) {
          std::vector<double> x(d);
          for (std::size_t i = 1; i <= d; ++i) x[i - 1] = static_cast<double>(i * (d + 1 - i));
          return std::optional<std::vector<double>>(x);
        });
    add("zakharov", 0, box(-5, 10), zakharov, value(0), at(0));
    // only used by the multi-objective suite
    add("alpine", 0, box(-10, 10), alpine, value(0), at(0));
    add("bohachevsky", 0, box(-100, 100), bohachevsky, value(0), at(0));
    add("michalewicz", 0, box(0, pi), michalewicz, none_value(), none_location());
    add("qing", 0, box(-500, 500), qing, value(0), [](std::size_t d) {
      std::vector<double> x(d);
      for (std::size_t i = 0; i < d; ++i) x[i] = std::sqrt(static_cast<double>(i + 1));
      return std::optional<std::vector<double>>(x);
    });
    add("styblinski_tang", 0, box(-5, 5), styblinski_tang,
        [](std::size_t d) { return std::optional<double>(-39.16616570377141 * static_cast<double>(d)); },
        at(-2.9035340286202334), false);
    return c;
  }();
  return catalog;
}

inline const std::vector<std::string>& single_objective_ids() {
  static const std::vector<std::string> ids{
      "ackley",      "beale",          "bent_cigar", "booth",         "branin",         "bukin",
      "bukin_n6",    "cosine_mixture", "cross_in_tray", "dejong",     "dixon_price",    "drop_wave",
      "eggholder",   "griewank",       "himmelblau", "levy",          "matyas",         "perm0db",
      "rastrigin",   "rosenbrock",     "salomon",    "schaffer_n2",   "schaffer_n4",    "schwefel",
      "six_hump_camel", "sphere",      "step",       "three_hump_camel", "trid",        "zakharov"};
  return ids;
}

inline const std::vector<std::string>& multi_objective_base_ids() {
  static const std::vector<std::string> ids{"ackley",      "alpine",     "bohachevsky", "dixon_price", "griewank",
                                            "levy",        "michalewicz", "qing",       "rosenbrock",  "salomon",
                                            "schaffer_n2", "schaffer_n4", "sphere",     "styblinski_tang", "zakharov"};
  return ids;
}

inline const BenchmarkDescriptor& find_benchmark(const std::string& id) {
  for (const auto& d : benchmark_catalog())
    if (d.id == id) return d;
  throw std::invalid_argument("unknown benchmark function: " + id);
}

inline std::size_t benchmark_dims(const BenchmarkDescriptor& d, std::size_t requested) {
  return d.fixed_dims != 0 ? d.fixed_dims : requested;
}

// Closed-form value at phenotype x; x must lie in the function's domain.
inline double evaluate_benchmark(const std::string& id, std::span<const double> x) {
  const auto& d = find_benchmark(id);
  if (d.fixed_dims != 0 && x.size() != d.fixed_dims)
    throw dimension_error(id + " is defined for " + std::to_string(d.fixed_dims) + " dimensions");
  if (x.empty()) throw dimension_error(id + ": empty input");
  const auto b = d.bounds(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double slack = 1e-12 * (b[i].upper - b[i].lower);
    if (!(x[i] >= b[i].lower - slack && x[i] <= b[i].upper + slack))
      throw domain_error(id + ": coordinate " + std::to_string(i) + " = " + std::to_string(x[i]) + " outside [" +
                         std::to_string(b[i].lower) + ", " + std::to_string(b[i].upper) + "]");
  }
  return d.f(x);
}

inline std::string dims_suffix(const BenchmarkDescriptor& d, std::size_t dims) {
  return (d.fixed_dims == 0 && dims != 2) ? "_d" + std::to_string(dims) : "";
}

inline Problem make_benchmark_problem(const std::string& id, std::size_t dims = 2) {
  const auto& desc = find_benchmark(id);
  const std::size_t n = benchmark_dims(desc, dims);
  Problem p;
  p.name = id + dims_suffix(desc, n);
  p.n_variables = n;
  p.n_objectives = 1;
  p.bounds = desc.bounds(n);
  auto f = desc.f;
  p.evaluate = [f](std::span<const double> x) { return std::vector<double>{f(x)}; };
  if (auto v = desc.optimum_value(n)) p.known_optimum = std::vector<double>{*v};
  return p;
}

// The 30 single-objective functions at two dimensions.
inline std::vector<Problem> single_objective_suite() {
  std::vector<Problem> out;
  for (const auto& id : single_objective_ids()) out.push_back(make_benchmark_problem(id, 2));
  return out;
}

inline double objective_shift(std::size_t k, std::size_t n_objectives) {
  return static_cast<double>(k) / (2.0 * static_cast<double>(n_objectives));
}

// m shifted copies of a base function; works for any m >= 1.
inline Problem make_multi_objective_problem(const std::string& id, std::size_t n_objectives, std::size_t dims) {
  if (n_objectives == 0) throw std::invalid_argument("n_objectives must be positive");
  const auto& desc = find_benchmark(id);
  const std::size_t n = benchmark_dims(desc, dims);
  Problem p;
  p.name = "mo_" + id + "_m" + std::to_string(n_objectives) + "_d" + std::to_string(n);
  p.n_variables = n;
  p.n_objectives = n_objectives;
  p.bounds = desc.bounds(n);
  auto f = desc.f;
  auto bounds = p.bounds;
  p.evaluate = [f, bounds, n_objectives](std::span<const double> x) {
    std::vector<double> out(n_objectives);
    std::vector<double> shifted(x.size());
    for (std::size_t k = 0; k < n_objectives; ++k) {
      const double delta = objective_shift(k, n_objectives);
      for (std::size_t i = 0; i < x.size(); ++i) shifted[i] = x[i] - delta * (bounds[i].upper - bounds[i].lower);
      out[k] = f(shifted);
    }
    return out;
  };
  return p;
}

inline constexpr std::array<std::size_t, 5> kMultiObjectiveGrid{2, 5, 10, 25, 50};
inline constexpr std::array<std::size_t, 5> kDimensionGrid{2, 5, 10, 25, 50};

inline std::vector<Problem> multi_objective_suite(std::size_t n_objectives, std::size_t n_variables) {
  auto in = [](const auto& grid, std::size_t v) { return std::find(grid.begin(), grid.end(), v) != grid.end(); };
  if (!in(kMultiObjectiveGrid, n_objectives))
    throw std::invalid_argument("multi_objective_suite: unsupported objective count " + std::to_string(n_objectives));
  if (!in(kDimensionGrid, n_variables))
    throw std::invalid_argument("multi_objective_suite: unsupported dimension " + std::to_string(n_variables));
  std::vector<Problem> out;
  for (const auto& id : multi_objective_base_ids()) out.push_back(make_multi_objective_problem(id, n_objectives, n_variables));
  return out;
}

// ---------------------------------------------------------------------------
// Realistic scenarios. Quantities the model does not pin down use the smooth
// surrogate formulas written out below; maximized quantities are negated.

enum class ScenarioVariant { single, multi };

struct ScenarioDescriptor {
  std::string id;
  ScenarioVariant variant;
  std::size_t n_variables;
  std::size_t n_objectives;
  std::vector<Bound> ranges;
};

namespace scenarios {

inline constexpr double kSteelDensity = 7850.0;
inline constexpr double kFloor = 1e-6;  // keeps ratios finite at the box corners

// truss single: x = (length [0,5] m, thickness [0,0.1] m)
inline std::vector<double> truss_single(std::span<const double> x) {
  const double weight = kSteelDensity * x[0] * x[1];
  const double cost = 5.0 * weight + 1000.0;
  const double strength = std::max(1000.0 * x[0] * x[1], kFloor);
  return {cost / strength};
}

// truss multi: x = (main length [0,5], main thickness [0,0.5], support lengths [0,3]...)
// Supports use a fixed 0.05 m section; manufacturing is 1000 plus 100 per metre of support.
inline std::vector<double> truss_multi(std::span<const double> x) {
  constexpr double support_section = 0.05;
  double support_len = 0.0;
  for (std::size_t i = 2; i < x.size(); ++i) support_len += x[i];
  const double strength = 1000.0 * x[0] * x[1] + 500.0 * support_len * support_section;
  const double weight = std::max(kSteelDensity * x[0] * x[1] + kSteelDensity * support_len * support_section, kFloor);
  const double cost = 5.0 * weight + 1000.0 + 100.0 * support_len;
  double min_dim = std::min(x[0], x[1]);
  for (std::size_t i = 2; i < x.size(); ++i) min_dim = std::min(min_dim, x[i]);
  return {-strength / weight, cost, -min_dim};
}

// ml: x = (learning rate [1e-5,1e-3], layers [1,10], neurons per layer [10,100])
struct MlModel {
  double complexity, training_time, accuracy;
};
inline MlModel ml_model(std::span<const double> x) {
  const double lr = x[0];
  const double complexity = x[1] * x[2];
  return {complexity, complexity * std::log(1.0 / lr), 1.0 - std::exp(-lr * complexity / 1000.0)};
}
inline std::vector<double> ml_single(std::span<const double> x) {
  const auto m = ml_model(x);
  return {m.training_time / std::max(m.accuracy, kFloor * kFloor)};
}
// memory ~ parameter count (layers * neurons^2) at 4 bytes, in MB; inference
// ~ 0.01 ms per unit of complexity; generalization gap grows with capacity
// relative to the learning signal.
inline std::vector<double> ml_multi(std::span<const double> x) {
  const auto m = ml_model(x);
  const double memory = 4e-6 * x[1] * x[2] * x[2];
  const double inference = 0.01 * m.complexity;
  const double gap = m.complexity / (m.complexity + 500.0) * (1.0 - m.accuracy);
  return {-m.accuracy, m.complexity, m.training_time, memory, inference, gap};
}

// supply: x = order quantity per product [0,1000]
// holding 1.0 per unit, ordering 100 per product, transport 500 + 0.5 per unit
inline std::vector<double> supply_single(std::span<const double> q) {
  const double total = std::accumulate(q.begin(), q.end(), 0.0);
  const double mean = total / static_cast<double>(q.size());
  const double cost = 1.0 * total + 100.0 * static_cast<double>(q.size()) + (500.0 + 0.5 * total);
  const double service = std::max(1.0 - std::exp(-mean / 500.0), kFloor);
  return {cost / service};
}
// ordering cost charges 100 per product scaled by its activity 1 - exp(-q/50);
// quality cost penalizes small batches, 50 * exp(-q/200) per product; carbon
// 0.3 per unit plus 50; resilience is the smallest order relative to the mean.
inline std::vector<double> supply_multi(std::span<const double> q) {
  const double total = std::accumulate(q.begin(), q.end(), 0.0);
  const double mean = total / static_cast<double>(q.size());
  double ordering = 0.0, quality = 0.0, smallest = q.empty() ? 0.0 : q[0];
  for (double v : q) {
    ordering += 100.0 * (1.0 - std::exp(-v / 50.0));
    quality += 50.0 * std::exp(-v / 200.0);
    smallest = std::min(smallest, v);
  }
  const double service = 1.0 - std::exp(-mean / 500.0);
  const double resilience = smallest / (mean + 1.0);
  return {1.0 * total, ordering, 500.0 + 0.5 * total, quality, 0.3 * total + 50.0, -service, -resilience};
}

// traffic: x = green time per phase [0,60] s
inline std::vector<double> traffic_single(std::span<const double> g) {
  const double cycle = std::max(std::accumulate(g.begin(), g.end(), 0.0), kFloor);
  const double wait = cycle / 2.0;
  const double throughput = 1000.0 / cycle;
  return {wait / throughput};
}
// maximum wait is the longest red interval, cycle minus the shortest green
inline std::vector<double> traffic_multi(std::span<const double> g) {
  const double cycle = std::max(std::accumulate(g.begin(), g.end(), 0.0), kFloor);
  const double shortest = *std::min_element(g.begin(), g.end());
  return {cycle / 2.0, cycle - shortest, -1000.0 / cycle};
}

// city: x = (energy efficiency [0,100] %, green space [0,30] %, public transport [0,50] %)
inline std::vector<double> city_single(std::span<const double> x) {
  const double total = x[0] + x[1] + x[2];
  const double sustainability = std::max(total / 3.0, kFloor);
  return {1000.0 * total / sustainability};
}
// linear surrogates for the ten urban indicators
inline std::vector<double> city_multi(std::span<const double> x) {
  const double eff = x[0], green = x[1], transit = x[2];
  return {
      100.0 - 0.8 * eff,                                    // energy consumption
      -green,                                               // green space
      50.0 - 0.6 * transit + 0.1 * green,                   // traffic congestion
      80.0 - 0.3 * eff - 0.8 * green - 0.4 * transit,       // air pollution index
      100.0 + 0.5 * green,                                  // water consumption
      -transit,                                             // public transport usage
      60.0 - 0.2 * eff - 0.1 * transit,                     // waste generation
      -(60.0 + 0.1 * eff + 0.05 * transit - 0.1 * green),   // employment rate
      50.0 + 0.2 * eff + 0.3 * green + 0.1 * transit,       // cost of living
      -(0.3 * eff + 0.5 * green + 0.4 * transit),           // citizen satisfaction
  };
}

}  // namespace scenarios

inline const std::vector<ScenarioDescriptor>& scenario_catalog() {
  static const std::vector<ScenarioDescriptor> c{
      {"truss", ScenarioVariant::single, 2, 1, {{0, 5}, {0, 0.1}}},
      {"truss", ScenarioVariant::multi, 4, 3, {{0, 5}, {0, 0.5}, {0, 3}, {0, 3}}},
      {"ml_tuning", ScenarioVariant::single, 3, 1, {{1e-5, 1e-3}, {1, 10}, {10, 100}}},
      {"ml_tuning", ScenarioVariant::multi, 3, 6, {{1e-5, 1e-3}, {1, 10}, {10, 100}}},
      {"supply_chain", ScenarioVariant::single, 5, 1, std::vector<Bound>(5, Bound{0, 1000})},
      {"supply_chain", ScenarioVariant::multi, 5, 7, std::vector<Bound>(5, Bound{0, 1000})},
      {"traffic", ScenarioVariant::single, 4, 1, std::vector<Bound>(4, Bound{0, 60})},
      {"traffic", ScenarioVariant::multi, 4, 3, std::vector<Bound>(4, Bound{0, 60})},
      {"city", ScenarioVariant::single, 3, 1, {{0, 100}, {0, 30}, {0, 50}}},
      {"city", ScenarioVariant::multi, 3, 10, {{0, 100}, {0, 30}, {0, 50}}},
  };
  return c;
}

inline std::string scenario_problem_id(const std::string& id, ScenarioVariant v) {
  return id + (v == ScenarioVariant::single ? "_single" : "_multi");
}

inline Problem scenario(const std::string& id, ScenarioVariant variant) {
  for (const auto& d : scenario_catalog()) {
    if (d.id != id || d.variant != variant) continue;
    Problem p;
    p.name = scenario_problem_id(id, variant);
    p.n_variables = d.n_variables;
    p.n_objectives = d.n_objectives;
    p.bounds = d.ranges;
    const bool single = variant == ScenarioVariant::single;
    if (id == "truss") p.evaluate = single ? scenarios::truss_single : scenarios::truss_multi;
    if (id == "ml_tuning") p.evaluate = single ? scenarios::ml_single : scenarios::ml_multi;
    if (id == "supply_chain") p.evaluate = single ? scenarios::supply_single : scenarios::supply_multi;
    if (id == "traffic") p.evaluate = single ? scenarios::traffic_single : scenarios::traffic_multi;
    if (id == "city") p.evaluate = single ? scenarios::city_single : scenarios::city_multi;
    return p;
  }
  throw std::invalid_argument("unknown scenario: " + id);
}

// Resolves any catalog id: a math function ("sphere"), a multi-objective math
// problem ("mo_sphere" with the requested objectives) or a scenario
// ("truss_single").
inline Problem make_problem(const std::string& id, std::size_t dims = 2, std::size_t objectives = 2) {
  for (const auto& d : scenario_catalog())
    if (scenario_problem_id(d.id, d.variant) == id) return scenario(d.id, d.variant);
  if (id.rfind("mo_", 0) == 0) return make_multi_objective_problem(id.substr(3), objectives, dims);
  return make_benchmark_problem(id, dims);
}

namespace detail {
inline nlohmann::json problem_entry(const Problem& p, const std::string& kind) {
  nlohmann::json bounds = nlohmann::json::array();
  for (const auto& b : p.bounds) bounds.push_back({b.lower, b.upper});
  nlohmann::json j{{"id", p.name}, {"kind", kind}, {"n_variables", p.n_variables},
                   {"n_objectives", p.n_objectives}, {"bounds", bounds}};
  if (p.known_optimum) j["known_optimum"] = *p.known_optimum;
  return j;
}
}  // namespace detail

// Catalog of every problem: 30 single-objective math functions, the 15
// multi-objective bases (listed at 2 objectives, 2 dimensions) and the ten
// scenario variants.
inline nlohmann::json suite_manifest() {
  nlohmann::json problems = nlohmann::json::array();
  for (const auto& p : single_objective_suite()) problems.push_back(detail::problem_entry(p, "math_single"));
  for (const auto& id : multi_objective_base_ids()) {
    auto e = detail::problem_entry(make_multi_objective_problem(id, 2, 2), "math_multi");
    e["id"] = "mo_" + id;
    e["base"] = id;
    problems.push_back(std::move(e));
  }
  for (const auto& d : scenario_catalog())
    problems.push_back(detail::problem_entry(scenario(d.id, d.variant),
                                             d.variant == ScenarioVariant::single ? "scenario_single" : "scenario_multi"));
  return nlohmann::json{{"problems", problems}};
}

}  // namespace spinex
