#pragma once

// Numerical checks of the comparative statics: monotonicity and convexity in
// the high-degree share, Bernstein machinery for finite precision, and sweeps
// over precision and sophistication.

#include "netgame/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace netgame {

// Two-class infinite-precision curves as functions of the true high share,
// parameterized by the excess ratio only.
struct TwoClassCurves {
  long double epsilon;
  long double mean_preference;
  long double alpha;
  long double cost;
  long double sigma;

  template <typename Scalar>
  static TwoClassCurves from(double epsilon, const GameParams<Scalar>& p) {
    return {epsilon, to_double(p.mean_preference), to_double(p.alpha), to_double(p.cost), to_double(p.sigma)};
  }

  long double observed(long double d2) const { return (1 + epsilon) * d2 / (1 + epsilon * d2); }

  // Denominators must stay positive on the evaluation stencil.
  bool feasible(long double d2) const {
    return cost - alpha * (1 + epsilon * observed(d2)) > 0 && cost - sigma * alpha * (1 + epsilon * d2) > 0;
  }

  long double naive(long double d2) const { return mean_preference / (cost - alpha * (1 + epsilon * observed(d2))); }

  long double sophisticated(long double d2) const {
    const long double mean_rho = 1 + epsilon * d2;
    return (mean_preference + (1 - sigma) * alpha * mean_rho * naive(d2)) / (cost - sigma * alpha * mean_rho);
  }

  long double reduced_sophisticated(long double d2) const {
    const long double h = 1 + sigma + epsilon * (sigma * d2 + observed(d2));
    return (mean_preference + alpha * (1 - sigma) * naive(d2) * h) / (cost - alpha * (1 + epsilon * d2) * sigma * sigma);
  }

  // Naive expectations are convex iff c/alpha < convexity_threshold(d2).
  long double convexity_threshold(long double d2) const {
    return (1 + epsilon * observed(d2)) + (1 + epsilon) / (1 + epsilon * d2);
  }

  // Sufficient condition for convex sophisticated expectations.
  bool sophisticated_sufficient(long double d2) const { return cost < 2 * alpha * (1 + epsilon * d2) * sigma * sigma; }
};

// Auxiliary factors of the sophisticated-expectation decomposition
//   E[x|n] = E[theta] G,  E[x|s] = E[theta] (F + alpha (1 - sigma) F G H)
// with their analytic derivatives in delta_2.
struct AuxiliaryFunctions {
  long double F, dF, d2F;
  long double G, dG, d2G;
  long double H, dH, d2H;
};

inline AuxiliaryFunctions auxiliary_functions(const TwoClassCurves& c, long double d2) {
  const long double e = c.epsilon, s = c.sigma, a = c.alpha;
  const long double obs = c.observed(d2);
  const long double dobs = (1 + e) / ((1 + e * d2) * (1 + e * d2));
  const long double d2obs = -2 * e * (1 + e) / ((1 + e * d2) * (1 + e * d2) * (1 + e * d2));
  AuxiliaryFunctions f{};
  const long double fden = c.cost - a * (1 + e * d2) * s * s;
  f.F = 1 / fden;
  f.dF = a * e * s * s / (fden * fden);
  f.d2F = 2 * a * a * e * e * s * s * s * s / (fden * fden * fden);
  const long double gden = c.cost - a * (1 + e * obs);
  f.G = 1 / gden;
  f.dG = a * e * dobs / (gden * gden);
  f.d2G = a * e * (d2obs * gden + 2 * a * e * dobs * dobs) / (gden * gden * gden);
  f.H = 1 + s + e * (s * d2 + obs);
  f.dH = e * (s + dobs);
  f.d2H = e * d2obs;
  return f;
}

enum class Curvature { convex, concave, inconclusive, skipped };

inline const char* to_string(Curvature c) {
  switch (c) {
    case Curvature::convex: return "convex";
    case Curvature::concave: return "concave";
    case Curvature::inconclusive: return "inconclusive";
    case Curvature::skipped: return "skipped";
  }
  return "?";
}

inline constexpr double kDefaultDifferenceStep = 1e-4;

template <typename F>
long double second_difference(F&& f, long double x, long double h) {
  return (f(x + h) - 2 * f(x) + f(x - h)) / (h * h);
}

struct ConvexityPoint {
  double delta2;
  double naive_second_diff = 0;
  double sophisticated_second_diff = 0;
  double cost_over_alpha = 0;
  double threshold = 0;            // (1 + eps obs_2) + (1 + eps)/(1 + eps delta_2)
  Curvature predicted_naive = Curvature::skipped;
  bool naive_agrees = true;        // numeric sign matches the prediction
  bool sufficient = false;         // c < 2 alpha (1 + eps delta_2) sigma^2
  bool sophisticated_convex = false;
};

struct ConvexityReport {
  double epsilon;
  double h;
  std::vector<ConvexityPoint> points;

  std::size_t count(Curvature c) const {
    return static_cast<std::size_t>(std::count_if(points.begin(), points.end(), [&](const auto& p) { return p.predicted_naive == c; }));
  }
  bool naive_consistent() const {
    return std::all_of(points.begin(), points.end(), [](const auto& p) { return p.naive_agrees; });
  }
  bool sufficient_condition_holds() const {
    return std::all_of(points.begin(), points.end(),
                       [](const auto& p) { return p.predicted_naive == Curvature::skipped || !p.sufficient || p.sophisticated_convex; });
  }
};

// Second differences of both infinite-precision curves over a delta_2 grid,
// compared against the analytic naive condition. Points whose condition lies
// within 10 h of equality are inconclusive; points where a denominator turns
// non-positive are skipped.
template <typename Scalar>
ConvexityReport convexity_check(double epsilon, const GameParams<Scalar>& params, const std::vector<double>& grid,
                                double h = kDefaultDifferenceStep) {
  const auto curves = TwoClassCurves::from(epsilon, params);
  ConvexityReport report{epsilon, h, {}};
  for (double x : grid) {
    if (!(x - h > 0.0 && x + h < 1.0)) throw Error("convexity grid must be strictly interior");
    ConvexityPoint p;
    p.delta2 = x;
    p.cost_over_alpha = static_cast<double>(curves.cost / curves.alpha);
    if (!curves.feasible(x - h) || !curves.feasible(x) || !curves.feasible(x + h)) {
      report.points.push_back(p);
      continue;
    }
    p.threshold = static_cast<double>(curves.convexity_threshold(x));
    p.naive_second_diff = static_cast<double>(second_difference([&](long double t) { return curves.naive(t); }, x, h));
    p.sophisticated_second_diff =
        static_cast<double>(second_difference([&](long double t) { return curves.sophisticated(t); }, x, h));
    const double gap = p.threshold - p.cost_over_alpha;
    if (std::abs(gap) <= 10 * h) {
      p.predicted_naive = Curvature::inconclusive;
    } else {
      p.predicted_naive = gap > 0 ? Curvature::convex : Curvature::concave;
      p.naive_agrees = (gap > 0) == (p.naive_second_diff > 0) && p.naive_second_diff != 0.0;
    }
    p.sufficient = curves.sophisticated_sufficient(x);
    p.sophisticated_convex = p.sophisticated_second_diff >= 0.0;
    report.points.push_back(p);
  }
  return report;
}

struct MonotonicityReport {
  bool increasing;  // every first difference of both rules strictly positive
  bool flat;        // every first difference zero (no complementarity)
  std::vector<double> naive_differences;
  std::vector<double> sophisticated_differences;
};

template <typename Scalar>
MonotonicityReport monotonicity_check(double epsilon, const GameParams<Scalar>& params, const std::vector<double>& grid) {
  const auto curves = TwoClassCurves::from(epsilon, params);
  MonotonicityReport r{true, true, {}, {}};
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!curves.feasible(grid[i]) || !curves.feasible(grid[i - 1])) throw StabilityError("monotonicity grid leaves the stable region");
    const double dn = static_cast<double>(curves.naive(grid[i]) - curves.naive(grid[i - 1]));
    const double ds = static_cast<double>(curves.sophisticated(grid[i]) - curves.sophisticated(grid[i - 1]));
    r.naive_differences.push_back(dn);
    r.sophisticated_differences.push_back(ds);
    if (!(dn > 0 && ds > 0)) r.increasing = false;
    if (dn != 0 || ds != 0) r.flat = false;
  }
  return r;
}

// ---- Bernstein machinery --------------------------------------------------

// Piecewise-linear interpolant through values at {0, 1/d, ..., 1}.
class LatticeInterpolant {
 public:
  explicit LatticeInterpolant(std::vector<double> values) : values_(std::move(values)) {
    if (values_.size() < 2) throw Error("interpolant needs at least two lattice values");
  }

  int degree() const { return static_cast<int>(values_.size()) - 1; }
  const std::vector<double>& values() const { return values_; }

  double operator()(double x) const {
    if (x < 0.0 || x > 1.0) throw Error("interpolant evaluated outside [0,1]");
    const double pos = x * degree();
    const int lo = std::min(static_cast<int>(std::floor(pos)), degree() - 1);
    const double t = pos - lo;
    return (1.0 - t) * values_[lo] + t * values_[lo + 1];
  }

  bool convex(double tol = 0.0) const {
    for (std::size_t i = 1; i + 1 < values_.size(); ++i) {
      if (values_[i - 1] - 2 * values_[i] + values_[i + 1] < -tol) return false;
    }
    return true;
  }

 private:
  std::vector<double> values_;
};

// B_n(f)(x) = sum_k C(n,k) x^k (1-x)^{n-k} f(k/n)
inline double bernstein(const std::function<double(double)>& f, int n, double x) {
  if (n < 1) throw Error("Bernstein degree must be positive");
  double total = 0.0;
  for (int k = 0; k <= n; ++k) {
    total += multinomial_pmf({n - k, k}, {1.0 - x, x}) * f(static_cast<double>(k) / n);
  }
  return total;
}

// Values of one (rule, degree class) slice of a two-class solution, ordered
// by the observed high share 0, 1/d, ..., 1.
inline LatticeInterpolant lattice_interpolant(const EquilibriumSolution& sol, Rule rule, std::size_t degree_index) {
  const auto& sys = *sol.system;
  if (sys.degrees.size() != 2) throw Error("lattice interpolation is defined for two degree classes");
  const int d = sys.degrees[degree_index];
  std::vector<double> values;
  for (int k = 0; k <= d; ++k) values.push_back(sol.at(rule, degree_index, {d - k, k}));
  return LatticeInterpolant(std::move(values));
}

struct BernsteinView {
  LatticeInterpolant interpolant;
  double operator()(int n, double x) const { return bernstein(interpolant, n, x); }
};

inline BernsteinView bernstein_interpolate(const EquilibriumSolution& sol, Rule rule, std::size_t degree_index) {
  return {lattice_interpolant(sol, rule, degree_index)};
}

// ---- precision sweep --------------------------------------------------------

struct PrecisionRow {
  int d1;
  Rule rule;
  std::size_t degree_index;
  double observed2;    // matched interior lattice share
  double finite;       // S_{r,d}(xi)(observed2)
  double closed_form;  // infinite-precision value at the same observation
  Curvature closed_form_curvature;
};

struct PrecisionReport {
  std::vector<int> d1_values;
  double sigma;
  std::vector<PrecisionRow> rows;
  bool convex_everywhere = true;         // closed form convex at every matched point
  std::size_t excluded_points = 0;       // matched points with indeterminate curvature
  bool monotone_decreasing = true;       // finite values weakly fall as d_1 grows
  bool gap_strictly_decreasing = true;   // sup-norm gap to the closed form
  std::vector<double> gaps;              // one per d_1
};

// Solves the finite system for each d_1 (degrees d_1 * rho) and compares the
// per-rule expectations at the interior lattice points of the coarsest
// precision, interpolating finer lattices piecewise linearly.
inline PrecisionReport precision_sweep(const std::vector<int>& base_degrees, const GameParams<double>& params,
                                       std::vector<int> d1_values, double h = kDefaultDifferenceStep) {
  if (base_degrees.size() != 2) throw Error("precision sweep is defined for two degree classes");
  if (d1_values.empty()) throw Error("need at least one d_1");
  std::sort(d1_values.begin(), d1_values.end());
  PrecisionReport rep;
  rep.d1_values = d1_values;
  rep.sigma = params.sigma;
  const auto coarse = scaled_degrees(d1_values.front(), base_degrees);
  const auto sp = SolverParams::from(params);

  std::vector<std::vector<PrecisionRow>> by_d1;
  for (int d1 : d1_values) {
    const auto degrees = scaled_degrees(d1, base_degrees);
    const auto sol = solve_direct(build_pi(degrees, params.sigma), sp);
    std::vector<PrecisionRow> rows;
    for (Rule rule : {Rule::naive, Rule::sophisticated}) {
      for (std::size_t k = 0; k < 2; ++k) {
        const auto s = lattice_interpolant(sol, rule, k);
        for (int j = 1; j < coarse[k]; ++j) {
          const double x = static_cast<double>(j) / coarse[k];
          auto closed = [&](long double t) {
            const double td = static_cast<double>(t);
            return static_cast<long double>(infinite_expectation_at(rule, std::vector<double>{1.0 - td, td}, degrees, params));
          };
          const long double d2 = second_difference(closed, x, h);
          const long double scale = std::abs(closed(x));
          Curvature curv = std::abs(d2) <= 1e-6L * scale ? Curvature::inconclusive
                                                          : (d2 > 0 ? Curvature::convex : Curvature::concave);
          rows.push_back({d1, rule, k, x, s(x), static_cast<double>(closed(x)), curv});
        }
      }
    }
    by_d1.push_back(std::move(rows));
  }

  const std::size_t width = by_d1.front().size();
  std::vector<bool> include(width, true);
  for (std::size_t i = 0; i < width; ++i) {
    for (const auto& rows : by_d1) {
      if (rows[i].closed_form_curvature == Curvature::inconclusive) include[i] = false;
      if (rows[i].closed_form_curvature == Curvature::concave) rep.convex_everywhere = false;
    }
    if (!include[i]) ++rep.excluded_points;
  }
  for (std::size_t v = 0; v < by_d1.size(); ++v) {
    double gap = 0.0;
    for (std::size_t i = 0; i < width; ++i) {
      if (!include[i]) continue;
      gap = std::max(gap, std::abs(by_d1[v][i].finite - by_d1[v][i].closed_form));
      if (v > 0 && by_d1[v][i].finite > by_d1[v - 1][i].finite + 1e-12) rep.monotone_decreasing = false;
    }
    if (v > 0 && !(gap < rep.gaps.back())) rep.gap_strictly_decreasing = false;
    rep.gaps.push_back(gap);
    rep.rows.insert(rep.rows.end(), by_d1[v].begin(), by_d1[v].end());
  }
  return rep;
}

// ---- sophistication sweep ---------------------------------------------------

template <typename Scalar = double>
struct SigmaPoint {
  Scalar sigma;
  Scalar naive;
  Scalar sophisticated;
  Scalar benchmark;
};

template <typename Scalar = double>
struct SigmaSweep {
  std::vector<SigmaPoint<Scalar>> points;
  bool naive_flat = true;
  bool sophisticated_strictly_decreasing = true;
  bool second_differences_nonzero = true;
  bool second_differences_positive = true;  // decrease is convex
  bool endpoint_matches_benchmark = false;  // at sigma = 1 (exact for Rational)
  bool naive_dominates = true;              // x_n >= x_s everywhere
};

template <typename Scalar>
SigmaSweep<Scalar> sigma_sweep(const DegreeModel<Scalar>& model, const GameParams<Scalar>& params,
                               const std::vector<Scalar>& sigmas) {
  SigmaSweep<Scalar> sw;
  const Scalar bench = benchmark_expectation(model, params);
  for (const auto& s : sigmas) {
    const auto p = params.with_sigma(s);
    sw.points.push_back({s, infinite_naive(model, p), infinite_sophisticated(model, p), bench});
  }
  for (std::size_t i = 0; i < sw.points.size(); ++i) {
    const auto& pt = sw.points[i];
    if (pt.naive != sw.points.front().naive) sw.naive_flat = false;
    if (pt.naive < pt.sophisticated) sw.naive_dominates = false;
    if (i > 0 && !(pt.sophisticated < sw.points[i - 1].sophisticated)) sw.sophisticated_strictly_decreasing = false;
    if (i > 0 && i + 1 < sw.points.size()) {
      const Scalar d2 = sw.points[i + 1].sophisticated - 2 * pt.sophisticated + sw.points[i - 1].sophisticated;
      if (d2 == Scalar(0)) sw.second_differences_nonzero = false;
      if (!(d2 > Scalar(0))) sw.second_differences_positive = false;
    }
    if (pt.sigma == Scalar(1)) sw.endpoint_matches_benchmark = pt.sophisticated == bench;
  }
  return sw;
}

}  // namespace netgame
