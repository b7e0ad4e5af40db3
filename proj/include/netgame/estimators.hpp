#pragma once

// Naive and maximum-likelihood estimation of the degree distribution from a
// degree-biased neighbor sample.

#include "netgame/population.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace netgame {

enum class Rule { naive, sophisticated };

inline const char* to_string(Rule r) { return r == Rule::naive ? "naive" : "sophisticated"; }

template <typename Scalar = double>
struct Estimate {
  std::vector<Scalar> values;
  Rule rule;
};

template <typename Scalar>
Estimate<Scalar> naive_estimate(const std::vector<Scalar>& observed) {
  return {observed, Rule::naive};
}

template <typename Scalar = double>
Estimate<Scalar> naive_estimate(const ObservedShares& obs) {
  return {obs.values<Scalar>(), Rule::naive};
}

// delta^_k proportional to delta~_k / d_k. Classes with no observed mass get 0.
template <typename Scalar>
Estimate<Scalar> sophisticated_mle(const std::vector<Scalar>& observed, const std::vector<int>& degrees) {
  if (observed.size() != degrees.size()) throw Error("observed shares and degrees differ in length");
  std::vector<Scalar> weighted;
  weighted.reserve(observed.size());
  Scalar total(0);
  for (std::size_t k = 0; k < observed.size(); ++k) {
    weighted.push_back(observed[k] / from_int<Scalar>(degrees[k]));
    total += weighted.back();
  }
  if (!(total > Scalar(0))) throw Error("observed shares carry no mass");
  for (auto& w : weighted) w /= total;
  return {std::move(weighted), Rule::sophisticated};
}

template <typename Scalar = double>
Estimate<Scalar> sophisticated_mle(const ObservedShares& obs, const std::vector<int>& degrees) {
  return sophisticated_mle(obs.values<Scalar>(), degrees);
}

template <typename Scalar>
Estimate<Scalar> estimate(Rule rule, const std::vector<Scalar>& observed, const std::vector<int>& degrees) {
  return rule == Rule::naive ? naive_estimate(observed) : sophisticated_mle(observed, degrees);
}

struct LogLikelihood {
  double value;
  bool on_boundary;  // value is -inf by convention
};

// Multinomial log-likelihood of neighbor counts when the population shares
// are `delta` and neighbors are drawn with the degree-biased probabilities.
inline LogLikelihood log_likelihood(const std::vector<double>& delta, const std::vector<int>& counts,
                                    const std::vector<int>& degrees) {
  if (delta.size() != counts.size() || delta.size() != degrees.size()) {
    throw Error("log-likelihood arguments differ in length");
  }
  for (double d : delta) {
    if (!(d > 0.0 && d < 1.0)) return {-std::numeric_limits<double>::infinity(), true};
  }
  int n = 0;
  for (int c : counts) {
    if (c < 0) throw Error("counts must be non-negative");
    n += c;
  }
  double value = std::lgamma(n + 1.0);
  for (int c : counts) value -= std::lgamma(c + 1.0);
  const auto biased = biased_neighbor_share(degrees, delta);
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (counts[k] > 0) value += counts[k] * std::log(biased[k]);
  }
  return {value, false};
}

// Naive minus sophisticated estimate of the high share in the infinite-sample
// two-class case: (1+eps) d / (1 + eps d) - d.
template <typename Scalar>
Scalar naive_bias(const Scalar& epsilon, const Scalar& delta2) {
  return (Scalar(1) + epsilon) * delta2 / (Scalar(1) + epsilon * delta2) - delta2;
}

struct BiasPoint {
  double delta2;
  double bias;
};

inline std::vector<double> uniform_interior_grid(std::size_t points) {
  if (points < 1) throw Error("grid needs at least one point");
  std::vector<double> g;
  g.reserve(points);
  for (std::size_t i = 0; i < points; ++i) g.push_back(static_cast<double>(i + 1) / static_cast<double>(points + 1));
  return g;
}

// Inclusive grid on [0,1] with endpoints clamped into the interior.
inline std::vector<double> clamped_unit_grid(std::size_t points) {
  if (points < 2) throw Error("grid needs at least two points");
  std::vector<double> g;
  g.reserve(points);
  for (std::size_t i = 0; i < points; ++i) g.push_back(clamp_interior(static_cast<double>(i) / static_cast<double>(points - 1)));
  return g;
}

inline std::vector<BiasPoint> bias_surface(double epsilon, const std::vector<double>& grid) {
  if (!(epsilon >= 0.0)) throw Error("excess ratio must be non-negative");
  std::vector<BiasPoint> out;
  out.reserve(grid.size());
  for (double x : grid) {
    if (!(x > 0.0 && x < 1.0)) throw Error("bias grid must lie inside (0,1)");
    out.push_back({x, naive_bias(epsilon, x)});
  }
  return out;
}

inline BiasPoint bias_argmax(const std::vector<BiasPoint>& surface) {
  if (surface.empty()) throw Error("empty bias surface");
  return *std::max_element(surface.begin(), surface.end(),
                           [](const BiasPoint& a, const BiasPoint& b) { return a.bias < b.bias; });
}

// Stationary point of the two-class bias, (sqrt(1+eps) - 1) / eps.
inline double analytic_bias_argmax(double epsilon) {
  if (!(epsilon > 0.0)) throw Error("excess ratio must be positive");
  return (std::sqrt(1.0 + epsilon) - 1.0) / epsilon;
}

}  // namespace netgame
