#pragma once

// Degree model, game parameters and the observed-share lattice.

#include "netgame/numeric.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

namespace netgame {

inline constexpr double kShareTolerance = 1e-12;

// Support d_1 < ... < d_K and the population share of each degree class.
template <typename Scalar = double>
class DegreeModel {
 public:
  DegreeModel(std::vector<int> degrees, std::vector<Scalar> shares)
      : degrees_(std::move(degrees)), shares_(std::move(shares)) {
    if (degrees_.size() < 2) throw Error("degree model needs at least two degree classes");
    if (degrees_.size() != shares_.size()) throw Error("degrees and shares differ in length");
    if (degrees_.front() < 1) throw Error("degrees must be positive");
    for (std::size_t k = 1; k < degrees_.size(); ++k) {
      if (degrees_[k] <= degrees_[k - 1]) throw Error("degrees must be distinct and strictly increasing");
    }
    Scalar total(0);
    for (const auto& s : shares_) {
      if (!(s > Scalar(0) && s < Scalar(1))) throw Error("every share must lie strictly inside (0,1)");
      total += s;
    }
    if constexpr (is_rational_v<Scalar>) {
      if (total != Scalar(1)) throw Error("shares must sum to 1");
    } else {
      if (std::abs(to_double(total) - 1.0) > kShareTolerance) throw Error("shares must sum to 1");
    }
  }

  // Two-class model with high-degree share delta2.
  static DegreeModel two_class(int d1, int d2, const Scalar& delta2) {
    return DegreeModel({d1, d2}, {Scalar(Scalar(1) - delta2), delta2});
  }

  std::size_t size() const { return degrees_.size(); }
  const std::vector<int>& degrees() const { return degrees_; }
  const std::vector<Scalar>& shares() const { return shares_; }
  int degree(std::size_t k) const { return degrees_[k]; }
  const Scalar& share(std::size_t k) const { return shares_[k]; }
  int max_degree() const { return degrees_.back(); }

  Scalar ratio(std::size_t k) const { return netgame::ratio<Scalar>(degrees_[k], degrees_[0]); }
  Scalar max_ratio() const { return ratio(size() - 1); }

  // epsilon = d_2 / d_1 - 1; only meaningful with two classes.
  Scalar excess_ratio() const {
    if (size() != 2) throw Error("excess ratio is defined only for two degree classes");
    return ratio(1) - Scalar(1);
  }

  std::size_t index_of(int degree) const {
    auto it = std::find(degrees_.begin(), degrees_.end(), degree);
    if (it == degrees_.end()) throw Error("degree " + std::to_string(degree) + " not in support");
    return static_cast<std::size_t>(it - degrees_.begin());
  }

 private:
  std::vector<int> degrees_;
  std::vector<Scalar> shares_;
};

// Degrees d_1 * rho_k for a fixed ratio vector; the precision axis.
inline std::vector<int> scaled_degrees(int d1, const std::vector<int>& base) {
  std::vector<int> out;
  out.reserve(base.size());
  for (int b : base) {
    if (b % base.front() != 0) throw Error("degree ratios must be integral multiples of d_1 to rescale");
    out.push_back(d1 * (b / base.front()));
  }
  return out;
}

template <typename Scalar = double>
struct GameParams {
  Scalar mean_preference{1};  // E[theta]
  Scalar alpha{1};            // a = alpha / d_1
  Scalar cost{1};
  Scalar sigma{0};            // share of sophisticated agents

  GameParams() = default;
  GameParams(Scalar etheta, Scalar alpha_, Scalar cost_, Scalar sigma_)
      : mean_preference(std::move(etheta)), alpha(std::move(alpha_)), cost(std::move(cost_)), sigma(std::move(sigma_)) {
    if (mean_preference < Scalar(0)) throw Error("E[theta] must be non-negative");
    if (alpha < Scalar(0)) throw Error("alpha must be non-negative");
    if (!(cost > Scalar(0))) throw Error("cost must be positive");
    if (sigma < Scalar(0) || sigma > Scalar(1)) throw Error("sigma must lie in [0,1]");
  }

  GameParams with_sigma(Scalar s) const { return GameParams(mean_preference, alpha, cost, std::move(s)); }

  Scalar complementarity(int d1) const { return alpha / from_int<Scalar>(d1); }
};

// alpha * rho_K vs c. The boundary alpha * rho_K == c is admitted here since the
// infinite-precision closed forms stay finite on it; the finite linear system
// additionally requires the strict inequality.
template <typename Scalar>
bool is_stable(const DegreeModel<Scalar>& model, const GameParams<Scalar>& params, bool strict = false) {
  Scalar lhs = params.alpha * model.max_ratio();
  return strict ? lhs < params.cost : lhs <= params.cost;
}

template <typename Scalar>
void require_stable(const DegreeModel<Scalar>& model, const GameParams<Scalar>& params, bool strict = false) {
  if (!is_stable(model, params, strict)) {
    throw StabilityError("stability condition rho_K " + std::string(strict ? "<" : "<=") +
                         " c/alpha violated (rho_K = " + format_double(to_double(model.max_ratio())) +
                         ", c/alpha = " + format_double(to_double(params.cost / params.alpha)) + ")");
  }
}

// A model together with parameters that passed the stability check.
template <typename Scalar = double>
struct Setting {
  DegreeModel<Scalar> model;
  GameParams<Scalar> params;

  Setting(DegreeModel<Scalar> m, GameParams<Scalar> p) : model(std::move(m)), params(std::move(p)) {
    require_stable(model, params);
  }
};

// Lattice point of observed neighbor shares: counts n_k with sum d_i.
class ObservedShares {
 public:
  explicit ObservedShares(std::vector<int> counts) : counts_(std::move(counts)) {
    if (counts_.size() < 2) throw Error("observed shares need at least two classes");
    sample_size_ = 0;
    for (int c : counts_) {
      if (c < 0) throw Error("observed counts must be non-negative");
      sample_size_ += c;
    }
    if (sample_size_ < 1) throw Error("observed sample must be non-empty");
  }

  int sample_size() const { return sample_size_; }
  std::size_t size() const { return counts_.size(); }
  const std::vector<int>& counts() const { return counts_; }
  int count(std::size_t k) const { return counts_[k]; }

  template <typename Scalar = double>
  Scalar share(std::size_t k) const {
    return ratio<Scalar>(counts_[k], sample_size_);
  }

  template <typename Scalar = double>
  std::vector<Scalar> values() const {
    std::vector<Scalar> out;
    out.reserve(counts_.size());
    for (std::size_t k = 0; k < counts_.size(); ++k) out.push_back(share<Scalar>(k));
    return out;
  }

  friend bool operator==(const ObservedShares&, const ObservedShares&) = default;

 private:
  std::vector<int> counts_;
  int sample_size_ = 0;
};

// delta~_k = d_k delta_k / sum d delta: the class mix seen at the end of a random link.
template <typename Scalar>
std::vector<Scalar> biased_neighbor_share(const DegreeModel<Scalar>& model) {
  Scalar mean_degree(0);
  for (std::size_t k = 0; k < model.size(); ++k) mean_degree += from_int<Scalar>(model.degree(k)) * model.share(k);
  std::vector<Scalar> out;
  out.reserve(model.size());
  for (std::size_t k = 0; k < model.size(); ++k) {
    out.push_back(from_int<Scalar>(model.degree(k)) * model.share(k) / mean_degree);
  }
  return out;
}

// Same map on an arbitrary share vector; zero entries are allowed.
template <typename Scalar>
std::vector<Scalar> biased_neighbor_share(const std::vector<int>& degrees, const std::vector<Scalar>& shares) {
  Scalar mean_degree(0);
  for (std::size_t k = 0; k < degrees.size(); ++k) mean_degree += from_int<Scalar>(degrees[k]) * shares[k];
  std::vector<Scalar> out;
  for (std::size_t k = 0; k < degrees.size(); ++k) out.push_back(from_int<Scalar>(degrees[k]) * shares[k] / mean_degree);
  return out;
}

// Every count vector of length K summing to d_i, ordered ascending by
// (n_K, n_{K-1}, ..., n_1).
inline std::vector<ObservedShares> feasible_observed_shares(int sample_size, std::size_t classes) {
  if (sample_size < 1) throw Error("sample size must be positive");
  if (classes < 2) throw Error("need at least two classes");
  std::vector<std::vector<int>> all;
  std::vector<int> counts(classes, 0);
  // Recursive fill from the top class down.
  auto fill = [&](auto&& self, std::size_t k, int remaining) -> void {
    if (k == 0) {
      counts[0] = remaining;
      all.push_back(counts);
      return;
    }
    for (int c = 0; c <= remaining; ++c) {
      counts[k] = c;
      self(self, k - 1, remaining - c);
    }
  };
  fill(fill, classes - 1, sample_size);
  std::vector<ObservedShares> out;
  out.reserve(all.size());
  for (auto& c : all) out.emplace_back(std::move(c));
  return out;
}

inline std::uint64_t binomial_coefficient(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

template <typename Scalar = double>
struct DegreeRatios {
  std::vector<Scalar> rho;
  Scalar mean;     // E[rho] under delta
  Scalar mean_sq;  // E[rho^2] under delta
};

template <typename Scalar>
DegreeRatios<Scalar> degree_ratios(const DegreeModel<Scalar>& model) {
  DegreeRatios<Scalar> out{{}, Scalar(0), Scalar(0)};
  for (std::size_t k = 0; k < model.size(); ++k) {
    Scalar r = model.ratio(k);
    out.mean += model.share(k) * r;
    out.mean_sq += model.share(k) * r * r;
    out.rho.push_back(std::move(r));
  }
  return out;
}

}  // namespace netgame

namespace netgame {

// Boundary shares are only reachable as limits; sweep tooling clamps to this.
inline constexpr double kBoundaryClamp = 1e-9;

inline double clamp_interior(double share) { return std::clamp(share, kBoundaryClamp, 1.0 - kBoundaryClamp); }

}  // namespace netgame
