#pragma once

// Agent types (rule, degree, observed shares) and the belief matrix over them.

#include "netgame/estimators.hpp"
#include "netgame/population.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <ostream>
#include <string>
#include <tuple>
#include <vector>

namespace netgame {

struct AgentType {
  Rule rule;
  std::size_t degree_index;  // position of the degree in the support
  int degree;
  ObservedShares observed;

  std::string label() const {
    std::string s = rule == Rule::naive ? "n:" : "s:";
    s += std::to_string(degree);
    s += ':';
    for (std::size_t k = 0; k < observed.size(); ++k) {
      if (k) s += '|';
      s += std::to_string(observed.count(k));
    }
    return s;
  }
};

// Naive block, then sophisticated; ascending degree inside each block; within
// a degree, ascending (n_K, ..., n_1).
inline std::vector<AgentType> enumerate_types(const std::vector<int>& degrees) {
  std::vector<AgentType> out;
  for (Rule rule : {Rule::naive, Rule::sophisticated}) {
    for (std::size_t k = 0; k < degrees.size(); ++k) {
      for (auto& obs : feasible_observed_shares(degrees[k], degrees.size())) {
        out.push_back({rule, k, degrees[k], std::move(obs)});
      }
    }
  }
  return out;
}

template <typename Scalar>
std::vector<AgentType> enumerate_types(const DegreeModel<Scalar>& model) {
  return enumerate_types(model.degrees());
}

inline std::size_t type_count(const std::vector<int>& degrees) {
  std::size_t n = 0;
  const int classes = static_cast<int>(degrees.size());
  for (int d : degrees) n += binomial_coefficient(d + classes - 1, classes - 1);
  return 2 * n;
}

// Believed population share of the target degree class.
template <typename Scalar>
Scalar psi(Rule rule, const std::vector<Scalar>& observed, std::size_t target_index, const std::vector<int>& degrees) {
  return estimate(rule, observed, degrees).values.at(target_index);
}

inline double omega(Rule observer, Rule target, double sigma) {
  if (observer == Rule::sophisticated) return target == Rule::sophisticated ? sigma : 1.0 - sigma;
  return target == Rule::naive ? 1.0 : 0.0;
}

// Probability of the count vector in `draws` independent draws with cell
// probabilities `probs`; 0^0 = 1.
inline double multinomial_pmf(const std::vector<int>& counts, const std::vector<double>& probs) {
  double log_coef = 0.0;
  int n = 0;
  for (int c : counts) {
    n += c;
    log_coef -= std::lgamma(c + 1.0);
  }
  log_coef += std::lgamma(n + 1.0);
  double p = std::exp(log_coef);
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (counts[k] == 0) continue;
    if (probs[k] == 0.0) return 0.0;
    p *= std::pow(probs[k], counts[k]);
  }
  return p;
}

struct ExpectationMatrix {
  std::vector<int> degrees;
  double sigma = 0.0;
  std::vector<AgentType> types;
  Eigen::MatrixXd pi;     // row: observer type, column: target type
  Eigen::VectorXd ratio;  // diagonal of D: d_j / d_1 per column type

  std::size_t size() const { return types.size(); }

  std::size_t index_of(Rule rule, std::size_t degree_index, const std::vector<int>& counts) const {
    auto it = lookup_.find(std::make_tuple(rule, degree_index, counts));
    if (it == lookup_.end()) throw Error("no such agent type");
    return it->second;
  }

  Eigen::MatrixXd pi_times_d() const { return pi * ratio.asDiagonal(); }

  void build_index() {
    lookup_.clear();
    for (std::size_t l = 0; l < types.size(); ++l) {
      lookup_[std::make_tuple(types[l].rule, types[l].degree_index, types[l].observed.counts())] = l;
    }
  }

 private:
  std::map<std::tuple<Rule, std::size_t, std::vector<int>>, std::size_t> lookup_;
};

// Row p, column q: Multinomial(d_q draws; counts_q; observed shares of p)
// * psi(r_p, observed_p, d_q) * omega(r_p, r_q).
inline ExpectationMatrix build_pi(const std::vector<int>& degrees, double sigma) {
  if (sigma < 0.0 || sigma > 1.0) throw Error("sigma must lie in [0,1]");
  ExpectationMatrix m;
  m.degrees = degrees;
  m.sigma = sigma;
  m.types = enumerate_types(degrees);
  const auto L = static_cast<Eigen::Index>(m.types.size());
  m.pi = Eigen::MatrixXd::Zero(L, L);
  m.ratio.resize(L);
  for (Eigen::Index q = 0; q < L; ++q) {
    m.ratio(q) = static_cast<double>(m.types[q].degree) / static_cast<double>(degrees.front());
  }
  for (Eigen::Index p = 0; p < L; ++p) {
    const auto& observer = m.types[p];
    const auto observed = observer.observed.values<double>();
    const auto believed = estimate(observer.rule, observed, degrees).values;
    for (Eigen::Index q = 0; q < L; ++q) {
      const auto& target = m.types[q];
      double w = omega(observer.rule, target.rule, sigma);
      if (w == 0.0) continue;
      double belief = believed[target.degree_index];
      if (belief == 0.0) continue;
      m.pi(p, q) = multinomial_pmf(target.observed.counts(), observed) * belief * w;
    }
  }
  m.build_index();
  return m;
}

template <typename Scalar>
ExpectationMatrix build_pi(const DegreeModel<Scalar>& model, const GameParams<Scalar>& params) {
  return build_pi(model.degrees(), to_double(params.sigma));
}

// Debug dump: header row of type labels, then one row per observer type.
inline void write_pi_csv(std::ostream& os, const ExpectationMatrix& m) {
  os << "observer";
  for (const auto& t : m.types) os << ',' << t.label();
  os << '\n';
  for (std::size_t p = 0; p < m.size(); ++p) {
    os << m.types[p].label();
    for (std::size_t q = 0; q < m.size(); ++q) {
      os << ',' << format_double(m.pi(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)));
    }
    os << '\n';
  }
}

}  // namespace netgame
