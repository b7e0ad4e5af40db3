#pragma once

// Actions and utilities implied by equilibrium expectations.

#include "netgame/equilibrium.hpp"

namespace netgame {

// x = theta/c + (alpha/d_1) d_i E / c
template <typename Scalar>
Scalar best_response(const Scalar& theta, int degree, const Scalar& expectation, const GameParams<Scalar>& params,
                     int d1) {
  const Scalar a = params.complementarity(d1);
  return theta / params.cost + a * from_int<Scalar>(degree) * expectation / params.cost;
}

// theta x + a x d_i E - c x^2 / 2
template <typename Scalar>
Scalar utility(const Scalar& action, const Scalar& theta, int degree, const Scalar& expectation,
               const GameParams<Scalar>& params, int d1) {
  if (action < Scalar(0)) throw Error("actions are non-negative");
  const Scalar a = params.complementarity(d1);
  return theta * action + a * action * from_int<Scalar>(degree) * expectation - params.cost * action * action / Scalar(2);
}

// Utility of an action chosen under a misperceived expectation, scored
// against the expectation that actually prevails.
template <typename Scalar>
Scalar expected_utility_under_truth(const Scalar& action, const Scalar& theta, int degree,
                                    const Scalar& true_expectation, const GameParams<Scalar>& params, int d1) {
  return utility(action, theta, degree, true_expectation, params, d1);
}

template <typename Scalar = double>
struct AgentOutcome {
  Scalar theta;
  int degree;
  Rule rule;
  Scalar action;
  Scalar realized_expectation;
  Scalar utility;
  Scalar expected_utility_under_truth;
};

template <typename Scalar>
AgentOutcome<Scalar> agent_outcome(const Scalar& theta, int degree, Rule rule, const Scalar& expectation,
                                   const Scalar& true_expectation, const GameParams<Scalar>& params, int d1) {
  AgentOutcome<Scalar> o{theta, degree, rule, best_response(theta, degree, expectation, params, d1), expectation,
                         Scalar(0), Scalar(0)};
  o.utility = utility(o.action, theta, degree, expectation, params, d1);
  o.expected_utility_under_truth = expected_utility_under_truth(o.action, theta, degree, true_expectation, params, d1);
  return o;
}

// delta-weighted mean best response at theta = E[theta] when every agent
// holds the expectation `expectation` (infinite precision).
template <typename Scalar>
Scalar population_average_action(const DegreeModel<Scalar>& model, const GameParams<Scalar>& params,
                                 const Scalar& expectation) {
  Scalar total(0);
  for (std::size_t k = 0; k < model.size(); ++k) {
    total += model.share(k) * best_response(params.mean_preference, model.degree(k), expectation, params, model.degree(0));
  }
  return total;
}

// Finite-precision version: each type acts on its own expectation; types are
// weighted by delta_k, the multinomial probability of their observation, and
// the rule share (1 - sigma, sigma).
inline double population_average_action(const std::vector<double>& delta, const GameParams<double>& params,
                                        const EquilibriumSolution& sol) {
  const auto& sys = *sol.system;
  const auto biased = biased_neighbor_share(sys.degrees, delta);
  double total = 0.0;
  for (std::size_t l = 0; l < sys.size(); ++l) {
    const auto& t = sys.types[l];
    const double rule_share = t.rule == Rule::sophisticated ? params.sigma : 1.0 - params.sigma;
    if (rule_share == 0.0) continue;
    const double weight = rule_share * delta[t.degree_index] * multinomial_pmf(t.observed.counts(), biased);
    total += weight * best_response(params.mean_preference, t.degree, sol.xi(static_cast<Eigen::Index>(l)), params,
                                    sys.degrees.front());
  }
  return total;
}

}  // namespace netgame
