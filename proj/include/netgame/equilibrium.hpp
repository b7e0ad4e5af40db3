#pragma once

// Equilibrium expectations: the finite type system (direct and fixed-point
// solves) and the infinite-precision closed forms.

#include "netgame/typespace.hpp"

#include <Eigen/Dense>

#include <memory>
#include <string>
#include <vector>

namespace netgame {

enum class SolveMethod { direct, iterative, closed_form };

inline const char* to_string(SolveMethod m) {
  switch (m) {
    case SolveMethod::direct: return "direct";
    case SolveMethod::iterative: return "iterative";
    case SolveMethod::closed_form: return "closed-form";
  }
  return "?";
}

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double last_step) : Error(what), last_step_(last_step) {}
  double last_step() const { return last_step_; }

 private:
  double last_step_;
};

struct EquilibriumSolution {
  Eigen::VectorXd xi;  // per-type expectation of others' actions
  std::shared_ptr<const ExpectationMatrix> system;
  SolveMethod method = SolveMethod::direct;
  std::size_t iterations = 0;
  double residual = 0.0;  // sup-norm of the fixed-point equation

  double at(Rule rule, std::size_t degree_index, const std::vector<int>& counts) const {
    return xi(static_cast<Eigen::Index>(system->index_of(rule, degree_index, counts)));
  }
};

struct SolverParams {
  double mean_preference;
  double alpha;
  double cost;

  template <typename Scalar>
  static SolverParams from(const GameParams<Scalar>& p) {
    return {to_double(p.mean_preference), to_double(p.alpha), to_double(p.cost)};
  }
};

inline void require_solvable(const ExpectationMatrix& system, const SolverParams& p) {
  const double max_ratio = static_cast<double>(system.degrees.back()) / system.degrees.front();
  if (!(p.alpha * max_ratio < p.cost)) {
    throw StabilityError("finite type system requires rho_K < c/alpha (rho_K = " + format_double(max_ratio) +
                         ", c/alpha = " + format_double(p.cost / p.alpha) + "); I - (alpha/c) Pi D may be singular");
  }
}

inline double fixed_point_residual(const ExpectationMatrix& system, const SolverParams& p, const Eigen::VectorXd& xi) {
  const Eigen::VectorXd rhs =
      Eigen::VectorXd::Constant(xi.size(), p.mean_preference / p.cost) + (p.alpha / p.cost) * (system.pi * system.ratio.cwiseProduct(xi));
  return (xi - rhs).cwiseAbs().maxCoeff();
}

inline constexpr double kDirectResidualLimit = 1e-8;

// xi = (E[theta]/c) (I - (alpha/c) Pi D)^{-1} J
inline EquilibriumSolution solve_direct(std::shared_ptr<const ExpectationMatrix> system, const SolverParams& p) {
  require_solvable(*system, p);
  const auto L = static_cast<Eigen::Index>(system->size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(L, L) - (p.alpha / p.cost) * system->pi_times_d();
  Eigen::VectorXd b = Eigen::VectorXd::Constant(L, p.mean_preference / p.cost);
  EquilibriumSolution sol;
  sol.xi = a.partialPivLu().solve(b);
  sol.system = system;
  sol.method = SolveMethod::direct;
  sol.residual = fixed_point_residual(*system, p, sol.xi);
  if (!sol.xi.allFinite() || sol.residual > kDirectResidualLimit) {
    throw StabilityError("direct solve failed: residual " + format_double(sol.residual) +
                         " (check rho_K < c/alpha)");
  }
  return sol;
}

inline EquilibriumSolution solve_direct(const ExpectationMatrix& system, const SolverParams& p) {
  return solve_direct(std::make_shared<const ExpectationMatrix>(system), p);
}

// xi^{q+1} = (E[theta]/c) J + (alpha/c) Pi D xi^q from the cold start
// xi^0 = (E[theta]/c) J; stops once the sup-norm step is below tol.
inline EquilibriumSolution solve_iterative(std::shared_ptr<const ExpectationMatrix> system, const SolverParams& p,
                                           double tol = 1e-12, std::size_t max_iter = 1'000'000) {
  if (!(tol > 0.0)) throw Error("tolerance must be positive");
  require_solvable(*system, p);
  const auto L = static_cast<Eigen::Index>(system->size());
  const Eigen::VectorXd base = Eigen::VectorXd::Constant(L, p.mean_preference / p.cost);
  const Eigen::MatrixXd step = (p.alpha / p.cost) * system->pi_times_d();
  Eigen::VectorXd xi = base;
  double last = 0.0;
  for (std::size_t it = 1; it <= max_iter; ++it) {
    Eigen::VectorXd next = base + step * xi;
    last = (next - xi).cwiseAbs().maxCoeff();
    xi.swap(next);
    if (last < tol) {
      EquilibriumSolution sol;
      sol.xi = std::move(xi);
      sol.system = system;
      sol.method = SolveMethod::iterative;
      sol.iterations = it;
      sol.residual = fixed_point_residual(*system, p, sol.xi);
      return sol;
    }
  }
  throw ConvergenceError("fixed-point iteration did not converge in " + std::to_string(max_iter) +
                             " steps (last step " + format_double(last) + ")",
                         last);
}

inline EquilibriumSolution solve_iterative(const ExpectationMatrix& system, const SolverParams& p, double tol = 1e-12,
                                           std::size_t max_iter = 1'000'000) {
  return solve_iterative(std::make_shared<const ExpectationMatrix>(system), p, tol, max_iter);
}

// Lattice-weighted mean expectation of one rule's agents when the true shares
// are `delta`: each degree class weighted by delta_k, each observation by its
// multinomial probability under the degree-biased neighbor mix.
inline double population_mean_expectation(const EquilibriumSolution& sol, const std::vector<double>& delta, Rule rule) {
  const auto& sys = *sol.system;
  const auto biased = biased_neighbor_share(sys.degrees, delta);
  double total = 0.0;
  for (std::size_t l = 0; l < sys.size(); ++l) {
    const auto& t = sys.types[l];
    if (t.rule != rule) continue;
    total += delta[t.degree_index] * multinomial_pmf(t.observed.counts(), biased) * sol.xi(static_cast<Eigen::Index>(l));
  }
  return total;
}

// ---- infinite precision ---------------------------------------------------

namespace detail {

template <typename Scalar>
Scalar checked_quotient(const Scalar& num, const Scalar& den, const char* what) {
  if (!(den > Scalar(0))) {
    throw StabilityError(std::string(what) + ": non-positive denominator, best responses diverge");
  }
  return num / den;
}

template <typename Scalar>
std::vector<Scalar> ratios_of(const std::vector<int>& degrees) {
  std::vector<Scalar> rho;
  for (int d : degrees) rho.push_back(ratio<Scalar>(d, degrees.front()));
  return rho;
}

template <typename Scalar>
Scalar dot(const std::vector<Scalar>& a, const std::vector<Scalar>& b) {
  Scalar s(0);
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

}  // namespace detail

// Naive expectation when every neighbor sample shows the class mix `observed`:
// E[theta] / (c - alpha sum_k observed_k rho_k).
template <typename Scalar>
Scalar naive_expectation_at(const std::vector<Scalar>& observed, const std::vector<int>& degrees,
                            const GameParams<Scalar>& params) {
  const auto rho = detail::ratios_of<Scalar>(degrees);
  return detail::checked_quotient(params.mean_preference, Scalar(params.cost - params.alpha * detail::dot(observed, rho)),
                                  "naive expectation");
}

// Sophisticated expectation for a believed population mix `believed` (the
// naive agents are known to see its degree-biased image).
template <typename Scalar>
Scalar sophisticated_expectation_for(const std::vector<Scalar>& believed, const std::vector<int>& degrees,
                                     const GameParams<Scalar>& params) {
  const auto rho = detail::ratios_of<Scalar>(degrees);
  const Scalar mean_rho = detail::dot(believed, rho);
  const Scalar naive = naive_expectation_at(biased_neighbor_share(degrees, believed), degrees, params);
  const Scalar one_minus_sigma = Scalar(1) - params.sigma;
  return detail::checked_quotient(Scalar(params.mean_preference + one_minus_sigma * params.alpha * mean_rho * naive),
                                  Scalar(params.cost - params.sigma * params.alpha * mean_rho),
                                  "sophisticated expectation");
}

// Infinite-precision expectation of an agent of `rule` observing `observed`.
template <typename Scalar>
Scalar infinite_expectation_at(Rule rule, const std::vector<Scalar>& observed, const std::vector<int>& degrees,
                               const GameParams<Scalar>& params) {
  if (rule == Rule::naive) return naive_expectation_at(observed, degrees, params);
  return sophisticated_expectation_for(sophisticated_mle(observed, degrees).values, degrees, params);
}

// E[theta] / (c - alpha E[rho^2] / E[rho])
template <typename Scalar>
Scalar infinite_naive(const DegreeModel<Scalar>& model, const GameParams<Scalar>& params) {
  const auto r = degree_ratios(model);
  return detail::checked_quotient(params.mean_preference, Scalar(params.cost - params.alpha * r.mean_sq / r.mean),
                                  "naive expectation");
}

// (E[theta] + (1 - sigma) alpha E[rho] x_n) / (c - sigma alpha E[rho])
template <typename Scalar>
Scalar infinite_sophisticated(const DegreeModel<Scalar>& model, const GameParams<Scalar>& params) {
  const auto r = degree_ratios(model);
  const Scalar naive = infinite_naive(model, params);
  return detail::checked_quotient(Scalar(params.mean_preference + (Scalar(1) - params.sigma) * params.alpha * r.mean * naive),
                                  Scalar(params.cost - params.sigma * params.alpha * r.mean), "sophisticated expectation");
}

template <typename Scalar>
Scalar infinite_expectation(Rule rule, const DegreeModel<Scalar>& model, const GameParams<Scalar>& params) {
  return rule == Rule::naive ? infinite_naive(model, params) : infinite_sophisticated(model, params);
}

// Full-information benchmark: E[theta] / (c - alpha E[rho]).
template <typename Scalar>
Scalar benchmark_expectation(const DegreeModel<Scalar>& model, const GameParams<Scalar>& params) {
  const auto r = degree_ratios(model);
  return detail::checked_quotient(params.mean_preference, Scalar(params.cost - params.alpha * r.mean),
                                  "benchmark expectation");
}

// Two-class variant
//   (E[theta] + alpha (1-sigma) x_n (1 + sigma + eps (sigma delta_2 + observed_2)))
//     / (c - alpha (1 + eps delta_2) sigma^2).
// Agrees with infinite_sophisticated only at sigma = 1 and eps = 0; kept as a
// labelled alternative, the matrix solver converges to infinite_sophisticated.
template <typename Scalar>
Scalar reduced_sophisticated(const DegreeModel<Scalar>& model, const GameParams<Scalar>& params, const Scalar& observed2) {
  const Scalar eps = model.excess_ratio();
  const Scalar delta2 = model.share(1);
  const Scalar naive = naive_expectation_at(std::vector<Scalar>{Scalar(1) - observed2, observed2}, model.degrees(), params);
  const Scalar& s = params.sigma;
  const Scalar h = Scalar(1) + s + eps * (s * delta2 + observed2);
  return detail::checked_quotient(Scalar(params.mean_preference + params.alpha * (Scalar(1) - s) * naive * h),
                                  Scalar(params.cost - params.alpha * (Scalar(1) + eps * delta2) * s * s),
                                  "reduced-form sophisticated expectation");
}

}  // namespace netgame
