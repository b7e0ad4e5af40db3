#include "netgame/equilibrium.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <random>

using namespace netgame;

namespace {

const GameParams<double> kFig1(1.0, 1.2, 3.7, 0.5);

Rational q(std::int64_t n, std::int64_t d = 1) { return ratio<Rational>(n, d); }

// Plain Gaussian elimination with partial pivoting; oracle for the LU solve.
Eigen::VectorXd gauss_solve(Eigen::MatrixXd a, Eigen::VectorXd b) {
  const Eigen::Index n = a.rows();
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index piv = c;
    for (Eigen::Index r = c + 1; r < n; ++r) {
      if (std::abs(a(r, c)) > std::abs(a(piv, c))) piv = r;
    }
    a.row(c).swap(a.row(piv));
    std::swap(b(c), b(piv));
    for (Eigen::Index r = c + 1; r < n; ++r) {
      const double f = a(r, c) / a(c, c);
      a.row(r) -= f * a.row(c);
      b(r) -= f * b(c);
    }
  }
  Eigen::VectorXd x(n);
  for (Eigen::Index r = n - 1; r >= 0; --r) {
    double s = b(r);
    for (Eigen::Index c = r + 1; c < n; ++c) s -= a(r, c) * x(c);
    x(r) = s / a(r, r);
  }
  return x;
}

}  // namespace

TEST(ClosedForms, WorkedExampleExact) {
  const DegreeModel<Rational> m({4, 6}, {q(3, 5), q(2, 5)});
  const GameParams<Rational> p(q(1, 2), q(4), q(6), q(0));
  EXPECT_EQ(benchmark_expectation(m, p), q(15, 36));
  EXPECT_EQ(infinite_naive(m, p), q(1, 2));
  EXPECT_EQ(infinite_sophisticated(m, p), q(29, 60));
  EXPECT_EQ(infinite_sophisticated(m, p.with_sigma(q(1))), q(15, 36));
  EXPECT_EQ(infinite_sophisticated(m, p.with_sigma(q(1, 2))), q(17, 36));
}

TEST(ClosedForms, ObservationLevelFormsAgreeAtTheBiasedMix) {
  const DegreeModel<Rational> m({4, 6}, {q(3, 5), q(2, 5)});
  const GameParams<Rational> p(q(1, 2), q(4), q(13, 2), q(1, 3));
  const auto observed = biased_neighbor_share(m);
  EXPECT_EQ(infinite_expectation_at(Rule::naive, observed, m.degrees(), p), infinite_naive(m, p));
  EXPECT_EQ(infinite_expectation_at(Rule::sophisticated, observed, m.degrees(), p), infinite_sophisticated(m, p));
}

TEST(ClosedForms, ReducedVariantAgreesAtFullSophistication) {
  const DegreeModel<Rational> m({4, 6}, {q(3, 5), q(2, 5)});
  const GameParams<Rational> p(q(1, 2), q(4), q(13, 2), q(1));
  const auto observed2 = biased_neighbor_share(m)[1];
  EXPECT_EQ(reduced_sophisticated(m, p, observed2), infinite_sophisticated(m, p));
}

TEST(ClosedForms, UnstableDenominatorThrows) {
  const DegreeModel<double> m({1, 10}, {0.5, 0.5});
  EXPECT_THROW(infinite_naive(m, GameParams<double>(1.0, 1.0, 2.0, 0.0)), StabilityError);
}

TEST(Solver, StrictStabilityRequired) {
  const auto pi = build_pi(std::vector<int>{4, 6}, 0.0);
  EXPECT_THROW(solve_direct(pi, SolverParams{0.5, 4.0, 6.0}), StabilityError);
  EXPECT_NO_THROW(solve_direct(pi, SolverParams{0.5, 4.0, 6.5}));
}

TEST(Solver, NoComplementarityGivesConstant) {
  const auto sol = solve_direct(build_pi(std::vector<int>{4, 6}, 0.5), SolverParams{0.5, 0.0, 6.0});
  for (Eigen::Index l = 0; l < sol.xi.size(); ++l) EXPECT_NEAR(sol.xi(l), 0.5 / 6.0, 1e-15);
}

TEST(Solver, DirectMatchesGaussianOracle) {
  for (double sigma : {0.0, 0.5, 1.0}) {
    const auto pi = build_pi(std::vector<int>{2, 6}, sigma);
    const SolverParams sp = SolverParams::from(kFig1.with_sigma(sigma));
    const auto sol = solve_direct(pi, sp);
    const auto L = static_cast<Eigen::Index>(pi.size());
    const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(L, L) - (sp.alpha / sp.cost) * pi.pi_times_d();
    const Eigen::VectorXd x = gauss_solve(a, Eigen::VectorXd::Constant(L, sp.mean_preference / sp.cost));
    EXPECT_LT((x - sol.xi).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT(sol.residual, 1e-12);
  }
}

TEST(Solver, DirectMatchesIterative) {
  for (int d1 : {2, 4, 8}) {
    for (double sigma : {0.0, 0.25, 1.0}) {
      const auto pi = std::make_shared<const ExpectationMatrix>(build_pi(std::vector<int>{d1, 3 * d1}, sigma));
      const SolverParams sp = SolverParams::from(kFig1.with_sigma(sigma));
      const auto a = solve_direct(pi, sp);
      const auto b = solve_iterative(pi, sp);
      EXPECT_LT((a.xi - b.xi).cwiseAbs().maxCoeff(), 1e-10);
      EXPECT_EQ(b.method, SolveMethod::iterative);
      EXPECT_GT(b.iterations, 1u);
    }
  }
}

TEST(Solver, IteratesIncreaseMonotonicallyFromColdStart) {
  const auto pi = build_pi(std::vector<int>{2, 6}, 0.5);
  const SolverParams sp = SolverParams::from(kFig1);
  const Eigen::MatrixXd step = (sp.alpha / sp.cost) * pi.pi_times_d();
  const Eigen::VectorXd base = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(pi.size()), sp.mean_preference / sp.cost);
  Eigen::VectorXd xi = base;
  for (int it = 0; it < 200; ++it) {
    const Eigen::VectorXd next = base + step * xi;
    EXPECT_GE((next - xi).minCoeff(), -1e-15);
    xi = next;
  }
  const auto sol = solve_direct(pi, sp);
  EXPECT_LE((xi - sol.xi).maxCoeff(), 1e-12);
}

TEST(Solver, IterativeReportsNonConvergence) {
  const auto pi = build_pi(std::vector<int>{2, 6}, 0.5);
  EXPECT_THROW(solve_iterative(pi, SolverParams::from(kFig1), 1e-12, 3), ConvergenceError);
}

TEST(Solver, InvariantUnderTypePermutation) {
  const auto base = build_pi(std::vector<int>{2, 4}, 0.5);
  const SolverParams sp = SolverParams::from(kFig1);
  const auto sol = solve_direct(base, sp);
  std::vector<std::size_t> perm(base.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), std::mt19937_64(3));
  ExpectationMatrix shuffled = base;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    shuffled.types[i] = base.types[perm[i]];
    shuffled.ratio(static_cast<Eigen::Index>(i)) = base.ratio(static_cast<Eigen::Index>(perm[i]));
    for (std::size_t j = 0; j < perm.size(); ++j) {
      shuffled.pi(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          base.pi(static_cast<Eigen::Index>(perm[i]), static_cast<Eigen::Index>(perm[j]));
    }
  }
  shuffled.build_index();
  const auto other = solve_direct(shuffled, sp);
  for (const auto& t : base.types) {
    EXPECT_NEAR(sol.at(t.rule, t.degree_index, t.observed.counts()), other.at(t.rule, t.degree_index, t.observed.counts()),
                1e-13);
  }
}

TEST(Solver, ApproachesClosedFormsAsPrecisionGrows) {
  // High-degree naive agent observing a 3/4 high share, d = (2k, 6k).
  const GameParams<double> p(1.0, 1.2, 3.7, 0.0);
  double previous = INFINITY;
  for (int k : {2, 4, 8, 16}) {
    const std::vector<int> degrees{2 * k, 6 * k};
    const auto sol = solve_direct(build_pi(degrees, 0.0), SolverParams::from(p));
    const double value = sol.at(Rule::naive, 1, {6 * k / 4, 6 * k - 6 * k / 4});
    const double closed = naive_expectation_at(std::vector<double>{0.25, 0.75}, degrees, p);
    EXPECT_GT(value, closed);
    EXPECT_LT(value - closed, previous);
    previous = value - closed;
  }
}

TEST(Solver, PopulationMeanExpectation) {
  const GameParams<double> p(1.0, 0.0, 4.0, 0.3);
  const auto sol = solve_direct(build_pi(std::vector<int>{2, 6}, 0.3), SolverParams::from(p));
  EXPECT_NEAR(population_mean_expectation(sol, {0.5, 0.5}, Rule::naive), 0.25, 1e-14);
  EXPECT_NEAR(population_mean_expectation(sol, {0.5, 0.5}, Rule::sophisticated), 0.25, 1e-14);
}
