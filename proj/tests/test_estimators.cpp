#include "netgame/estimators.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace netgame;

TEST(Estimators, WorkedExampleMle) {
  const std::vector<Rational> observed{ratio<Rational>(1, 2), ratio<Rational>(1, 2)};
  const auto s = sophisticated_mle(observed, {4, 6});
  EXPECT_EQ(s.values[1], ratio<Rational>(4, 10));
  EXPECT_EQ(s.values[0], ratio<Rational>(6, 10));
  EXPECT_EQ(s.rule, Rule::sophisticated);
  const auto n = naive_estimate(observed);
  EXPECT_EQ(n.values[1], ratio<Rational>(1, 2));
  EXPECT_EQ(n.rule, Rule::naive);
}

TEST(Estimators, MleInvertsDegreeBias) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const int K = 2 + trial % 3;
    std::vector<int> degrees;
    int d = 0;
    for (int k = 0; k < K; ++k) degrees.push_back(d += 1 + static_cast<int>(rng() % 7));
    std::vector<double> delta;
    double total = 0;
    for (int k = 0; k < K; ++k) total += delta.emplace_back(u(rng));
    for (auto& x : delta) x /= total;
    const auto back = sophisticated_mle(biased_neighbor_share(degrees, delta), degrees).values;
    for (int k = 0; k < K; ++k) EXPECT_NEAR(back[k], delta[k], 1e-12);
  }
}

TEST(Estimators, MleInvertsDegreeBiasExactly) {
  const std::vector<int> degrees{2, 5, 9};
  const std::vector<Rational> delta{ratio<Rational>(1, 7), ratio<Rational>(2, 7), ratio<Rational>(4, 7)};
  EXPECT_EQ(sophisticated_mle(biased_neighbor_share(degrees, delta), degrees).values, delta);
}

TEST(Estimators, BoundaryObservations) {
  const auto all_low = sophisticated_mle(ObservedShares({4, 0}), {4, 6});
  EXPECT_DOUBLE_EQ(all_low.values[0], 1.0);
  EXPECT_DOUBLE_EQ(all_low.values[1], 0.0);
  const auto all_high = sophisticated_mle(ObservedShares({0, 4}), {4, 6});
  EXPECT_DOUBLE_EQ(all_high.values[1], 1.0);
}

TEST(Estimators, LikelihoodMaximisedAtMle) {
  // Two classes: grid search over delta_2 with step 1e-4.
  const std::vector<int> degrees{4, 6};
  const std::vector<int> counts{3, 2};
  const auto mle = sophisticated_mle(ObservedShares(counts), degrees).values;
  double best = -INFINITY, arg = 0;
  for (int i = 1; i < 10000; ++i) {
    const double x = i * 1e-4;
    const auto ll = log_likelihood({1 - x, x}, counts, degrees);
    if (ll.value > best) {
      best = ll.value;
      arg = x;
    }
  }
  EXPECT_NEAR(arg, mle[1], 1e-4);
  const double h = 1e-6;
  const double grad = (log_likelihood({1 - mle[1] - h, mle[1] + h}, counts, degrees).value -
                       log_likelihood({1 - mle[1] + h, mle[1] - h}, counts, degrees).value) /
                      (2 * h);
  EXPECT_NEAR(grad, 0.0, 1e-5);
}

TEST(Estimators, LikelihoodBoundaryFlag) {
  const auto ll = log_likelihood({1.0, 0.0}, {2, 1}, {1, 2});
  EXPECT_TRUE(ll.on_boundary);
  EXPECT_EQ(ll.value, -INFINITY);
  const auto ok = log_likelihood({0.5, 0.5}, {2, 1}, {1, 2});
  EXPECT_FALSE(ok.on_boundary);
  EXPECT_TRUE(std::isfinite(ok.value));
}

TEST(Bias, ClosedFormAndArgmax) {
  // Independent oracle: naive minus true share for two classes.
  for (double eps : {0.5, 1.0, 2.0, 99.0}) {
    for (double x : {0.1, 0.3, 0.7}) {
      const double d1 = 1, d2 = 1 + eps;
      const double obs = d2 * x / (d1 * (1 - x) + d2 * x);
      EXPECT_NEAR(naive_bias(eps, x), obs - x, 1e-14);
    }
  }
  EXPECT_NEAR(naive_bias(1.0, std::sqrt(2.0) - 1), 3 - 2 * std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(analytic_bias_argmax(1.0), std::sqrt(2.0) - 1, 1e-14);
  EXPECT_NEAR(analytic_bias_argmax(99.0), 9.0 / 99.0, 1e-14);
  const auto surface = bias_surface(1.0, clamped_unit_grid(1001));
  const auto best = bias_argmax(surface);
  EXPECT_NEAR(best.delta2, 0.414, 1e-3);
  EXPECT_NEAR(best.bias, 0.1716, 1e-4);
  EXPECT_NEAR(naive_bias(99.0, 0.1), 0.8174, 1e-4);
}

TEST(Bias, Grids) {
  const auto g = uniform_interior_grid(99);
  ASSERT_EQ(g.size(), 99u);
  EXPECT_DOUBLE_EQ(g.front(), 0.01);
  EXPECT_DOUBLE_EQ(g.back(), 0.99);
  const auto c = clamped_unit_grid(11);
  EXPECT_GT(c.front(), 0.0);
  EXPECT_LT(c.back(), 1.0);
  EXPECT_EQ(std::string(to_string(Rule::naive)), "naive");
}
