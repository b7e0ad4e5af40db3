// Acceptance suite: one PASS/FAIL line per criterion, exit code 1 if any fails.

#include "netgame/experiments.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>

using namespace netgame;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Rational q(std::int64_t n, std::int64_t d = 1) { return ratio<Rational>(n, d); }

Outcome worked_example() {
  const auto t0 = Clock::now();
  const auto rep = run_example<Rational>();
  const double elapsed = seconds_since(t0);
  std::string failed;
  for (const auto& c : rep.checks) {
    if (!c.pass) failed += " " + c.name + "=" + c.value + " (expected " + c.expected + ")";
  }
  const bool pass = rep.pass() && elapsed < 1.0;
  return {pass, std::to_string(rep.checks.size()) + " checks, exact rationals, " + fmt("%.3f s", elapsed) +
                    (failed.empty() ? "" : "; failed:" + failed)};
}

Outcome pi_row() {
  const auto m = build_pi(std::vector<int>{2, 4}, 1.0);
  const auto row = static_cast<Eigen::Index>(m.index_of(Rule::sophisticated, 0, {1, 1}));
  const std::vector<double> low{0.16, 0.33, 0.16};
  const std::vector<double> high{0.02, 0.08, 0.13, 0.08, 0.02};
  // 1e-12 absorbs binary representation of the printed decimals only.
  const double tol = 0.005 + 1e-12;
  bool pass = true;
  std::string detail, misses;
  double worst = 0.0;
  auto check = [&](std::size_t cls, int d, const std::vector<double>& printed) {
    for (int j = 0; j <= d; ++j) {
      const double v = m.pi(row, static_cast<Eigen::Index>(m.index_of(Rule::sophisticated, cls, {d - j, j})));
      const double dev = std::abs(v - printed[j]);
      worst = std::max(worst, dev);
      if (dev > tol) {
        pass = false;
        misses += " d=" + std::to_string(d) + ",k=" + std::to_string(j) + ": " + fmt("%.4f", v) + " vs printed " +
                  fmt("%.2f", printed[j]) + ";";
      }
    }
  };
  check(0, 2, low);
  check(1, 4, high);
  double naive_mass = 0.0;
  for (Eigen::Index qi = 0; qi < m.pi.cols(); ++qi) {
    if (m.types[qi].rule == Rule::naive) naive_mass += m.pi(row, qi);
  }
  const double sum = m.pi.row(row).sum();
  if (std::abs(sum - 1.0) > 1e-12 || naive_mass != 0.0) pass = false;
  detail = "row sum " + fmt("%.15f", sum) + ", max |dev| " + fmt("%.4f", worst);
  if (!misses.empty()) detail += "; outside +/-0.005:" + misses;
  return {pass, detail};
}

Outcome solver_agreement() {
  const auto t0 = Clock::now();
  const GameParams<double> base(1.0, 1.2, 3.7, 0.0);
  const std::vector<double> deltas{0.1, 0.3, 0.5, 0.7, 0.9};
  const std::vector<double> sigmas{0.0, 0.25, 0.5, 0.75, 1.0};
  double worst = 0.0;
  int cells = 0;
  for (int d1 : {2, 4, 8}) {
    for (double s : sigmas) {
      const auto sys = std::make_shared<const ExpectationMatrix>(build_pi(scaled_degrees(d1, {1, 3}), s));
      const auto sp = SolverParams::from(base.with_sigma(s));
      const auto a = solve_direct(sys, sp);
      const auto b = solve_iterative(sys, sp);
      for (double x : deltas) {
        double cell = (a.xi - b.xi).cwiseAbs().maxCoeff();
        for (Rule r : {Rule::naive, Rule::sophisticated}) {
          cell = std::max(cell, std::abs(population_mean_expectation(a, {1 - x, x}, r) -
                                         population_mean_expectation(b, {1 - x, x}, r)));
        }
        worst = std::max(worst, cell);
        ++cells;
      }
    }
  }
  const double elapsed = seconds_since(t0);
  return {worst <= 1e-10 && elapsed < 10.0,
          std::to_string(cells) + " grid cells, max inf-norm " + fmt("%.2e", worst) + ", " + fmt("%.2f s", elapsed)};
}

Outcome sophistication_statics() {
  std::vector<Rational> sigmas;
  for (int i = 0; i <= 100; ++i) sigmas.push_back(q(i, 100));
  struct Case {
    std::string name;
    DegreeModel<Rational> model;
    GameParams<Rational> params;
  };
  std::vector<Case> cases{{"example", DegreeModel<Rational>({4, 6}, {q(3, 5), q(2, 5)}), GameParams<Rational>(q(1, 2), q(4), q(6), q(0))}};
  for (int k : {1, 3, 5, 7, 9}) {
    cases.push_back({"fig1 delta2=" + std::to_string(k) + "/10", DegreeModel<Rational>::two_class(2, 6, q(k, 10)),
                     GameParams<Rational>(q(1), q(12, 10), q(37, 10), q(0))});
  }
  bool pass = true;
  std::string failed;
  for (const auto& c : cases) {
    const auto sw = sigma_sweep(c.model, c.params, sigmas);
    const auto r = degree_ratios(c.model);
    const bool heterogeneous = r.mean_sq - r.mean * r.mean > Rational(0);
    bool above_benchmark = true;
    for (const auto& pt : sw.points) {
      if (heterogeneous && !(pt.naive > pt.benchmark)) above_benchmark = false;
    }
    const bool ok = sw.naive_flat && sw.sophisticated_strictly_decreasing && sw.second_differences_nonzero &&
                    sw.endpoint_matches_benchmark && sw.naive_dominates && above_benchmark;
    if (!ok) {
      pass = false;
      failed += " " + c.name;
    }
  }
  return {pass, std::to_string(cases.size()) + " settings x 101 sigma points, exact arithmetic" +
                    (failed.empty() ? "" : "; failed:" + failed)};
}

Outcome precision_statics() {
  const GameParams<double> base(1.0, 1.2, 3.7, 0.0);
  bool pass = true;
  std::string detail;
  for (double s : {0.0, 0.5, 1.0}) {
    const auto rep = precision_sweep({1, 3}, base.with_sigma(s), {2, 4, 8});
    const bool ok = rep.convex_everywhere && rep.monotone_decreasing && rep.gap_strictly_decreasing;
    pass = pass && ok;
    detail += " sigma=" + format_double(s) + ": convex=" + (rep.convex_everywhere ? "yes" : "no") +
              " excluded=" + std::to_string(rep.excluded_points) + " gaps=" + fmt("%.4f", rep.gaps[0]) + ">" +
              fmt("%.4f", rep.gaps[1]) + ">" + fmt("%.4f", rep.gaps[2]) + (ok ? "" : " FAILED") + ";";
  }
  return {pass, "d1 in {2,4,8}, degrees d1*(1,3);" + detail};
}

Outcome curvature_conditions() {
  struct Ratio {
    double alpha, cost;
  };
  const std::vector<Ratio> ratios{{1.0, 1.5}, {1.2, 3.7}, {1.0, 6.0}};
  const auto grid = uniform_interior_grid(99);
  bool pass = true;
  std::size_t checked = 0, banded = 0, skipped = 0, soph_checked = 0;
  std::string failed;
  for (double eps : {0.5, 2.0}) {
    for (const auto& r : ratios) {
      for (double s : {0.0, 0.5, 1.0}) {
        const auto rep = convexity_check(eps, GameParams<double>(1.0, r.alpha, r.cost, s), grid);
        for (const auto& p : rep.points) {
          if (p.predicted_naive == Curvature::skipped) {
            ++skipped;
            continue;
          }
          if (p.predicted_naive == Curvature::inconclusive) {
            ++banded;
          } else {
            ++checked;
          }
          if (p.sufficient) ++soph_checked;
        }
        if (!rep.naive_consistent() || !rep.sufficient_condition_holds()) {
          pass = false;
          failed += " eps=" + format_double(eps) + ",c/alpha=" + fmt("%.3f", r.cost / r.alpha) + ",sigma=" + format_double(s);
        }
      }
    }
  }
  return {pass && checked > 0, std::to_string(checked) + " naive signs matched, " + std::to_string(banded) +
                                   " in the 10h band, " + std::to_string(skipped) + " unstable points skipped, " +
                                   std::to_string(soph_checked) + " sophisticated points under the sufficient condition" +
                                   (failed.empty() ? "" : "; failed:" + failed)};
}

Outcome monte_carlo() {
  const auto t0 = Clock::now();
  const std::vector<int> degrees{4, 6};
  const std::vector<double> shares{0.6, 0.4};
  const auto mc = monte_carlo_estimator_check(degrees, shares, 100000, 20, 20260101);
  int soph_ok = 0, naive_ok = 0, assort_ok = 0;
  double worst_r = 0.0;
  for (const auto& t : mc.per_trial) {
    soph_ok += std::abs(t.pooled_sophisticated[1] - 0.40) <= 0.01;
    naive_ok += std::abs(t.naive_mean[1] - 0.50) <= 0.01;
    assort_ok += std::abs(t.assortativity) < 0.02;
    worst_r = std::max(worst_r, std::abs(t.assortativity));
  }
  const auto conv = neighbor_share_convergence(degrees, shares, {1000, 10000, 100000}, 20, 20260102);
  const double elapsed = seconds_since(t0);
  const bool pass = soph_ok >= 19 && naive_ok >= 19 && assort_ok == 20 && std::abs(conv.slope + 0.5) <= 0.15 &&
                    elapsed < 60.0;
  return {pass, "sophisticated " + std::to_string(soph_ok) + "/20, naive " + std::to_string(naive_ok) +
                    "/20, max |r| " + fmt("%.4f", worst_r) + ", slope " + fmt("%.3f", conv.slope) + ", " +
                    fmt("%.1f s", elapsed)};
}

Outcome fig5() {
  const auto surface = bias_surface(1.0, clamped_unit_grid(100001));
  const auto best = bias_argmax(surface);
  const double at99 = naive_bias(99.0, 0.1);
  const bool pass = std::abs(best.bias - 0.172) <= 0.005 && std::abs(best.delta2 - 0.414) <= 0.02 &&
                    std::abs(at99 - 0.817) <= 0.005;
  return {pass, "max " + fmt("%.4f", best.bias) + " at " + fmt("%.4f", best.delta2) + "; eps=99, delta2=0.1: " +
                    fmt("%.4f", at99)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"worked example exactness", worked_example},
      {"expectation-matrix example row", pi_row},
      {"direct vs iterative solver", solver_agreement},
      {"sophistication comparative statics", sophistication_statics},
      {"precision comparative statics", precision_statics},
      {"curvature conditions", curvature_conditions},
      {"estimator Monte Carlo", monte_carlo},
      {"maximum naive bias", fig5},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::cout << "criterion " << i + 1 << " [" << (o.pass ? "PASS" : "FAIL") << "] " << criteria[i].first << ": "
              << o.detail << std::endl;
  }
  std::cout << (criteria.size() - failures) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failures == 0 ? 0 : 1;
}
