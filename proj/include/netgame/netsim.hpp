#pragma once

// Finite configuration-model realizations used as a Monte-Carlo check on the
// neighbor-sampling law and the estimators.

#include "netgame/estimators.hpp"
#include "netgame/population.hpp"
#include "netgame/typespace.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <random>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace netgame {

enum class GraphMode { multigraph, simple };

inline const char* to_string(GraphMode m) { return m == GraphMode::simple ? "simple" : "multigraph"; }

using Rng = std::mt19937_64;

// Independent stream for (seed, trial).
inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

struct SampledNetwork {
  std::vector<int> degrees;               // support
  std::vector<double> shares;             // target shares
  std::vector<std::size_t> node_class;    // degree class per node
  std::vector<int> node_degree;           // assigned degree per node
  std::vector<std::pair<int, int>> edges; // u <= v, sorted
  std::uint64_t seed = 0;
  GraphMode mode = GraphMode::multigraph;
  bool parity_adjusted = false;

  int node_count() const { return static_cast<int>(node_degree.size()); }

  std::vector<int> class_counts() const {
    std::vector<int> c(degrees.size(), 0);
    for (auto k : node_class) ++c[k];
    return c;
  }

  // Degree of every node recounted from the edge list (a self-loop counts twice).
  std::vector<int> realized_degrees() const {
    std::vector<int> d(node_degree.size(), 0);
    for (auto [u, v] : edges) {
      ++d[u];
      ++d[v];
    }
    return d;
  }

  bool is_simple() const {
    for (std::size_t e = 0; e < edges.size(); ++e) {
      if (edges[e].first == edges[e].second) return false;
      if (e > 0 && edges[e] == edges[e - 1]) return false;
    }
    return true;
  }
};

// Largest remainder rounding of n * shares; ties go to the lower degree class.
inline std::vector<int> apportion(int n, const std::vector<double>& shares) {
  std::vector<int> counts(shares.size());
  std::vector<double> remainder(shares.size());
  int assigned = 0;
  for (std::size_t k = 0; k < shares.size(); ++k) {
    const double exact = n * shares[k];
    counts[k] = static_cast<int>(std::floor(exact + 1e-9));
    remainder[k] = exact - counts[k];
    assigned += counts[k];
  }
  std::vector<std::size_t> order(shares.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (std::abs(remainder[a] - remainder[b]) > 1e-9) return remainder[a] > remainder[b];
    return a < b;
  });
  for (std::size_t i = 0; assigned < n; ++i, ++assigned) ++counts[order[i % order.size()]];
  return counts;
}

namespace detail {

inline std::uint64_t edge_key(int u, int v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) | static_cast<std::uint32_t>(v);
}

// Double-edge swaps until no self-loop or repeated edge remains. Degrees are
// preserved by every swap.
inline bool repair_simple(std::vector<std::pair<int, int>>& edges, Rng& rng, std::size_t max_attempts) {
  std::unordered_map<std::uint64_t, int> mult;
  mult.reserve(edges.size() * 2);
  for (auto [u, v] : edges) ++mult[edge_key(u, v)];
  auto is_bad = [&](std::size_t e) {
    auto [u, v] = edges[e];
    return u == v || mult[edge_key(u, v)] > 1;
  };
  std::vector<std::size_t> bad;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (is_bad(e)) bad.push_back(e);
  }
  if (bad.empty()) return true;
  if (edges.size() < 2) return false;
  std::uniform_int_distribution<std::size_t> pick(0, edges.size() - 1);
  std::bernoulli_distribution flip(0.5);
  std::size_t attempts = 0;
  while (!bad.empty()) {
    const std::size_t i = bad.back();
    if (!is_bad(i)) {
      bad.pop_back();
      continue;
    }
    if (++attempts > max_attempts) return false;
    const std::size_t j = pick(rng);
    if (j == i) continue;
    auto [u, v] = edges[i];
    auto [x, y] = edges[j];
    if (flip(rng)) std::swap(x, y);
    if (u == x || v == y) continue;
    const auto k1 = edge_key(u, x), k2 = edge_key(v, y);
    if (k1 == k2 || mult[k1] > 0 || mult[k2] > 0) continue;
    --mult[edge_key(u, v)];
    --mult[edge_key(edges[j].first, edges[j].second)];
    edges[i] = {u, x};
    edges[j] = {v, y};
    ++mult[k1];
    ++mult[k2];
    bad.pop_back();
    // The old copies of a repeated pair may still be flagged elsewhere.
    if (bad.empty()) {
      for (std::size_t e = 0; e < edges.size(); ++e) {
        if (is_bad(e)) bad.push_back(e);
      }
    }
  }
  return true;
}

}  // namespace detail

// Stub matching on round(n delta_k) nodes per class. If the stub total is odd,
// one node is moved between two classes of opposite degree parity, choosing
// the move that least increases the total |count_k - n delta_k| (ties: lowest
// class indices).
inline SampledNetwork generate(const std::vector<int>& degrees, const std::vector<double>& shares, int n,
                               std::uint64_t seed, GraphMode mode = GraphMode::multigraph,
                               std::uint64_t stream = 0) {
  if (n < 2) throw Error("network needs at least two nodes");
  if (degrees.size() != shares.size()) throw Error("degrees and shares differ in length");
  SampledNetwork net;
  net.degrees = degrees;
  net.shares = shares;
  net.seed = seed;
  net.mode = mode;

  auto counts = apportion(n, shares);
  auto stub_total = [&] {
    long long s = 0;
    for (std::size_t k = 0; k < counts.size(); ++k) s += static_cast<long long>(counts[k]) * degrees[k];
    return s;
  };
  if (stub_total() % 2 != 0) {
    double best = 0.0;
    int from = -1, to = -1;
    for (std::size_t a = 0; a < counts.size(); ++a) {
      if (counts[a] == 0) continue;
      for (std::size_t b = 0; b < counts.size(); ++b) {
        if (a == b || (degrees[a] - degrees[b]) % 2 == 0) continue;
        const double cost = std::abs(counts[a] - 1 - n * shares[a]) - std::abs(counts[a] - n * shares[a]) +
                            std::abs(counts[b] + 1 - n * shares[b]) - std::abs(counts[b] - n * shares[b]);
        if (from < 0 || cost < best - 1e-12) {
          best = cost;
          from = static_cast<int>(a);
          to = static_cast<int>(b);
        }
      }
    }
    if (from < 0) throw Error("degree sequence has an odd stub total that cannot be corrected");
    --counts[from];
    ++counts[to];
    net.parity_adjusted = true;
  }
  if (mode == GraphMode::simple) {
    for (std::size_t k = 0; k < counts.size(); ++k) {
      if (counts[k] > 0 && degrees[k] >= n) throw Error("degree " + std::to_string(degrees[k]) + " impossible in a simple graph on " + std::to_string(n) + " nodes");
    }
  }

  std::vector<int> stubs;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    for (int i = 0; i < counts[k]; ++i) {
      const int node = static_cast<int>(net.node_class.size());
      net.node_class.push_back(k);
      net.node_degree.push_back(degrees[k]);
      stubs.insert(stubs.end(), static_cast<std::size_t>(degrees[k]), node);
    }
  }
  Rng rng = make_rng(seed, stream);
  std::shuffle(stubs.begin(), stubs.end(), rng);
  net.edges.reserve(stubs.size() / 2);
  for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) net.edges.emplace_back(stubs[i], stubs[i + 1]);

  if (mode == GraphMode::simple && !detail::repair_simple(net.edges, rng, 1000 * net.edges.size() + 10000)) {
    throw Error("simple-graph repair did not terminate; degree sequence may not be graphical");
  }
  for (auto& e : net.edges) {
    if (e.first > e.second) std::swap(e.first, e.second);
  }
  std::sort(net.edges.begin(), net.edges.end());
  return net;
}

template <typename Scalar>
SampledNetwork generate(const DegreeModel<Scalar>& model, int n, std::uint64_t seed,
                        GraphMode mode = GraphMode::multigraph, std::uint64_t stream = 0) {
  std::vector<double> shares;
  for (const auto& s : model.shares()) shares.push_back(to_double(s));
  return generate(model.degrees(), shares, n, seed, mode, stream);
}

struct NeighborShares {
  std::vector<ObservedShares> per_node;
  std::vector<double> population_average;  // node-average of per-node shares
};

inline NeighborShares empirical_neighbor_shares(const SampledNetwork& net) {
  const std::size_t K = net.degrees.size();
  std::vector<std::vector<int>> counts(net.node_degree.size(), std::vector<int>(K, 0));
  for (auto [u, v] : net.edges) {
    ++counts[u][net.node_class[v]];
    ++counts[v][net.node_class[u]];
  }
  NeighborShares out;
  out.population_average.assign(K, 0.0);
  out.per_node.reserve(counts.size());
  for (auto& c : counts) {
    out.per_node.emplace_back(std::move(c));
    const auto& obs = out.per_node.back();
    for (std::size_t k = 0; k < K; ++k) out.population_average[k] += obs.share<double>(k);
  }
  for (auto& v : out.population_average) v /= static_cast<double>(net.node_degree.size());
  return out;
}

// Newman's degree assortativity over edge ends; NaN when all degrees agree.
inline double degree_assortativity(const SampledNetwork& net) {
  const auto deg = net.realized_degrees();
  double sum_prod = 0.0, sum_half = 0.0, sum_sq_half = 0.0;
  for (auto [u, v] : net.edges) {
    const double a = deg[u], b = deg[v];
    sum_prod += a * b;
    sum_half += 0.5 * (a + b);
    sum_sq_half += 0.5 * (a * a + b * b);
  }
  const double m = static_cast<double>(net.edges.size());
  const double mean = sum_half / m;
  const double denom = sum_sq_half / m - mean * mean;
  if (denom <= 0.0) return std::nan("");
  return (sum_prod / m - mean * mean) / denom;
}

// One `u v` line per edge, 0-indexed, ascending u.
inline void write_edge_list(std::ostream& os, const SampledNetwork& net) {
  for (auto [u, v] : net.edges) os << u << ' ' << v << '\n';
}

// Exact mean over the node population of the per-node sophisticated estimate
// for class `k` when each node of degree d_i draws d_i neighbors i.i.d. from
// the degree-biased mix. Differs from delta_k for finite degrees.
inline double expected_per_node_mle(const std::vector<int>& degrees, const std::vector<double>& shares, std::size_t k) {
  const auto biased = biased_neighbor_share(degrees, shares);
  double total = 0.0;
  for (std::size_t c = 0; c < degrees.size(); ++c) {
    for (const auto& obs : feasible_observed_shares(degrees[c], degrees.size())) {
      total += shares[c] * multinomial_pmf(obs.counts(), biased) * sophisticated_mle(obs, degrees).values[k];
    }
  }
  return total;
}

struct TrialSummary {
  std::vector<double> naive_mean;           // node-average observed shares
  std::vector<double> pooled_sophisticated; // MLE of the node-average shares
  std::vector<double> per_node_sophisticated_mean;
  std::vector<double> naive_sd_by_class;    // SD of the top-class naive estimate, per observer class
  std::vector<double> sophisticated_sd_by_class;
  double assortativity = 0.0;
};

struct MonteCarloReport {
  std::vector<int> degrees;
  std::vector<double> shares;
  int n = 0;
  int trials = 0;
  std::uint64_t seed = 0;
  GraphMode mode = GraphMode::multigraph;
  std::vector<double> predicted_naive;          // degree-biased mix
  double predicted_per_node_sophisticated = 0;  // exact finite-degree mean, top class
  std::vector<TrialSummary> per_trial;
};

inline TrialSummary summarize_trial(const SampledNetwork& net) {
  const std::size_t K = net.degrees.size();
  const auto ns = empirical_neighbor_shares(net);
  TrialSummary t;
  t.naive_mean = ns.population_average;
  t.pooled_sophisticated = sophisticated_mle(ns.population_average, net.degrees).values;
  t.per_node_sophisticated_mean.assign(K, 0.0);
  std::vector<double> sum_n(K, 0), sq_n(K, 0), sum_s(K, 0), sq_s(K, 0), cnt(K, 0);
  for (std::size_t i = 0; i < ns.per_node.size(); ++i) {
    const auto mle = sophisticated_mle(ns.per_node[i], net.degrees).values;
    for (std::size_t k = 0; k < K; ++k) t.per_node_sophisticated_mean[k] += mle[k];
    const std::size_t c = net.node_class[i];
    const double nv = ns.per_node[i].share<double>(K - 1), sv = mle[K - 1];
    sum_n[c] += nv;
    sq_n[c] += nv * nv;
    sum_s[c] += sv;
    sq_s[c] += sv * sv;
    cnt[c] += 1;
  }
  for (auto& v : t.per_node_sophisticated_mean) v /= static_cast<double>(ns.per_node.size());
  for (std::size_t c = 0; c < K; ++c) {
    auto sd = [&](double s, double q) {
      if (cnt[c] < 2) return 0.0;
      const double m = s / cnt[c];
      return std::sqrt(std::max(0.0, (q - cnt[c] * m * m) / (cnt[c] - 1)));
    };
    t.naive_sd_by_class.push_back(sd(sum_n[c], sq_n[c]));
    t.sophisticated_sd_by_class.push_back(sd(sum_s[c], sq_s[c]));
  }
  t.assortativity = degree_assortativity(net);
  return t;
}

inline MonteCarloReport monte_carlo_estimator_check(const std::vector<int>& degrees, const std::vector<double>& shares,
                                                    int n, int trials, std::uint64_t seed,
                                                    GraphMode mode = GraphMode::multigraph) {
  if (trials < 1) throw Error("need at least one trial");
  MonteCarloReport r;
  r.degrees = degrees;
  r.shares = shares;
  r.n = n;
  r.trials = trials;
  r.seed = seed;
  r.mode = mode;
  r.predicted_naive = biased_neighbor_share(degrees, shares);
  r.predicted_per_node_sophisticated = expected_per_node_mle(degrees, shares, degrees.size() - 1);
  for (int t = 0; t < trials; ++t) {
    r.per_trial.push_back(summarize_trial(generate(degrees, shares, n, seed, mode, static_cast<std::uint64_t>(t))));
  }
  return r;
}

struct ConvergencePoint {
  int n;
  double rms_deviation;  // top-class node-average share vs the degree-biased prediction
};

struct ConvergenceStudy {
  std::vector<ConvergencePoint> points;
  double slope;  // least-squares slope of log(rms) on log(n)
};

inline double loglog_slope(const std::vector<ConvergencePoint>& pts) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(pts.size());
  for (const auto& p : pts) {
    const double x = std::log(static_cast<double>(p.n)), y = std::log(p.rms_deviation);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

inline ConvergenceStudy neighbor_share_convergence(const std::vector<int>& degrees, const std::vector<double>& shares,
                                                   const std::vector<int>& sizes, int trials, std::uint64_t seed) {
  const double predicted = biased_neighbor_share(degrees, shares).back();
  ConvergenceStudy study;
  std::uint64_t stream = 0;
  for (int n : sizes) {
    double sq = 0.0;
    for (int t = 0; t < trials; ++t) {
      const auto net = generate(degrees, shares, n, seed, GraphMode::multigraph, stream++);
      const double dev = empirical_neighbor_shares(net).population_average.back() - predicted;
      sq += dev * dev;
    }
    study.points.push_back({n, std::sqrt(sq / trials)});
  }
  study.slope = loglog_slope(study.points);
  return study;
}

}  // namespace netgame
