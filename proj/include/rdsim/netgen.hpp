#pragma once

// Two-category random networks with controlled mean degree, homophily ratio
// and activity ratio.
//
// The generator is a two-block stochastic block model. Block degrees d_A, d_B
// satisfy d_A / d_B = activity and (n_A d_A + n_B d_B) / |V| = mean_degree.
// The number of cross-category edges is set so that the homophily measure
//
//     h = (E * n_A n_B / (|V|(|V|-1)/2)) / cross_ties
//
// has the requested value in expectation; within-block densities absorb the
// remaining stubs of each block.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rdsim/graph.hpp"
#include "rdsim/rng.hpp"

namespace rdsim {

struct NetgenParams {
  std::size_t population = 1000;
  double prop_a = 0.3;
  double mean_degree = 10.0;
  double homophily = 1.0;
  double activity = 1.0;
  std::uint64_t rng_seed = 0;
};

struct BlockModel {
  std::size_t n_a = 0;
  std::size_t n_b = 0;
  double degree_a = 0.0;
  double degree_b = 0.0;
  double p_aa = 0.0;
  double p_bb = 0.0;
  double p_ab = 0.0;
  /// Set when a probability had to be capped at 1 or floored at 0.
  bool clamped = false;
};

inline std::size_t category_a_count(std::size_t population, double prop_a) {
  return static_cast<std::size_t>(std::llround(prop_a * static_cast<double>(population)));
}

/// Edge probabilities realizing the requested statistics. Throws on
/// infeasible parameters.
inline BlockModel block_model(const NetgenParams& p) {
  if (p.population < 2) throw std::invalid_argument("population must be at least 2");
  if (!(p.prop_a >= 0.0 && p.prop_a <= 1.0)) throw std::invalid_argument("prop_a outside [0,1]");
  if (!(p.mean_degree > 0.0)) throw std::invalid_argument("mean degree must be positive");
  if (!(p.homophily > 0.0)) throw std::invalid_argument("homophily ratio must be positive");
  if (!(p.activity > 0.0)) throw std::invalid_argument("activity ratio must be positive");

  const double n = static_cast<double>(p.population);
  if (!(p.mean_degree < n - 1.0))
    throw std::invalid_argument("mean degree must be below |V|-1");

  BlockModel m;
  m.n_a = category_a_count(p.population, p.prop_a);
  m.n_b = p.population - m.n_a;
  const double na = static_cast<double>(m.n_a);
  const double nb = static_cast<double>(m.n_b);

  if (m.n_a == 0 || m.n_b == 0) {
    double d = p.mean_degree;
    if (m.n_a > 0) m.degree_a = d;
    if (m.n_b > 0) m.degree_b = d;
    double size = static_cast<double>(std::max(m.n_a, m.n_b));
    double prob = d / (size - 1.0);
    (m.n_a > 0 ? m.p_aa : m.p_bb) = prob;
    return m;
  }

  m.degree_b = p.mean_degree * n / (na * p.activity + nb);
  m.degree_a = p.activity * m.degree_b;
  if (m.degree_a > n - 1.0 || m.degree_b > n - 1.0)
    throw std::invalid_argument("activity ratio pushes a category degree above |V|-1");

  const double stubs_a = na * m.degree_a;
  const double stubs_b = nb * m.degree_b;
  const double edges = 0.5 * (stubs_a + stubs_b);
  const double cross_share = na * nb / (n * (n - 1.0) / 2.0);
  double cross = edges * cross_share / p.homophily;

  m.p_ab = cross / (na * nb);
  if (m.p_ab > 1.0) {
    m.p_ab = 1.0;
    m.clamped = true;
  }
  cross = m.p_ab * na * nb;

  auto within = [&](double stubs, double size) {
    if (size < 2.0) return 0.0;
    double e = 0.5 * (stubs - cross);
    double prob = e / (size * (size - 1.0) / 2.0);
    if (prob < 0.0 || prob > 1.0) m.clamped = true;
    return std::clamp(prob, 0.0, 1.0);
  };
  m.p_aa = within(stubs_a, na);
  m.p_bb = within(stubs_b, nb);
  return m;
}

/// True when the block model can be realized without clamping.
inline bool netgen_feasible(const NetgenParams& p) {
  try {
    return !block_model(p).clamped;
  } catch (const std::invalid_argument&) {
    return false;
  }
}

/// Moves mean degree, activity and homophily to the nearest values the block
/// model realizes without clamping. Returns the adjusted parameters and
/// whether anything changed. Homophily may come back as +infinity (no cross
/// ties) when that is what was requested and is feasible.
inline std::pair<NetgenParams, bool> clamp_to_feasible(NetgenParams p) {
  bool changed = false;
  if (p.population < 2) throw std::invalid_argument("population must be at least 2");
  const double n = static_cast<double>(p.population);
  p.prop_a = std::clamp(p.prop_a, 0.0, 1.0);
  if (!(p.mean_degree > 0.0) || !std::isfinite(p.mean_degree))
    throw std::invalid_argument("mean degree must be positive and finite");
  if (p.mean_degree > 0.5 * (n - 1.0)) {
    p.mean_degree = 0.5 * (n - 1.0);
    changed = true;
  }
  if (!(p.activity > 0.0) || !std::isfinite(p.activity)) {
    p.activity = 1.0;
    changed = true;
  }
  if (!(p.homophily > 0.0) || std::isnan(p.homophily)) {
    p.homophily = 1.0;
    changed = true;
  }

  const std::size_t na_count = category_a_count(p.population, p.prop_a);
  const std::size_t nb_count = p.population - na_count;
  if (na_count == 0 || nb_count == 0) return {p, changed};
  const double na = static_cast<double>(na_count);
  const double nb = static_cast<double>(nb_count);

  auto degrees = [&](double a) {
    double db = p.mean_degree * n / (na * a + nb);
    return std::pair{a * db, db};
  };
  for (int i = 0; i < 64; ++i) {
    auto [da, db] = degrees(p.activity);
    if (da <= n - 1.0 && db <= n - 1.0) break;
    p.activity = std::sqrt(p.activity);
    changed = true;
  }

  auto [da, db] = degrees(p.activity);
  const double stubs_a = na * da;
  const double stubs_b = nb * db;
  const double edges = 0.5 * (stubs_a + stubs_b);
  const double baseline = edges * na * nb / (n * (n - 1.0) / 2.0);
  const double lo = std::max({0.0, stubs_a - na * (na - 1.0), stubs_b - nb * (nb - 1.0)});
  const double hi = std::min({na * nb, stubs_a, stubs_b});
  if (lo > hi) throw std::invalid_argument("no feasible homophily for these degrees");
  const double cross = baseline / p.homophily;
  // Keep a small margin inside the bounds so rounding cannot trip the clamp.
  const double margin = 1e-9 * std::max(1.0, hi);
  if (cross > hi - margin || cross < lo + margin) {
    double target = std::clamp(cross, lo + margin, hi - margin);
    if (cross == 0.0 && lo == 0.0) target = 0.0;
    if (target != cross) {
      p.homophily = target > 0.0 ? baseline / target : std::numeric_limits<double>::infinity();
      changed = true;
    }
  }
  return {p, changed};
}

namespace detail {

// Appends each pair (members[i], members[j]), i < j, independently with
// probability prob, using geometric skips over the pair index.
inline void sample_within(const std::vector<NodeId>& members, double prob, Rng& rng,
                          std::vector<Edge>& out) {
  const std::uint64_t n = members.size();
  if (n < 2 || prob <= 0.0) return;
  const std::uint64_t pairs = n * (n - 1) / 2;
  std::uint64_t idx = geometric_skip(rng, prob);
  // Pair index -> (i, j) with j < i walking row by row.
  std::uint64_t row = 1, row_start = 0;
  while (idx < pairs) {
    while (idx >= row_start + row) {
      row_start += row;
      ++row;
    }
    out.emplace_back(members[idx - row_start], members[row]);
    std::uint64_t skip = geometric_skip(rng, prob);
    if (skip >= pairs) break;
    idx += skip + 1;
  }
}

inline void sample_between(const std::vector<NodeId>& left, const std::vector<NodeId>& right,
                           double prob, Rng& rng, std::vector<Edge>& out) {
  const std::uint64_t cols = right.size();
  const std::uint64_t pairs = left.size() * cols;
  if (pairs == 0 || prob <= 0.0) return;
  std::uint64_t idx = geometric_skip(rng, prob);
  while (idx < pairs) {
    out.emplace_back(left[idx / cols], right[idx % cols]);
    std::uint64_t skip = geometric_skip(rng, prob);
    if (skip >= pairs) break;
    idx += skip + 1;
  }
}

}  // namespace detail

/// Draws one network. Exactly round(prop_a * |V|) nodes, chosen uniformly, are
/// labelled A.
inline Graph generate(const NetgenParams& params) {
  const BlockModel m = block_model(params);
  Rng rng = make_rng(params.rng_seed);

  std::vector<NodeId> order(params.population);
  std::iota(order.begin(), order.end(), NodeId{0});
  shuffle(std::span<NodeId>(order), rng);
  std::vector<Category> cats(params.population, Category::B);
  std::vector<NodeId> members_a(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(m.n_a));
  std::vector<NodeId> members_b(order.begin() + static_cast<std::ptrdiff_t>(m.n_a), order.end());
  std::sort(members_a.begin(), members_a.end());
  std::sort(members_b.begin(), members_b.end());
  for (NodeId v : members_a) cats[v] = Category::A;

  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(params.mean_degree * params.population * 0.6) + 16);
  detail::sample_within(members_a, m.p_aa, rng, edges);
  detail::sample_within(members_b, m.p_bb, rng, edges);
  detail::sample_between(members_a, members_b, m.p_ab, rng, edges);
  return Graph::from_edges(params.population, edges, std::move(cats));
}

struct NetworkSummary {
  double measured_mean_degree = 0.0;
  /// +infinity when there are no cross ties; empty when a category is empty.
  std::optional<double> measured_homophily;
  /// Empty when a category is empty or category B has mean degree 0.
  std::optional<double> measured_activity;
  std::size_t cross_ties = 0;
};

inline NetworkSummary measure_summary(const Graph& g) {
  NetworkSummary s;
  const double n = static_cast<double>(g.num_nodes());
  if (g.num_nodes() == 0) return s;
  s.measured_mean_degree = static_cast<double>(g.volume()) / n;
  for (auto [u, v] : g.edges())
    if (g.category(u) != g.category(v)) ++s.cross_ties;

  const auto counts = category_counts(g);
  if (counts.a == 0 || counts.b == 0) return s;

  const double expected_cross = static_cast<double>(g.edge_count()) *
                                static_cast<double>(counts.a) * static_cast<double>(counts.b) /
                                (n * (n - 1.0) / 2.0);
  s.measured_homophily = s.cross_ties == 0 ? std::numeric_limits<double>::infinity()
                                           : expected_cross / static_cast<double>(s.cross_ties);

  double deg_a = 0.0, deg_b = 0.0;
  for (NodeId v = 0; v < g.num_nodes(); ++v)
    (g.category(v) == Category::A ? deg_a : deg_b) += static_cast<double>(g.degree(v));
  deg_a /= static_cast<double>(counts.a);
  deg_b /= static_cast<double>(counts.b);
  if (deg_b > 0.0) s.measured_activity = deg_a / deg_b;
  return s;
}

}  // namespace rdsim
