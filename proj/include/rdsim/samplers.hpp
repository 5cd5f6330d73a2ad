#pragma once

// Baseline, traversal and random-walk samplers. Every sampler is a pure
// function of (graph, arguments, rng state) and returns a SampleTrace.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rdsim/graph.hpp"
#include "rdsim/rng.hpp"

namespace rdsim {

enum class SamplerKind {
  UniformNode,
  UniformLink,
  BFS,
  DFS,
  ForestFire,
  SnowballN,
  SRW,
  MHRW,
  WRW,
  RDS,
};

inline std::string to_string(SamplerKind k) {
  switch (k) {
    case SamplerKind::UniformNode: return "uniform-node";
    case SamplerKind::UniformLink: return "uniform-link";
    case SamplerKind::BFS: return "bfs";
    case SamplerKind::DFS: return "dfs";
    case SamplerKind::ForestFire: return "forest-fire";
    case SamplerKind::SnowballN: return "snowball";
    case SamplerKind::SRW: return "srw";
    case SamplerKind::MHRW: return "mhrw";
    case SamplerKind::WRW: return "wrw";
    case SamplerKind::RDS: return "rds";
  }
  return "?";
}

inline SamplerKind parse_sampler_kind(const std::string& s) {
  for (auto k : {SamplerKind::UniformNode, SamplerKind::UniformLink, SamplerKind::BFS,
                 SamplerKind::DFS, SamplerKind::ForestFire, SamplerKind::SnowballN,
                 SamplerKind::SRW, SamplerKind::MHRW, SamplerKind::WRW, SamplerKind::RDS})
    if (to_string(k) == s) return k;
  if (s == "rw") return SamplerKind::SRW;
  throw std::invalid_argument("unknown sampling method '" + s + "'");
}

/// How run_sampler picks seed nodes when none are supplied.
enum class SeedSelection { Uniform, DegreeProportional };

inline std::string to_string(SeedSelection s) {
  return s == SeedSelection::Uniform ? "uniform" : "degree";
}

inline SeedSelection parse_seed_selection(const std::string& s) {
  if (s == "uniform") return SeedSelection::Uniform;
  if (s == "degree") return SeedSelection::DegreeProportional;
  throw std::invalid_argument("unknown seed selection '" + s + "'");
}

struct SamplerConfig {
  SamplerKind kind = SamplerKind::RDS;
  std::size_t target_size = 100;
  bool with_replacement = false;
  std::size_t coupons_n = 3;
  double fire_prob = 0.5;
  std::size_t num_chains = 1;
  SeedSelection seed_selection = SeedSelection::Uniform;
  std::uint64_t rng_seed = 0;

  /// Samplers whose traces may contain the same node more than once.
  bool records_revisits() const {
    switch (kind) {
      case SamplerKind::SRW:
      case SamplerKind::MHRW:
      case SamplerKind::WRW: return true;
      case SamplerKind::RDS: return with_replacement;
      default: return false;
    }
  }
};

struct TraceRecord {
  NodeId node = 0;
  std::uint32_t chain = 0;
  std::optional<NodeId> referrer;
  bool revisit = false;

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

struct SampleTrace {
  std::vector<TraceRecord> records;
  SamplerConfig config;

  std::size_t size() const noexcept { return records.size(); }

  std::size_t distinct_count() const {
    return static_cast<std::size_t>(
        std::count_if(records.begin(), records.end(), [](const auto& r) { return !r.revisit; }));
  }

  std::vector<NodeId> nodes() const {
    std::vector<NodeId> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(r.node);
    return out;
  }

  /// Records that enter weighted estimators: every draw of a with-replacement
  /// trace, first visits otherwise.
  std::vector<TraceRecord> estimation_records() const {
    if (config.records_revisits()) return records;
    std::vector<TraceRecord> out;
    out.reserve(records.size());
    for (const auto& r : records)
      if (!r.revisit) out.push_back(r);
    return out;
  }
};

/// Symmetric positive weight on the edges of a graph.
using WeightFunction = std::function<double(NodeId, NodeId)>;

namespace detail {

class TraceBuilder {
 public:
  explicit TraceBuilder(std::size_t num_nodes) : seen_(num_nodes, 0) {}

  void add(NodeId v, std::uint32_t chain, std::optional<NodeId> referrer) {
    records_.push_back({v, chain, referrer, seen_[v] != 0});
    seen_[v] = 1;
  }

  bool seen(NodeId v) const { return seen_[v] != 0; }
  std::size_t size() const { return records_.size(); }

  SampleTrace finish(SamplerConfig config) && {
    return {std::move(records_), std::move(config)};
  }

 private:
  std::vector<char> seen_;
  std::vector<TraceRecord> records_;
};

// Uniform unsampled node in the component of `anchor`, else any unsampled node.
inline std::optional<NodeId> pick_restart(const Graph& g, const TraceBuilder& tb, NodeId anchor,
                                          Rng& rng) {
  std::vector<NodeId> same, other;
  const auto label = component_labels(g);
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    if (tb.seen(v)) continue;
    (label[v] == label[anchor] ? same : other).push_back(v);
  }
  const auto& pool = same.empty() ? other : same;
  if (pool.empty()) return std::nullopt;
  return pool[uniform_index(rng, pool.size())];
}

// Breadth-first frontier expansion in which each unvisited neighbor of an
// expanded node joins with probability include_prob. Neighbor order is
// shuffled per expansion; with include_prob = 1 no extra draws are made.
inline SampleTrace expand_frontier(const Graph& g, NodeId seed, std::size_t target,
                                   double include_prob, bool restart, Rng& rng,
                                   SamplerConfig config) {
  TraceBuilder tb(g.num_nodes());
  if (target == 0) return std::move(tb).finish(config);
  std::vector<std::uint32_t> chain_of(g.num_nodes(), 0);
  std::deque<NodeId> queue;
  std::uint32_t chain = 0;
  tb.add(seed, chain, std::nullopt);
  queue.push_back(seed);
  std::vector<NodeId> nbrs;
  while (tb.size() < target) {
    if (queue.empty()) {
      if (!restart) break;
      auto r = pick_restart(g, tb, seed, rng);
      if (!r) break;
      ++chain;
      chain_of[*r] = chain;
      tb.add(*r, chain, std::nullopt);
      queue.push_back(*r);
      continue;
    }
    NodeId u = queue.front();
    queue.pop_front();
    auto n = g.neighbors(u);
    nbrs.assign(n.begin(), n.end());
    shuffle(std::span<NodeId>(nbrs), rng);
    for (NodeId w : nbrs) {
      if (tb.seen(w)) continue;
      if (!bernoulli(rng, include_prob)) continue;
      chain_of[w] = chain_of[u];
      tb.add(w, chain_of[u], u);
      queue.push_back(w);
      if (tb.size() == target) break;
    }
  }
  return std::move(tb).finish(config);
}

inline void check_node(const Graph& g, NodeId v) {
  if (v >= g.num_nodes()) throw std::out_of_range("unknown node id " + std::to_string(v));
}

inline void check_walk_seed(const Graph& g, NodeId seed) {
  check_node(g, seed);
  if (g.degree(seed) == 0)
    throw std::invalid_argument("random walk seed " + std::to_string(seed) + " is isolated");
}

}  // namespace detail

// ---- baseline samplers ------------------------------------------------------

inline SampleTrace uniform_node_sample(const Graph& g, std::size_t size, Rng& rng) {
  if (size > g.num_nodes()) throw std::invalid_argument("sample size exceeds |V|");
  std::vector<NodeId> ids(g.num_nodes());
  std::iota(ids.begin(), ids.end(), NodeId{0});
  SamplerConfig cfg{.kind = SamplerKind::UniformNode, .target_size = size};
  SampleTrace t{{}, cfg};
  for (std::size_t i = 0; i < size; ++i) {
    std::size_t j = i + uniform_index(rng, ids.size() - i);
    std::swap(ids[i], ids[j]);
    t.records.push_back({ids[i], static_cast<std::uint32_t>(i), std::nullopt, false});
  }
  return t;
}

/// Samples num_links distinct edges uniformly and keeps their endpoints. Each
/// node is recorded once; the second endpoint of a link names the first as
/// its referrer.
namespace detail {

// Links in uniform random order, keeping both endpoints, until `num_links`
// links are drawn or `node_budget` distinct nodes are held.
inline SampleTrace link_sample(const Graph& g, std::size_t num_links, std::size_t node_budget,
                               std::size_t recorded_target, Rng& rng) {
  auto edges = g.edges();
  SamplerConfig cfg{.kind = SamplerKind::UniformLink, .target_size = recorded_target};
  detail::TraceBuilder tb(g.num_nodes());
  for (std::size_t i = 0; i < num_links && tb.size() < node_budget; ++i) {
    std::size_t j = i + uniform_index(rng, edges.size() - i);
    std::swap(edges[i], edges[j]);
    auto [u, v] = edges[i];
    if (bernoulli(rng, 0.5)) std::swap(u, v);
    auto chain = static_cast<std::uint32_t>(i);
    if (!tb.seen(u)) tb.add(u, chain, std::nullopt);
    if (!tb.seen(v) && tb.size() < node_budget) tb.add(v, chain, u);
  }
  return std::move(tb).finish(cfg);
}

}  // namespace detail

inline SampleTrace uniform_link_sample(const Graph& g, std::size_t num_links, Rng& rng) {
  if (num_links > g.edge_count()) throw std::invalid_argument("more links requested than exist");
  return detail::link_sample(g, num_links, g.num_nodes(), num_links, rng);
}

/// Link sampling sized by distinct nodes rather than links, so it can be
/// compared with node samplers at the same sample size.
inline SampleTrace uniform_link_node_sample(const Graph& g, std::size_t node_count, Rng& rng) {
  std::size_t covered = 0;
  for (NodeId v = 0; v < g.num_nodes(); ++v) covered += g.degree(v) > 0;
  if (node_count > covered) throw std::invalid_argument("more nodes requested than links cover");
  return detail::link_sample(g, g.edge_count(), node_count, node_count, rng);
}

// ---- traversal samplers -----------------------------------------------------

/// Breadth-first traversal from seed_node; stops when the component is exhausted.
inline SampleTrace bfs(const Graph& g, NodeId seed_node, std::size_t target_size, Rng& rng) {
  detail::check_node(g, seed_node);
  SamplerConfig cfg{.kind = SamplerKind::BFS, .target_size = target_size};
  return detail::expand_frontier(g, seed_node, target_size, 1.0, false, rng, cfg);
}

/// Randomized depth-first traversal: follows a random unvisited neighbor until
/// stuck, then backtracks to the nearest node with an unvisited neighbor.
inline SampleTrace dfs(const Graph& g, NodeId seed_node, std::size_t target_size, Rng& rng) {
  detail::check_node(g, seed_node);
  SamplerConfig cfg{.kind = SamplerKind::DFS, .target_size = target_size};
  detail::TraceBuilder tb(g.num_nodes());
  if (target_size == 0) return std::move(tb).finish(cfg);

  struct Frame {
    NodeId node;
    std::vector<NodeId> order;
    std::size_t next = 0;
  };
  auto open = [&](NodeId v) {
    auto n = g.neighbors(v);
    Frame f{v, {n.begin(), n.end()}};
    shuffle(std::span<NodeId>(f.order), rng);
    return f;
  };
  std::vector<Frame> stack;
  tb.add(seed_node, 0, std::nullopt);
  stack.push_back(open(seed_node));
  while (tb.size() < target_size && !stack.empty()) {
    Frame& top = stack.back();
    while (top.next < top.order.size() && tb.seen(top.order[top.next])) ++top.next;
    if (top.next == top.order.size()) {
      stack.pop_back();
      continue;
    }
    NodeId w = top.order[top.next++];
    tb.add(w, 0, top.node);
    stack.push_back(open(w));
  }
  return std::move(tb).finish(cfg);
}

/// Forest Fire: BFS in which each unvisited neighbor is burned with
/// probability fire_prob. A fire that dies before target_size restarts from a
/// uniform unvisited node as a new chain.
inline SampleTrace forest_fire(const Graph& g, NodeId seed_node, double fire_prob,
                               std::size_t target_size, Rng& rng) {
  detail::check_node(g, seed_node);
  if (!(fire_prob > 0.0 && fire_prob <= 1.0))
    throw std::invalid_argument("fire probability must lie in (0, 1]");
  if (target_size > g.num_nodes()) throw std::invalid_argument("target size exceeds |V|");
  SamplerConfig cfg{.kind = SamplerKind::ForestFire, .target_size = target_size,
                    .fire_prob = fire_prob};
  return detail::expand_frontier(g, seed_node, target_size, fire_prob, true, rng, cfg);
}

/// Respondent-driven sampling from one or more seeds.
///
/// Recruiters are processed FIFO. Each recruiter hands coupons to up to
/// coupons_n distinct neighbors chosen uniformly; in traversal mode only
/// not-yet-sampled neighbors are eligible and all of them are taken when fewer
/// than coupons_n remain. When every chain has died, a new chain starts from
/// a uniform unsampled node in the component of the first seed (any
/// unsampled node if that component is exhausted).
inline SampleTrace rds(const Graph& g, std::span<const NodeId> seeds, std::size_t coupons_n,
                       std::size_t target_size, bool with_replacement, Rng& rng) {
  if (coupons_n == 0) throw std::invalid_argument("coupons_n must be at least 1");
  if (seeds.empty()) throw std::invalid_argument("RDS needs at least one seed");
  if (target_size < seeds.size()) throw std::invalid_argument("target size below number of seeds");
  if (!with_replacement && target_size > g.num_nodes())
    throw std::invalid_argument("target size exceeds |V|");
  SamplerConfig cfg{.kind = SamplerKind::RDS,
                    .target_size = target_size,
                    .with_replacement = with_replacement,
                    .coupons_n = coupons_n,
                    .num_chains = seeds.size()};

  detail::TraceBuilder tb(g.num_nodes());
  struct Pending {
    NodeId node;
    std::uint32_t chain;
  };
  std::deque<Pending> queue;
  std::uint32_t chain = 0;
  for (NodeId s : seeds) {
    detail::check_node(g, s);
    if (with_replacement) detail::check_walk_seed(g, s);
    else if (tb.seen(s)) throw std::invalid_argument("duplicate seed in traversal RDS");
    tb.add(s, chain, std::nullopt);
    queue.push_back({s, chain});
    ++chain;
  }

  std::vector<NodeId> pool;
  while (tb.size() < target_size) {
    if (queue.empty()) {
      // Only reachable in traversal mode: with replacement every recruiter
      // has at least one neighbor.
      auto r = detail::pick_restart(g, tb, seeds.front(), rng);
      if (!r) break;
      tb.add(*r, chain, std::nullopt);
      queue.push_back({*r, chain});
      ++chain;
      continue;
    }
    auto [u, c] = queue.front();
    queue.pop_front();
    pool.clear();
    for (NodeId w : g.neighbors(u))
      if (with_replacement || !tb.seen(w)) pool.push_back(w);
    const std::size_t k = std::min(coupons_n, pool.size());
    for (std::size_t i = 0; i < k && tb.size() < target_size; ++i) {
      std::size_t j = i + uniform_index(rng, pool.size() - i);
      std::swap(pool[i], pool[j]);
      tb.add(pool[i], c, u);
      queue.push_back({pool[i], c});
    }
  }
  return std::move(tb).finish(cfg);
}

// ---- random walks -----------------------------------------------------------

/// Simple random walk with target_size recorded steps (the seed included).
inline SampleTrace srw(const Graph& g, NodeId seed_node, std::size_t target_size, Rng& rng) {
  detail::check_walk_seed(g, seed_node);
  SamplerConfig cfg{.kind = SamplerKind::SRW, .target_size = target_size,
                    .with_replacement = true, .coupons_n = 1};
  detail::TraceBuilder tb(g.num_nodes());
  if (target_size == 0) return std::move(tb).finish(cfg);
  NodeId u = seed_node;
  tb.add(u, 0, std::nullopt);
  while (tb.size() < target_size) {
    auto n = g.neighbors(u);
    NodeId v = n[uniform_index(rng, n.size())];
    tb.add(v, 0, u);
    u = v;
  }
  return std::move(tb).finish(cfg);
}

/// Metropolis-Hastings random walk targeting the uniform distribution. A
/// rejected proposal re-records the current node with no referrer.
inline SampleTrace mhrw(const Graph& g, NodeId seed_node, std::size_t target_size, Rng& rng) {
  detail::check_walk_seed(g, seed_node);
  SamplerConfig cfg{.kind = SamplerKind::MHRW, .target_size = target_size,
                    .with_replacement = true, .coupons_n = 1};
  detail::TraceBuilder tb(g.num_nodes());
  if (target_size == 0) return std::move(tb).finish(cfg);
  NodeId u = seed_node;
  tb.add(u, 0, std::nullopt);
  while (tb.size() < target_size) {
    auto n = g.neighbors(u);
    NodeId v = n[uniform_index(rng, n.size())];
    const double du = static_cast<double>(n.size());
    const double dv = static_cast<double>(g.degree(v));
    bool accept = dv <= du || uniform01(rng) < du / dv;
    if (accept) {
      tb.add(v, 0, u);
      u = v;
    } else {
      tb.add(u, 0, std::nullopt);
    }
  }
  return std::move(tb).finish(cfg);
}

/// Weighted random walk: moves u -> v with probability w(u,v) / sum_v' w(u,v').
inline SampleTrace wrw(const Graph& g, const WeightFunction& weights, NodeId seed_node,
                       std::size_t target_size, Rng& rng) {
  detail::check_walk_seed(g, seed_node);
  if (!weights) throw std::invalid_argument("missing edge weight function");
  SamplerConfig cfg{.kind = SamplerKind::WRW, .target_size = target_size,
                    .with_replacement = true, .coupons_n = 1};
  detail::TraceBuilder tb(g.num_nodes());
  if (target_size == 0) return std::move(tb).finish(cfg);
  std::vector<double> cumulative;
  NodeId u = seed_node;
  tb.add(u, 0, std::nullopt);
  while (tb.size() < target_size) {
    auto n = g.neighbors(u);
    cumulative.resize(n.size());
    double total = 0.0;
    for (std::size_t i = 0; i < n.size(); ++i) {
      double w = weights(u, n[i]);
      if (!(w > 0.0) || !std::isfinite(w))
        throw std::invalid_argument("edge weight must be finite and positive on edge " +
                                    std::to_string(u) + "-" + std::to_string(n[i]));
      total += w;
      cumulative[i] = total;
    }
    const double r = uniform01(rng) * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), r);
    NodeId v = n[std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()),
                                       n.size() - 1)];
    tb.add(v, 0, u);
    u = v;
  }
  return std::move(tb).finish(cfg);
}

// ---- dispatch ---------------------------------------------------------------

/// `count` distinct seeds drawn from `pool` (all of V when empty), either
/// uniformly or successively with probability proportional to degree.
inline std::vector<NodeId> choose_seeds(const Graph& g, std::size_t count, Rng& rng,
                                        std::span<const NodeId> pool = {},
                                        SeedSelection how = SeedSelection::Uniform) {
  std::vector<NodeId> candidates;
  if (pool.empty()) {
    candidates.resize(g.num_nodes());
    std::iota(candidates.begin(), candidates.end(), NodeId{0});
  } else {
    candidates.assign(pool.begin(), pool.end());
  }
  if (count > candidates.size()) throw std::invalid_argument("more seeds than candidate nodes");
  if (how == SeedSelection::Uniform) {
    for (std::size_t i = 0; i < count; ++i) {
      std::size_t j = i + uniform_index(rng, candidates.size() - i);
      std::swap(candidates[i], candidates[j]);
    }
    candidates.resize(count);
    return candidates;
  }
  std::vector<double> cumulative(candidates.size());
  std::vector<NodeId> out;
  std::vector<char> taken(candidates.size(), 0);
  while (out.size() < count) {
    double total = 0.0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      total += taken[i] ? 0.0 : static_cast<double>(g.degree(candidates[i]));
      cumulative[i] = total;
    }
    if (!(total > 0.0)) throw std::invalid_argument("no positive-degree seed candidates left");
    const double r = uniform01(rng) * total;
    auto i = static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), r) -
                                      cumulative.begin());
    i = std::min(i, candidates.size() - 1);
    while (taken[i] || g.degree(candidates[i]) == 0) --i;
    taken[i] = 1;
    out.push_back(candidates[i]);
  }
  return out;
}

/// Runs the sampler described by `config` with an rng seeded from
/// config.rng_seed. Seeds are drawn from `seed_pool` (default: all nodes)
/// according to config.seed_selection unless `seeds` is given.
inline SampleTrace run_sampler(const Graph& g, const SamplerConfig& config,
                               std::span<const NodeId> seeds = {},
                               std::span<const NodeId> seed_pool = {},
                               const WeightFunction& weights = {}) {
  Rng rng = make_rng(config.rng_seed);
  if (!config.records_revisits() && config.target_size > g.num_nodes())
    throw std::invalid_argument("target size exceeds |V| for sampling without replacement");

  std::vector<NodeId> chosen(seeds.begin(), seeds.end());
  auto need = [&](std::size_t count) {
    if (chosen.empty()) chosen = choose_seeds(g, count, rng, seed_pool, config.seed_selection);
    if (chosen.size() < count) throw std::invalid_argument("not enough seed nodes supplied");
  };

  SampleTrace t;
  switch (config.kind) {
    case SamplerKind::UniformNode: t = uniform_node_sample(g, config.target_size, rng); break;
    case SamplerKind::UniformLink: t = uniform_link_node_sample(g, config.target_size, rng); break;
    case SamplerKind::BFS: need(1); t = bfs(g, chosen[0], config.target_size, rng); break;
    case SamplerKind::DFS: need(1); t = dfs(g, chosen[0], config.target_size, rng); break;
    case SamplerKind::ForestFire:
      need(1);
      t = forest_fire(g, chosen[0], config.fire_prob, config.target_size, rng);
      break;
    case SamplerKind::SnowballN:
    case SamplerKind::RDS: {
      need(std::max<std::size_t>(config.num_chains, 1));
      bool wr = config.kind == SamplerKind::RDS && config.with_replacement;
      t = rds(g, chosen, config.coupons_n, config.target_size, wr, rng);
      break;
    }
    case SamplerKind::SRW: need(1); t = srw(g, chosen[0], config.target_size, rng); break;
    case SamplerKind::MHRW: need(1); t = mhrw(g, chosen[0], config.target_size, rng); break;
    case SamplerKind::WRW: need(1); t = wrw(g, weights, chosen[0], config.target_size, rng); break;
  }
  t.config = config;
  return t;
}

}  // namespace rdsim
