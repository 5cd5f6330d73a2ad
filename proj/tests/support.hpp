#pragma once

#include <initializer_list>
#include <utility>
#include <vector>

#include "rdsim/graph.hpp"

namespace testing {

using rdsim::Category;
using rdsim::Edge;
using rdsim::Graph;
using rdsim::NodeId;

inline Graph make_graph(std::size_t n, std::initializer_list<std::pair<NodeId, NodeId>> edges,
                        std::vector<Category> cats = {}) {
  if (cats.empty()) cats.assign(n, Category::B);
  std::vector<Edge> e(edges.begin(), edges.end());
  return Graph::from_edges(n, e, std::move(cats));
}

inline Graph complete(std::size_t n, std::vector<Category> cats = {}) {
  if (cats.empty()) cats.assign(n, Category::B);
  std::vector<Edge> e;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v) e.emplace_back(u, v);
  return Graph::from_edges(n, e, std::move(cats));
}

// Star with centre 0 and `leaves` leaves.
inline Graph star(std::size_t leaves) {
  std::vector<Edge> e;
  for (NodeId v = 1; v <= leaves; ++v) e.emplace_back(0, v);
  return Graph::from_edges(leaves + 1, e, std::vector<Category>(leaves + 1, Category::B));
}

inline Graph path(std::size_t n) {
  std::vector<Edge> e;
  for (NodeId v = 0; v + 1 < n; ++v) e.emplace_back(v, v + 1);
  return Graph::from_edges(n, e, std::vector<Category>(n, Category::B));
}

// Total variation distance between visit counts and a target law.
inline double tv_distance(const std::vector<double>& counts, const std::vector<double>& target) {
  double total = 0.0;
  for (double c : counts) total += c;
  double tv = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) tv += std::abs(counts[i] / total - target[i]);
  return 0.5 * tv;
}

}  // namespace testing
