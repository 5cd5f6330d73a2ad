#pragma once

// Immutable undirected simple graph with a binary category per node.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rdsim {

using NodeId = std::uint32_t;

enum class Category : std::uint8_t { A = 0, B = 1 };

inline char to_char(Category c) { return c == Category::A ? 'A' : 'B'; }

inline Category parse_category(const std::string& s) {
  if (s == "A" || s == "a" || s == "0") return Category::A;
  if (s == "B" || s == "b" || s == "1") return Category::B;
  throw std::invalid_argument("unknown category label '" + s + "'");
}

using Edge = std::pair<NodeId, NodeId>;

class Graph {
 public:
  Graph() = default;

  /// Builds a graph from an undirected edge list. Each edge must appear once
  /// (in either orientation); self-loops and repeated edges are rejected.
  static Graph from_edges(std::size_t num_nodes, std::span<const Edge> edges,
                          std::vector<Category> categories) {
    if (categories.size() != num_nodes)
      throw std::invalid_argument("category vector size does not match node count");
    Graph g;
    g.categories_ = std::move(categories);
    std::vector<std::size_t> deg(num_nodes, 0);
    for (auto [u, v] : edges) {
      if (u >= num_nodes || v >= num_nodes)
        throw std::out_of_range("edge endpoint out of range: " + std::to_string(u) + " " +
                                std::to_string(v));
      if (u == v) throw std::invalid_argument("self-loop on node " + std::to_string(u));
      ++deg[u];
      ++deg[v];
    }
    g.offsets_.assign(num_nodes + 1, 0);
    for (std::size_t v = 0; v < num_nodes; ++v) g.offsets_[v + 1] = g.offsets_[v] + deg[v];
    g.neighbors_.resize(g.offsets_[num_nodes]);
    std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
    for (auto [u, v] : edges) {
      g.neighbors_[fill[u]++] = v;
      g.neighbors_[fill[v]++] = u;
    }
    for (std::size_t v = 0; v < num_nodes; ++v) {
      auto first = g.neighbors_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v]);
      auto last = g.neighbors_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v + 1]);
      std::sort(first, last);
      if (std::adjacent_find(first, last) != last)
        throw std::invalid_argument("parallel edge at node " + std::to_string(v));
    }
    g.edge_count_ = edges.size();
    return g;
  }

  std::size_t num_nodes() const noexcept { return categories_.size(); }
  std::size_t edge_count() const noexcept { return edge_count_; }
  std::size_t volume() const noexcept { return neighbors_.size(); }

  std::span<const NodeId> neighbors(NodeId v) const {
    check(v);
    return {neighbors_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }

  std::size_t degree(NodeId v) const {
    check(v);
    return offsets_[v + 1] - offsets_[v];
  }

  Category category(NodeId v) const {
    check(v);
    return categories_[v];
  }

  std::span<const Category> categories() const noexcept { return categories_; }

  bool has_edge(NodeId u, NodeId v) const {
    auto n = neighbors(u);
    check(v);
    return std::binary_search(n.begin(), n.end(), v);
  }

  /// Each undirected edge once, as (u, v) with u < v, in lexicographic order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (NodeId u = 0; u < num_nodes(); ++u)
      for (NodeId v : neighbors(u))
        if (u < v) out.emplace_back(u, v);
    return out;
  }

 private:
  void check(NodeId v) const {
    if (v >= num_nodes()) throw std::out_of_range("unknown node id " + std::to_string(v));
  }

  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> neighbors_;
  std::vector<Category> categories_;
  std::size_t edge_count_ = 0;
};

inline std::size_t degree(const Graph& g, NodeId v) { return g.degree(v); }

/// Proportion p(k) of nodes with degree k.
struct DegreeDistribution {
  std::map<std::size_t, double> probabilities;

  double mean() const {
    double m = 0.0;
    for (auto [k, p] : probabilities) m += p * static_cast<double>(k);
    return m;
  }

  /// Builds a distribution from nonnegative weights per degree.
  static DegreeDistribution from_weights(const std::map<std::size_t, double>& weights) {
    double total = 0.0;
    for (auto [k, w] : weights) {
      if (!(w >= 0.0)) throw std::invalid_argument("negative degree weight");
      total += w;
    }
    if (!(total > 0.0)) throw std::invalid_argument("degree weights sum to zero");
    DegreeDistribution d;
    for (auto [k, w] : weights)
      if (w > 0.0) d.probabilities[k] = w / total;
    return d;
  }
};

inline DegreeDistribution degree_distribution(const Graph& g) {
  if (g.num_nodes() == 0) throw std::invalid_argument("degree distribution of an empty graph");
  std::map<std::size_t, double> counts;
  for (NodeId v = 0; v < g.num_nodes(); ++v) counts[g.degree(v)] += 1.0;
  return DegreeDistribution::from_weights(counts);
}

/// Component label per node, labels numbered in order of their smallest node.
inline std::vector<std::uint32_t> component_labels(const Graph& g) {
  constexpr auto unset = UINT32_MAX;
  std::vector<std::uint32_t> label(g.num_nodes(), unset);
  std::vector<NodeId> stack;
  std::uint32_t next = 0;
  for (NodeId s = 0; s < g.num_nodes(); ++s) {
    if (label[s] != unset) continue;
    label[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      NodeId u = stack.back();
      stack.pop_back();
      for (NodeId w : g.neighbors(u))
        if (label[w] == unset) {
          label[w] = next;
          stack.push_back(w);
        }
    }
    ++next;
  }
  return label;
}

inline std::vector<std::vector<NodeId>> connected_components(const Graph& g) {
  auto label = component_labels(g);
  std::uint32_t count = 0;
  for (auto l : label) count = std::max(count, l + 1);
  std::vector<std::vector<NodeId>> out(count);
  for (NodeId v = 0; v < g.num_nodes(); ++v) out[label[v]].push_back(v);
  return out;
}

struct CategoryCounts {
  std::size_t a = 0;
  std::size_t b = 0;
};

inline CategoryCounts category_counts(const Graph& g) {
  CategoryCounts c;
  for (Category cat : g.categories()) (cat == Category::A ? c.a : c.b) += 1;
  return c;
}

// ---- edge-list / category files ---------------------------------------------

inline void write_edge_list(const Graph& g, std::ostream& os) {
  for (auto [u, v] : g.edges()) os << u << ' ' << v << '\n';
}

inline void write_categories(const Graph& g, std::ostream& os) {
  for (NodeId v = 0; v < g.num_nodes(); ++v) os << v << ' ' << to_char(g.category(v)) << '\n';
}

namespace detail {

inline bool skip_line(const std::string& line) {
  auto pos = line.find_first_not_of(" \t\r");
  return pos == std::string::npos || line[pos] == '#';
}

}  // namespace detail

/// Reads `u v` edge lines and `node label` category lines. The node count is
/// taken from the category file, which must list every node exactly once.
inline Graph read_graph(std::istream& edges_in, std::istream& categories_in) {
  std::vector<std::pair<NodeId, Category>> labels;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(categories_in, line)) {
    ++lineno;
    if (detail::skip_line(line)) continue;
    std::istringstream ls(line);
    long long id;
    std::string label;
    if (!(ls >> id >> label) || id < 0)
      throw std::invalid_argument("bad category line " + std::to_string(lineno));
    labels.emplace_back(static_cast<NodeId>(id), parse_category(label));
  }
  std::vector<Category> cats(labels.size(), Category::B);
  std::vector<bool> seen(labels.size(), false);
  for (auto [id, c] : labels) {
    if (id >= labels.size() || seen[id])
      throw std::invalid_argument("category file ids must be 0..n-1, each once");
    seen[id] = true;
    cats[id] = c;
  }

  std::vector<Edge> edges;
  lineno = 0;
  while (std::getline(edges_in, line)) {
    ++lineno;
    if (detail::skip_line(line)) continue;
    std::istringstream ls(line);
    long long u, v;
    if (!(ls >> u >> v) || u < 0 || v < 0)
      throw std::invalid_argument("bad edge line " + std::to_string(lineno));
    edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
  }
  const std::size_t n = cats.size();
  return Graph::from_edges(n, edges, std::move(cats));
}

inline Graph load_graph(const std::string& edge_path, const std::string& category_path) {
  std::ifstream e(edge_path), c(category_path);
  if (!e) throw std::runtime_error("cannot open " + edge_path);
  if (!c) throw std::runtime_error("cannot open " + category_path);
  return read_graph(e, c);
}

}  // namespace rdsim
