#include <map>
#include <set>

#include "catch_amalgamated.hpp"
#include "rdsim/netgen.hpp"
#include "rdsim/samplers.hpp"
#include "support.hpp"

using namespace rdsim;
using namespace testing;
using Catch::Approx;

namespace {

void check_trace_invariants(const Graph& g, const SampleTrace& t) {
  std::set<NodeId> seen;
  for (const auto& r : t.records) {
    if (r.referrer) CHECK(g.has_edge(*r.referrer, r.node));
    CHECK(r.revisit == (seen.count(r.node) > 0));
    seen.insert(r.node);
  }
  if (!t.config.records_revisits()) {
    CHECK(seen.size() == t.records.size());
    CHECK(t.distinct_count() <= t.config.target_size);
  }
}

std::vector<double> visit_counts(const SampleTrace& t, std::size_t n) {
  std::vector<double> c(n, 0.0);
  for (const auto& r : t.records) c[r.node] += 1.0;
  return c;
}

}  // namespace

TEST_CASE("sampler names round-trip", "[samplers]") {
  for (auto k : {SamplerKind::UniformNode, SamplerKind::UniformLink, SamplerKind::BFS,
                 SamplerKind::DFS, SamplerKind::ForestFire, SamplerKind::SnowballN,
                 SamplerKind::SRW, SamplerKind::MHRW, SamplerKind::WRW, SamplerKind::RDS})
    CHECK(parse_sampler_kind(to_string(k)) == k);
  CHECK(parse_sampler_kind("rw") == SamplerKind::SRW);
  CHECK_THROWS(parse_sampler_kind("bogus"));
}

TEST_CASE("uniform node sampling", "[samplers]") {
  auto k3 = complete(3);
  Rng rng = make_rng(1);
  auto all = uniform_node_sample(k3, 3, rng).nodes();
  CHECK(std::set<NodeId>(all.begin(), all.end()).size() == 3);
  CHECK(uniform_node_sample(k3, 0, rng).size() == 0);
  CHECK_THROWS(uniform_node_sample(k3, 4, rng));

  std::vector<double> counts(3, 0.0);
  for (int i = 0; i < 10000; ++i) counts[uniform_node_sample(k3, 1, rng).records[0].node] += 1;
  for (double c : counts) CHECK(c / 10000.0 == Approx(1.0 / 3.0).margin(0.02));
}

TEST_CASE("uniform link sampling", "[samplers]") {
  Rng rng = make_rng(2);
  auto k3 = uniform_link_sample(complete(3), 3, rng);
  CHECK(k3.distinct_count() == 3);

  auto s5 = star(5);
  for (int i = 0; i < 50; ++i) {
    auto t = uniform_link_sample(s5, 1, rng);
    auto nodes = t.nodes();
    CHECK(std::count(nodes.begin(), nodes.end(), NodeId{0}) == 1);
  }

  auto p3 = path(3);
  int a_hits = 0, b_hits = 0;
  for (int i = 0; i < 10000; ++i) {
    auto nodes = uniform_link_sample(p3, 1, rng).nodes();
    a_hits += std::count(nodes.begin(), nodes.end(), NodeId{0});
    b_hits += std::count(nodes.begin(), nodes.end(), NodeId{1});
  }
  CHECK(b_hits == 10000);
  CHECK(a_hits / 10000.0 == Approx(0.5).margin(0.02));
  CHECK_THROWS(uniform_link_sample(p3, 3, rng));
}

TEST_CASE("bfs order", "[samplers]") {
  Rng rng = make_rng(3);
  auto s = bfs(star(5), 0, 6, rng);
  REQUIRE(s.size() == 6);
  CHECK(s.records[0].node == 0);
  for (std::size_t i = 1; i < 6; ++i) CHECK(s.records[i].referrer == NodeId{0});

  auto p = bfs(path(5), 0, 5, rng);
  for (NodeId i = 0; i < 5; ++i) CHECK(p.records[i].node == i);

  auto comp = make_graph(5, {{0, 1}, {1, 2}, {3, 4}});
  CHECK(bfs(comp, 0, 10, rng).size() == 3);
}

TEST_CASE("dfs order", "[samplers]") {
  Rng rng = make_rng(4);
  auto p = dfs(path(5), 0, 5, rng);
  for (NodeId i = 0; i < 5; ++i) CHECK(p.records[i].node == i);

  auto s = dfs(star(5), 3, 6, rng);
  REQUIRE(s.size() == 6);
  CHECK(s.records[0].node == 3);
  CHECK(s.records[1].node == 0);

  auto g = generate({200, 0.3, 4.0, 1.0, 1.0, 9});
  auto labels = component_labels(g);
  auto t = dfs(g, 0, 200, rng);
  std::size_t comp_size = std::count(labels.begin(), labels.end(), labels[0]);
  CHECK(t.size() == comp_size);
  check_trace_invariants(g, t);
}

TEST_CASE("forest fire", "[samplers]") {
  auto g = generate({300, 0.3, 6.0, 1.0, 1.0, 21});
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng r1 = make_rng(seed), r2 = make_rng(seed);
    auto ff = forest_fire(g, static_cast<NodeId>(seed), 1.0, 80, r1);
    auto b = bfs(g, static_cast<NodeId>(seed), 80, r2);
    auto a = ff.nodes(), c = b.nodes();
    CHECK(std::set<NodeId>(a.begin(), a.end()) == std::set<NodeId>(c.begin(), c.end()));
  }

  Rng rng = make_rng(5);
  auto sparse = forest_fire(star(5), 0, 0.05, 6, rng);
  CHECK(sparse.size() == 6);

  auto k3 = complete(3);
  std::vector<double> first_level(3, 0.0);
  const int runs = 10000;
  for (int i = 0; i < runs; ++i) {
    auto t = forest_fire(k3, 0, 0.5, 3, rng);
    for (const auto& r : t.records)
      if (r.referrer == NodeId{0}) first_level[r.node] += 1;
  }
  CHECK(first_level[1] / runs == Approx(0.5).margin(0.02));
  CHECK(first_level[2] / runs == Approx(0.5).margin(0.02));
  CHECK_THROWS(forest_fire(k3, 0, 0.0, 3, rng));
}

TEST_CASE("rds traversal", "[samplers]") {
  Rng rng = make_rng(6);
  auto p5 = path(5);
  std::vector<NodeId> seed{0};
  auto t = rds(p5, seed, 3, 5, false, rng);
  auto nodes = t.nodes();
  CHECK(std::set<NodeId>(nodes.begin(), nodes.end()).size() == 5);

  // With coupons above the maximum degree every neighbour is taken, so a run
  // over the whole component visits exactly the bfs node set.
  auto g = generate({300, 0.3, 6.0, 1.0, 1.0, 22});
  auto labels = component_labels(g);
  const std::size_t comp = std::count(labels.begin(), labels.end(), labels[7]);
  std::vector<NodeId> s{7};
  Rng r1 = make_rng(7), r2 = make_rng(7);
  auto wide = rds(g, s, 1000, comp, false, r1);
  auto b = bfs(g, 7, comp, r2);
  CHECK(wide.size() == comp);
  auto wn = wide.nodes(), bn = b.nodes();
  CHECK(std::set<NodeId>(wn.begin(), wn.end()) == std::set<NodeId>(bn.begin(), bn.end()));

  SamplerConfig cfg;
  cfg.target_size = 150;
  cfg.num_chains = 5;
  cfg.rng_seed = 99;
  auto multi = run_sampler(g, cfg);
  CHECK(multi.size() == 150);
  check_trace_invariants(g, multi);
  std::set<std::uint32_t> chains;
  for (const auto& r : multi.records) chains.insert(r.chain);
  CHECK(chains.size() >= 5);
}

TEST_CASE("rds reaches the target size across components", "[samplers]") {
  auto g = make_graph(6, {{0, 1}, {1, 2}, {3, 4}, {4, 5}});
  Rng rng = make_rng(8);
  std::vector<NodeId> s{0};
  auto t = rds(g, s, 2, 6, false, rng);
  CHECK(t.size() == 6);
  check_trace_invariants(g, t);
}

TEST_CASE("rds with one coupon and replacement is a simple random walk", "[samplers]") {
  auto g = generate({200, 0.3, 6.0, 1.0, 1.0, 23});
  NodeId start = 0;
  while (g.degree(start) == 0) ++start;
  std::vector<NodeId> s{start};
  Rng r1 = make_rng(10), r2 = make_rng(10);
  auto a = rds(g, s, 1, 500, true, r1);
  auto b = srw(g, start, 500, r2);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.records[i].node == b.records[i].node);
}

TEST_CASE("srw stationary law", "[samplers][statistical]") {
  Rng rng = make_rng(11);
  auto k3 = srw(complete(3), 0, 100000, rng);
  CHECK(tv_distance(visit_counts(k3, 3), {1.0 / 3, 1.0 / 3, 1.0 / 3}) < 0.01);
  auto p3 = srw(path(3), 0, 1000000, rng);
  CHECK(tv_distance(visit_counts(p3, 3), {0.25, 0.5, 0.25}) < 0.01);
  check_trace_invariants(path(3), p3);
  CHECK_THROWS(srw(make_graph(2, {}), 0, 5, rng));

  // Connected, non-bipartite, irregular.
  auto g = make_graph(5, {{0, 1}, {1, 2}, {2, 0}, {2, 3}, {3, 4}});
  auto t = srw(g, 0, 1000000, rng);
  std::vector<double> law;
  for (NodeId v = 0; v < 5; ++v) law.push_back(g.degree(v) / static_cast<double>(g.volume()));
  CHECK(tv_distance(visit_counts(t, 5), law) < 0.01);
}

TEST_CASE("mhrw is uniform in the long run", "[samplers][statistical]") {
  auto g = make_graph(5, {{0, 1}, {1, 2}, {2, 0}, {2, 3}, {3, 4}});
  Rng rng = make_rng(12);
  auto t = mhrw(g, 0, 1000000, rng);
  CHECK(tv_distance(visit_counts(t, 5), std::vector<double>(5, 0.2)) < 0.01);
  check_trace_invariants(g, t);

  auto k4 = complete(4);
  Rng r1 = make_rng(13), r2 = make_rng(13);
  auto m = mhrw(k4, 0, 200, r1);
  auto s = srw(k4, 0, 200, r2);
  for (std::size_t i = 0; i < 200; ++i) CHECK(m.records[i].node == s.records[i].node);
}

TEST_CASE("mhrw leaf to centre acceptance", "[samplers][statistical]") {
  auto s5 = star(5);
  Rng rng = make_rng(14);
  auto t = mhrw(s5, 1, 200000, rng);
  std::size_t from_leaf = 0, accepted = 0;
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (t.records[i - 1].node == 0) {
      CHECK(t.records[i].node != 0);
      continue;
    }
    ++from_leaf;
    if (t.records[i].node == 0) ++accepted;
  }
  CHECK(accepted / static_cast<double>(from_leaf) == Approx(0.2).margin(0.01));
}

TEST_CASE("wrw", "[samplers][statistical]") {
  auto p3 = path(3);
  Rng r1 = make_rng(15);
  auto ones = wrw(p3, [](NodeId, NodeId) { return 1.0; }, 0, 1000000, r1);
  CHECK(tv_distance(visit_counts(ones, 3), {0.25, 0.5, 0.25}) < 0.01);

  auto g = make_graph(5, {{0, 1}, {1, 2}, {2, 0}, {2, 3}, {3, 4}});
  auto w = [](NodeId u, NodeId v) { return 1.0 + u + v; };
  Rng r3 = make_rng(16), r4 = make_rng(16);
  auto a = wrw(g, w, 0, 500, r3);
  auto b = wrw(g, [&](NodeId u, NodeId v) { return 2.0 * w(u, v); }, 0, 500, r4);
  for (std::size_t i = 0; i < 500; ++i) CHECK(a.records[i].node == b.records[i].node);

  Rng rng = make_rng(17);
  auto t = wrw(g, w, 0, 1000000, rng);
  std::vector<double> strength(5, 0.0);
  double total = 0.0;
  for (auto [u, v] : g.edges()) {
    strength[u] += w(u, v);
    strength[v] += w(u, v);
    total += 2 * w(u, v);
  }
  for (auto& s : strength) s /= total;
  CHECK(tv_distance(visit_counts(t, 5), strength) < 0.01);

  CHECK_THROWS(wrw(g, [](NodeId, NodeId) { return 0.0; }, 0, 5, rng));
  CHECK_THROWS(wrw(g, WeightFunction{}, 0, 5, rng));
}

TEST_CASE("run_sampler is deterministic and validates sizes", "[samplers]") {
  auto g = generate({300, 0.3, 6.0, 1.0, 1.0, 24});
  for (auto kind : {SamplerKind::UniformNode, SamplerKind::UniformLink, SamplerKind::BFS,
                    SamplerKind::DFS, SamplerKind::ForestFire, SamplerKind::SnowballN,
                    SamplerKind::SRW, SamplerKind::MHRW, SamplerKind::RDS}) {
    SamplerConfig c;
    c.kind = kind;
    c.target_size = 60;
    c.rng_seed = 5;
    auto giant = connected_components(g);
    std::sort(giant.begin(), giant.end(), [](auto& a, auto& b) { return a.size() > b.size(); });
    auto a = run_sampler(g, c, {}, giant[0]);
    auto b = run_sampler(g, c, {}, giant[0]);
    CHECK(a.records == b.records);
    check_trace_invariants(g, a);
  }
  SamplerConfig big;
  big.target_size = 301;
  CHECK_THROWS(run_sampler(g, big));
}

TEST_CASE("degree-proportional seed choice favours hubs", "[samplers][statistical]") {
  auto s5 = star(5);
  Rng rng = make_rng(18);
  int centre = 0;
  for (int i = 0; i < 10000; ++i)
    centre += choose_seeds(s5, 1, rng, {}, SeedSelection::DegreeProportional)[0] == 0;
  CHECK(centre / 10000.0 == Approx(0.5).margin(0.02));
  auto two = choose_seeds(s5, 6, rng, {}, SeedSelection::DegreeProportional);
  CHECK(std::set<NodeId>(two.begin(), two.end()).size() == 6);
  CHECK_THROWS(choose_seeds(s5, 7, rng));
}
