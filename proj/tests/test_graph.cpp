#include <sstream>

#include "catch_amalgamated.hpp"
#include "rdsim/graph.hpp"
#include "rdsim/netgen.hpp"
#include "support.hpp"

using namespace rdsim;
using namespace testing;
using Catch::Approx;

TEST_CASE("degree on small graphs", "[graph]") {
  auto k3 = complete(3);
  for (NodeId v = 0; v < 3; ++v) CHECK(k3.degree(v) == 2);
  auto s5 = star(5);
  CHECK(s5.degree(0) == 5);
  CHECK(s5.degree(3) == 1);
  CHECK_THROWS_AS(s5.degree(6), std::out_of_range);
}

TEST_CASE("degree distribution", "[graph]") {
  auto dk3 = degree_distribution(complete(3));
  REQUIRE(dk3.probabilities.size() == 1);
  CHECK(dk3.probabilities.at(2) == 1.0);

  auto ds5 = degree_distribution(star(5));
  CHECK(ds5.probabilities.at(1) == Approx(5.0 / 6.0));
  CHECK(ds5.probabilities.at(5) == Approx(1.0 / 6.0));

  auto g = generate({300, 0.4, 6.0, 1.5, 1.5, 3});
  auto d = degree_distribution(g);
  double sum = 0.0;
  for (auto [k, p] : d.probabilities) sum += p;
  CHECK(sum == Approx(1.0).margin(1e-12));
  CHECK(d.mean() == Approx(static_cast<double>(g.volume()) / 300.0).margin(1e-12));

  CHECK_THROWS(degree_distribution(Graph::from_edges(0, {}, {})));
}

TEST_CASE("connected components", "[graph]") {
  CHECK(connected_components(complete(3)).size() == 1);
  auto two = make_graph(4, {{0, 1}, {2, 3}});
  auto cc = connected_components(two);
  REQUIRE(cc.size() == 2);
  CHECK(cc[0].size() == 2);
  CHECK(cc[1].size() == 2);
  auto empty = make_graph(4, {});
  CHECK(connected_components(empty).size() == 4);
}

TEST_CASE("category counts", "[graph]") {
  std::vector<Category> cats(10, Category::B);
  cats[1] = cats[4] = cats[7] = Category::A;
  auto g = Graph::from_edges(10, {}, cats);
  auto c = category_counts(g);
  CHECK(c.a == 3);
  CHECK(c.b == 7);
  auto all_a = Graph::from_edges(4, {}, std::vector<Category>(4, Category::A));
  CHECK(category_counts(all_a).a == 4);
  CHECK(category_counts(all_a).b == 0);
}

TEST_CASE("graph invariants hold on generated networks", "[graph]") {
  auto g = generate({500, 0.3, 8.0, 2.0, 2.0, 11});
  CHECK(g.volume() == 2 * g.edge_count());
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    auto n = g.neighbors(u);
    CHECK(std::is_sorted(n.begin(), n.end()));
    CHECK(std::adjacent_find(n.begin(), n.end()) == n.end());
    for (NodeId v : n) {
      CHECK(v != u);
      CHECK(g.has_edge(v, u));
    }
  }
}

TEST_CASE("construction rejects malformed edge lists", "[graph]") {
  std::vector<Category> c(3, Category::A);
  std::vector<Edge> loop{{1, 1}};
  CHECK_THROWS_AS(Graph::from_edges(3, loop, c), std::invalid_argument);
  std::vector<Edge> parallel{{0, 1}, {1, 0}};
  CHECK_THROWS_AS(Graph::from_edges(3, parallel, c), std::invalid_argument);
  std::vector<Edge> range{{0, 3}};
  CHECK_THROWS_AS(Graph::from_edges(3, range, c), std::out_of_range);
  CHECK_THROWS_AS(Graph::from_edges(2, {}, c), std::invalid_argument);
}

TEST_CASE("edge-list and category files round-trip", "[graph][io]") {
  auto g = generate({120, 0.5, 5.0, 1.0, 1.0, 8});
  std::ostringstream e, c;
  write_edge_list(g, e);
  write_categories(g, c);
  std::istringstream ei(e.str()), ci(c.str());
  auto h = read_graph(ei, ci);
  CHECK(h.edges() == g.edges());
  CHECK(std::equal(h.categories().begin(), h.categories().end(), g.categories().begin()));
}

TEST_CASE("loader accepts comments and rejects bad input", "[graph][io]") {
  std::istringstream e("# triangle\n0 1\n1 2\n\n2 0\n"), c("0 A\n1 b\n2 B\n");
  auto g = read_graph(e, c);
  CHECK(g.edge_count() == 3);
  CHECK(g.category(0) == Category::A);
  CHECK(g.category(1) == Category::B);

  std::istringstream loop_e("0 0\n"), loop_c("0 A\n1 B\n");
  CHECK_THROWS(read_graph(loop_e, loop_c));
  std::istringstream dup_e("0 1\n1 0\n"), dup_c("0 A\n1 B\n");
  CHECK_THROWS(read_graph(dup_e, dup_c));
  std::istringstream bad_e("0 x\n"), bad_c("0 A\n1 B\n");
  CHECK_THROWS(read_graph(bad_e, bad_c));
  std::istringstream gap_e(""), gap_c("0 A\n2 B\n");
  CHECK_THROWS(read_graph(gap_e, gap_c));
  std::istringstream lab_e(""), lab_c("0 C\n");
  CHECK_THROWS(read_graph(lab_e, lab_c));
  CHECK_THROWS(load_graph("/nonexistent/edges", "/nonexistent/cats"));
}
