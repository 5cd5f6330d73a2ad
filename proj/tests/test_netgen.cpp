#include <cmath>
#include <limits>

#include "catch_amalgamated.hpp"
#include "rdsim/netgen.hpp"
#include "support.hpp"

using namespace rdsim;
using namespace testing;
using Catch::Approx;

TEST_CASE("measure_summary on complete bipartite K33", "[netgen]") {
  std::vector<Category> cats{Category::A, Category::A, Category::A,
                             Category::B, Category::B, Category::B};
  std::vector<Edge> e;
  for (NodeId a = 0; a < 3; ++a)
    for (NodeId b = 3; b < 6; ++b) e.emplace_back(a, b);
  auto s = measure_summary(Graph::from_edges(6, e, cats));
  CHECK(s.cross_ties == 9);
  REQUIRE(s.measured_homophily);
  CHECK(*s.measured_homophily == Approx(0.6).epsilon(1e-12));
  CHECK(*s.measured_activity == Approx(1.0));
}

TEST_CASE("measure_summary on K4 with two of each", "[netgen]") {
  auto g = complete(4, {Category::A, Category::A, Category::B, Category::B});
  auto s = measure_summary(g);
  CHECK(s.cross_ties == 4);
  CHECK(*s.measured_homophily == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("measure_summary edge cases", "[netgen]") {
  auto g = make_graph(4, {{0, 1}, {2, 3}}, {Category::A, Category::A, Category::B, Category::B});
  auto s = measure_summary(g);
  CHECK(s.cross_ties == 0);
  CHECK(std::isinf(*s.measured_homophily));
  auto single = complete(4);
  auto t = measure_summary(single);
  CHECK_FALSE(t.measured_homophily);
  CHECK_FALSE(t.measured_activity);
}

TEST_CASE("block model solves for the target degrees", "[netgen]") {
  NetgenParams p{1000, 0.3, 10.0, 2.0, 2.0, 0};
  auto m = block_model(p);
  CHECK(m.n_a == 300);
  CHECK(m.degree_a / m.degree_b == Approx(2.0));
  CHECK((300 * m.degree_a + 700 * m.degree_b) / 1000.0 == Approx(10.0));
  CHECK_FALSE(m.clamped);
}

TEST_CASE("generator rejects infeasible parameters", "[netgen]") {
  CHECK_THROWS_AS(generate({10, 0.5, 9.5, 1.0, 1.0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(generate({100, 0.1, 50.0, 1.0, 40.0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(generate({100, 0.3, 5.0, 0.0, 1.0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(generate({100, 1.5, 5.0, 1.0, 1.0, 0}), std::invalid_argument);
  CHECK_FALSE(netgen_feasible({100, 0.5, 5.0, 0.01, 1.0, 0}));
}

TEST_CASE("clamp_to_feasible yields realizable parameters", "[netgen]") {
  NetgenParams p{100, 0.5, 5.0, 0.01, 1.0, 0};
  auto [q, changed] = clamp_to_feasible(p);
  CHECK(changed);
  CHECK(netgen_feasible(q));
  auto [same, same_changed] = clamp_to_feasible({1000, 0.3, 10.0, 2.0, 2.0, 0});
  CHECK_FALSE(same_changed);
  CHECK(same.homophily == 2.0);
  auto [inf, c2] = clamp_to_feasible({1000, 0.3, 10.0, std::numeric_limits<double>::infinity(), 1.0, 0});
  CHECK_FALSE(c2);
  CHECK(std::isinf(inf.homophily));
  CHECK(measure_summary(generate(inf)).cross_ties == 0);
}

TEST_CASE("single-category network", "[netgen]") {
  auto g = generate({200, 0.0, 6.0, 1.0, 1.0, 5});
  auto s = measure_summary(g);
  CHECK(category_counts(g).a == 0);
  CHECK(s.cross_ties == 0);
  CHECK_FALSE(s.measured_homophily);
  CHECK(s.measured_mean_degree == Approx(6.0).epsilon(0.15));
}

TEST_CASE("generation is deterministic in the seed", "[netgen]") {
  NetgenParams p{400, 0.3, 8.0, 1.5, 1.2, 42};
  auto a = generate(p), b = generate(p);
  CHECK(a.edges() == b.edges());
  CHECK(std::equal(a.categories().begin(), a.categories().end(), b.categories().begin()));
  p.rng_seed = 43;
  CHECK(generate(p).edges() != a.edges());
}

namespace {

struct Ensemble {
  double degree = 0, homophily = 0, activity = 0;
};

Ensemble ensemble(NetgenParams p, int seeds) {
  Ensemble e;
  for (int s = 0; s < seeds; ++s) {
    p.rng_seed = static_cast<std::uint64_t>(s);
    auto m = measure_summary(generate(p));
    e.degree += m.measured_mean_degree / seeds;
    e.homophily += *m.measured_homophily / seeds;
    e.activity += *m.measured_activity / seeds;
  }
  return e;
}

}  // namespace

TEST_CASE("ensemble statistics match targets", "[netgen][statistical]") {
  auto neutral = ensemble({1000, 0.3, 10.0, 1.0, 1.0, 0}, 50);
  CHECK(neutral.degree == Approx(10.0).epsilon(0.10));
  CHECK(neutral.homophily == Approx(1.0).epsilon(0.10));
  CHECK(neutral.activity == Approx(1.0).epsilon(0.10));

  auto skewed = ensemble({1000, 0.3, 10.0, 2.0, 2.0, 0}, 50);
  CHECK(skewed.degree == Approx(10.0).epsilon(0.15));
  CHECK(skewed.homophily == Approx(2.0).epsilon(0.15));
  CHECK(skewed.activity == Approx(2.0).epsilon(0.15));
}
