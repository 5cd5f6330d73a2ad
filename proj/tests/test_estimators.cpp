#include <functional>

#include "catch_amalgamated.hpp"
#include "rdsim/estimators.hpp"
#include "rdsim/netgen.hpp"
#include "support.hpp"

using namespace rdsim;
using namespace testing;
using Catch::Approx;

namespace {

// Expected Hansen-Hurwitz total over every random-walk trajectory of length
// `steps` started from the stationary law, each weighted by its exact
// probability. Draw probabilities are deg(v)/vol(V).
double expected_hh_total(const Graph& g, const std::vector<double>& x, std::size_t steps) {
  const double vol = static_cast<double>(g.volume());
  double expectation = 0.0, mass = 0.0;
  std::vector<NodeId> walk;
  std::function<void(double)> extend = [&](double prob) {
    if (walk.size() == steps) {
      std::vector<double> xs, pis;
      for (NodeId v : walk) {
        xs.push_back(x[v]);
        pis.push_back(g.degree(v) / vol);
      }
      expectation += prob * hansen_hurwitz_total(xs, pis);
      mass += prob;
      return;
    }
    const NodeId u = walk.back();
    for (NodeId v : g.neighbors(u)) {
      walk.push_back(v);
      extend(prob / static_cast<double>(g.degree(u)));
      walk.pop_back();
    }
  };
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    if (g.degree(v) == 0) continue;
    walk = {v};
    extend(g.degree(v) / vol);
  }
  REQUIRE(mass == Approx(1.0).margin(1e-12));
  return expectation;
}

}  // namespace

TEST_CASE("hansen-hurwitz total is unbiased over all walk trajectories", "[estimators]") {
  const std::vector<Graph> graphs{
      path(3), star(4), complete(4),
      make_graph(5, {{0, 1}, {1, 2}, {2, 0}, {2, 3}, {3, 4}}),
      make_graph(5, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {3, 4}, {2, 4}})};
  for (const auto& g : graphs) {
    std::vector<double> x;
    for (NodeId v = 0; v < g.num_nodes(); ++v) x.push_back(1.5 * v - 0.7 * (v % 2) + 0.3);
    const double total = std::accumulate(x.begin(), x.end(), 0.0);
    for (std::size_t steps = 1; steps <= 3; ++steps)
      CHECK(std::fabs(expected_hh_total(g, x, steps) - total) <= 1e-10);
  }
}

TEST_CASE("hansen-hurwitz mean is invariant to rescaling pi", "[estimators]") {
  std::vector<double> x{1, 0, 0, 1, 1}, pi{2, 3, 5, 1, 4}, scaled;
  for (double p : pi) scaled.push_back(p * 17.5);
  CHECK(hansen_hurwitz_mean(x, pi) == Approx(hansen_hurwitz_mean(x, scaled)).epsilon(1e-14));
  std::vector<double> ones(5, 1.0);
  CHECK(hansen_hurwitz_mean(x, ones) == Approx(0.6));
}

TEST_CASE("full-component traversal with pi = 1 recovers the mean", "[estimators]") {
  std::vector<Category> cats{Category::A, Category::B, Category::A, Category::B, Category::B};
  auto g = Graph::from_edges(5, std::vector<Edge>{{0, 1}, {1, 2}, {2, 3}, {3, 4}}, cats);
  SamplerConfig c;
  c.target_size = 5;
  auto t = run_sampler(g, c);
  Rng rng = make_rng(1);
  auto m = fit_inclusion(g, t, InclusionMethod::KurantSimplified, 5, {}, rng);
  CHECK(hansen_hurwitz_mean(g, t, attributes::prop_a(), m) == Approx(0.4).margin(1e-12));
  CHECK(hansen_hurwitz_mean(g, t, attributes::degree(), m) == Approx(8.0 / 5.0).margin(1e-12));
}

TEST_CASE("horvitz-thompson mean", "[estimators]") {
  std::vector<double> x{2.0, 4.0}, pi{0.5, 0.25};
  // (2/0.5 + 4/0.25) / (10 * 2) = 20 / 20
  CHECK(horvitz_thompson_mean(x, pi, 10) == Approx(1.0));
  CHECK_THROWS(horvitz_thompson_mean(x, pi, 0));
}

TEST_CASE("estimators reject malformed input", "[estimators]") {
  std::vector<double> x{1.0}, none, two{1.0, 2.0}, zero{0.0};
  CHECK_THROWS(hansen_hurwitz_mean(none, none));
  CHECK_THROWS(hansen_hurwitz_mean(x, two));
  CHECK_THROWS(hansen_hurwitz_mean(x, zero));
  CHECK_THROWS(attributes::parse("height"));
}

TEST_CASE("error report", "[estimators]") {
  std::vector<double> est{0.2, 0.4};
  auto r = error_report(est, 0.3);
  CHECK(r.rms_error == Approx(0.1).epsilon(1e-12));
  CHECK(r.relative_mean_error == Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(r.bias == Approx(0.0).margin(1e-15));
  CHECK(r.standard_deviation == Approx(0.1).epsilon(1e-12));
  CHECK(r.median_abs_error == Approx(0.1).epsilon(1e-12));

  std::vector<double> more{0.25, 0.31, 0.4, 0.22, 0.3};
  auto q = error_report(more, 0.3);
  CHECK(q.rms_error * q.rms_error ==
        Approx(q.bias * q.bias + q.standard_deviation * q.standard_deviation).epsilon(1e-12));
  std::vector<double> one{0.3};
  CHECK_THROWS(error_report(one, 0.3));
  CHECK_THROWS(error_report(est, 0.0));
}

TEST_CASE("correlation", "[estimators]") {
  std::vector<double> a{1, 2, 3, 4}, b{2, 4, 6, 8}, c{4, 3, 2, 1}, flat{1, 1, 1, 1};
  CHECK(correlation(a, a) == Approx(1.0));
  CHECK(correlation(a, b) == Approx(1.0));
  CHECK(correlation(a, c) == Approx(-1.0));
  CHECK_THROWS(correlation(a, flat));
}

TEST_CASE("weighted estimate is close to truth on a generated network", "[estimators][statistical]") {
  auto g = generate({1000, 0.3, 10.0, 1.0, 2.0, 12});
  const double truth = category_counts(g).a / 1000.0;
  auto comps = connected_components(g);
  std::sort(comps.begin(), comps.end(), [](auto& a, auto& b) { return a.size() > b.size(); });
  std::vector<double> weighted, raw;
  for (std::uint64_t s = 0; s < 200; ++s) {
    SamplerConfig c;
    c.kind = SamplerKind::SRW;
    c.target_size = 300;
    c.rng_seed = s;
    auto t = run_sampler(g, c, {}, comps.front());
    Rng rng = make_rng(s);
    auto m = fit_inclusion(g, t, InclusionMethod::WithReplacement, 1000, {}, rng);
    weighted.push_back(hansen_hurwitz_mean(g, t, attributes::prop_a(), m));
    std::vector<double> ones(t.size(), 1.0), xs;
    for (const auto& r : t.records) xs.push_back(g.category(r.node) == Category::A);
    raw.push_back(hansen_hurwitz_mean(xs, ones));
  }
  // Category A is twice as active, so the raw walk share is biased upwards.
  CHECK(std::fabs(error_report(weighted, truth).bias) < 0.01);
  CHECK(error_report(raw, truth).bias > 0.1);
}
