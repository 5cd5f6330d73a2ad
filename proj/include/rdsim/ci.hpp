#pragma once

// Confidence intervals for population means from chain-referral samples:
// the naive t-interval, the category-chain bootstrap, the successive-sampling
// bootstrap, and the simulate-then-sample interval.

#include <array>
#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rdsim/distributions.hpp"
#include "rdsim/estimators.hpp"
#include "rdsim/graph.hpp"
#include "rdsim/inclusion.hpp"
#include "rdsim/netgen.hpp"
#include "rdsim/rng.hpp"
#include "rdsim/samplers.hpp"

namespace rdsim {

enum class IntervalMethod { Naive, Salganik, GileSS, Fast };

inline std::string to_string(IntervalMethod m) {
  switch (m) {
    case IntervalMethod::Naive: return "naive";
    case IntervalMethod::Salganik: return "salganik";
    case IntervalMethod::GileSS: return "gile-ss";
    case IntervalMethod::Fast: return "fast";
  }
  return "?";
}

inline IntervalMethod parse_interval_method(const std::string& s) {
  for (auto m : {IntervalMethod::Naive, IntervalMethod::Salganik, IntervalMethod::GileSS,
                 IntervalMethod::Fast})
    if (to_string(m) == s) return m;
  throw std::invalid_argument("unknown interval method '" + s + "'");
}

struct IntervalResult {
  double point = 0.0;  // interval center
  double se = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double level = 0.95;
  IntervalMethod method = IntervalMethod::Naive;
  std::size_t resamples = 0;
  std::vector<std::string> flags;

  double width() const { return upper - lower; }
  bool contains(double v) const { return lower <= v && v <= upper; }
};

struct BootstrapOptions {
  std::size_t resamples = 1000;
  double level = 0.95;
};

namespace detail {

inline void check_level(double level) {
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("confidence level outside (0,1)");
}

inline double two_sided_z(double level) {
  check_level(level);
  return dist::normal_quantile(1.0 - 0.5 * (1.0 - level));
}

inline double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

// Sample standard deviation (divides by n - 1).
inline double sd_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

inline IntervalResult normal_interval(double center, double se, double level,
                                      IntervalMethod method, std::size_t resamples) {
  IntervalResult r;
  const double half = two_sided_z(level) * se;
  r.point = center;
  r.se = se;
  r.lower = center - half;
  r.upper = center + half;
  r.level = level;
  r.method = method;
  r.resamples = resamples;
  return r;
}

inline IntervalResult from_replicates(const std::vector<double>& estimates, double level,
                                      IntervalMethod method) {
  return normal_interval(mean_of(estimates), sd_of(estimates), level, method, estimates.size());
}

inline void check_resamples(const BootstrapOptions& opt) {
  if (opt.resamples < 2) throw std::invalid_argument("at least 2 resamples are needed");
  check_level(opt.level);
}

}  // namespace detail

/// mean +- t_{alpha/2, n-1} s / sqrt(n) on the raw values.
inline IntervalResult naive_ci(std::span<const double> sample, double level) {
  detail::check_level(level);
  if (sample.size() < 2) throw std::invalid_argument("naive interval needs n >= 2");
  std::vector<double> v(sample.begin(), sample.end());
  const double n = static_cast<double>(v.size());
  const double s = detail::sd_of(v);
  const double t = dist::student_t_quantile(1.0 - 0.5 * (1.0 - level), n - 1.0);
  IntervalResult r;
  r.point = detail::mean_of(v);
  r.se = s / std::sqrt(n);
  r.lower = r.point - t * r.se;
  r.upper = r.point + t * r.se;
  r.level = level;
  r.method = IntervalMethod::Naive;
  return r;
}

/// Category-chain bootstrap. A resample starts at a uniformly chosen sampled
/// node; each next node is drawn uniformly from the sampled nodes recruited
/// by a node of the current node's category. Seeds count as recruited by
/// their own category. Each resample has the original size and is estimated
/// with the ratio Hansen-Hurwitz estimator under `model`.
inline IntervalResult salganik_ci(const Graph& g, const SampleTrace& trace, const NodeAttribute& x,
                                  const InclusionModel& model, const BootstrapOptions& opt,
                                  Rng& rng) {
  detail::check_resamples(opt);
  const auto recs = trace.estimation_records();
  if (recs.empty()) throw std::invalid_argument("empty trace");
  const std::size_t n = recs.size();

  std::vector<double> xs(n), inv_pi(n);
  std::vector<Category> cat(n);
  std::array<std::vector<std::size_t>, 2> pools;
  for (std::size_t i = 0; i < n; ++i) {
    const NodeId v = recs[i].node;
    const std::size_t k = g.degree(v);
    cat[i] = g.category(v);
    xs[i] = x(cat[i], k);
    const double p = model.pi(k);
    if (!(p > 0.0)) throw std::invalid_argument("zero inclusion probability");
    inv_pi[i] = 1.0 / p;
    const Category via = recs[i].referrer ? g.category(*recs[i].referrer) : cat[i];
    pools[static_cast<int>(via)].push_back(i);
  }

  bool fell_back = false;
  std::vector<double> estimates;
  estimates.reserve(opt.resamples);
  for (std::size_t b = 0; b < opt.resamples; ++b) {
    std::size_t cur = uniform_index(rng, n);
    double num = xs[cur] * inv_pi[cur], den = inv_pi[cur];
    for (std::size_t step = 1; step < n; ++step) {
      const auto& pool = pools[static_cast<int>(cat[cur])];
      if (pool.empty()) {
        fell_back = true;
        cur = uniform_index(rng, n);
      } else {
        cur = pool[uniform_index(rng, pool.size())];
      }
      num += xs[cur] * inv_pi[cur];
      den += inv_pi[cur];
    }
    estimates.push_back(num / den);
  }
  auto r = detail::from_replicates(estimates, opt.level, IntervalMethod::Salganik);
  if (fell_back) r.flags.push_back("empty-referral-pool");
  return r;
}

/// Population model reconstructed from a sample for the successive-sampling
/// interval. Classes are (category, degree) pairs.
struct GileCiModel {
  std::vector<Category> class_category;
  std::vector<std::size_t> class_degree;
  std::vector<std::size_t> class_count;  // N_{i,k}
  /// H0[i][j], index 0 = A, 1 = B.
  std::array<std::array<double, 2>, 2> h0{};
  std::array<double, 2> r_hat{};  // share of links from i that reach A
  std::array<double, 2> d_bar{};
  std::array<double, 2> category_total{};  // sum_k N_{i,k}
  std::vector<std::string> flags;
};

inline GileCiModel build_gile_ci_model(const Graph& g, const SampleTrace& trace,
                                       const InclusionModel& model, std::size_t population_size) {
  const auto recs = trace.estimation_records();
  if (recs.empty()) throw std::invalid_argument("empty trace");
  if (recs.size() > population_size) throw std::invalid_argument("sample larger than population");

  std::map<std::pair<int, std::size_t>, std::pair<double, std::size_t>> classes;
  std::array<std::size_t, 2> links{}, links_to_a{};
  std::array<std::size_t, 2> seen{};
  double weight_a = 0.0, weight_all = 0.0;
  for (const auto& r : recs) {
    const int c = static_cast<int>(g.category(r.node));
    const std::size_t k = g.degree(r.node);
    const double w = 1.0 / model.pi(k);
    auto& slot = classes[{c, k}];
    slot.first += w;
    slot.second += 1;
    ++seen[c];
    weight_all += w;
    if (c == 0) weight_a += w;
    if (r.referrer) {
      const int from = static_cast<int>(g.category(*r.referrer));
      ++links[from];
      if (c == 0) ++links_to_a[from];
    }
  }
  if (seen[0] == 0 || seen[1] == 0)
    throw std::invalid_argument("both categories must appear in the sample");

  GileCiModel m;
  std::vector<double> weights;
  std::vector<std::size_t> minima;
  for (const auto& [key, val] : classes) {
    m.class_category.push_back(static_cast<Category>(key.first));
    m.class_degree.push_back(key.second);
    weights.push_back(val.first);
    minima.push_back(val.second);
  }
  m.class_count = apportion_with_minimum(weights, minima, population_size);

  std::array<double, 2> stubs{};
  for (std::size_t c = 0; c < m.class_count.size(); ++c) {
    const int i = static_cast<int>(m.class_category[c]);
    m.category_total[i] += static_cast<double>(m.class_count[c]);
    stubs[i] += static_cast<double>(m.class_count[c] * m.class_degree[c]);
  }
  for (int i = 0; i < 2; ++i) {
    m.d_bar[i] = stubs[i] / m.category_total[i];
    if (links[i] > 0) {
      m.r_hat[i] = static_cast<double>(links_to_a[i]) / static_cast<double>(links[i]);
    } else {
      m.r_hat[i] = weight_a / weight_all;
      m.flags.push_back(std::string("no-links-from-") + (i == 0 ? "A" : "B"));
    }
  }
  const double sum_a = m.category_total[0];
  const double sum_b = m.category_total[1];
  m.h0[0][0] = m.d_bar[0] * sum_a * m.r_hat[0];
  m.h0[1][1] = m.d_bar[1] * sum_b * (1.0 - m.r_hat[1]);
  m.h0[0][1] = m.h0[1][0] =
      0.5 * (m.d_bar[0] * sum_a * (1.0 - m.r_hat[0]) + m.d_bar[1] * sum_b * m.r_hat[1]);
  for (const auto& row : m.h0)
    for (double h : row)
      if (!std::isfinite(h) || h < 0.0) throw std::invalid_argument("non-finite H0 entry");
  return m;
}

/// Successive-sampling bootstrap interval. Each resample re-runs the
/// recruitment process on the reconstructed population: a recruiter of
/// category i picks category j with weight H0(i,j) times the unsampled share
/// of category j, then a unit of category j with probability proportional to
/// degree among the unsampled units of j. The original pi is reused.
inline IntervalResult gile_ss_ci(const Graph& g, const SampleTrace& trace, const NodeAttribute& x,
                                 const InclusionModel& model, std::size_t population_size,
                                 const BootstrapOptions& opt, Rng& rng) {
  detail::check_resamples(opt);
  const GileCiModel m = build_gile_ci_model(g, trace, model, population_size);
  const std::size_t n = trace.estimation_records().size();
  const std::size_t classes = m.class_count.size();
  const std::size_t coupons = std::max<std::size_t>(trace.config.coupons_n, 1);
  const std::size_t seeds = std::max<std::size_t>(trace.config.num_chains, 1);

  std::vector<double> class_x(classes), class_inv_pi(classes);
  std::array<std::vector<std::size_t>, 2> by_category;
  for (std::size_t c = 0; c < classes; ++c) {
    class_x[c] = x(m.class_category[c], m.class_degree[c]);
    class_inv_pi[c] = 1.0 / model.pi(m.class_degree[c]);
    by_category[static_cast<int>(m.class_category[c])].push_back(c);
  }

  std::vector<std::size_t> remaining(classes);
  std::array<double, 2> unsampled{}, stub_mass{};

  // Degree-proportional draw of an unsampled unit within category i.
  auto draw_in = [&](int i) {
    double r = uniform01(rng) * stub_mass[i];
    std::size_t pick = classes;
    for (std::size_t c : by_category[i]) {
      if (remaining[c] == 0) continue;
      pick = c;
      r -= static_cast<double>(remaining[c] * m.class_degree[c]);
      if (r < 0.0) break;
    }
    --remaining[pick];
    unsampled[i] -= 1.0;
    stub_mass[i] -= static_cast<double>(m.class_degree[pick]);
    return pick;
  };
  auto draw_seed = [&]() {
    const double total = stub_mass[0] + stub_mass[1];
    const int i = uniform01(rng) * total < stub_mass[0] ? 0 : 1;
    return draw_in(stub_mass[i] > 0.0 ? i : 1 - i);
  };

  std::vector<double> estimates;
  estimates.reserve(opt.resamples);
  std::deque<std::size_t> queue;
  for (std::size_t b = 0; b < opt.resamples; ++b) {
    remaining = m.class_count;
    unsampled = {0.0, 0.0};
    stub_mass = {0.0, 0.0};
    for (std::size_t c = 0; c < classes; ++c) {
      const int i = static_cast<int>(m.class_category[c]);
      unsampled[i] += static_cast<double>(remaining[c]);
      stub_mass[i] += static_cast<double>(remaining[c] * m.class_degree[c]);
    }
    queue.clear();
    double num = 0.0, den = 0.0;
    std::size_t drawn = 0;
    auto take = [&](std::size_t c) {
      num += class_x[c] * class_inv_pi[c];
      den += class_inv_pi[c];
      ++drawn;
      queue.push_back(c);
    };
    for (std::size_t s = 0; s < seeds && drawn < n; ++s) take(draw_seed());
    while (drawn < n) {
      if (queue.empty()) {
        take(draw_seed());
        continue;
      }
      const std::size_t from = queue.front();
      queue.pop_front();
      const int i = static_cast<int>(m.class_category[from]);
      const std::size_t k = std::min(coupons, m.class_degree[from]);
      for (std::size_t r = 0; r < k && drawn < n; ++r) {
        double w0 = stub_mass[0] > 0.0 ? m.h0[i][0] * unsampled[0] / m.category_total[0] : 0.0;
        double w1 = stub_mass[1] > 0.0 ? m.h0[i][1] * unsampled[1] / m.category_total[1] : 0.0;
        if (w0 + w1 <= 0.0) {
          if (stub_mass[0] + stub_mass[1] <= 0.0) break;
          w0 = stub_mass[0];
          w1 = stub_mass[1];
        }
        const int j = uniform01(rng) * (w0 + w1) < w0 ? 0 : 1;
        take(draw_in(j));
      }
    }
    estimates.push_back(num / den);
  }
  auto r = detail::from_replicates(estimates, opt.level, IntervalMethod::GileSS);
  r.flags = m.flags;
  if (!model.converged) r.flags.push_back("inclusion-not-converged");
  return r;
}

struct NetworkAttributeEstimates {
  double d_bar = 0.0;
  std::optional<double> h_hat;  // empty when no cross-category link was sampled
  std::optional<double> a_hat;  // empty when a category is unsampled
  std::size_t links = 0;        // C
  std::size_t cross_links = 0;  // C_b
  std::optional<double> d_bar_a;
  std::optional<double> d_bar_b;
  double prop_a = 0.0;  // weighted estimate of the category-A share
};

/// Mean degree, homophily and activity of the population, estimated from a
/// trace. Sampled referral links are treated as equally likely draws from
/// the edge set.
inline NetworkAttributeEstimates estimate_network_attributes(const Graph& g,
                                                             const SampleTrace& trace,
                                                             const InclusionModel& model,
                                                             std::size_t population_size) {
  const auto recs = trace.estimation_records();
  if (recs.empty()) throw std::invalid_argument("empty trace");
  NetworkAttributeEstimates e;
  std::array<double, 2> wsum{}, wdeg{};
  for (const auto& r : recs) {
    const std::size_t k = g.degree(r.node);
    const int c = static_cast<int>(g.category(r.node));
    const double w = 1.0 / model.pi(k);
    wsum[c] += w;
    wdeg[c] += w * static_cast<double>(k);
    if (r.referrer) {
      ++e.links;
      if (g.category(*r.referrer) != g.category(r.node)) ++e.cross_links;
    }
  }
  e.d_bar = (wdeg[0] + wdeg[1]) / (wsum[0] + wsum[1]);
  e.prop_a = wsum[0] / (wsum[0] + wsum[1]);
  if (wsum[0] > 0.0) e.d_bar_a = wdeg[0] / wsum[0];
  if (wsum[1] > 0.0) e.d_bar_b = wdeg[1] / wsum[1];
  if (e.d_bar_a && e.d_bar_b && *e.d_bar_b > 0.0) e.a_hat = *e.d_bar_a / *e.d_bar_b;

  const double n = static_cast<double>(population_size);
  const double n_a = e.prop_a * n;
  const double n_b = n - n_a;
  if (e.cross_links > 0)
    e.h_hat = static_cast<double>(e.links) * n_a * n_b /
              (static_cast<double>(e.cross_links) * n * (n - 1.0) / 2.0);
  return e;
}

struct FastCiOptions {
  BootstrapOptions bootstrap;
  InclusionMethod inclusion = InclusionMethod::KurantSimplified;
  InclusionFitOptions fit;
};

/// Simulate-then-sample interval: fit one network to the estimated mean
/// degree, homophily, activity and category share, rerun the original
/// sampler on it `resamples` times, and use the spread of those estimates as
/// the standard error around the original point estimate.
inline IntervalResult fast_ci(const Graph& g, const SampleTrace& trace, const NodeAttribute& x,
                              std::size_t population_size, const FastCiOptions& opt, Rng& rng) {
  detail::check_resamples(opt.bootstrap);
  const InclusionModel model =
      fit_inclusion(g, trace, opt.inclusion, population_size, opt.fit, rng);
  const double point = hansen_hurwitz_mean(g, trace, x, model);
  const auto attrs = estimate_network_attributes(g, trace, model, population_size);

  std::vector<std::string> flags;
  NetgenParams params;
  params.population = population_size;
  params.prop_a = attrs.prop_a;
  params.mean_degree = attrs.d_bar;
  if (attrs.h_hat) {
    params.homophily = *attrs.h_hat;
  } else {
    params.homophily = std::numeric_limits<double>::infinity();
    flags.push_back("homophily-undefined");
  }
  if (attrs.a_hat) {
    params.activity = *attrs.a_hat;
  } else {
    params.activity = 1.0;
    flags.push_back("activity-undefined");
  }
  params.rng_seed = rng();
  auto [feasible, clamped] = clamp_to_feasible(params);
  if (clamped) flags.push_back("netgen-clamped");

  const Graph sim = generate(feasible);
  const auto comps = connected_components(sim);
  std::size_t giant = 0;
  for (std::size_t i = 1; i < comps.size(); ++i)
    if (comps[i].size() > comps[giant].size()) giant = i;

  SamplerConfig cfg = trace.config;
  const std::uint64_t base = rng();
  std::vector<double> estimates;
  estimates.reserve(opt.bootstrap.resamples);
  for (std::size_t b = 0; b < opt.bootstrap.resamples; ++b) {
    cfg.rng_seed = derive_seed(base, {b});
    const SampleTrace t = run_sampler(sim, cfg, {}, comps[giant]);
    Rng fit_rng = make_rng(derive_seed(base, {b, 1}));
    const auto m = fit_inclusion(sim, t, opt.inclusion, population_size, opt.fit, fit_rng);
    estimates.push_back(hansen_hurwitz_mean(sim, t, x, m));
  }
  auto r = detail::normal_interval(point, detail::sd_of(estimates), opt.bootstrap.level,
                                   IntervalMethod::Fast, estimates.size());
  r.flags = std::move(flags);
  return r;
}

}  // namespace rdsim
