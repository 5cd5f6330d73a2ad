#pragma once

// Per-degree inclusion probabilities for chain-referral samples.
//
// With replacement the long-run draw probability is proportional to degree.
// For traversal samples three approximations are offered:
//
//  * stub activation: every stub carries an independent U(0,1) index and a
//    node is reached once virtual time t passes its smallest index, so
//    pi(k) = 1 - (1 - t)^k where t solves g(t) = 1 - sum_k p(k)(1-t)^k = f;
//  * the same with g replaced by 1 - (1 - t)^dbar, which has a closed-form
//    inverse;
//  * successive-sampling bootstrap: alternate between reconstructing the
//    population degree counts from the current pi and re-estimating pi from
//    repeated PPS-without-replacement draws on that population.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rdsim/graph.hpp"
#include "rdsim/rng.hpp"
#include "rdsim/samplers.hpp"

namespace rdsim {

enum class InclusionMethod { WithReplacement, KurantDirect, KurantSimplified, GileSS };

inline std::string to_string(InclusionMethod m) {
  switch (m) {
    case InclusionMethod::WithReplacement: return "wr";
    case InclusionMethod::KurantDirect: return "kurant";
    case InclusionMethod::KurantSimplified: return "kurant-simple";
    case InclusionMethod::GileSS: return "gile-ss";
  }
  return "?";
}

inline InclusionMethod parse_inclusion_method(const std::string& s) {
  for (auto m : {InclusionMethod::WithReplacement, InclusionMethod::KurantDirect,
                 InclusionMethod::KurantSimplified, InclusionMethod::GileSS})
    if (to_string(m) == s) return m;
  throw std::invalid_argument("unknown inclusion method '" + s + "'");
}

struct InclusionModel {
  InclusionMethod method = InclusionMethod::WithReplacement;
  /// Relative inclusion probability for each degree seen during fitting.
  std::map<std::size_t, double> pi_by_degree;
  double f = 1.0;
  /// Solved activation time, direct methods only.
  std::optional<double> t_star;
  bool converged = true;
  std::size_t iterations = 0;

  /// pi(k). Closed-form methods answer for any degree; the bootstrap method
  /// only for degrees it was fitted on.
  double pi(std::size_t k) const {
    switch (method) {
      case InclusionMethod::WithReplacement: return static_cast<double>(k);
      case InclusionMethod::KurantDirect:
      case InclusionMethod::KurantSimplified:
        return 1.0 - std::pow(1.0 - *t_star, static_cast<double>(k));
      case InclusionMethod::GileSS: break;
    }
    auto it = pi_by_degree.find(k);
    if (it == pi_by_degree.end())
      throw std::out_of_range("no inclusion probability fitted for degree " + std::to_string(k));
    return it->second;
  }
};

inline InclusionModel pi_with_replacement(std::span<const std::size_t> degrees) {
  InclusionModel m;
  m.method = InclusionMethod::WithReplacement;
  for (std::size_t k : degrees) {
    if (k == 0) throw std::invalid_argument("degree-0 node has zero inclusion probability");
    m.pi_by_degree[k] = static_cast<double>(k);
  }
  return m;
}

/// Expected sampled fraction at activation time t.
inline double g_of_t(const DegreeDistribution& pk, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("t outside [0,1]");
  if (t == 1.0) {
    double reached = 0.0;
    for (auto [k, p] : pk.probabilities)
      if (k > 0) reached += p;
    return reached;
  }
  // sum p_k (1 - (1-t)^k), kept exact at t = 0
  const double log_keep = std::log1p(-t);
  double reached = 0.0;
  for (auto [k, p] : pk.probabilities) reached -= p * std::expm1(static_cast<double>(k) * log_keep);
  return reached;
}

/// Solves g(t) = f by bisection.
inline double invert_g(const DegreeDistribution& pk, double f) {
  if (!(f > 0.0 && f <= 1.0)) throw std::invalid_argument("sampling fraction outside (0,1]");
  const double g_max = g_of_t(pk, 1.0);
  if (f > g_max + 1e-12)
    throw std::invalid_argument("sampling fraction above the range of g (degree-0 mass)");
  if (f >= g_max) return 1.0;
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (g_of_t(pk, mid) < f ? lo : hi) = mid;
    if (hi - lo < 1e-16) break;
  }
  return 0.5 * (lo + hi);
}

namespace detail {

inline InclusionModel activation_model(InclusionMethod method, double t_star, double f,
                                       const DegreeDistribution* pk) {
  InclusionModel m;
  m.method = method;
  m.f = f;
  m.t_star = t_star;
  if (pk)
    for (auto [k, p] : pk->probabilities) m.pi_by_degree[k] = m.pi(k);
  return m;
}

}  // namespace detail

inline InclusionModel kurant_direct(const DegreeDistribution& pk, double f) {
  return detail::activation_model(InclusionMethod::KurantDirect, invert_g(pk, f), f, &pk);
}

inline InclusionModel kurant_simplified(double mean_degree, double f) {
  if (!(mean_degree > 0.0)) throw std::invalid_argument("mean degree must be positive");
  if (!(f > 0.0 && f <= 1.0)) throw std::invalid_argument("sampling fraction outside (0,1]");
  const double t = 1.0 - std::pow(1.0 - f, 1.0 / mean_degree);
  return detail::activation_model(InclusionMethod::KurantSimplified, t, f, nullptr);
}

/// Degree distribution from degree-biased draws, each weighted by 1/k.
inline DegreeDistribution hh_degree_distribution(std::span<const std::size_t> degrees) {
  if (degrees.empty()) throw std::invalid_argument("empty sample");
  std::map<std::size_t, double> w;
  for (std::size_t k : degrees) {
    if (k == 0) throw std::invalid_argument("degree-0 draw in a degree-biased sample");
    w[k] += 1.0 / static_cast<double>(k);
  }
  return DegreeDistribution::from_weights(w);
}

/// p(k) from a with-replacement random-walk trace.
inline DegreeDistribution estimate_pk_rw(const Graph& g, const SampleTrace& trace) {
  if (trace.records.empty()) throw std::invalid_argument("empty trace");
  std::vector<std::size_t> degrees;
  degrees.reserve(trace.records.size());
  for (const auto& r : trace.records) degrees.push_back(g.degree(r.node));
  return hh_degree_distribution(degrees);
}

/// Largest-remainder rounding of `weights` to integers summing to `total`.
/// Ties go to the lower index.
inline std::vector<std::size_t> apportion(std::span<const double> weights, std::size_t total) {
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw std::invalid_argument("bad apportion weight");
    sum += w;
  }
  if (!(sum > 0.0)) throw std::invalid_argument("apportion weights sum to zero");
  std::vector<std::size_t> out(weights.size());
  std::vector<double> rem(weights.size());
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double q = static_cast<double>(total) * weights[i] / sum;
    out[i] = static_cast<std::size_t>(std::floor(q));
    rem[i] = q - std::floor(q);
    assigned += out[i];
  }
  std::vector<std::size_t> order(weights.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return rem[a] > rem[b]; });
  for (std::size_t i = 0; assigned < total; i = (i + 1) % order.size()) {
    ++out[order[i]];
    ++assigned;
  }
  return out;
}

/// apportion() followed by moving units, one at a time, from the class with
/// the most slack to any class below its minimum.
inline std::vector<std::size_t> apportion_with_minimum(std::span<const double> weights,
                                                       std::span<const std::size_t> minima,
                                                       std::size_t total) {
  if (weights.size() != minima.size()) throw std::invalid_argument("apportion: size mismatch");
  if (std::accumulate(minima.begin(), minima.end(), std::size_t{0}) > total)
    throw std::invalid_argument("apportion: minima exceed total");
  auto out = apportion(weights, total);
  for (std::size_t c = 0; c < out.size(); ++c) {
    while (out[c] < minima[c]) {
      std::size_t donor = out.size(), slack = 0;
      for (std::size_t d = 0; d < out.size(); ++d)
        if (out[d] > minima[d] && out[d] - minima[d] > slack) {
          slack = out[d] - minima[d];
          donor = d;
        }
      --out[donor];
      ++out[c];
    }
  }
  return out;
}

struct GileSsOptions {
  std::size_t rounds = 50;  // M
  std::size_t max_iter = 10;
  double tol = 1e-4;
};

/// One successive-sampling draw of `n` units from a population described by
/// per-class sizes, each unit drawn with probability proportional to its
/// size among the units not yet drawn. Adds the per-class draw counts to
/// `drawn`.
inline void successive_sample(std::span<const std::size_t> class_size,
                              std::span<const std::size_t> class_count, std::size_t n, Rng& rng,
                              std::span<std::size_t> drawn) {
  std::vector<std::size_t> remaining(class_count.begin(), class_count.end());
  double total = 0.0;
  for (std::size_t c = 0; c < remaining.size(); ++c)
    total += static_cast<double>(class_size[c] * remaining[c]);
  std::size_t left = std::accumulate(remaining.begin(), remaining.end(), std::size_t{0});
  if (n > left) throw std::invalid_argument("successive sample larger than population");
  for (std::size_t i = 0; i < n; ++i) {
    double r = uniform01(rng) * total;
    std::size_t pick = remaining.size();
    for (std::size_t c = 0; c < remaining.size(); ++c) {
      if (remaining[c] == 0) continue;
      pick = c;
      r -= static_cast<double>(class_size[c] * remaining[c]);
      if (r < 0.0) break;
    }
    --remaining[pick];
    ++drawn[pick];
    total -= static_cast<double>(class_size[pick]);
    // Recompute occasionally to keep rounding drift out of the running total.
    if ((i & 63) == 63) {
      total = 0.0;
      for (std::size_t c = 0; c < remaining.size(); ++c)
        total += static_cast<double>(class_size[c] * remaining[c]);
    }
  }
}

/// Successive-sampling bootstrap estimate of pi(k) for a traversal sample.
/// `converged` is false when max_iter was reached first.
inline InclusionModel gile_ss(std::span<const std::size_t> sample_degrees,
                              std::size_t population_size, const GileSsOptions& opt, Rng& rng) {
  if (sample_degrees.empty()) throw std::invalid_argument("empty sample");
  if (sample_degrees.size() > population_size)
    throw std::invalid_argument("sample larger than population");
  if (opt.rounds == 0 || opt.max_iter == 0) throw std::invalid_argument("rounds and max_iter must be positive");

  std::map<std::size_t, std::size_t> counts;
  for (std::size_t k : sample_degrees) {
    if (k == 0) throw std::invalid_argument("degree-0 node in successive-sampling fit");
    ++counts[k];
  }
  std::vector<std::size_t> degree, sampled;
  for (auto [k, c] : counts) {
    degree.push_back(k);
    sampled.push_back(c);
  }
  const std::size_t classes = degree.size();
  const std::size_t n = sample_degrees.size();

  std::vector<double> pi(classes), next(classes), w(classes);
  for (std::size_t c = 0; c < classes; ++c) pi[c] = static_cast<double>(degree[c]);

  InclusionModel m;
  m.method = InclusionMethod::GileSS;
  m.f = static_cast<double>(n) / static_cast<double>(population_size);
  m.converged = false;

  std::vector<std::size_t> drawn(classes);
  for (std::size_t iter = 1; iter <= opt.max_iter; ++iter) {
    for (std::size_t c = 0; c < classes; ++c) w[c] = static_cast<double>(sampled[c]) / pi[c];
    const auto pop = apportion_with_minimum(w, sampled, population_size);

    std::fill(drawn.begin(), drawn.end(), 0);
    for (std::size_t r = 0; r < opt.rounds; ++r) successive_sample(degree, pop, n, rng, drawn);

    double change = 0.0;
    for (std::size_t c = 0; c < classes; ++c) {
      next[c] = (static_cast<double>(drawn[c]) + 1.0) /
                (static_cast<double>(opt.rounds * pop[c]) + 1.0);
      change = std::max(change, std::fabs(next[c] - pi[c]));
    }
    pi.swap(next);
    m.iterations = iter;
    // The first iterate is compared against pi_0 = k, which is on another scale.
    if (iter >= 2 && change < opt.tol) {
      m.converged = true;
      break;
    }
  }
  for (std::size_t c = 0; c < classes; ++c) m.pi_by_degree[degree[c]] = pi[c];
  return m;
}

struct InclusionFitOptions {
  GileSsOptions gile;
  /// Mean degree for the closed-form method: arithmetic mean of sampled
  /// degrees by default, harmonic (degree-bias corrected) when set.
  bool harmonic_mean_degree = false;
};

/// Degrees of the records that enter weighted estimators.
inline std::vector<std::size_t> sampled_degrees(const Graph& g, const SampleTrace& trace) {
  std::vector<std::size_t> out;
  for (const auto& r : trace.estimation_records()) out.push_back(g.degree(r.node));
  return out;
}

/// Fits `method` to a trace drawn from `g`. The sampling fraction is the
/// number of distinct sampled nodes over population_size.
inline InclusionModel fit_inclusion(const Graph& g, const SampleTrace& trace,
                                    InclusionMethod method, std::size_t population_size,
                                    const InclusionFitOptions& opt, Rng& rng) {
  const auto degrees = sampled_degrees(g, trace);
  if (degrees.empty()) throw std::invalid_argument("empty trace");
  if (method == InclusionMethod::WithReplacement) return pi_with_replacement(degrees);
  if (trace.config.records_revisits())
    throw std::invalid_argument("traversal inclusion methods need a without-replacement trace");
  const double f = static_cast<double>(degrees.size()) / static_cast<double>(population_size);
  switch (method) {
    case InclusionMethod::KurantDirect: {
      auto model = kurant_direct(hh_degree_distribution(degrees), f);
      for (std::size_t k : degrees) model.pi_by_degree[k] = model.pi(k);
      return model;
    }
    case InclusionMethod::KurantSimplified: {
      double mean;
      if (opt.harmonic_mean_degree) {
        mean = hh_degree_distribution(degrees).mean();
      } else {
        mean = 0.0;
        for (std::size_t k : degrees) mean += static_cast<double>(k);
        mean /= static_cast<double>(degrees.size());
      }
      auto model = kurant_simplified(mean, f);
      for (std::size_t k : degrees) model.pi_by_degree[k] = model.pi(k);
      return model;
    }
    case InclusionMethod::GileSS: return gile_ss(degrees, population_size, opt.gile, rng);
    case InclusionMethod::WithReplacement: break;
  }
  return pi_with_replacement(degrees);
}

}  // namespace rdsim
