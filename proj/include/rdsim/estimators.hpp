#pragma once

// Inverse-probability weighted estimators and the error metrics used to
// compare samplers.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rdsim/graph.hpp"
#include "rdsim/inclusion.hpp"
#include "rdsim/samplers.hpp"

namespace rdsim {

/// Node characteristic x(v), expressed through the node's category and
/// degree so that it can be evaluated on simulated populations as well.
using NodeAttribute = std::function<double(Category, std::size_t)>;

namespace attributes {

inline NodeAttribute prop_a() {
  return [](Category c, std::size_t) { return c == Category::A ? 1.0 : 0.0; };
}

inline NodeAttribute degree() {
  return [](Category, std::size_t k) { return static_cast<double>(k); };
}

inline NodeAttribute constant(double value) {
  return [value](Category, std::size_t) { return value; };
}

inline NodeAttribute parse(const std::string& name) {
  if (name == "prop-a") return prop_a();
  if (name == "degree") return degree();
  throw std::invalid_argument("unknown attribute '" + name + "'");
}

}  // namespace attributes

/// Attribute values and inclusion probabilities of the estimation records.
struct WeightedDraws {
  std::vector<double> x;
  std::vector<double> pi;
};

inline WeightedDraws weighted_draws(const Graph& g, const SampleTrace& trace,
                                    const NodeAttribute& x, const InclusionModel& model) {
  WeightedDraws d;
  for (const auto& r : trace.estimation_records()) {
    const std::size_t k = g.degree(r.node);
    d.x.push_back(x(g.category(r.node), k));
    d.pi.push_back(model.pi(k));
  }
  return d;
}

namespace detail {

inline void check_draws(std::span<const double> x, std::span<const double> pi) {
  if (x.size() != pi.size()) throw std::invalid_argument("x and pi lengths differ");
  if (x.empty()) throw std::invalid_argument("no draws");
  for (double p : pi)
    if (!(p > 0.0)) throw std::invalid_argument("zero inclusion probability");
}

}  // namespace detail

/// Ratio (Hajek) form: sum(x/pi) / sum(1/pi). Invariant to rescaling pi.
inline double hansen_hurwitz_mean(std::span<const double> x, std::span<const double> pi) {
  detail::check_draws(x, pi);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    num += x[i] / pi[i];
    den += 1.0 / pi[i];
  }
  return num / den;
}

/// (1/n) sum(x/pi) with pi the per-draw selection probability.
inline double hansen_hurwitz_total(std::span<const double> x, std::span<const double> pi) {
  detail::check_draws(x, pi);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] / pi[i];
  return s / static_cast<double>(x.size());
}

inline double horvitz_thompson_mean(std::span<const double> x, std::span<const double> pi,
                                    std::size_t population_size) {
  detail::check_draws(x, pi);
  if (population_size == 0) throw std::invalid_argument("population size must be positive");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] / pi[i];
  return s / (static_cast<double>(population_size) * static_cast<double>(x.size()));
}

inline double hansen_hurwitz_mean(const Graph& g, const SampleTrace& trace, const NodeAttribute& x,
                                  const InclusionModel& model) {
  auto d = weighted_draws(g, trace, x, model);
  return hansen_hurwitz_mean(d.x, d.pi);
}

inline double hansen_hurwitz_total(const Graph& g, const SampleTrace& trace,
                                   const NodeAttribute& x, const InclusionModel& model) {
  auto d = weighted_draws(g, trace, x, model);
  return hansen_hurwitz_total(d.x, d.pi);
}

inline double horvitz_thompson_mean(const Graph& g, const SampleTrace& trace,
                                    const NodeAttribute& x, const InclusionModel& model,
                                    std::size_t population_size) {
  auto d = weighted_draws(g, trace, x, model);
  return horvitz_thompson_mean(d.x, d.pi, population_size);
}

struct ErrorReport {
  double relative_mean_error = 0.0;  // rms_error / true value
  double rms_error = 0.0;
  std::vector<double> errors;  // estimate - truth, per replicate
  double bias = 0.0;
  double standard_deviation = 0.0;  // population form (divides by n)
  double median_abs_error = 0.0;
  std::size_t replicate_count = 0;
};

/// rms^2 = bias^2 + sd^2 holds exactly (up to rounding) for these definitions.
inline ErrorReport error_report(std::span<const double> estimates, double true_value) {
  if (estimates.size() < 2) throw std::invalid_argument("error report needs at least 2 replicates");
  if (true_value == 0.0) throw std::invalid_argument("relative error undefined for true value 0");
  ErrorReport r;
  const double n = static_cast<double>(estimates.size());
  r.replicate_count = estimates.size();
  double sq = 0.0, mean = 0.0;
  for (double e : estimates) {
    r.errors.push_back(e - true_value);
    sq += (e - true_value) * (e - true_value);
    mean += e;
  }
  mean /= n;
  r.rms_error = std::sqrt(sq / n);
  r.relative_mean_error = r.rms_error / std::fabs(true_value);
  r.bias = mean - true_value;
  double var = 0.0;
  for (double e : estimates) var += (e - mean) * (e - mean);
  r.standard_deviation = std::sqrt(var / n);
  std::vector<double> abs_err;
  for (double e : r.errors) abs_err.push_back(std::fabs(e));
  std::sort(abs_err.begin(), abs_err.end());
  const std::size_t m = abs_err.size();
  r.median_abs_error = m % 2 ? abs_err[m / 2] : 0.5 * (abs_err[m / 2 - 1] + abs_err[m / 2]);
  return r;
}

/// Pearson correlation coefficient.
inline double correlation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("correlation: lengths differ");
  if (a.size() < 2) throw std::invalid_argument("correlation: need at least 2 points");
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (!(saa > 0.0) || !(sbb > 0.0)) throw std::invalid_argument("correlation: zero variance");
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

}  // namespace rdsim
