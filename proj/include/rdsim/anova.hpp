#pragma once

// One-way analysis of variance across groups of replicate estimates.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "rdsim/distributions.hpp"

namespace rdsim {

struct AnovaResult {
  double f_statistic = 0.0;
  double df_between = 0.0;
  double df_within = 0.0;
  double right_tail_p = 1.0;
};

/// Throws when there are fewer than two groups, a group has fewer than two
/// values, or the within-group variance is zero while the group means differ.
inline AnovaResult one_way_anova(const std::vector<std::vector<double>>& groups) {
  if (groups.size() < 2) throw std::invalid_argument("anova needs at least 2 groups");
  std::size_t total = 0;
  double grand = 0.0;
  for (const auto& grp : groups) {
    if (grp.size() < 2) throw std::invalid_argument("anova needs at least 2 values per group");
    for (double v : grp) grand += v;
    total += grp.size();
  }
  grand /= static_cast<double>(total);

  double ss_between = 0.0, ss_within = 0.0;
  for (const auto& grp : groups) {
    double mean = 0.0;
    for (double v : grp) mean += v;
    mean /= static_cast<double>(grp.size());
    ss_between += static_cast<double>(grp.size()) * (mean - grand) * (mean - grand);
    for (double v : grp) ss_within += (v - mean) * (v - mean);
  }

  AnovaResult r;
  r.df_between = static_cast<double>(groups.size() - 1);
  r.df_within = static_cast<double>(total - groups.size());
  // Relative to the data scale; pure rounding noise counts as zero.
  const double scale = std::max(1.0, grand * grand) * static_cast<double>(total) * 1e-24;
  if (ss_within <= scale) {
    if (ss_between <= scale) return r;
    throw std::invalid_argument("anova: zero within-group variance");
  }
  r.f_statistic = (ss_between / r.df_between) / (ss_within / r.df_within);
  r.right_tail_p = dist::f_sf(r.f_statistic, r.df_between, r.df_within);
  return r;
}

}  // namespace rdsim
