#pragma once

// Experiment driver: network/sampler grids, Monte-Carlo replication, CSV
// tables, SVG plots and a run manifest.
//
// Random streams are split from the master seed by a counter path, so every
// (setting, network, replicate, method) cell draws the same numbers whatever
// the thread count or the order tasks finish in.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "rdsim/anova.hpp"
#include "rdsim/ci.hpp"
#include "rdsim/distributions.hpp"
#include "rdsim/estimators.hpp"
#include "rdsim/graph.hpp"
#include "rdsim/inclusion.hpp"
#include "rdsim/netgen.hpp"
#include "rdsim/parallel.hpp"
#include "rdsim/plot.hpp"
#include "rdsim/samplers.hpp"
#include "rdsim/trace_io.hpp"

namespace rdsim {

inline constexpr const char* kVersion = "1.0.0";

enum class ExperimentKind {
  ErrorCurve,
  ErrorDecomposition,
  MethodComparison,
  PopulationSweep,
  CoverageStudy,
  Anova,
  CorrelationStudy,
};

inline std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::ErrorCurve: return "error-curve";
    case ExperimentKind::ErrorDecomposition: return "error-decomposition";
    case ExperimentKind::MethodComparison: return "method-comparison";
    case ExperimentKind::PopulationSweep: return "population-sweep";
    case ExperimentKind::CoverageStudy: return "coverage-study";
    case ExperimentKind::Anova: return "anova";
    case ExperimentKind::CorrelationStudy: return "correlation-study";
  }
  return "?";
}

inline ExperimentKind parse_experiment_kind(const std::string& s) {
  for (auto k : {ExperimentKind::ErrorCurve, ExperimentKind::ErrorDecomposition,
                 ExperimentKind::MethodComparison, ExperimentKind::PopulationSweep,
                 ExperimentKind::CoverageStudy, ExperimentKind::Anova,
                 ExperimentKind::CorrelationStudy})
    if (to_string(k) == s) return k;
  throw std::invalid_argument("unknown experiment '" + s + "'");
}

struct NetgenGrid {
  std::vector<std::size_t> population{1000};
  std::vector<double> prop_a{0.3};
  std::vector<double> mean_degree{10.0};
  std::vector<double> homophily{1.0};
  std::vector<double> activity{1.0};
};

struct SamplerSpec {
  std::string label;
  SamplerKind kind = SamplerKind::RDS;
  std::size_t coupons = 3;
  bool with_replacement = false;
  double fire_prob = 0.5;

  bool records_revisits() const {
    SamplerConfig c;
    c.kind = kind;
    c.with_replacement = with_replacement;
    return c.records_revisits();
  }
};

/// A named setting: overrides applied to the first value of each grid axis.
struct CaseSpec {
  std::string label;
  std::optional<std::size_t> population;
  std::optional<double> prop_a;
  std::optional<double> mean_degree;
  std::optional<double> homophily;
  std::optional<double> activity;
  std::optional<double> proportion;
};

struct ExperimentSpec {
  ExperimentKind experiment = ExperimentKind::ErrorCurve;
  NetgenGrid netgen;
  std::vector<SamplerSpec> samplers{SamplerSpec{"rds3", SamplerKind::RDS, 3, false, 0.5}};
  std::vector<double> proportions{0.1};
  /// Fixed sample size; overrides `proportions` when set.
  std::optional<std::size_t> sample_size;
  std::vector<CaseSpec> cases;
  std::size_t chains = 10;
  SeedSelection seed_selection = SeedSelection::DegreeProportional;
  std::vector<InclusionMethod> inclusion{InclusionMethod::GileSS};
  std::vector<IntervalMethod> intervals{IntervalMethod::Salganik, IntervalMethod::GileSS,
                                        IntervalMethod::Fast};
  /// Inclusion model behind the salganik and gile-ss intervals.
  InclusionMethod ci_inclusion = InclusionMethod::GileSS;
  std::size_t resamples = 1000;
  double level = 0.95;
  std::size_t networks = 30;
  std::size_t replicates_per_network = 50;
  /// Independent repetitions of the whole design (anova only).
  std::size_t repetitions = 1;
  std::uint64_t master_seed = 1;
  std::string output_dir;
  GileSsOptions gile;
};

// ---------------------------------------------------------------------------
// JSON

namespace detail {

template <class T>
std::vector<T> scalar_or_list(const nlohmann::json& j) {
  if (j.is_array()) return j.get<std::vector<T>>();
  return {j.get<T>()};
}

inline void reject_unknown(const nlohmann::json& j, std::initializer_list<const char*> known,
                           const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : known) ok = ok || it.key() == k;
    if (!ok) throw std::invalid_argument("unknown key '" + it.key() + "' in " + where);
  }
}

}  // namespace detail

inline SamplerSpec sampler_spec_from_json(const nlohmann::json& j) {
  detail::reject_unknown(j, {"label", "method", "coupons", "with_replacement", "fire_prob"},
                         "sampler method");
  SamplerSpec s;
  s.kind = parse_sampler_kind(j.at("method").get<std::string>());
  s.coupons = j.value("coupons", s.coupons);
  s.with_replacement = j.value("with_replacement", false);
  s.fire_prob = j.value("fire_prob", s.fire_prob);
  if (s.kind == SamplerKind::WRW)
    throw std::invalid_argument("wrw needs edge weights and is not available in experiments");
  if (j.contains("label")) {
    s.label = j.at("label").get<std::string>();
  } else {
    s.label = to_string(s.kind);
    if (s.kind == SamplerKind::RDS || s.kind == SamplerKind::SnowballN)
      s.label += std::to_string(s.coupons);
    if (s.kind == SamplerKind::RDS && s.with_replacement) s.label += "-wr";
  }
  return s;
}

inline nlohmann::json to_json(const SamplerSpec& s) {
  return {{"label", s.label},
          {"method", to_string(s.kind)},
          {"coupons", s.coupons},
          {"with_replacement", s.with_replacement},
          {"fire_prob", s.fire_prob}};
}

/// Parses and validates a spec. Missing keys keep their defaults.
inline ExperimentSpec spec_from_json(const nlohmann::json& j) {
  using detail::scalar_or_list;
  detail::reject_unknown(j,
                         {"experiment", "netgen", "sampler", "inclusion", "intervals",
                          "ci_inclusion", "resamples", "level", "cases", "networks",
                          "replicates_per_network", "repetitions", "master_seed", "output_dir",
                          "gile"},
                         "spec");
  ExperimentSpec s;
  s.experiment = parse_experiment_kind(j.at("experiment").get<std::string>());
  if (j.contains("netgen")) {
    const auto& n = j.at("netgen");
    detail::reject_unknown(n, {"population", "prop_a", "mean_degree", "homophily", "activity"},
                           "netgen");
    if (n.contains("population")) s.netgen.population = scalar_or_list<std::size_t>(n["population"]);
    if (n.contains("prop_a")) s.netgen.prop_a = scalar_or_list<double>(n["prop_a"]);
    if (n.contains("mean_degree")) s.netgen.mean_degree = scalar_or_list<double>(n["mean_degree"]);
    if (n.contains("homophily")) s.netgen.homophily = scalar_or_list<double>(n["homophily"]);
    if (n.contains("activity")) s.netgen.activity = scalar_or_list<double>(n["activity"]);
  }
  if (j.contains("sampler")) {
    const auto& sm = j.at("sampler");
    detail::reject_unknown(sm, {"methods", "proportions", "sample_size", "chains", "seed_selection"},
                           "sampler");
    if (sm.contains("methods")) {
      s.samplers.clear();
      for (const auto& m : sm["methods"]) s.samplers.push_back(sampler_spec_from_json(m));
    }
    if (sm.contains("proportions")) s.proportions = scalar_or_list<double>(sm["proportions"]);
    if (sm.contains("sample_size")) s.sample_size = sm["sample_size"].get<std::size_t>();
    s.chains = sm.value("chains", s.chains);
    if (sm.contains("seed_selection"))
      s.seed_selection = parse_seed_selection(sm["seed_selection"].get<std::string>());
  }
  if (j.contains("inclusion")) {
    s.inclusion.clear();
    for (const auto& m : scalar_or_list<std::string>(j["inclusion"]))
      s.inclusion.push_back(parse_inclusion_method(m));
  }
  if (j.contains("intervals")) {
    s.intervals.clear();
    for (const auto& m : scalar_or_list<std::string>(j["intervals"]))
      s.intervals.push_back(parse_interval_method(m));
  }
  if (j.contains("ci_inclusion"))
    s.ci_inclusion = parse_inclusion_method(j["ci_inclusion"].get<std::string>());
  s.resamples = j.value("resamples", s.resamples);
  s.level = j.value("level", s.level);
  if (j.contains("cases")) {
    for (const auto& c : j["cases"]) {
      detail::reject_unknown(c,
                             {"label", "population", "prop_a", "mean_degree", "homophily",
                              "activity", "proportion"},
                             "case");
      CaseSpec cs;
      cs.label = c.at("label").get<std::string>();
      if (c.contains("population")) cs.population = c["population"].get<std::size_t>();
      if (c.contains("prop_a")) cs.prop_a = c["prop_a"].get<double>();
      if (c.contains("mean_degree")) cs.mean_degree = c["mean_degree"].get<double>();
      if (c.contains("homophily")) cs.homophily = c["homophily"].get<double>();
      if (c.contains("activity")) cs.activity = c["activity"].get<double>();
      if (c.contains("proportion")) cs.proportion = c["proportion"].get<double>();
      s.cases.push_back(cs);
    }
  }
  s.networks = j.value("networks", s.networks);
  s.replicates_per_network = j.value("replicates_per_network", s.replicates_per_network);
  s.repetitions = j.value("repetitions", s.repetitions);
  s.master_seed = j.value("master_seed", s.master_seed);
  s.output_dir = j.value("output_dir", s.output_dir);
  if (j.contains("gile")) {
    const auto& gj = j["gile"];
    detail::reject_unknown(gj, {"rounds", "max_iter", "tol"}, "gile");
    s.gile.rounds = gj.value("rounds", s.gile.rounds);
    s.gile.max_iter = gj.value("max_iter", s.gile.max_iter);
    s.gile.tol = gj.value("tol", s.gile.tol);
  }
  return s;
}

inline nlohmann::json to_json(const ExperimentSpec& s) {
  nlohmann::json j;
  j["experiment"] = to_string(s.experiment);
  j["netgen"] = {{"population", s.netgen.population},
                 {"prop_a", s.netgen.prop_a},
                 {"mean_degree", s.netgen.mean_degree},
                 {"homophily", s.netgen.homophily},
                 {"activity", s.netgen.activity}};
  nlohmann::json methods = nlohmann::json::array();
  for (const auto& m : s.samplers) methods.push_back(to_json(m));
  j["sampler"] = {{"methods", methods},
                  {"proportions", s.proportions},
                  {"chains", s.chains},
                  {"seed_selection", to_string(s.seed_selection)}};
  if (s.sample_size) j["sampler"]["sample_size"] = *s.sample_size;
  std::vector<std::string> inc, iv;
  for (auto m : s.inclusion) inc.push_back(to_string(m));
  for (auto m : s.intervals) iv.push_back(to_string(m));
  j["inclusion"] = inc;
  j["intervals"] = iv;
  j["ci_inclusion"] = to_string(s.ci_inclusion);
  j["resamples"] = s.resamples;
  j["level"] = s.level;
  if (!s.cases.empty()) {
    nlohmann::json cases = nlohmann::json::array();
    for (const auto& c : s.cases) {
      nlohmann::json cj{{"label", c.label}};
      if (c.population) cj["population"] = *c.population;
      if (c.prop_a) cj["prop_a"] = *c.prop_a;
      if (c.mean_degree) cj["mean_degree"] = *c.mean_degree;
      if (c.homophily) cj["homophily"] = *c.homophily;
      if (c.activity) cj["activity"] = *c.activity;
      if (c.proportion) cj["proportion"] = *c.proportion;
      cases.push_back(cj);
    }
    j["cases"] = cases;
  }
  j["networks"] = s.networks;
  j["replicates_per_network"] = s.replicates_per_network;
  j["repetitions"] = s.repetitions;
  j["master_seed"] = s.master_seed;
  j["output_dir"] = s.output_dir;
  j["gile"] = {{"rounds", s.gile.rounds}, {"max_iter", s.gile.max_iter}, {"tol", s.gile.tol}};
  return j;
}

inline ExperimentSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open spec file " + path);
  return spec_from_json(nlohmann::json::parse(in));
}

/// The full-scale design: 100 networks with 100 samples each. Coverage and
/// ANOVA designs are left as specified.
inline ExperimentSpec full_scale(ExperimentSpec s) {
  switch (s.experiment) {
    case ExperimentKind::CoverageStudy:
    case ExperimentKind::Anova: break;
    default:
      s.networks = 100;
      s.replicates_per_network = 100;
  }
  return s;
}

inline void validate(const ExperimentSpec& s) {
  const auto& n = s.netgen;
  if (n.population.empty() || n.prop_a.empty() || n.mean_degree.empty() ||
      n.homophily.empty() || n.activity.empty())
    throw std::invalid_argument("netgen grid axes must be non-empty");
  if (s.samplers.empty()) throw std::invalid_argument("sampler list must be non-empty");
  if (!s.sample_size && s.proportions.empty() && s.cases.empty())
    throw std::invalid_argument("need sampling proportions or a sample size");
  for (double f : s.proportions)
    if (!(f > 0.0)) throw std::invalid_argument("sampling proportions must be positive");
  if (s.networks < 1) throw std::invalid_argument("networks must be at least 1");
  if (s.replicates_per_network < 1) throw std::invalid_argument("replicates must be at least 1");
  if (s.chains < 1) throw std::invalid_argument("chains must be at least 1");
  switch (s.experiment) {
    case ExperimentKind::ErrorCurve:
    case ExperimentKind::ErrorDecomposition:
    case ExperimentKind::MethodComparison:
    case ExperimentKind::PopulationSweep:
      if (s.networks * s.replicates_per_network < 2)
        throw std::invalid_argument("error statistics need at least 2 replicates");
      if (s.inclusion.empty()) throw std::invalid_argument("inclusion list must be non-empty");
      break;
    case ExperimentKind::Anova:
      if (s.networks < 2 || s.replicates_per_network < 2)
        throw std::invalid_argument("anova needs at least 2 networks and 2 replicates");
      if (s.repetitions < 1) throw std::invalid_argument("repetitions must be at least 1");
      if (s.inclusion.empty()) throw std::invalid_argument("inclusion list must be non-empty");
      break;
    case ExperimentKind::CoverageStudy:
      if (s.intervals.empty()) throw std::invalid_argument("interval list must be non-empty");
      if (s.resamples < 2) throw std::invalid_argument("resamples must be at least 2");
      if (!(s.level > 0.0 && s.level < 1.0)) throw std::invalid_argument("level outside (0,1)");
      break;
    case ExperimentKind::CorrelationStudy: break;
  }
}

// ---------------------------------------------------------------------------
// Settings

/// One point of the network/proportion grid.
struct Setting {
  std::string label;
  NetgenParams netgen;  // rng_seed unused
  double proportion = 0.0;
  std::size_t target_size = 0;
};

/// Expands cases, or the full grid when no cases are given. Settings whose
/// network parameters are infeasible are dropped and reported in `warnings`.
inline std::vector<Setting> expand_settings(const ExperimentSpec& s,
                                            std::vector<std::string>& warnings) {
  std::vector<Setting> raw;
  auto make = [&](std::string label, NetgenParams p, std::optional<double> f) {
    Setting st;
    st.label = std::move(label);
    st.netgen = p;
    if (s.sample_size) {
      st.target_size = *s.sample_size;
      st.proportion = static_cast<double>(st.target_size) / static_cast<double>(p.population);
    } else {
      st.proportion = f.value();
      st.target_size = static_cast<std::size_t>(
          std::llround(st.proportion * static_cast<double>(p.population)));
    }
    raw.push_back(st);
  };

  const auto& g = s.netgen;
  if (!s.cases.empty()) {
    for (const auto& c : s.cases) {
      NetgenParams p;
      p.population = c.population.value_or(g.population.front());
      p.prop_a = c.prop_a.value_or(g.prop_a.front());
      p.mean_degree = c.mean_degree.value_or(g.mean_degree.front());
      p.homophily = c.homophily.value_or(g.homophily.front());
      p.activity = c.activity.value_or(g.activity.front());
      std::optional<double> f = c.proportion;
      if (!f && !s.sample_size) {
        if (s.proportions.empty()) throw std::invalid_argument("case '" + c.label + "' has no proportion");
        f = s.proportions.front();
      }
      make(c.label, p, f);
    }
  } else {
    const std::vector<std::optional<double>> fs =
        s.sample_size ? std::vector<std::optional<double>>{std::nullopt}
                      : std::vector<std::optional<double>>(s.proportions.begin(), s.proportions.end());
    for (auto pop : g.population)
      for (double pa : g.prop_a)
        for (double d : g.mean_degree)
          for (double h : g.homophily)
            for (double a : g.activity)
              for (const auto& f : fs) make("", NetgenParams{pop, pa, d, h, a, 0}, f);
  }

  std::vector<Setting> out;
  for (auto& st : raw) {
    std::ostringstream where;
    where << "population=" << st.netgen.population << " prop_a=" << st.netgen.prop_a
          << " mean_degree=" << st.netgen.mean_degree << " homophily=" << st.netgen.homophily
          << " activity=" << st.netgen.activity;
    std::string why;
    try {
      if (block_model(st.netgen).clamped) why = "edge probabilities outside [0,1]";
    } catch (const std::invalid_argument& e) {
      why = e.what();
    }
    if (why.empty() && st.target_size == 0) why = "sample size rounds to 0";
    if (!why.empty()) {
      warnings.push_back("skipping " + where.str() + ": " + why);
      continue;
    }
    out.push_back(st);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Shared per-network work

namespace detail {

// Stream tags keep the counter paths of different purposes disjoint.
enum StreamTag : std::uint64_t {
  kNetworkStream = 1,
  kSamplerStream = 2,
  kFitStream = 3,
  kIntervalStream = 4,
  kAnovaNetworkStream = 5,
  kAnovaSamplerStream = 6,
};

struct Population {
  Graph graph;
  std::vector<NodeId> giant;
  double truth = 0.0;  // share of category A
};

inline Population make_population(const NetgenParams& base, std::uint64_t seed) {
  NetgenParams p = base;
  p.rng_seed = seed;
  Population pop{generate(p), {}, 0.0};
  auto comps = connected_components(pop.graph);
  std::size_t gi = 0;
  for (std::size_t i = 1; i < comps.size(); ++i)
    if (comps[i].size() > comps[gi].size()) gi = i;
  pop.giant = std::move(comps[gi]);
  pop.truth = static_cast<double>(category_counts(pop.graph).a) /
              static_cast<double>(pop.graph.num_nodes());
  return pop;
}

inline SamplerConfig sampler_config(const ExperimentSpec& s, const SamplerSpec& m,
                                    const Setting& st, const Population& pop,
                                    std::uint64_t seed) {
  SamplerConfig c;
  c.kind = m.kind;
  c.coupons_n = m.coupons;
  c.with_replacement = m.with_replacement;
  c.fire_prob = m.fire_prob;
  c.num_chains = s.chains;
  c.seed_selection = s.seed_selection;
  c.rng_seed = seed;
  c.target_size = st.target_size;
  // Traversals cannot outgrow the component they start in.
  if (!m.records_revisits() && m.kind != SamplerKind::UniformNode &&
      m.kind != SamplerKind::UniformLink)
    c.target_size = std::min(c.target_size, pop.giant.size());
  if (m.kind == SamplerKind::UniformLink) {
    std::size_t covered = 0;
    for (NodeId v = 0; v < pop.graph.num_nodes(); ++v) covered += pop.graph.degree(v) > 0;
    c.target_size = std::min(c.target_size, covered);
  }
  c.num_chains = std::min(c.num_chains, c.target_size);
  return c;
}

/// Weighting used for a sampler. Traversal samplers use the requested
/// inclusion methods; the others have a known stationary law.
inline std::vector<std::string> weightings(const SamplerSpec& m,
                                           const std::vector<InclusionMethod>& inclusion) {
  switch (m.kind) {
    case SamplerKind::UniformNode:
    case SamplerKind::MHRW: return {"uniform"};
    case SamplerKind::UniformLink:
    case SamplerKind::SRW: return {to_string(InclusionMethod::WithReplacement)};
    case SamplerKind::RDS:
      if (m.with_replacement) return {to_string(InclusionMethod::WithReplacement)};
      break;
    default: break;
  }
  std::vector<std::string> out;
  for (auto i : inclusion)
    if (i != InclusionMethod::WithReplacement) out.push_back(to_string(i));
  if (out.empty()) out.push_back(to_string(InclusionMethod::WithReplacement));
  return out;
}

inline double weighted_estimate(const Graph& g, const SampleTrace& t, const std::string& weighting,
                                std::size_t population, const GileSsOptions& gile, Rng& rng) {
  if (weighting == "uniform") {
    double s = 0.0;
    const auto recs = t.estimation_records();
    for (const auto& r : recs) s += g.category(r.node) == Category::A ? 1.0 : 0.0;
    return s / static_cast<double>(recs.size());
  }
  InclusionFitOptions fo;
  fo.gile = gile;
  const auto method = parse_inclusion_method(weighting);
  // The degree-proportional law also applies to link samples, whose config
  // is not a with-replacement one.
  const auto model = method == InclusionMethod::WithReplacement
                         ? pi_with_replacement(sampled_degrees(g, t))
                         : fit_inclusion(g, t, method, population, fo, rng);
  return hansen_hurwitz_mean(g, t, attributes::prop_a(), model);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Error studies (curves, decomposition, method comparison, population sweep)

struct ErrorRow {
  Setting setting;
  SamplerSpec sampler;
  std::string weighting;
  std::size_t networks = 0;
  std::size_t replicates = 0;
  double true_value = 0.0;
  ErrorReport report;
  /// Monte-Carlo 95% interval of the relative error over networks.
  double rel_error_lo = 0.0;
  double rel_error_hi = 0.0;
  /// Mean squared error within each network, in network order.
  std::vector<double> per_network_mse;
  double mean_distinct = 0.0;
  double giant_fraction = 0.0;
};

struct ErrorStudy {
  std::vector<ErrorRow> rows;
  std::vector<std::string> warnings;
};

inline ErrorStudy run_error_study(const ExperimentSpec& spec, std::size_t threads = 1) {
  validate(spec);
  ErrorStudy out;
  const auto settings = expand_settings(spec, out.warnings);
  const std::size_t nets = spec.networks, reps = spec.replicates_per_network;

  // estimates[task][method cell][replicate], task = setting * nets + network.
  struct NetworkResult {
    std::vector<std::vector<double>> estimates;
    std::vector<double> distinct;
    double truth = 0.0;
    double giant_fraction = 0.0;
  };
  std::vector<std::vector<std::pair<std::size_t, std::string>>> cells(settings.size());
  for (std::size_t si = 0; si < settings.size(); ++si)
    for (std::size_t m = 0; m < spec.samplers.size(); ++m)
      for (const auto& w : detail::weightings(spec.samplers[m], spec.inclusion))
        cells[si].emplace_back(m, w);

  std::vector<NetworkResult> results(settings.size() * nets);
  parallel_for(results.size(), threads, [&](std::size_t task) {
    const std::size_t si = task / nets, net = task % nets;
    const Setting& st = settings[si];
    const auto pop = detail::make_population(
        st.netgen, derive_seed(spec.master_seed, {detail::kNetworkStream, si, net}));
    NetworkResult& res = results[task];
    res.truth = pop.truth;
    res.giant_fraction = static_cast<double>(pop.giant.size()) /
                         static_cast<double>(pop.graph.num_nodes());
    res.estimates.assign(cells[si].size(), {});
    res.distinct.assign(cells[si].size(), 0.0);
    for (std::size_t m = 0; m < spec.samplers.size(); ++m) {
      for (std::size_t r = 0; r < reps; ++r) {
        const auto cfg = detail::sampler_config(
            spec, spec.samplers[m], st, pop,
            derive_seed(spec.master_seed, {detail::kSamplerStream, si, net, r, m}));
        const SampleTrace t = run_sampler(pop.graph, cfg, {}, pop.giant);
        for (std::size_t c = 0; c < cells[si].size(); ++c) {
          if (cells[si][c].first != m) continue;
          Rng fit_rng = make_rng(derive_seed(spec.master_seed, {detail::kFitStream, si, net, r, c}));
          res.estimates[c].push_back(detail::weighted_estimate(
              pop.graph, t, cells[si][c].second, st.netgen.population, spec.gile, fit_rng));
          res.distinct[c] += static_cast<double>(t.distinct_count());
        }
      }
    }
  });

  for (std::size_t si = 0; si < settings.size(); ++si) {
    for (std::size_t c = 0; c < cells[si].size(); ++c) {
      ErrorRow row;
      row.setting = settings[si];
      row.sampler = spec.samplers[cells[si][c].first];
      row.weighting = cells[si][c].second;
      row.networks = nets;
      row.replicates = reps;
      std::vector<double> all;
      double truth = 0.0, giant = 0.0, distinct = 0.0;
      for (std::size_t net = 0; net < nets; ++net) {
        const auto& res = results[si * nets + net];
        truth += res.truth;
        giant += res.giant_fraction;
        distinct += res.distinct[c];
        double mse = 0.0;
        for (double e : res.estimates[c]) {
          all.push_back(e);
          mse += (e - res.truth) * (e - res.truth);
        }
        row.per_network_mse.push_back(mse / static_cast<double>(reps));
      }
      row.true_value = truth / static_cast<double>(nets);
      row.giant_fraction = giant / static_cast<double>(nets);
      row.mean_distinct = distinct / static_cast<double>(nets * reps);
      row.report = error_report(all, row.true_value);
      // Interval for the pooled mse over networks, mapped to relative error.
      if (nets >= 2) {
        const double mean = detail::mean_of(row.per_network_mse);
        const double half = 1.959963984540054 * detail::sd_of(row.per_network_mse) /
                            std::sqrt(static_cast<double>(nets));
        row.rel_error_lo = std::sqrt(std::max(0.0, mean - half)) / row.true_value;
        row.rel_error_hi = std::sqrt(mean + half) / row.true_value;
      } else {
        row.rel_error_lo = row.rel_error_hi = row.report.relative_mean_error;
      }
      out.rows.push_back(std::move(row));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Coverage study

struct CoverageRow {
  Setting setting;
  SamplerSpec sampler;
  IntervalMethod interval = IntervalMethod::Naive;
  std::size_t trials = 0;
  double true_value = 0.0;
  double coverage = 0.0;
  double coverage_lo = 0.0;
  double coverage_hi = 0.0;
  double mean_sd = 0.0;
  double mean_width = 0.0;
  double mean_point = 0.0;
  std::size_t flagged_trials = 0;
};

struct CoverageStudy {
  std::vector<CoverageRow> rows;
  std::vector<std::string> warnings;
};

inline CoverageStudy run_coverage_study(const ExperimentSpec& spec, std::size_t threads = 1) {
  validate(spec);
  CoverageStudy out;
  const auto settings = expand_settings(spec, out.warnings);
  const std::size_t nets = spec.networks, reps = spec.replicates_per_network;
  const std::size_t nm = spec.samplers.size(), ni = spec.intervals.size();

  struct Trial {
    double truth = 0.0;
    std::vector<IntervalResult> intervals;  // [sampler * ni + interval]
  };
  std::vector<std::vector<Trial>> results(settings.size() * nets);
  parallel_for(results.size(), threads, [&](std::size_t task) {
    const std::size_t si = task / nets, net = task % nets;
    const Setting& st = settings[si];
    const auto pop = detail::make_population(
        st.netgen, derive_seed(spec.master_seed, {detail::kNetworkStream, si, net}));
    const auto x = attributes::prop_a();
    InclusionFitOptions fo;
    fo.gile = spec.gile;
    BootstrapOptions bo{spec.resamples, spec.level};
    auto& trials = results[task];
    for (std::size_t r = 0; r < reps; ++r) {
      Trial trial;
      trial.truth = pop.truth;
      for (std::size_t m = 0; m < nm; ++m) {
        const auto cfg = detail::sampler_config(
            spec, spec.samplers[m], st, pop,
            derive_seed(spec.master_seed, {detail::kSamplerStream, si, net, r, m}));
        const SampleTrace t = run_sampler(pop.graph, cfg, {}, pop.giant);
        std::optional<InclusionModel> model;
        auto fitted = [&]() -> const InclusionModel& {
          if (!model) {
            Rng fit_rng = make_rng(derive_seed(spec.master_seed, {detail::kFitStream, si, net, r, m}));
            const auto method = t.config.records_revisits() ? InclusionMethod::WithReplacement
                                                            : spec.ci_inclusion;
            model = fit_inclusion(pop.graph, t, method, st.netgen.population, fo, fit_rng);
          }
          return *model;
        };
        for (std::size_t i = 0; i < ni; ++i) {
          Rng rng = make_rng(derive_seed(spec.master_seed, {detail::kIntervalStream, si, net, r, m, i}));
          switch (spec.intervals[i]) {
            case IntervalMethod::Naive: {
              std::vector<double> xs;
              for (const auto& rec : t.estimation_records())
                xs.push_back(x(pop.graph.category(rec.node), pop.graph.degree(rec.node)));
              trial.intervals.push_back(naive_ci(xs, spec.level));
              break;
            }
            case IntervalMethod::Salganik:
              trial.intervals.push_back(salganik_ci(pop.graph, t, x, fitted(), bo, rng));
              break;
            case IntervalMethod::GileSS:
              trial.intervals.push_back(
                  gile_ss_ci(pop.graph, t, x, fitted(), st.netgen.population, bo, rng));
              break;
            case IntervalMethod::Fast: {
              FastCiOptions fc;
              fc.bootstrap = bo;
              fc.fit = fo;
              trial.intervals.push_back(fast_ci(pop.graph, t, x, st.netgen.population, fc, rng));
              break;
            }
          }
        }
      }
      trials.push_back(std::move(trial));
    }
  });

  for (std::size_t si = 0; si < settings.size(); ++si) {
    for (std::size_t m = 0; m < nm; ++m) {
      for (std::size_t i = 0; i < ni; ++i) {
        CoverageRow row;
        row.setting = settings[si];
        row.sampler = spec.samplers[m];
        row.interval = spec.intervals[i];
        double hits = 0.0, truth = 0.0;
        for (std::size_t net = 0; net < nets; ++net) {
          for (const auto& trial : results[si * nets + net]) {
            const auto& iv = trial.intervals[m * ni + i];
            ++row.trials;
            truth += trial.truth;
            hits += iv.contains(trial.truth) ? 1.0 : 0.0;
            row.mean_sd += iv.se;
            row.mean_width += iv.width();
            row.mean_point += iv.point;
            if (!iv.flags.empty()) ++row.flagged_trials;
          }
        }
        const double n = static_cast<double>(row.trials);
        row.true_value = truth / n;
        row.coverage = hits / n;
        row.mean_sd /= n;
        row.mean_width /= n;
        row.mean_point /= n;
        const double half = 1.959963984540054 * std::sqrt(row.coverage * (1.0 - row.coverage) / n);
        row.coverage_lo = std::max(0.0, row.coverage - half);
        row.coverage_hi = std::min(1.0, row.coverage + half);
        out.rows.push_back(std::move(row));
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// ANOVA

struct AnovaRow {
  Setting setting;
  SamplerSpec sampler;
  std::string weighting;
  std::size_t repetition = 0;
  std::size_t networks = 0;
  std::size_t replicates = 0;
  AnovaResult result;
};

struct AnovaStudy {
  std::vector<AnovaRow> rows;
  std::vector<std::string> warnings;
};

/// One-way ANOVA of the estimates grouped by network, for the first sampler
/// and first weighting, repeated `repetitions` times.
inline AnovaStudy run_anova(const ExperimentSpec& spec, std::size_t threads = 1) {
  validate(spec);
  AnovaStudy out;
  const auto settings = expand_settings(spec, out.warnings);
  const std::size_t nets = spec.networks, reps = spec.replicates_per_network;
  const std::size_t nrep = spec.repetitions;
  const SamplerSpec& sampler = spec.samplers.front();
  const std::string weighting = detail::weightings(sampler, spec.inclusion).front();

  std::vector<std::vector<double>> groups(settings.size() * nrep * nets);
  parallel_for(groups.size(), threads, [&](std::size_t task) {
    const std::size_t net = task % nets;
    const std::size_t rep = (task / nets) % nrep;
    const std::size_t si = task / (nets * nrep);
    const Setting& st = settings[si];
    const auto pop = detail::make_population(
        st.netgen, derive_seed(spec.master_seed, {detail::kAnovaNetworkStream, si, rep, net}));
    for (std::size_t r = 0; r < reps; ++r) {
      const std::uint64_t seed =
          derive_seed(spec.master_seed, {detail::kAnovaSamplerStream, si, rep, net, r});
      const auto cfg = detail::sampler_config(spec, sampler, st, pop, seed);
      const SampleTrace t = run_sampler(pop.graph, cfg, {}, pop.giant);
      Rng fit_rng = make_rng(derive_seed(seed, {detail::kFitStream}));
      groups[task].push_back(detail::weighted_estimate(pop.graph, t, weighting,
                                                       st.netgen.population, spec.gile, fit_rng));
    }
  });

  for (std::size_t si = 0; si < settings.size(); ++si) {
    for (std::size_t rep = 0; rep < nrep; ++rep) {
      const auto first = groups.begin() + static_cast<std::ptrdiff_t>((si * nrep + rep) * nets);
      std::vector<std::vector<double>> g(first, first + static_cast<std::ptrdiff_t>(nets));
      AnovaRow row{settings[si], sampler, weighting, rep, nets, reps, one_way_anova(g)};
      out.rows.push_back(std::move(row));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Correlation between bootstrap and closed-form inclusion probabilities

struct CorrelationRow {
  Setting setting;
  SamplerSpec sampler;
  std::size_t samples = 0;
  std::size_t degenerate = 0;  // samples with a constant pi vector
  double mean_correlation = 0.0;
  double min_correlation = 0.0;
  double share_above_095 = 0.0;
};

struct CorrelationStudy {
  std::vector<CorrelationRow> rows;
  std::vector<std::string> warnings;
};

/// Pearson correlation, over the sampled nodes of one trace, of the
/// successive-sampling and direct inclusion probabilities.
inline std::optional<double> inclusion_correlation(const Graph& g, const SampleTrace& t,
                                                   std::size_t population,
                                                   const GileSsOptions& gile, Rng& rng) {
  InclusionFitOptions fo;
  fo.gile = gile;
  const auto ss = fit_inclusion(g, t, InclusionMethod::GileSS, population, fo, rng);
  const auto kd = fit_inclusion(g, t, InclusionMethod::KurantDirect, population, fo, rng);
  std::vector<double> a, b;
  for (const auto& r : t.estimation_records()) {
    const std::size_t k = g.degree(r.node);
    a.push_back(ss.pi(k));
    b.push_back(kd.pi(k));
  }
  try {
    return correlation(a, b);
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
}

inline CorrelationStudy run_correlation_study(const ExperimentSpec& spec, std::size_t threads = 1) {
  validate(spec);
  CorrelationStudy out;
  const auto settings = expand_settings(spec, out.warnings);
  const std::size_t nets = spec.networks, reps = spec.replicates_per_network;
  const std::size_t nm = spec.samplers.size();
  for (const auto& m : spec.samplers)
    if (m.records_revisits())
      throw std::invalid_argument("correlation study needs traversal samplers");

  std::vector<std::vector<std::optional<double>>> results(settings.size() * nets);
  parallel_for(results.size(), threads, [&](std::size_t task) {
    const std::size_t si = task / nets, net = task % nets;
    const Setting& st = settings[si];
    const auto pop = detail::make_population(
        st.netgen, derive_seed(spec.master_seed, {detail::kNetworkStream, si, net}));
    for (std::size_t m = 0; m < nm; ++m) {
      for (std::size_t r = 0; r < reps; ++r) {
        const auto cfg = detail::sampler_config(
            spec, spec.samplers[m], st, pop,
            derive_seed(spec.master_seed, {detail::kSamplerStream, si, net, r, m}));
        const SampleTrace t = run_sampler(pop.graph, cfg, {}, pop.giant);
        Rng rng = make_rng(derive_seed(spec.master_seed, {detail::kFitStream, si, net, r, m}));
        results[task].push_back(
            inclusion_correlation(pop.graph, t, st.netgen.population, spec.gile, rng));
      }
    }
  });

  for (std::size_t si = 0; si < settings.size(); ++si) {
    for (std::size_t m = 0; m < nm; ++m) {
      CorrelationRow row;
      row.setting = settings[si];
      row.sampler = spec.samplers[m];
      std::vector<double> cs;
      for (std::size_t net = 0; net < nets; ++net)
        for (std::size_t r = 0; r < reps; ++r) {
          const auto& c = results[si * nets + net][m * reps + r];
          if (c) cs.push_back(*c); else ++row.degenerate;
        }
      row.samples = cs.size();
      if (!cs.empty()) {
        row.mean_correlation = detail::mean_of(cs);
        row.min_correlation = *std::min_element(cs.begin(), cs.end());
        row.share_above_095 =
            static_cast<double>(std::count_if(cs.begin(), cs.end(), [](double c) { return c > 0.95; })) /
            static_cast<double>(cs.size());
      } else {
        out.warnings.push_back("all inclusion vectors constant for one setting; correlation undefined");
      }
      out.rows.push_back(std::move(row));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Output

namespace detail {

inline std::string fmt(double v) { return format_double(v); }

inline std::string setting_header() {
  return "experiment,case,population,prop_a,mean_degree,homophily,activity,proportion,"
         "sample_size,sampler,method,coupons,with_replacement,chains,seed_selection,master_seed";
}

inline std::string setting_cells(const ExperimentSpec& spec, const Setting& st,
                                 const SamplerSpec& m) {
  std::ostringstream os;
  os << to_string(spec.experiment) << ',' << st.label << ',' << st.netgen.population << ','
     << fmt(st.netgen.prop_a) << ',' << fmt(st.netgen.mean_degree) << ','
     << fmt(st.netgen.homophily) << ',' << fmt(st.netgen.activity) << ',' << fmt(st.proportion)
     << ',' << st.target_size << ',' << m.label << ',' << to_string(m.kind) << ',' << m.coupons
     << ',' << (m.records_revisits() ? 1 : 0) << ',' << spec.chains << ','
     << to_string(spec.seed_selection) << ',' << spec.master_seed;
  return os.str();
}

}  // namespace detail

inline std::string error_csv(const ExperimentSpec& spec, const std::vector<ErrorRow>& rows) {
  using detail::fmt;
  std::ostringstream os;
  os << detail::setting_header()
     << ",weighting,networks,replicates,true_value,rel_error,rel_error_lo,rel_error_hi,rms_error,"
        "bias,sd,median_abs_error,mean_distinct,giant_fraction\n";
  for (const auto& r : rows) {
    os << detail::setting_cells(spec, r.setting, r.sampler) << ',' << r.weighting << ','
       << r.networks << ',' << r.replicates << ',' << fmt(r.true_value) << ','
       << fmt(r.report.relative_mean_error) << ',' << fmt(r.rel_error_lo) << ','
       << fmt(r.rel_error_hi) << ',' << fmt(r.report.rms_error) << ',' << fmt(r.report.bias)
       << ',' << fmt(r.report.standard_deviation) << ',' << fmt(r.report.median_abs_error) << ','
       << fmt(r.mean_distinct) << ',' << fmt(r.giant_fraction) << '\n';
  }
  return os.str();
}

inline std::string coverage_csv(const ExperimentSpec& spec, const std::vector<CoverageRow>& rows) {
  using detail::fmt;
  std::ostringstream os;
  os << detail::setting_header()
     << ",interval,ci_inclusion,level,resamples,trials,true_value,coverage,coverage_lo,"
        "coverage_hi,mean_sd,mean_width,mean_point,flagged_trials\n";
  for (const auto& r : rows) {
    os << detail::setting_cells(spec, r.setting, r.sampler) << ',' << to_string(r.interval) << ','
       << to_string(spec.ci_inclusion) << ',' << fmt(spec.level) << ',' << spec.resamples << ','
       << r.trials << ',' << fmt(r.true_value) << ',' << fmt(r.coverage) << ','
       << fmt(r.coverage_lo) << ',' << fmt(r.coverage_hi) << ',' << fmt(r.mean_sd) << ','
       << fmt(r.mean_width) << ',' << fmt(r.mean_point) << ',' << r.flagged_trials << '\n';
  }
  return os.str();
}

inline std::string anova_csv(const ExperimentSpec& spec, const std::vector<AnovaRow>& rows) {
  using detail::fmt;
  std::ostringstream os;
  os << detail::setting_header()
     << ",weighting,repetition,networks,replicates,f_statistic,df_between,df_within,right_tail_p\n";
  for (const auto& r : rows) {
    os << detail::setting_cells(spec, r.setting, r.sampler) << ',' << r.weighting << ','
       << r.repetition << ',' << r.networks << ',' << r.replicates << ','
       << fmt(r.result.f_statistic) << ',' << fmt(r.result.df_between) << ','
       << fmt(r.result.df_within) << ',' << fmt(r.result.right_tail_p) << '\n';
  }
  return os.str();
}

inline std::string correlation_csv(const ExperimentSpec& spec,
                                   const std::vector<CorrelationRow>& rows) {
  using detail::fmt;
  std::ostringstream os;
  os << detail::setting_header()
     << ",networks,replicates,samples,degenerate,mean_correlation,min_correlation,"
        "share_above_095\n";
  for (const auto& r : rows) {
    os << detail::setting_cells(spec, r.setting, r.sampler) << ',' << spec.networks << ','
       << spec.replicates_per_network << ',' << r.samples << ',' << r.degenerate << ','
       << fmt(r.mean_correlation) << ',' << fmt(r.min_correlation) << ','
       << fmt(r.share_above_095) << '\n';
  }
  return os.str();
}

namespace detail {

inline std::string series_name(const SamplerSpec& m, const std::string& weighting) {
  return m.label + " (" + weighting + ")";
}

inline std::string panel_title(const NetgenParams& p) {
  std::ostringstream os;
  os << "|V|=" << p.population << " p=" << fmt(p.prop_a) << " d=" << fmt(p.mean_degree)
     << " h=" << fmt(p.homophily) << " a=" << fmt(p.activity);
  return os.str();
}

inline bool same_network(const NetgenParams& a, const NetgenParams& b) {
  return a.population == b.population && a.prop_a == b.prop_a &&
         a.mean_degree == b.mean_degree && a.homophily == b.homophily && a.activity == b.activity;
}

// Groups rows into panels by network parameters, in first-appearance order.
template <class Row>
std::vector<std::vector<const Row*>> panels(const std::vector<Row>& rows) {
  std::vector<std::vector<const Row*>> out;
  for (const auto& r : rows) {
    auto it = std::find_if(out.begin(), out.end(), [&](const auto& p) {
      return same_network(p.front()->setting.netgen, r.setting.netgen);
    });
    if (it == out.end()) out.push_back({&r});
    else it->push_back(&r);
  }
  return out;
}

inline void add_point(std::vector<PlotSeries>& series, const std::string& name, double x, double y) {
  auto it = std::find_if(series.begin(), series.end(), [&](const auto& s) { return s.name == name; });
  if (it == series.end()) series.push_back({name, {{x, y}}});
  else it->points.emplace_back(x, y);
}

}  // namespace detail

/// Figure analogues for a finished study. Throws on an empty table.
inline std::vector<std::pair<std::string, LinePlot>> error_plots(const ExperimentSpec& spec,
                                                                 const std::vector<ErrorRow>& rows) {
  if (rows.empty()) throw std::invalid_argument("no rows to plot");
  std::vector<std::pair<std::string, LinePlot>> out;
  const std::string kind = to_string(spec.experiment);
  if (spec.experiment == ExperimentKind::PopulationSweep) {
    LinePlot p{"relative error vs population", "population |V|", "relative error", {}};
    for (const auto& r : rows)
      detail::add_point(p.series, detail::series_name(r.sampler, r.weighting),
                        static_cast<double>(r.setting.netgen.population),
                        r.report.relative_mean_error);
    out.emplace_back(kind + ".svg", p);
    return out;
  }
  const auto groups = detail::panels(rows);
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const std::string title = detail::panel_title(groups[i].front()->setting.netgen);
    const std::string suffix = groups.size() > 1 ? "_" + std::to_string(i + 1) : "";
    if (spec.experiment == ExperimentKind::ErrorDecomposition) {
      LinePlot p{"bias and sd, " + title, "sampling proportion f", "proportion units", {}};
      for (const auto* r : groups[i]) {
        const auto name = detail::series_name(r->sampler, r->weighting);
        detail::add_point(p.series, name + " sd", r->setting.proportion, r->report.standard_deviation);
        detail::add_point(p.series, name + " bias", r->setting.proportion, r->report.bias);
      }
      out.emplace_back(kind + suffix + ".svg", p);
    } else {
      LinePlot p{"relative error, " + title, "sampling proportion f", "relative error", {}};
      for (const auto* r : groups[i])
        detail::add_point(p.series, detail::series_name(r->sampler, r->weighting),
                          r->setting.proportion, r->report.relative_mean_error);
      out.emplace_back(kind + suffix + ".svg", p);
    }
  }
  return out;
}

inline std::vector<std::pair<std::string, LinePlot>> correlation_plots(
    const std::vector<CorrelationRow>& rows) {
  if (rows.empty()) throw std::invalid_argument("no rows to plot");
  LinePlot p{"inclusion probability correlation", "sampling proportion f", "mean correlation", {}};
  for (const auto& r : rows) {
    if (r.samples == 0) continue;
    std::ostringstream name;
    name << r.sampler.label << " h=" << detail::fmt(r.setting.netgen.homophily)
         << " a=" << detail::fmt(r.setting.netgen.activity);
    detail::add_point(p.series, name.str(), r.setting.proportion, r.mean_correlation);
  }
  return {{"correlation-study.svg", p}};
}

struct ExperimentOutput {
  std::vector<std::string> files;
  std::vector<std::string> warnings;
  double wall_clock_seconds = 0.0;
};

namespace detail {

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace detail

/// Runs the experiment and writes <experiment>.csv, any plots and
/// manifest.json into `out_dir`. Only the manifest depends on the clock.
inline ExperimentOutput run_experiment(const ExperimentSpec& spec, const std::string& out_dir,
                                       std::size_t threads = 1) {
  namespace fs = std::filesystem;
  const auto start = std::chrono::steady_clock::now();
  const std::time_t started = std::time(nullptr);
  fs::create_directories(out_dir);
  ExperimentOutput out;
  const std::string kind = to_string(spec.experiment);
  const fs::path dir(out_dir);
  std::vector<std::pair<std::string, LinePlot>> plots;
  std::string csv;

  switch (spec.experiment) {
    case ExperimentKind::ErrorCurve:
    case ExperimentKind::ErrorDecomposition:
    case ExperimentKind::MethodComparison:
    case ExperimentKind::PopulationSweep: {
      auto study = run_error_study(spec, threads);
      out.warnings = study.warnings;
      csv = error_csv(spec, study.rows);
      if (!study.rows.empty()) plots = error_plots(spec, study.rows);
      break;
    }
    case ExperimentKind::CoverageStudy: {
      auto study = run_coverage_study(spec, threads);
      out.warnings = study.warnings;
      csv = coverage_csv(spec, study.rows);
      break;
    }
    case ExperimentKind::Anova: {
      auto study = run_anova(spec, threads);
      out.warnings = study.warnings;
      csv = anova_csv(spec, study.rows);
      break;
    }
    case ExperimentKind::CorrelationStudy: {
      auto study = run_correlation_study(spec, threads);
      out.warnings = study.warnings;
      csv = correlation_csv(spec, study.rows);
      if (!study.rows.empty()) plots = correlation_plots(study.rows);
      break;
    }
  }

  detail::write_text(dir / (kind + ".csv"), csv);
  out.files.push_back(kind + ".csv");
  for (const auto& [name, plot] : plots) {
    write_svg(plot, (dir / name).string());
    out.files.push_back(name);
  }
  out.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&started));
  nlohmann::json manifest{
      {"experiment", kind},
      {"master_seed", spec.master_seed},
      {"rdsim_version", kVersion},
      {"compiler", __VERSION__},
      {"threads", threads},
      {"started_utc", stamp},
      {"wall_clock_seconds", out.wall_clock_seconds},
      {"files", out.files},
      {"warnings", out.warnings},
      {"spec", to_json(spec)},
  };
  detail::write_text(dir / "manifest.json", manifest.dump(2) + "\n");
  out.files.push_back("manifest.json");
  return out;
}

}  // namespace rdsim
