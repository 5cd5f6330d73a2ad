// Command-line front end: network generation, sampling, inclusion
// probabilities, point estimates, confidence intervals and experiments.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rdsim/ci.hpp"
#include "rdsim/estimators.hpp"
#include "rdsim/graph.hpp"
#include "rdsim/harness.hpp"
#include "rdsim/inclusion.hpp"
#include "rdsim/netgen.hpp"
#include "rdsim/samplers.hpp"
#include "rdsim/trace_io.hpp"

namespace {

using namespace rdsim;

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

// Writes to `path`, or stdout when it is empty or "-".
template <class Fn>
void emit(const std::string& path, Fn&& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
  } else {
    auto out = open_out(path);
    write(out);
  }
}

struct GraphArgs {
  std::string edges;
  std::string categories;

  void add(CLI::App* app) {
    app->add_option("--graph", edges, "edge list (u v per line)")->required()->check(CLI::ExistingFile);
    app->add_option("--categories", categories, "category file (node label per line)")
        ->required()
        ->check(CLI::ExistingFile);
  }
  Graph load() const { return load_graph(edges, categories); }
};

nlohmann::json interval_json(const IntervalResult& r) {
  return {{"point", r.point},   {"se", r.se},         {"lower", r.lower},
          {"upper", r.upper},   {"level", r.level},   {"method", to_string(r.method)},
          {"resamples", r.resamples}, {"flags", r.flags}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rdsim: chain-referral sampling simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(rdsim::kVersion));

  // netgen ------------------------------------------------------------------
  auto* netgen = app.add_subcommand("netgen", "generate a two-category random network");
  NetgenParams np;
  std::string netgen_out;
  bool allow_clamp = false;
  netgen->add_option("--population", np.population, "number of nodes")->capture_default_str();
  netgen->add_option("--prop-a", np.prop_a, "share of category A")->capture_default_str();
  netgen->add_option("--mean-degree", np.mean_degree)->capture_default_str();
  netgen->add_option("--homophily", np.homophily, "homophily ratio")->capture_default_str();
  netgen->add_option("--activity", np.activity, "activity ratio d_A/d_B")->capture_default_str();
  netgen->add_option("--seed", np.rng_seed)->capture_default_str();
  netgen->add_option("--out", netgen_out, "output prefix: writes PREFIX.edges and PREFIX.categories")
      ->required();
  netgen->add_flag("--clamp", allow_clamp, "move infeasible parameters to the nearest feasible ones");

  // sample ------------------------------------------------------------------
  auto* sample = app.add_subcommand("sample", "draw a sample trace from a network");
  GraphArgs sample_graph;
  sample_graph.add(sample);
  SamplerConfig sc;
  std::string sample_method = "rds", sample_out, seed_selection = "uniform";
  sample->add_option("--method", sample_method,
                     "uniform-node|uniform-link|bfs|dfs|forest-fire|snowball|srw|mhrw|rds")
      ->capture_default_str();
  sample->add_option("--size", sc.target_size, "target sample size")->capture_default_str();
  sample->add_option("--coupons", sc.coupons_n, "referrals per respondent (rds, snowball)")
      ->capture_default_str();
  sample->add_option("--chains", sc.num_chains, "number of seed nodes (rds, snowball)")
      ->capture_default_str();
  sample->add_option("--fire-prob", sc.fire_prob, "forest-fire burn probability")->capture_default_str();
  sample->add_flag("--with-replacement", sc.with_replacement, "rds with replacement");
  sample->add_option("--seed-selection", seed_selection, "uniform|degree")->capture_default_str();
  sample->add_option("--seed", sc.rng_seed)->capture_default_str();
  sample->add_option("--out", sample_out, "trace.csv (stdout when omitted)");

  // estimate-pi -------------------------------------------------------------
  auto* epi = app.add_subcommand("estimate-pi", "fit inclusion probabilities to a trace");
  GraphArgs epi_graph;
  epi_graph.add(epi);
  std::string epi_trace, epi_method = "gile-ss", epi_out;
  std::size_t epi_population = 0;
  std::optional<double> epi_f;
  std::uint64_t epi_seed = 0;
  GileSsOptions gile;
  epi->add_option("--trace", epi_trace)->required()->check(CLI::ExistingFile);
  epi->add_option("--method", epi_method, "wr|kurant|kurant-simple|gile-ss")->capture_default_str();
  epi->add_option("--population", epi_population, "population size |V| (default: graph size)");
  epi->add_option("--f", epi_f, "sampling fraction for kurant methods (default: n/|V|)");
  epi->add_option("--rounds", gile.rounds, "gile-ss samples per iteration")->capture_default_str();
  epi->add_option("--max-iter", gile.max_iter)->capture_default_str();
  epi->add_option("--tol", gile.tol)->capture_default_str();
  epi->add_option("--seed", epi_seed)->capture_default_str();
  epi->add_option("--out", epi_out, "pi.csv (stdout when omitted)");

  // estimate ----------------------------------------------------------------
  auto* est = app.add_subcommand("estimate", "weighted point estimate from a trace");
  GraphArgs est_graph;
  est_graph.add(est);
  std::string est_trace, est_pi, est_attribute = "prop-a", est_estimator = "hh";
  std::size_t est_population = 0;
  est->add_option("--trace", est_trace)->required()->check(CLI::ExistingFile);
  est->add_option("--pi", est_pi, "pi.csv from estimate-pi")->required()->check(CLI::ExistingFile);
  est->add_option("--attribute", est_attribute, "prop-a|degree")->capture_default_str();
  est->add_option("--estimator", est_estimator, "hh|ht")->capture_default_str();
  est->add_option("--population", est_population, "|V| for ht (default: graph size)");

  // ci ----------------------------------------------------------------------
  auto* ci = app.add_subcommand("ci", "confidence interval for a population proportion or mean");
  GraphArgs ci_graph;
  ci_graph.add(ci);
  std::string ci_trace, ci_method = "gile-ss", ci_attribute = "prop-a", ci_inclusion = "gile-ss";
  std::string ci_sampler = "rds";
  BootstrapOptions bo;
  std::size_t ci_population = 0, ci_coupons = 3;
  std::optional<std::size_t> ci_chains;
  std::uint64_t ci_seed = 0;
  ci->add_option("--trace", ci_trace)->required()->check(CLI::ExistingFile);
  ci->add_option("--method", ci_method, "naive|salganik|gile-ss|fast")->capture_default_str();
  ci->add_option("--level", bo.level)->capture_default_str();
  ci->add_option("--resamples", bo.resamples)->capture_default_str();
  ci->add_option("--population", ci_population, "|V| (default: graph size)");
  ci->add_option("--seed", ci_seed)->capture_default_str();
  ci->add_option("--attribute", ci_attribute, "prop-a|degree")->capture_default_str();
  ci->add_option("--inclusion", ci_inclusion, "inclusion model for salganik and gile-ss")
      ->capture_default_str();
  ci->add_option("--sampler", ci_sampler, "sampler that produced the trace (fast)")
      ->capture_default_str();
  ci->add_option("--coupons", ci_coupons, "referrals per respondent")->capture_default_str();
  ci->add_option("--chains", ci_chains, "seed count (default: chains in the trace)");

  // experiment --------------------------------------------------------------
  auto* exp = app.add_subcommand("experiment", "run a simulation study from a JSON spec");
  std::string exp_spec, exp_out;
  std::size_t threads = 1;
  bool full = false;
  exp->add_option("--spec", exp_spec)->required()->check(CLI::ExistingFile);
  exp->add_option("--out", exp_out, "output directory (default: output_dir in the spec)");
  exp->add_option("--threads", threads)->capture_default_str()->check(CLI::PositiveNumber);
  exp->add_flag("--full-scale", full, "100 networks x 100 samples");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*netgen) {
      if (allow_clamp) {
        auto [fixed, changed] = clamp_to_feasible(np);
        if (changed)
          std::cerr << "netgen: parameters adjusted to homophily=" << fixed.homophily
                    << " activity=" << fixed.activity << " mean_degree=" << fixed.mean_degree
                    << '\n';
        np = fixed;
      } else if (block_model(np).clamped) {
        throw std::invalid_argument("parameters are not realizable; pass --clamp to adjust them");
      }
      const Graph g = generate(np);
      auto edges = open_out(netgen_out + ".edges");
      write_edge_list(g, edges);
      auto cats = open_out(netgen_out + ".categories");
      write_categories(g, cats);
      const auto s = measure_summary(g);
      nlohmann::json j{{"nodes", g.num_nodes()},
                       {"edges", g.edge_count()},
                       {"mean_degree", s.measured_mean_degree},
                       {"cross_ties", s.cross_ties}};
      if (s.measured_homophily && std::isfinite(*s.measured_homophily))
        j["homophily"] = *s.measured_homophily;
      if (s.measured_activity) j["activity"] = *s.measured_activity;
      std::cout << j.dump() << '\n';
    } else if (*sample) {
      const Graph g = sample_graph.load();
      sc.kind = parse_sampler_kind(sample_method);
      sc.seed_selection = parse_seed_selection(seed_selection);
      if (sc.kind == SamplerKind::WRW)
        throw std::invalid_argument("wrw needs edge weights; use the library interface");
      const SampleTrace t = run_sampler(g, sc);
      emit(sample_out, [&](std::ostream& os) { write_trace_csv(t, os); });
    } else if (*epi) {
      const Graph g = epi_graph.load();
      const SampleTrace t = load_trace(epi_trace);
      const std::size_t population = epi_population ? epi_population : g.num_nodes();
      const auto method = parse_inclusion_method(epi_method);
      InclusionModel model;
      if (epi_f && (method == InclusionMethod::KurantDirect ||
                    method == InclusionMethod::KurantSimplified)) {
        if (t.config.records_revisits())
          throw std::invalid_argument("kurant methods need a without-replacement trace");
        const auto degrees = sampled_degrees(g, t);
        if (method == InclusionMethod::KurantDirect) {
          model = kurant_direct(hh_degree_distribution(degrees), *epi_f);
        } else {
          double mean = 0.0;
          for (auto k : degrees) mean += static_cast<double>(k);
          model = kurant_simplified(mean / static_cast<double>(degrees.size()), *epi_f);
        }
        for (auto k : degrees) model.pi_by_degree[k] = model.pi(k);
      } else {
        if (epi_f) throw std::invalid_argument("--f applies to kurant and kurant-simple only");
        InclusionFitOptions fo;
        fo.gile = gile;
        Rng rng = make_rng(epi_seed);
        model = fit_inclusion(g, t, method, population, fo, rng);
        if (method == InclusionMethod::GileSS && !model.converged)
          std::cerr << "estimate-pi: gile-ss stopped after " << model.iterations
                    << " iterations without meeting the tolerance\n";
      }
      emit(epi_out, [&](std::ostream& os) { write_pi_csv(model.pi_by_degree, os); });
    } else if (*est) {
      const Graph g = est_graph.load();
      const SampleTrace t = load_trace(est_trace);
      const auto pi = load_pi(est_pi);
      const auto x = attributes::parse(est_attribute);
      std::vector<double> xs, ps;
      for (const auto& r : t.estimation_records()) {
        const std::size_t k = g.degree(r.node);
        auto it = pi.find(k);
        if (it == pi.end())
          throw std::invalid_argument("pi file has no entry for degree " + std::to_string(k));
        xs.push_back(x(g.category(r.node), k));
        ps.push_back(it->second);
      }
      double value;
      if (est_estimator == "hh") {
        value = hansen_hurwitz_mean(xs, ps);
      } else if (est_estimator == "ht") {
        value = horvitz_thompson_mean(xs, ps, est_population ? est_population : g.num_nodes());
      } else {
        throw std::invalid_argument("unknown estimator '" + est_estimator + "'");
      }
      nlohmann::json j{{"estimate", value},
                       {"estimator", est_estimator},
                       {"attribute", est_attribute},
                       {"draws", xs.size()}};
      std::cout << j.dump() << '\n';
    } else if (*ci) {
      const Graph g = ci_graph.load();
      SampleTrace t = load_trace(ci_trace);
      t.config.kind = parse_sampler_kind(ci_sampler);
      t.config.coupons_n = ci_coupons;
      if (ci_chains) t.config.num_chains = *ci_chains;
      const std::size_t population = ci_population ? ci_population : g.num_nodes();
      const auto x = attributes::parse(ci_attribute);
      const auto method = parse_interval_method(ci_method);
      Rng rng = make_rng(ci_seed);
      IntervalResult r;
      auto fitted = [&] {
        InclusionFitOptions fo;
        const auto m = t.config.records_revisits() ? InclusionMethod::WithReplacement
                                                   : parse_inclusion_method(ci_inclusion);
        return fit_inclusion(g, t, m, population, fo, rng);
      };
      switch (method) {
        case IntervalMethod::Naive: {
          std::vector<double> xs;
          for (const auto& rec : t.estimation_records())
            xs.push_back(x(g.category(rec.node), g.degree(rec.node)));
          r = naive_ci(xs, bo.level);
          break;
        }
        case IntervalMethod::Salganik: r = salganik_ci(g, t, x, fitted(), bo, rng); break;
        case IntervalMethod::GileSS: r = gile_ss_ci(g, t, x, fitted(), population, bo, rng); break;
        case IntervalMethod::Fast: {
          FastCiOptions fo;
          fo.bootstrap = bo;
          r = fast_ci(g, t, x, population, fo, rng);
          break;
        }
      }
      std::cout << interval_json(r).dump() << '\n';
    } else if (*exp) {
      ExperimentSpec spec = load_spec(exp_spec);
      if (full) spec = full_scale(spec);
      const std::string dir = exp_out.empty() ? spec.output_dir : exp_out;
      if (dir.empty()) throw std::invalid_argument("no output directory: pass --out or set output_dir");
      const auto result = run_experiment(spec, dir, threads);
      for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
      for (const auto& f : result.files) std::cout << dir << '/' << f << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
