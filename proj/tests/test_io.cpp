#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "catch_amalgamated.hpp"
#include "json.hpp"
#include "rdsim/netgen.hpp"
#include "rdsim/trace_io.hpp"

using namespace rdsim;
using Catch::Approx;

TEST_CASE("trace csv round trip", "[io]") {
  auto g = generate({200, 0.3, 6.0, 1.0, 1.0, 1});
  for (auto kind : {SamplerKind::RDS, SamplerKind::SRW}) {
    SamplerConfig c;
    c.kind = kind;
    c.target_size = 50;
    c.rng_seed = 3;
    auto comps = connected_components(g);
    std::sort(comps.begin(), comps.end(), [](auto& a, auto& b) { return a.size() > b.size(); });
    auto t = run_sampler(g, c, {}, comps.front());
    std::stringstream ss;
    write_trace_csv(t, ss);
    auto back = read_trace_csv(ss);
    CHECK(back.records == t.records);
    CHECK(back.estimation_records() == t.estimation_records());
  }
}

TEST_CASE("trace csv rejects malformed files", "[io]") {
  std::istringstream no_header("0,0,1,,0\n");
  CHECK_THROWS(read_trace_csv(no_header));
  std::istringstream gap("step,chain,node,referrer,revisit\n0,0,1,,0\n2,0,2,1,0\n");
  CHECK_THROWS(read_trace_csv(gap));
  std::istringstream bad("step,chain,node,referrer,revisit\n0,0,x,,0\n");
  CHECK_THROWS(read_trace_csv(bad));
  std::istringstream flag("step,chain,node,referrer,revisit\n0,0,1,,2\n");
  CHECK_THROWS(read_trace_csv(flag));
}

TEST_CASE("pi csv round trip", "[io]") {
  std::map<std::size_t, double> pi{{1, 0.1}, {4, 0.3333333333333333}, {12, 0.9}};
  std::stringstream ss;
  write_pi_csv(pi, ss);
  CHECK(read_pi_csv(ss) == pi);
  std::istringstream dup("degree,pi\n1,0.1\n1,0.2\n");
  CHECK_THROWS(read_pi_csv(dup));
  std::istringstream zero("degree,pi\n1,0\n");
  CHECK_THROWS(read_pi_csv(zero));
}

#ifdef RDSIM_CLI_PATH
namespace {

int run(const std::string& args, const std::filesystem::path& out = {}) {
  std::string cmd = std::string(RDSIM_CLI_PATH) + " " + args;
  if (!out.empty()) cmd += " > " + out.string();
  cmd += " 2>/dev/null";
  return std::system(cmd.c_str());
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("command-line pipeline", "[io][cli]") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "rdsim_cli_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string net = (dir / "net").string();
  REQUIRE(run("netgen --population 400 --prop-a 0.3 --mean-degree 8 --homophily 1.5 --activity 1.2 --seed 4 --out " + net,
              dir / "netgen.json") == 0);
  auto summary = nlohmann::json::parse(slurp(dir / "netgen.json"));
  CHECK(summary["nodes"] == 400);

  const std::string graph = "--graph " + net + ".edges --categories " + net + ".categories";
  REQUIRE(run("sample " + graph + " --method rds --size 80 --coupons 3 --chains 2 --seed 9 --out " +
              (dir / "trace.csv").string()) == 0);
  auto trace = load_trace((dir / "trace.csv").string());
  CHECK(trace.size() == 80);

  for (std::string m : {"wr", "kurant", "kurant-simple", "gile-ss"}) {
    if (m == "wr") continue;
    REQUIRE(run("estimate-pi " + graph + " --trace " + (dir / "trace.csv").string() + " --method " + m +
                " --out " + (dir / ("pi_" + m + ".csv")).string()) == 0);
  }
  REQUIRE(run("estimate-pi " + graph + " --trace " + (dir / "trace.csv").string() +
              " --method kurant --f 0.5 --out " + (dir / "pi_f.csv").string()) == 0);
  CHECK(load_pi((dir / "pi_f.csv").string()) != load_pi((dir / "pi_kurant.csv").string()));

  REQUIRE(run("estimate " + graph + " --trace " + (dir / "trace.csv").string() + " --pi " +
                  (dir / "pi_gile-ss.csv").string() + " --attribute prop-a --estimator hh",
              dir / "estimate.json") == 0);
  auto est = nlohmann::json::parse(slurp(dir / "estimate.json"));
  CHECK(est["estimate"].get<double>() > 0.0);
  CHECK(est["estimate"].get<double>() < 1.0);

  for (std::string m : {"naive", "salganik", "gile-ss", "fast"}) {
    REQUIRE(run("ci " + graph + " --trace " + (dir / "trace.csv").string() + " --method " + m +
                    " --resamples 40 --seed 3",
                dir / ("ci_" + m + ".json")) == 0);
    auto ci = nlohmann::json::parse(slurp(dir / ("ci_" + m + ".json")));
    for (const char* key : {"point", "se", "lower", "upper", "flags"}) CHECK(ci.contains(key));
    CHECK(ci["lower"].get<double>() <= ci["upper"].get<double>());
  }

  std::ofstream(dir / "spec.json") << R"({"experiment": "error-curve",
    "netgen": {"population": 200, "mean_degree": 6},
    "sampler": {"methods": [{"method": "rds", "coupons": 3}], "proportions": [0.1, 0.2]},
    "networks": 2, "replicates_per_network": 3, "master_seed": 2})";
  REQUIRE(run("experiment --spec " + (dir / "spec.json").string() + " --out " + (dir / "exp").string(),
              dir / "files.txt") == 0);
  CHECK(fs::exists(dir / "exp" / "error-curve.csv"));
  CHECK(fs::exists(dir / "exp" / "error-curve.svg"));
  CHECK(fs::exists(dir / "exp" / "manifest.json"));

  CHECK(run("sample " + graph + " --method nonsense --out " + (dir / "x.csv").string()) != 0);
  CHECK(run("netgen --population 10 --mean-degree 20 --out " + net) != 0);
  fs::remove_all(dir);
}
#endif
