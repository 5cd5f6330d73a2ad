#pragma once

// CSV forms of sample traces (step,chain,node,referrer,revisit) and fitted
// inclusion probabilities (degree,pi).

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rdsim/inclusion.hpp"
#include "rdsim/samplers.hpp"

namespace rdsim {

/// Shortest decimal form that reads back to the same double.
inline std::string format_double(double v) {
  char buf[32];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

inline void write_trace_csv(const SampleTrace& t, std::ostream& os) {
  os << "step,chain,node,referrer,revisit\n";
  for (std::size_t i = 0; i < t.records.size(); ++i) {
    const auto& r = t.records[i];
    os << i << ',' << r.chain << ',' << r.node << ',';
    if (r.referrer) os << *r.referrer;
    os << ',' << (r.revisit ? 1 : 0) << '\n';
  }
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

inline unsigned long long parse_count(const std::string& s, std::size_t line_no) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size() || s.front() == '-')
    throw std::runtime_error("line " + std::to_string(line_no) + ": bad integer '" + s + "'");
  return v;
}

inline double parse_real(const std::string& s, std::size_t line_no) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size())
    throw std::runtime_error("line " + std::to_string(line_no) + ": bad number '" + s + "'");
  return v;
}

inline void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace detail

/// Reads a trace. The sampler configuration is not stored in the file; the
/// result is marked with-replacement when any record is a revisit, and its
/// chain count is the number of distinct chain ids.
inline SampleTrace read_trace_csv(std::istream& is) {
  SampleTrace t;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  std::set<std::uint32_t> chains;
  while (std::getline(is, line)) {
    ++line_no;
    detail::strip_cr(line);
    if (line.empty() || line.front() == '#') continue;
    if (!header) {
      if (line != "step,chain,node,referrer,revisit")
        throw std::runtime_error("trace: unexpected header '" + line + "'");
      header = true;
      continue;
    }
    const auto cells = detail::split_csv_line(line);
    if (cells.size() != 5) throw std::runtime_error("trace line " + std::to_string(line_no) + ": expected 5 columns");
    if (detail::parse_count(cells[0], line_no) != t.records.size())
      throw std::runtime_error("trace line " + std::to_string(line_no) + ": steps must be 0,1,2,...");
    TraceRecord r;
    r.chain = static_cast<std::uint32_t>(detail::parse_count(cells[1], line_no));
    r.node = static_cast<NodeId>(detail::parse_count(cells[2], line_no));
    if (!cells[3].empty()) r.referrer = static_cast<NodeId>(detail::parse_count(cells[3], line_no));
    const auto rv = detail::parse_count(cells[4], line_no);
    if (rv > 1) throw std::runtime_error("trace line " + std::to_string(line_no) + ": revisit must be 0 or 1");
    r.revisit = rv == 1;
    if (r.revisit) t.config.with_replacement = true;
    chains.insert(r.chain);
    t.records.push_back(r);
  }
  if (!header) throw std::runtime_error("trace: missing header");
  t.config.kind = SamplerKind::RDS;
  t.config.target_size = t.records.size();
  t.config.num_chains = std::max<std::size_t>(1, chains.size());
  return t;
}

inline SampleTrace load_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace file " + path);
  return read_trace_csv(in);
}

inline void write_pi_csv(const std::map<std::size_t, double>& pi_by_degree, std::ostream& os) {
  os << "degree,pi\n";
  for (auto [k, p] : pi_by_degree) os << k << ',' << format_double(p) << '\n';
}

inline std::map<std::size_t, double> read_pi_csv(std::istream& is) {
  std::map<std::size_t, double> out;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(is, line)) {
    ++line_no;
    detail::strip_cr(line);
    if (line.empty() || line.front() == '#') continue;
    if (!header) {
      if (line != "degree,pi") throw std::runtime_error("pi: unexpected header '" + line + "'");
      header = true;
      continue;
    }
    const auto cells = detail::split_csv_line(line);
    if (cells.size() != 2) throw std::runtime_error("pi line " + std::to_string(line_no) + ": expected 2 columns");
    const auto k = static_cast<std::size_t>(detail::parse_count(cells[0], line_no));
    const double p = detail::parse_real(cells[1], line_no);
    if (!(p > 0.0)) throw std::runtime_error("pi line " + std::to_string(line_no) + ": pi must be positive");
    if (!out.emplace(k, p).second)
      throw std::runtime_error("pi line " + std::to_string(line_no) + ": duplicate degree");
  }
  if (!header) throw std::runtime_error("pi: missing header");
  return out;
}

inline std::map<std::size_t, double> load_pi(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open pi file " + path);
  return read_pi_csv(in);
}

}  // namespace rdsim
