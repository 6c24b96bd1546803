// Copyright 2026 The qconic Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Benchmark harness: root bound, exact solve and independent re-evaluation
// per (instance, formulation), with CSV and text output.

#ifndef QCONIC_BENCH_HPP_
#define QCONIC_BENCH_HPP_

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "qconic/error.hpp"
#include "qconic/location.hpp"
#include "qconic/reformulations.hpp"
#include "qconic/solver.hpp"

namespace qconic {

inline constexpr const char* kBenchCsvHeader =
    "instance,formulation,status,total_cost,establish_pct,waiting_pct,"
    "traveling_pct,root_bound,nodes,cuts,wall_time_s,gap";

// Relative tolerance between the solver's primal value and re-evaluation.
inline constexpr double kVerifyTolerance = 1e-6;
// Relative tolerance of the root-bound ordering checks.
inline constexpr double kBoundOrderTolerance = 1e-5;

struct BenchRow {
  std::string instance;
  std::string formulation;
  std::string status;  // solver status, "VerifyFail" or "Error"
  double total_cost = std::numeric_limits<double>::quiet_NaN();
  double establish_pct = std::numeric_limits<double>::quiet_NaN();
  double waiting_pct = std::numeric_limits<double>::quiet_NaN();
  double traveling_pct = std::numeric_limits<double>::quiet_NaN();
  double root_bound = std::numeric_limits<double>::quiet_NaN();
  std::int64_t nodes = 0;
  std::int64_t cuts = 0;
  double wall_time_s = 0.0;
  double gap = std::numeric_limits<double>::quiet_NaN();
  std::string message;  // not part of the CSV

  bool verified() const { return status != "VerifyFail" && status != "Error"; }
};

struct BenchReport {
  std::vector<BenchRow> rows;
  std::vector<std::string> flags;  // bound-ordering violations
  int verification_failures = 0;
};

struct NamedInstance {
  std::string id;
  LocationInstance instance;
};

// Solves one (instance, formulation) pair and re-evaluates the incumbent.
inline BenchRow bench_one(const NamedInstance& ni, FormulationId f,
                          const SolverConfig& config) {
  BenchRow row;
  row.instance = ni.id;
  row.formulation = std::string(to_string(f));
  try {
    const BuildReceipt b = build(ni.instance, f);
    row.root_bound = root_bound(b.model, config);
    const SolveResult r = solve(b.model, config);
    row.status = to_string(r.status);
    row.nodes = r.nodes;
    row.cuts = r.cuts;
    row.wall_time_s = r.wall_time;
    row.gap = r.gap;
    if (r.incumbent) {
      const Extraction ex = extract(b, *r.incumbent);
      const CostBreakdown cb = evaluate_breakdown(ni.instance, ex.assignment);
      row.total_cost = cb.total();
      if (row.total_cost > 0.0) {
        row.establish_pct = 100.0 * cb.establishing / row.total_cost;
        row.waiting_pct = 100.0 * cb.waiting / row.total_cost;
        row.traveling_pct = 100.0 * cb.traveling / row.total_cost;
      } else {
        row.establish_pct = row.waiting_pct = row.traveling_pct = 0.0;
      }
      const double diff = std::abs(r.primal - row.total_cost);
      if (diff > kVerifyTolerance * std::max(1.0, std::abs(row.total_cost))) {
        row.status = "VerifyFail";
        std::ostringstream os;
        os << std::setprecision(17) << "solver primal " << r.primal
           << " but re-evaluation gives " << row.total_cost;
        row.message = os.str();
      }
    }
  } catch (const std::exception& e) {
    row.status = "Error";
    row.message = e.what();
  }
  return row;
}

// Root-bound ordering checks per instance: M1 and M4 agree, and M1 is at
// least M2.
inline std::vector<std::string> bound_order_flags(
    const std::vector<BenchRow>& rows) {
  std::map<std::string, std::map<std::string, double>> by_instance;
  std::vector<std::string> order;
  for (const auto& r : rows) {
    if (!by_instance.count(r.instance)) order.push_back(r.instance);
    by_instance[r.instance][r.formulation] = r.root_bound;
  }
  std::vector<std::string> flags;
  for (const auto& id : order) {
    const auto& m = by_instance[id];
    auto get = [&](const char* f) {
      auto it = m.find(f);
      return it == m.end() ? std::numeric_limits<double>::quiet_NaN()
                           : it->second;
    };
    const double r1 = get("M1"), r2 = get("M2"), r4 = get("M4");
    const double scale = std::max(std::abs(r1), 1e-10);
    if (std::isfinite(r1) && std::isfinite(r4) &&
        std::abs(r1 - r4) > kBoundOrderTolerance * scale) {
      std::ostringstream os;
      os << std::setprecision(12) << id << ": root(M1) = " << r1
         << " differs from root(M4) = " << r4;
      flags.push_back(os.str());
    }
    if (std::isfinite(r1) && std::isfinite(r2) &&
        r2 > r1 + kBoundOrderTolerance * scale) {
      std::ostringstream os;
      os << std::setprecision(12) << id << ": root(M2) = " << r2
         << " exceeds root(M1) = " << r1;
      flags.push_back(os.str());
    }
  }
  return flags;
}

// Runs every (instance, formulation) pair. Rows keep input order whatever
// the number of worker threads.
inline BenchReport run_bench(const std::vector<NamedInstance>& instances,
                             const std::vector<FormulationId>& formulations,
                             const SolverConfig& config, int workers = 1) {
  std::vector<std::pair<std::size_t, FormulationId>> jobs;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    for (FormulationId f : formulations) jobs.emplace_back(i, f);
  }
  BenchReport rep;
  rep.rows.resize(jobs.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t j; (j = next++) < jobs.size();) {
      rep.rows[j] = bench_one(instances[jobs[j].first], jobs[j].second, config);
    }
  };
  workers = std::max(1, std::min<int>(workers, static_cast<int>(jobs.size())));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  for (const auto& r : rep.rows) {
    if (!r.verified()) ++rep.verification_failures;
  }
  rep.flags = bound_order_flags(rep.rows);
  return rep;
}

namespace detail {

inline std::string csv_num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw InvalidArgument("unterminated quote in CSV line");
  out.push_back(std::move(cur));
  return out;
}

inline double parse_csv_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw InvalidArgument("bad number '" + s + "' in CSV");
  }
  return v;
}

inline std::int64_t parse_csv_int(const std::string& s) {
  char* end = nullptr;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw InvalidArgument("bad integer '" + s + "' in CSV");
  }
  return v;
}

}  // namespace detail

inline void write_csv(const std::vector<BenchRow>& rows, std::ostream& out) {
  using detail::csv_num;
  out << kBenchCsvHeader << "\n";
  for (const auto& r : rows) {
    out << detail::csv_field(r.instance) << ',' << detail::csv_field(r.formulation)
        << ',' << detail::csv_field(r.status) << ',' << csv_num(r.total_cost)
        << ',' << csv_num(r.establish_pct) << ',' << csv_num(r.waiting_pct)
        << ',' << csv_num(r.traveling_pct) << ',' << csv_num(r.root_bound)
        << ',' << r.nodes << ',' << r.cuts << ',' << csv_num(r.wall_time_s)
        << ',' << csv_num(r.gap) << "\n";
  }
}

inline std::vector<BenchRow> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kBenchCsvHeader) {
    throw InvalidArgument("CSV header does not match the bench schema");
  }
  std::vector<BenchRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = detail::split_csv_line(line);
    if (f.size() != 12) throw InvalidArgument("CSV row has wrong field count");
    BenchRow r;
    r.instance = f[0];
    r.formulation = f[1];
    r.status = f[2];
    r.total_cost = detail::parse_csv_double(f[3]);
    r.establish_pct = detail::parse_csv_double(f[4]);
    r.waiting_pct = detail::parse_csv_double(f[5]);
    r.traveling_pct = detail::parse_csv_double(f[6]);
    r.root_bound = detail::parse_csv_double(f[7]);
    r.nodes = detail::parse_csv_int(f[8]);
    r.cuts = detail::parse_csv_int(f[9]);
    r.wall_time_s = detail::parse_csv_double(f[10]);
    r.gap = detail::parse_csv_double(f[11]);
    rows.push_back(std::move(r));
  }
  return rows;
}

// Fixed-width table in the column order of the CSV.
inline void write_table(const std::vector<BenchRow>& rows, std::ostream& out) {
  auto fixed = [](double x, int prec) {
    if (!std::isfinite(x)) return std::string("-");
    std::ostringstream os;
    os << std::fixed << std::setprecision(prec) << x;
    return os.str();
  };
  out << std::left << std::setw(22) << "instance" << std::setw(5) << "form"
      << std::setw(11) << "status" << std::right << std::setw(14) << "total"
      << std::setw(8) << "est%" << std::setw(8) << "wait%" << std::setw(8)
      << "trav%" << std::setw(14) << "root bound" << std::setw(9) << "nodes"
      << std::setw(9) << "cuts" << std::setw(10) << "time(s)" << std::setw(11)
      << "gap(%)" << "\n";
  for (const auto& r : rows) {
    out << std::left << std::setw(22) << r.instance << std::setw(5)
        << r.formulation << std::setw(11) << r.status << std::right
        << std::setw(14) << fixed(r.total_cost, 4) << std::setw(8)
        << fixed(r.establish_pct, 2) << std::setw(8) << fixed(r.waiting_pct, 2)
        << std::setw(8) << fixed(r.traveling_pct, 2) << std::setw(14)
        << fixed(r.root_bound, 4) << std::setw(9) << r.nodes << std::setw(9)
        << r.cuts << std::setw(10) << fixed(r.wall_time_s, 3) << std::setw(11)
        << fixed(100.0 * r.gap, 4) << "\n";
  }
}

}  // namespace qconic

#endif  // QCONIC_BENCH_HPP_
