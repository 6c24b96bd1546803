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

// qconic command-line tool.
//
// Exit codes: 0 success, 1 internal error, 2 usage, 3 infeasible or
// unstable, 4 verification mismatch, 5 resource limit.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qconic/qconic.hpp"

namespace {

using namespace qconic;

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitVerify = 4;
constexpr int kExitLimit = 5;

int default_threads() {
  if (const char* env = std::getenv("QCONIC_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1 && v <= 1024) {
      return static_cast<int>(v);
    }
  }
  return 1;
}

struct SolverFlags {
  double gap = 1e-5;
  double abs_gap = 1e-9;
  double time_limit = std::numeric_limits<double>::infinity();
  std::int64_t node_limit = std::numeric_limits<std::int64_t>::max();
  int threads = default_threads();
  std::uint64_t seed = 0;
  std::string branching = "most-fractional";
  std::string node_selection = "best-bound";
  bool no_plunge = false;
  std::int64_t log_interval = 0;

  void attach(CLI::App* app) {
    app->add_option("--gap", gap, "Relative optimality gap target")
        ->check(CLI::PositiveNumber);
    app->add_option("--abs-gap", abs_gap, "Absolute gap used for pruning")
        ->check(CLI::PositiveNumber);
    app->add_option("--time-limit", time_limit, "Wall-clock limit in seconds")
        ->check(CLI::PositiveNumber);
    app->add_option("--node-limit", node_limit, "Maximum number of nodes")
        ->check(CLI::NonNegativeNumber);
    app->add_option("--threads", threads,
                    "Tree-search threads (default from QCONIC_THREADS or 1)")
        ->check(CLI::Range(1, 1024));
    app->add_option("--seed", seed, "Solver seed");
    app->add_option("--branching", branching, "Branching rule")
        ->check(CLI::IsMember({"most-fractional", "pseudocost"}));
    app->add_option("--node-selection", node_selection, "Node selection")
        ->check(CLI::IsMember({"best-bound", "depth-first"}));
    app->add_flag("--no-plunge", no_plunge,
                  "Disable diving into a child after branching");
    app->add_option("--log-interval", log_interval,
                    "Log a progress line every N nodes (stderr)");
  }

  SolverConfig config() const {
    SolverConfig c;
    c.rel_gap = gap;
    c.abs_gap = abs_gap;
    c.time_limit = time_limit;
    c.node_limit = node_limit;
    c.threads = threads;
    c.seed = seed;
    c.branching = branching == "pseudocost" ? Branching::PseudoCost
                                            : Branching::MostFractional;
    c.node_selection = node_selection == "depth-first"
                           ? NodeSelection::DepthFirst
                           : NodeSelection::BestBound;
    c.plunge = !no_plunge;
    if (log_interval > 0) {
      c.log_interval = log_interval;
      c.log = &std::cerr;
    }
    return c;
  }
};

nlohmann::json assignment_json(const Assignment& a) {
  nlohmann::json open = nlohmann::json::array();
  nlohmann::json serve = nlohmann::json::array();
  for (int j = 0; j < a.customers(); ++j) serve.push_back(nullptr);
  for (int i = 0; i < a.facilities(); ++i) {
    for (int k = 0; k < a.levels(); ++k) {
      if (!a.x(i, k)) continue;
      open.push_back({{"facility", i}, {"level", k}});
      for (int j = 0; j < a.customers(); ++j) {
        if (a.y(i, k, j)) serve[j] = i;
      }
    }
  }
  return {{"open", open}, {"customer_facility", serve}};
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw InvalidArgument("cannot write '" + path + "'");
  f << text;
  f.close();
  if (!f) throw InvalidArgument("failed writing '" + path + "'");
}

// ---------------------------------------------------------------- gen

struct GenArgs {
  std::string preset_name = "desk-small";
  std::uint64_t seed = 1;
  int facilities = 0, customers = 0, levels = 0;
  std::string travel;
  std::string output;
};

int cmd_gen(const GenArgs& a) {
  GenSpec s = preset(a.preset_name);
  s.seed = a.seed;
  const bool resized = a.facilities > 0 || a.customers > 0 || a.levels > 0;
  if (a.facilities > 0) s.n_facilities = a.facilities;
  if (a.customers > 0) s.n_customers = a.customers;
  if (a.levels > 0) s.n_levels = a.levels;
  if (resized) {
    s.name = a.preset_name + "-" + std::to_string(s.n_facilities) + "x" +
             std::to_string(s.n_customers) + "x" + std::to_string(s.n_levels);
  }
  if (a.travel == "uniform") s.travel = TravelScheme::Uniform;
  if (a.travel == "euclidean") s.travel = TravelScheme::Euclidean;
  const std::string path = a.output.empty() ? instance_filename(s) : a.output;
  save_instance(generate(s), path);
  std::cout << path << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- solve

struct SolveArgs {
  std::string instance;
  std::string formulation = "1";
  bool relax = false;
  std::string json_out;
  SolverFlags flags;
};

int cmd_solve(const SolveArgs& a) {
  const LocationInstance in = load_instance(a.instance);
  const FormulationId f = formulation_from_string(a.formulation);
  if (a.relax && f == FormulationId::M2) {
    std::cerr << "error: --relax-binaries is not available for M2, whose "
                 "conic rows are valid only for binary assignments\n";
    return kExitUsage;
  }
  BuildReceipt b = build(in, f);
  const SolverConfig cfg = a.flags.config();

  if (a.relax) {
    ConicModel relaxed = b.model;
    for (Variable& v : relaxed.variables) v.kind = VarKind::Continuous;
    const RelaxationResult rr = solve_relaxation(relaxed, {}, cfg);
    nlohmann::json j{{"formulation", std::string(to_string(f))},
                     {"relaxation_status", to_string(rr.outcome.status)},
                     {"rounds", rr.rounds},
                     {"cuts", rr.cuts_added},
                     {"max_violation", rr.max_violation}};
    if (rr.outcome.status == LpStatus::Optimal) {
      j["bound"] = rr.outcome.objective_value;
    }
    std::cout << "continuous relaxation of " << to_string(f) << ": "
              << to_string(rr.outcome.status);
    if (rr.outcome.status == LpStatus::Optimal) {
      std::cout << std::setprecision(12) << ", bound "
                << rr.outcome.objective_value;
    }
    std::cout << "\n" << j.dump() << "\n";
    if (!a.json_out.empty()) write_text_file(a.json_out, j.dump(1) + "\n");
    return rr.outcome.status == LpStatus::Infeasible ? kExitInfeasible
                                                     : kExitOk;
  }

  const SolveResult r = solve(b.model, cfg);
  nlohmann::json j = to_json(r);
  j["formulation"] = std::string(to_string(f));
  int code = kExitOk;
  std::cout << std::setprecision(12);
  std::cout << "formulation   " << to_string(f) << "\n"
            << "status        " << to_string(r.status) << "\n"
            << "solver primal " << r.primal << "\n"
            << "dual bound    " << r.dual_bound << "\n"
            << "gap (%)       " << 100.0 * r.gap << "\n"
            << "root bound    " << r.root_bound << "\n"
            << "nodes         " << r.nodes << "\n"
            << "cuts          " << r.cuts << "\n"
            << "time (s)      " << r.wall_time << "\n";
  if (r.incumbent) {
    const Extraction ex = extract(b, *r.incumbent);
    const CostBreakdown cb = evaluate_breakdown(in, ex.assignment);
    const double total = cb.total();
    const bool ok = std::abs(total - r.primal) <=
                    kVerifyTolerance * std::max(1.0, std::abs(total));
    std::cout << "re-evaluated  " << total << (ok ? "  (verified)" : "  (MISMATCH)")
              << "\n"
              << "  establishing " << cb.establishing << "\n"
              << "  waiting      " << cb.waiting << "\n"
              << "  traveling    " << cb.traveling << "\n";
    for (int i = 0; i < in.facilities; ++i) {
      for (int k = 0; k < in.levels; ++k) {
        if (!ex.assignment.x(i, k)) continue;
        std::cout << "  facility " << i << " level " << k << ": customers";
        for (int jj = 0; jj < in.customers; ++jj) {
          if (ex.assignment.y(i, k, jj)) std::cout << ' ' << jj;
        }
        std::cout << "\n";
      }
    }
    j["evaluated"] = total;
    j["verified"] = ok;
    j["breakdown"] = {{"establishing", cb.establishing},
                      {"waiting", cb.waiting},
                      {"traveling", cb.traveling}};
    j["assignment"] = assignment_json(ex.assignment);
    if (!ok) code = kExitVerify;
  }
  if (code == kExitOk) {
    if (r.status == SolveStatus::Infeasible) code = kExitInfeasible;
    if (r.status == SolveStatus::TimeLimit || r.status == SolveStatus::GapLimit) {
      code = kExitLimit;
    }
  }
  std::cout << j.dump() << "\n";
  if (!a.json_out.empty()) write_text_file(a.json_out, j.dump(1) + "\n");
  return code;
}

// ---------------------------------------------------------------- oracle

int cmd_oracle(const std::string& path, int threads) {
  const LocationInstance in = load_instance(path);
  const OracleResult o = brute_force(in, threads);
  nlohmann::json j{{"value", o.value},
                   {"enumerated", o.enumerated},
                   {"assignment", assignment_json(o.best)}};
  std::cout << j.dump() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- bench

struct BenchArgs {
  std::vector<std::string> instances;
  std::string preset_name = "desk-small";
  int count = 12;
  std::uint64_t seed_start = 1;
  std::string formulations = "1,2,3,4";
  std::string csv;
  int jobs = 1;
  SolverFlags flags;
};

int cmd_bench(BenchArgs a) {
  std::vector<NamedInstance> set;
  if (!a.instances.empty()) {
    for (const auto& p : a.instances) set.push_back({p, load_instance(p)});
  } else {
    for (int c = 0; c < a.count; ++c) {
      GenSpec s = preset(a.preset_name);
      s.seed = a.seed_start + static_cast<std::uint64_t>(c);
      set.push_back({s.name + "-s" + std::to_string(s.seed), generate(s)});
    }
  }
  std::vector<FormulationId> forms;
  std::stringstream ss(a.formulations);
  for (std::string tok; std::getline(ss, tok, ',');) {
    if (!tok.empty()) forms.push_back(formulation_from_string(tok));
  }
  if (forms.empty()) throw InvalidArgument("no formulations selected");
  const BenchReport rep = run_bench(set, forms, a.flags.config(), a.jobs);
  write_table(rep.rows, std::cout);
  for (const auto& r : rep.rows) {
    if (!r.message.empty()) {
      std::cout << "note: " << r.instance << " " << r.formulation << ": "
                << r.message << "\n";
    }
  }
  for (const auto& f : rep.flags) std::cout << "bound-order flag: " << f << "\n";
  std::cout << rep.rows.size() << " rows, " << rep.verification_failures
            << " verification failures, " << rep.flags.size()
            << " bound-order flags\n";
  if (!a.csv.empty()) {
    std::ostringstream os;
    write_csv(rep.rows, os);
    write_text_file(a.csv, os.str());
  }
  return rep.verification_failures > 0 ? kExitVerify : kExitOk;
}

// ---------------------------------------------------------------- export

int cmd_export(const std::string& path, const std::string& formulation,
               const std::string& out, const std::string& format) {
  const LocationInstance in = load_instance(path);
  const BuildReceipt b = build(in, formulation_from_string(formulation));
  const std::string text =
      format == "json" ? dump_model(b.model) : export_cbf(b.model);
  write_text_file(out, text);
  std::cout << out << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- simulate

struct SimArgs {
  double lambda = 1.0;
  double mu = 2.0;
  double sigma = std::numeric_limits<double>::quiet_NaN();
  std::string service = "exponential";
  std::int64_t customers = 1000000;
  std::uint64_t seed = 1;
};

int cmd_simulate(const SimArgs& a) {
  const ServiceKind kind = service_kind_from_string(a.service);
  double sigma = a.sigma;
  if (std::isnan(sigma)) {
    switch (kind) {
      case ServiceKind::Exponential: sigma = 1.0 / a.mu; break;
      case ServiceKind::Deterministic: sigma = 0.0; break;
      case ServiceKind::Uniform: sigma = 1.0 / (a.mu * std::sqrt(3.0)); break;
      case ServiceKind::TwoPoint: sigma = 1.0 / a.mu; break;
    }
  }
  const QueueParams p{a.lambda, a.mu, sigma};
  check_stable(p);
  const auto est = simulate(p, ServiceDist{kind}, a.customers, a.seed);
  std::cout << std::left << std::setw(6) << "metric" << std::right
            << std::setw(16) << "formula" << std::setw(16) << "simulated"
            << std::setw(14) << "95% half" << std::setw(8) << "in CI"
            << "\n";
  for (MetricKind m : kAllMetrics) {
    const double f = metric(m, p);
    const SimEstimate& e = est.at(m);
    const bool inside = std::abs(f - e.mean) <= e.half_width;
    std::cout << std::left << std::setw(6) << to_string(m) << std::right
              << std::setprecision(8) << std::setw(16) << f << std::setw(16)
              << e.mean << std::setw(14) << e.half_width << std::setw(8)
              << (inside ? "yes" : "no") << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact solver and benchmark tools for congested facility "
               "location with M/G/1 queues"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate an instance file");
  g->add_option("--preset", gen.preset_name, "desk-small, vj-large or holmberg-large");
  g->add_option("--seed", gen.seed, "Generator seed");
  g->add_option("--facilities", gen.facilities, "Override facility count")
      ->check(CLI::PositiveNumber);
  g->add_option("--customers", gen.customers, "Override customer count")
      ->check(CLI::PositiveNumber);
  g->add_option("--levels", gen.levels, "Override level count")
      ->check(CLI::PositiveNumber);
  g->add_option("--travel", gen.travel, "Travel cost scheme")
      ->check(CLI::IsMember({"uniform", "euclidean"}));
  g->add_option("-o,--output", gen.output,
                "Output path (default <preset>-s<seed>.json)");

  SolveArgs sv;
  auto* s = app.add_subcommand("solve", "Solve an instance exactly");
  s->add_option("instance", sv.instance, "Instance JSON file")->required();
  s->add_option("-f,--formulation", sv.formulation, "1, 2, 3 or 4");
  s->add_flag("--relax-binaries", sv.relax,
              "Solve the continuous relaxation instead");
  s->add_option("--json", sv.json_out, "Also write the result JSON here");
  sv.flags.attach(s);

  std::string oracle_path;
  int oracle_threads = default_threads();
  auto* o = app.add_subcommand("oracle", "Brute-force optimum of a small instance");
  o->add_option("instance", oracle_path, "Instance JSON file")->required();
  o->add_option("--threads", oracle_threads, "Enumeration threads")
      ->check(CLI::Range(1, 1024));

  BenchArgs bn;
  bn.flags.time_limit = 60.0;
  auto* b = app.add_subcommand("bench", "Benchmark formulations");
  b->add_option("instances", bn.instances, "Instance files (else generated)");
  b->add_option("--preset", bn.preset_name, "Preset for generated instances");
  b->add_option("--count", bn.count, "Number of generated instances")
      ->check(CLI::PositiveNumber);
  b->add_option("--seed-start", bn.seed_start, "First generator seed");
  b->add_option("--formulations", bn.formulations, "Comma-separated list");
  b->add_option("--csv", bn.csv, "Write rows as CSV");
  b->add_option("--jobs", bn.jobs, "Rows solved in parallel")
      ->check(CLI::Range(1, 1024));
  bn.flags.attach(b);

  std::string ex_path, ex_form = "1", ex_out, ex_format = "cbf";
  auto* e = app.add_subcommand("export", "Write the conic model of an instance");
  e->add_option("instance", ex_path, "Instance JSON file")->required();
  e->add_option("-f,--formulation", ex_form, "1, 2, 3 or 4");
  e->add_option("-o,--output", ex_out, "Output path")->required();
  e->add_option("--format", ex_format, "cbf or json")
      ->check(CLI::IsMember({"cbf", "json"}));

  SimArgs sim;
  auto* m = app.add_subcommand("simulate", "Compare formulas with simulation");
  m->add_option("--lambda", sim.lambda, "Arrival rate");
  m->add_option("--mu", sim.mu, "Service rate");
  m->add_option("--sigma", sim.sigma, "Service-time standard deviation");
  m->add_option("--service", sim.service,
                "exponential, deterministic, uniform or two-point");
  m->add_option("--customers", sim.customers, "Simulated customers")
      ->check(CLI::PositiveNumber);
  m->add_option("--seed", sim.seed, "Simulation seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*g) return cmd_gen(gen);
    if (*s) return cmd_solve(sv);
    if (*o) return cmd_oracle(oracle_path, oracle_threads);
    if (*b) return cmd_bench(bn);
    if (*e) return cmd_export(ex_path, ex_form, ex_out, ex_format);
    if (*m) return cmd_simulate(sim);
  } catch (const InstanceTooLargeError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitLimit;
  } catch (const UnstableQueueError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitInfeasible;
  } catch (const InfeasibleAssignmentError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitInfeasible;
  } catch (const NoFeasibleAssignmentError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitInfeasible;
  } catch (const InvalidArgument& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}
