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


// Acceptance suite. Prints one PASS or FAIL line per criterion and exits
// nonzero when any criterion fails. Optional arguments select criteria by
// number, e.g. `qconic_acceptance 1 3 7`.

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qconic/qconic.hpp"
#include "test_support.hpp"

namespace {

using namespace qconic;
using testing::rel_close;

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double x, int prec = 6) {
  std::ostringstream os;
  os << std::setprecision(prec) << x;
  return os.str();
}

// 1. Queueing formulas against closed forms and Little's law.
Outcome queueing_formulas() {
  const auto t0 = Clock::now();
  int bad = 0;
  double worst = 0.0;
  auto check = [&](double got, double want) {
    const double rel = std::abs(got - want) / std::max(std::abs(want), 1e-300);
    worst = std::max(worst, rel);
    if (rel > 1e-12) ++bad;
  };
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n = 0; n < 20; ++n) {
    const double mu = 0.05 + 20.0 * u(rng);
    const double lambda = mu * (0.01 + 0.98 * u(rng));
    const QueueParams mm1{lambda, mu, 1.0 / mu};
    const QueueParams md1{lambda, mu, 0.0};
    const double rho = lambda / mu;
    check(lq(mm1), rho * rho / (1.0 - rho));
    check(l(mm1), testing::mm1_l(lambda, mu));
    check(wq(mm1), rho / (mu - lambda));
    check(w(mm1), testing::mm1_w(lambda, mu));
    check(lq(md1), testing::md1_lq(lambda, mu));
    check(l(md1), rho + testing::md1_lq(lambda, mu));
    check(wq(md1), testing::md1_wq(lambda, mu));
    check(w(md1), testing::md1_wq(lambda, mu) + 1.0 / mu);
  }
  const int closed_bad = bad;
  int little_bad = 0;
  for (int n = 0; n < 10000; ++n) {
    const double mu = 1e-3 + 1e3 * u(rng);
    const double lambda = mu * u(rng) * 0.9999;
    const double sigma = 5.0 * u(rng) / mu;
    const QueueParams p{lambda, mu, sigma};
    const bool ok = std::abs(l(p) - lambda * w(p)) <= 1e-12 * std::max(l(p), 1e-300) + 1e-300 &&
                    std::abs(lq(p) - lambda * wq(p)) <= 1e-12 * std::max(lq(p), 1e-300) + 1e-300 &&
                    metric(MetricKind::TW, p) == l(p) &&
                    metric(MetricKind::TWq, p) == lq(p);
    if (!ok) ++little_bad;
  }
  const double t = seconds_since(t0);
  return {closed_bad == 0 && little_bad == 0 && t < 1.0,
          "closed-form mismatches " + std::to_string(closed_bad) +
              "/320 (worst rel " + fmt(worst, 3) + "), Little's law failures " +
              std::to_string(little_bad) + "/10000, " + fmt(t, 3) + " s"};
}

// 2. Formula values inside simulated 95% intervals.
Outcome simulation_cross_check() {
  const auto t0 = Clock::now();
  const std::vector<std::pair<double, double>> rates = {{1, 2}, {3, 4}, {9, 10}};
  struct Dist {
    const char* name;
    ServiceDist dist;
    bool zero_sigma;
  };
  const std::vector<Dist> dists = {
      {"exponential", ServiceDist::exponential(), false},
      {"deterministic", ServiceDist::deterministic(), true},
      {"two-point", ServiceDist::two_point(), false}};
  bool ok = true;
  std::string per_seed;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    int inside = 0;
    for (const auto& [lambda, mu] : rates) {
      for (const Dist& d : dists) {
        const QueueParams p{lambda, mu, d.zero_sigma ? 0.0 : 1.0 / mu};
        const auto est = simulate(p, d.dist, 1000000, seed);
        const auto& L = est.at(MetricKind::L);
        const auto& W = est.at(MetricKind::W);
        if (std::abs(l(p) - L.mean) <= L.half_width &&
            std::abs(w(p) - W.mean) <= W.half_width) {
          ++inside;
        }
      }
    }
    ok = ok && inside >= 8;
    per_seed += (seed > 1 ? " " : "") + std::to_string(inside) + "/9";
  }
  const double t = seconds_since(t0);
  return {ok && t < 120.0,
          "cases with L and W inside the CI per seed: " + per_seed + ", " +
              fmt(t, 3) + " s"};
}

// 3. Hyperbolic membership vs both conic readings.
Outcome convexification() {
  const auto t0 = Clock::now();
  const VarId x{0}, y{1}, z{2};
  const HyperbolicConstraint h{{LinExpr(x, 1.0)}, LinExpr(y, 1.0),
                               LinExpr(z, 1.0)};
  const SocPrimary soc = hyperbolic_to_soc(h);
  const SocSecondary form1 = form2_to_form1(hyperbolic_to_form2(h));
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  std::uniform_int_distribution<int> ui(-12, 12);
  int disagree = 0, members = 0;
  for (int n = 0; n < 100000; ++n) {
    PointAssignment p(3);
    if (n % 2 == 0) {
      // Integer points hit the boundary exactly.
      p.set(x, ui(rng));
      p.set(y, std::abs(ui(rng)));
      p.set(z, std::abs(ui(rng)));
    } else {
      p.set(x, u(rng));
      p.set(y, std::abs(u(rng)));
      p.set(z, std::abs(u(rng)));
    }
    const bool in = hyperbolic_holds(h, p);
    members += in;
    const bool a = soc_residual(soc, p) <= 0.0;
    const bool b = secondary_residual(form1, p) <= 0.0;
    if (a != in || b != in) ++disagree;
  }
  const double t = seconds_since(t0);
  return {disagree == 0 && t < 5.0,
          std::to_string(disagree) + " disagreements on 100000 points (" +
              std::to_string(members) + " members), " + fmt(t, 3) + " s"};
}

SolverConfig exact_config() {
  SolverConfig c;
  c.rel_gap = 1e-9;
  c.abs_gap = 1e-9;
  return c;
}

// 4. Branch-and-bound optima against exhaustive enumeration.
Outcome oracle_equivalence() {
  const auto t0 = Clock::now();
  int bad = 0;
  std::string first;
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const LocationInstance in = testing::desk_small(seed);
    const OracleResult oracle = brute_force(in);
    const auto ref = testing::reference_optimum(in);
    if (!ref.found || !rel_close(ref.value, oracle.value, 1e-12)) {
      ++bad;
      if (first.empty()) first = "oracle disagreement at seed " + std::to_string(seed);
      continue;
    }
    for (FormulationId f : kAllFormulations) {
      const BuildReceipt b = build(in, f);
      const SolveResult r = solve(b.model, exact_config());
      bool ok = r.status == SolveStatus::Optimal && r.incumbent.has_value();
      if (ok) {
        const Extraction ex = extract(b, *r.incumbent);
        ok = check_feasible(in, ex.assignment).feasible;
        const double value = ok ? evaluate(in, ex.assignment) : 0.0;
        const double rel =
            std::max(std::abs(r.primal - oracle.value), std::abs(value - oracle.value)) /
            std::abs(oracle.value);
        worst = std::max(worst, rel);
        ok = ok && rel <= 1e-6;
      }
      if (!ok) {
        ++bad;
        if (first.empty()) {
          first = "seed " + std::to_string(seed) + " " + std::string(to_string(f));
        }
      }
    }
  }
  const double t = seconds_since(t0);
  std::string d = std::to_string(80 - bad) + "/80 solves match (worst rel " +
                  fmt(worst, 3) + "), " + fmt(t, 3) + " s";
  if (!first.empty()) d += ", first failure: " + first;
  return {bad == 0 && t < 300.0, d};
}

// 5. Reformulated objective at tight auxiliaries vs direct evaluation.
Outcome objective_identity() {
  const auto t0 = Clock::now();
  std::int64_t checked = 0, bad = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 101; seed <= 105; ++seed) {
    const LocationInstance in = testing::desk_small(seed);
    const auto all = testing::feasible_assignments(in);
    for (FormulationId f : kAllFormulations) {
      const BuildReceipt b = build(in, f);
      for (const Assignment& a : all) {
        const auto [reformulated, direct] = objective_identity_check(b, a);
        const double rel = std::abs(reformulated - direct) / std::abs(direct);
        worst = std::max(worst, rel);
        bad += rel > 1e-9;
        ++checked;
      }
    }
  }
  return {bad == 0 && checked > 0,
          std::to_string(checked - bad) + "/" + std::to_string(checked) +
              " (instance, formulation, assignment) triples agree (worst rel " +
              fmt(worst, 3) + "), " + fmt(seconds_since(t0), 3) + " s"};
}

// 6. Root-bound ordering.
Outcome root_bound_ordering() {
  const auto t0 = Clock::now();
  std::vector<std::string> violations;
  double worst14 = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const LocationInstance in = testing::desk_small(seed);
    const double r1 = root_bound(build(in, FormulationId::M1).model, {});
    const double r2 = root_bound(build(in, FormulationId::M2).model, {});
    const double r4 = root_bound(build(in, FormulationId::M4).model, {});
    const double d14 = std::abs(r1 - r4) / std::abs(r1);
    worst14 = std::max(worst14, d14);
    if (d14 > 1e-5) {
      violations.push_back("seed " + std::to_string(seed) + ": root(M1)=" +
                           fmt(r1, 12) + " root(M4)=" + fmt(r4, 12));
    }
    if (r2 > r1 + 1e-5 * std::abs(r1)) {
      violations.push_back("seed " + std::to_string(seed) + ": root(M2)=" +
                           fmt(r2, 12) + " > root(M1)=" + fmt(r1, 12));
    }
  }
  const double t = seconds_since(t0);
  std::string d = std::to_string(violations.size()) +
                  " violations on 20 instances (max |M1-M4|/|M1| " +
                  fmt(worst14, 3) + "), " + fmt(t, 3) + " s";
  for (const auto& v : violations) d += "\n      " + v;
  return {violations.empty() && t < 180.0, d};
}

// 7. Structural counts against the symbolic table.
Outcome structural_counts() {
  const auto t0 = Clock::now();
  const std::vector<std::pair<int, int>> shapes = {
      {25, 5}, {1, 1}, {3, 2}, {7, 4}, {12, 3}};
  int bad = 0;
  for (const auto& [I, K] : shapes) {
    const int ik = I * K;
    const std::vector<StructuralRow> want = {
        {FormulationId::M1, 2 * ik, ik, ik, 0},
        {FormulationId::M2, 2 * ik, ik, ik, 0},
        {FormulationId::M3, 3 * ik, 2 * ik, ik, 0},
        {FormulationId::M4, 3 * ik, 2 * ik, ik, 0}};
    if (structural_compare(testing::shaped_instance(I, K, 4)) != want) ++bad;
  }
  const double t = seconds_since(t0);
  return {bad == 0 && t < 1.0, std::to_string(5 - bad) + "/5 shapes match, " +
                                   fmt(t, 3) + " s"};
}

bool same_coefficients(const LinExpr& got, const std::map<int, double>& want) {
  std::map<int, double> g;
  for (const auto& [v, c] : got.terms()) {
    if (c != 0.0) g[v.value] = c;
  }
  if (g.size() != want.size()) return false;
  for (const auto& [v, c] : want) {
    auto it = g.find(v);
    if (it == g.end() || !rel_close(it->second, c, 1e-14)) return false;
  }
  return true;
}

// 8. Metric-constraint generators against the special-case forms and the
// moment formulas.
Outcome metric_generators() {
  const auto t0 = Clock::now();
  int bad_maps = 0, maps = 0;
  const std::vector<double> mu = {2.0, 5.0, 11.0};
  const std::vector<double> lambda = {0.5, 1.25, 0.75};
  for (const bool deterministic : {false, true}) {
    std::vector<double> sigma2;
    for (double m : mu) sigma2.push_back(deterministic ? 0.0 : 1.0 / (m * m));
    auto fresh = [&](bool ybin, ConicModel& m) {
      return make_context(m, mu, sigma2, lambda,
                          std::vector<std::vector<double>>(
                              mu.size(), std::vector<double>(lambda.size(), 1.0)),
                          ybin);
    };
    struct Case {
      MetricKind kind;
      MetricVariant variant;
      bool ybin;
      bool literal;  // s-term divided by the option rate
    };
    const std::vector<Case> cases = {
        {MetricKind::L, MetricVariant::RForm, false, false},
        {MetricKind::L, MetricVariant::SForm, false, true},
        {MetricKind::L, MetricVariant::SForm, false, false},
        {MetricKind::L, MetricVariant::BinarySForm, true, true},
        {MetricKind::W, MetricVariant::SForm, false, false},
        {MetricKind::W, MetricVariant::BinarySForm, true, false}};
    for (const Case& c : cases) {
      ConicModel m;
      const GeneralContext ctx = fresh(c.ybin, m);
      MetricOptions opt;
      opt.divide_s_term_by_rate = c.literal;
      const MetricBundle b = metric_constraint(
          ctx, c.kind, c.variant, static_cast<int>(m.num_variables()), opt);
      const QueueSpecialCase expect_case =
          deterministic ? QueueSpecialCase::MD1 : QueueSpecialCase::MM1;
      std::map<int, double> want;
      for (std::size_t p = 0; p < mu.size(); ++p) {
        const int aux = b.aux_ids[p].value;
        const double m_p = mu[p];
        double aux_coef = 0.0, load_coef = 0.0, x_coef = 0.0;
        if (c.kind == MetricKind::W) {
          // (s + X)/mu  or  (s + 2X)/(2mu)
          aux_coef = deterministic ? 1.0 / (2.0 * m_p) : 1.0 / m_p;
          x_coef = deterministic ? 2.0 / (2.0 * m_p) : 1.0 / m_p;
        } else if (c.variant == MetricVariant::RForm) {
          // (r + L)/mu  or  (r + 2L)/(2mu)
          aux_coef = deterministic ? 1.0 / (2.0 * m_p) : 1.0 / m_p;
          load_coef = deterministic ? 2.0 / (2.0 * m_p) : 1.0 / m_p;
        } else {
          // s/mu  or  (s + L)/(2mu); without the division the s-term is
          // scaled by mu.
          aux_coef = deterministic ? 1.0 / (2.0 * m_p) : 1.0 / m_p;
          load_coef = deterministic ? 1.0 / (2.0 * m_p) : 0.0;
          if (!c.literal) aux_coef *= m_p;
        }
        if (aux_coef != 0.0) want[aux] = aux_coef;
        if (x_coef != 0.0) want[ctx.X[p].value] = x_coef;
        for (std::size_t r = 0; r < lambda.size() && load_coef != 0.0; ++r) {
          want[ctx.Y[p][r].value] = load_coef * lambda[r];
        }
      }
      ++maps;
      if (b.special_case != expect_case || !same_coefficients(b.lhs, want)) {
        ++bad_maps;
      }
    }
  }

  // Tight-auxiliary evaluation at random general parameters.
  std::mt19937_64 rng(808);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int bad_points = 0;
  double worst = 0.0;
  for (int n = 0; n < 100; ++n) {
    const std::size_t P = 1 + n % 3, R = 1 + n % 4;
    std::vector<double> mus, s2, lam;
    for (std::size_t p = 0; p < P; ++p) {
      mus.push_back(1.0 + 20.0 * u(rng));
      s2.push_back(std::pow(3.0 * u(rng) / mus.back(), 2));
    }
    for (std::size_t r = 0; r < R; ++r) lam.push_back(u(rng));
    const std::size_t chosen = static_cast<std::size_t>(n) % P;
    double lam_total = 0.0;
    for (double x : lam) lam_total += x;
    // Scale demand so the chosen option runs at utilisation in (0.05, 0.95).
    const double target = mus[chosen] * (0.05 + 0.9 * u(rng));
    for (double& x : lam) x *= target / lam_total;
    std::vector<double> frac(R);
    for (auto& f : frac) f = n % 2 ? 1.0 : 0.3 + 0.7 * u(rng);
    for (const bool binary : {false, true}) {
      ConicModel m;
      const GeneralContext ctx =
          make_context(m, mus, s2, lam,
                       std::vector<std::vector<double>>(P, std::vector<double>(R, 1.0)),
                       binary);
      double routed = 0.0;
      for (std::size_t r = 0; r < R; ++r) {
        routed += lam[r] * (binary ? 1.0 : frac[r]);
      }
      const double m_c = mus[chosen];
      const double L_ref = testing::residual_work_l(routed, m_c, std::sqrt(s2[chosen]));
      const double W_ref = L_ref / routed;
      std::vector<std::pair<MetricKind, MetricVariant>> todo;
      if (binary) {
        todo = {{MetricKind::L, MetricVariant::BinarySForm},
                {MetricKind::W, MetricVariant::BinarySForm}};
      } else {
        todo = {{MetricKind::L, MetricVariant::RForm},
                {MetricKind::L, MetricVariant::SForm},
                {MetricKind::W, MetricVariant::SForm}};
      }
      for (const auto& [kind, variant] : todo) {
        const int next = static_cast<int>(m.num_variables());
        const MetricBundle b = metric_constraint(ctx, kind, variant, next);
        PointAssignment pt(static_cast<std::size_t>(next) + b.aux.size());
        for (std::size_t p = 0; p < P; ++p) {
          pt.set(ctx.X[p], p == chosen ? 1.0 : 0.0);
          for (std::size_t r = 0; r < R; ++r) {
            pt.set(ctx.Y[p][r], p == chosen ? (binary ? 1.0 : frac[r]) : 0.0);
          }
        }
        set_tight_auxiliaries(ctx, b, variant, pt);
        const double got = b.lhs.evaluate(pt);
        const double want = kind == MetricKind::L ? L_ref : W_ref;
        const double rel = std::abs(got - want) / want;
        worst = std::max(worst, rel);
        bad_points += rel > 1e-9;
      }
    }
  }
  const double t = seconds_since(t0);
  return {bad_maps == 0 && bad_points == 0 && t < 1.0,
          std::to_string(maps - bad_maps) + "/" + std::to_string(maps) +
              " coefficient maps match, " + std::to_string(bad_points) +
              " tight-point mismatches over 100 parameter points (worst rel " +
              fmt(worst, 3) + "), " + fmt(t, 3) + " s"};
}

// 9. Determinism of files and single-threaded search.
Outcome determinism() {
  const auto t0 = Clock::now();
  int bad = 0;
  std::vector<std::string> what;
  auto expect = [&](bool ok, const std::string& name) {
    if (!ok) {
      ++bad;
      what.push_back(name);
    }
  };
  for (const char* name : {"desk-small", "holmberg-large"}) {
    GenSpec s = preset(name);
    s.seed = 77;
    expect(dump_instance(generate(s)) == dump_instance(generate(s)),
           std::string(name) + " instance");
  }
  GenSpec mid;
  mid.n_facilities = 5;
  mid.n_levels = 2;
  mid.n_customers = 12;
  mid.seed = 5;
  for (const LocationInstance& in : {testing::desk_small(7), generate(mid)}) {
    for (FormulationId f : kAllFormulations) {
      const BuildReceipt a = build(in, f), b = build(in, f);
      const std::string tag = std::string(to_string(f)) + " on " +
                              std::to_string(in.facilities) + "x" +
                              std::to_string(in.customers);
      expect(dump_model(a.model) == dump_model(b.model), "model dump " + tag);
      expect(export_cbf(a.model) == export_cbf(b.model), "export " + tag);
      SolverConfig c;
      c.threads = 1;
      c.seed = 3;
      const SolveResult r1 = solve(a.model, c), r2 = solve(b.model, c);
      expect(r1.nodes == r2.nodes && r1.cuts == r2.cuts &&
                 r1.primal == r2.primal,
             "search " + tag);
    }
  }
  std::string d = std::to_string(bad) + " differences, " +
                  fmt(seconds_since(t0), 3) + " s";
  for (const auto& w : what) d += "\n      " + w;
  return {bad == 0, d};
}

// 10. Scale smoke test.
Outcome scale_smoke() {
  const auto t0 = Clock::now();
  GenSpec s;
  s.name = "scale";
  s.n_facilities = 10;
  s.n_levels = 3;
  s.n_customers = 40;
  s.seed = 1;
  const LocationInstance in = generate(s);
  const BuildReceipt b = build(in, FormulationId::M1);
  SolverConfig c;
  c.rel_gap = 1e-4;
  c.time_limit = 600.0;
  c.branching = Branching::PseudoCost;
  const SolveResult r = solve(b.model, c);
  bool ok = r.status == SolveStatus::Optimal && r.gap <= 1e-4 &&
            r.incumbent.has_value();
  double value = std::numeric_limits<double>::quiet_NaN();
  if (ok) {
    value = evaluate(in, extract(b, *r.incumbent).assignment);
    ok = rel_close(value, r.primal, 1e-6);
  }
  const double t = seconds_since(t0);
  return {ok && t < 600.0,
          std::string("status ") + to_string(r.status) + ", primal " +
              fmt(r.primal, 12) + ", re-evaluated " + fmt(value, 12) +
              ", gap " + fmt(r.gap, 3) + ", nodes " + std::to_string(r.nodes) +
              ", " + fmt(t, 4) + " s"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"queueing formula suite", queueing_formulas},
      {"simulation cross-check", simulation_cross_check},
      {"convexification equivalence", convexification},
      {"oracle equivalence", oracle_equivalence},
      {"objective identity", objective_identity},
      {"root-bound ordering", root_bound_ordering},
      {"structural counts", structural_counts},
      {"metric-constraint generators", metric_generators},
      {"determinism", determinism},
      {"scale smoke test", scale_smoke}};
  std::set<int> only;
  for (int a = 1; a < argc; ++a) only.insert(std::atoi(argv[a]));
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << id << " ("
              << criteria[i].first << "): " << o.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
