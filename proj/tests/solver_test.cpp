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


#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "qconic/reformulations.hpp"
#include "qconic/solver.hpp"
#include "test_support.hpp"

namespace qconic {
namespace {

using testing::rel_close;

SolverConfig tight() {
  SolverConfig c;
  c.rel_gap = 1e-9;
  return c;
}

TEST(Relaxation, SingleCone) {
  ConicModel m;
  const VarId v = m.add_continuous("v", 0.0, 1.0);
  const VarId t = m.add_continuous("t", 0.0, kInfinity);
  m.objective = LinExpr(t, 1.0) - LinExpr(v, 1.0);
  m.soc_primary.push_back({{LinExpr(v, 1.0)}, LinExpr(t, 1.0)});
  const RelaxationResult r = solve_relaxation(m, {}, SolverConfig{});
  ASSERT_EQ(r.outcome.status, LpStatus::Optimal);
  EXPECT_NEAR(r.outcome.objective_value, 0.0, 1e-6);
  EXPECT_LE(r.max_violation, 1e-6);
}

TEST(Relaxation, BoundsIntegerOptimum) {
  const BuildReceipt b = build(testing::unit_instance(), FormulationId::M1);
  const RelaxationResult r = solve_relaxation(b.model, {}, SolverConfig{});
  ASSERT_EQ(r.outcome.status, LpStatus::Optimal);
  EXPECT_LE(r.outcome.objective_value, 11.0 + 1e-9);
  EXPECT_LE(root_bound(b.model, SolverConfig{}), 11.0 + 1e-9);
}

TEST(Relaxation, InfeasibleRows) {
  ConicModel m;
  const VarId x = m.add_continuous("x", 0.0, 1.0);
  m.linear_ineqs.push_back(LinExpr(2.0) - LinExpr(x, 1.0));
  m.objective = LinExpr(x, 1.0);
  EXPECT_EQ(solve_relaxation(m, {}, SolverConfig{}).outcome.status,
            LpStatus::Infeasible);
  EXPECT_EQ(solve(m).status, SolveStatus::Infeasible);
}

TEST(Solve, UnitInstance) {
  for (FormulationId f : kAllFormulations) {
    const SolveResult r = solve(build(testing::unit_instance(), f).model);
    EXPECT_EQ(r.status, SolveStatus::Optimal);
    EXPECT_NEAR(r.primal, 11.0, 1e-6);
    EXPECT_LE(r.gap, 1e-5);
  }
}

TEST(Solve, MatchesReferenceOptimum) {
  for (std::uint64_t seed : {3u, 8u}) {
    const LocationInstance in = testing::desk_small(seed);
    const double want = testing::reference_optimum(in).value;
    for (FormulationId f : kAllFormulations) {
      const BuildReceipt b = build(in, f);
      const SolveResult r = solve(b.model, tight());
      ASSERT_EQ(r.status, SolveStatus::Optimal);
      EXPECT_TRUE(rel_close(r.primal, want, 1e-6)) << seed << to_string(f);
      ASSERT_TRUE(r.incumbent.has_value());
      EXPECT_TRUE(eval_feasible(b.model, *r.incumbent).feasible);
      const Extraction ex = extract(b, *r.incumbent);
      EXPECT_TRUE(rel_close(evaluate(in, ex.assignment), want, 1e-6));
    }
  }
}

TEST(Solve, AlternativeSearchSettings) {
  const LocationInstance in = testing::desk_small(6);
  const double want = testing::reference_optimum(in).value;
  const ConicModel m = build(in, FormulationId::M1).model;
  SolverConfig c = tight();
  c.branching = Branching::PseudoCost;
  EXPECT_TRUE(rel_close(solve(m, c).primal, want, 1e-6));
  c = tight();
  c.node_selection = NodeSelection::DepthFirst;
  EXPECT_TRUE(rel_close(solve(m, c).primal, want, 1e-6));
  c = tight();
  c.plunge = false;
  c.threads = 3;
  EXPECT_TRUE(rel_close(solve(m, c).primal, want, 1e-6));
  c = tight();
  c.conic_rows = ConicRows::Primary;
  EXPECT_TRUE(rel_close(solve(m, c).primal, want, 1e-6));
}

TEST(Solve, NodeLimitZero) {
  const ConicModel m = build(testing::desk_small(1), FormulationId::M1).model;
  SolverConfig c;
  c.node_limit = 0;
  const SolveResult r = solve(m, c);
  EXPECT_EQ(r.status, SolveStatus::GapLimit);
  EXPECT_TRUE(std::isfinite(r.dual_bound));
  EXPECT_LE(r.dual_bound, r.root_bound + 1e-6 * std::abs(r.root_bound));
}

TEST(Solve, TimeLimit) {
  GenSpec s;
  s.n_facilities = 10;
  s.n_levels = 3;
  s.n_customers = 40;
  const ConicModel m = build(generate(s), FormulationId::M2).model;
  SolverConfig c;
  c.time_limit = 0.05;
  const SolveResult r = solve(m, c);
  EXPECT_EQ(r.status, SolveStatus::TimeLimit);
  EXPECT_LT(r.wall_time, 30.0);
}

TEST(Solve, UnstableInstanceIsInfeasible) {
  LocationInstance in = testing::unit_instance();
  in.lambda = {2.5};
  EXPECT_EQ(solve(build(in, FormulationId::M3).model).status,
            SolveStatus::Infeasible);
}

TEST(Solve, RejectsBadConfiguration) {
  const ConicModel m = build(testing::unit_instance(), FormulationId::M1).model;
  SolverConfig c;
  c.rel_gap = 0.0;
  EXPECT_THROW(solve(m, c), InvalidArgument);
  c = SolverConfig{};
  c.threads = 0;
  EXPECT_THROW(solve(m, c), InvalidArgument);
}

TEST(Solve, DeterministicNodeCounts) {
  const ConicModel m = build(testing::desk_small(12), FormulationId::M4).model;
  const SolveResult a = solve(m, tight());
  const SolveResult b = solve(m, tight());
  EXPECT_EQ(a.nodes, b.nodes);
  EXPECT_EQ(a.cuts, b.cuts);
  EXPECT_EQ(a.primal, b.primal);
}

TEST(Solve, LogLines) {
  std::ostringstream log;
  SolverConfig c;
  c.log = &log;
  c.log_interval = 1;
  solve(build(testing::desk_small(2), FormulationId::M1).model, c);
  EXPECT_NE(log.str().find("final nodes="), std::string::npos);
}

TEST(RootBound, OrderingOnDeskInstances) {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const LocationInstance in = testing::desk_small(seed);
    const double r1 = root_bound(build(in, FormulationId::M1).model, {});
    const double r2 = root_bound(build(in, FormulationId::M2).model, {});
    const double r4 = root_bound(build(in, FormulationId::M4).model, {});
    EXPECT_LE(std::abs(r1 - r4), 1e-5 * std::abs(r1)) << seed;
    EXPECT_LE(r2, r1 + 1e-5 * std::abs(r1)) << seed;
  }
}

TEST(RootBound, ZeroDemandAndCost) {
  LocationInstance in = testing::shaped_instance(2, 2, 3);
  for (double& l : in.lambda) l = 0.0;
  for (auto& row : in.f) {
    for (double& v : row) v = 0.0;
  }
  for (FormulationId f : kAllFormulations) {
    EXPECT_NEAR(root_bound(build(in, f).model, {}), 0.0, 1e-9);
  }
}

TEST(ResultJson, NonFiniteFieldsAreNull) {
  SolveResult r;
  const auto j = to_json(r);
  EXPECT_TRUE(j.at("primal").is_null());
  EXPECT_TRUE(j.at("incumbent").is_null());
  EXPECT_EQ(j.at("status"), "Infeasible");
  EXPECT_DOUBLE_EQ(relative_gap(100.0, 99.0), 0.01);
  EXPECT_EQ(relative_gap(100.0, 101.0), 0.0);
}

}  // namespace
}  // namespace qconic
