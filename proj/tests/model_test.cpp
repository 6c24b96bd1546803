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


#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "qconic/model.hpp"
#include "qconic/model_io.hpp"
#include "qconic/reformulations.hpp"
#include "test_support.hpp"

namespace qconic {
namespace {

bool mentions(const std::vector<std::string>& list, const std::string& what) {
  for (const auto& s : list) {
    if (s.find(what) != std::string::npos) return true;
  }
  return false;
}

ConicModel one_cone_model() {
  ConicModel m;
  const VarId v = m.add_continuous("v", 0.0, 1.0);
  const VarId t = m.add_continuous("t", 0.0, kInfinity);
  const VarId b = m.add_binary("b");
  m.objective = LinExpr(t, 1.0) - LinExpr(v, 1.0);
  m.linear_eqs.push_back(LinExpr(b, 1.0) - LinExpr(1.0));
  m.linear_ineqs.push_back(LinExpr(v, 1.0) - LinExpr(b, 1.0));
  m.soc_primary.push_back({{LinExpr(v, 1.0)}, LinExpr(t, 1.0)});
  m.soc_secondary.push_back(
      {SecondaryForm::FormI, {LinExpr(v, 1.0)}, LinExpr(t, 1.0), std::nullopt});
  return m;
}

TEST(Validate, EmptyModelIsClean) {
  EXPECT_TRUE(validate(ConicModel{}).empty());
  EXPECT_EQ(stats(ConicModel{}), ModelStats{});
}

TEST(Validate, BuilderOutputIsClean) {
  for (FormulationId f : kAllFormulations) {
    EXPECT_TRUE(validate(build(testing::desk_small(3), f).model).empty())
        << to_string(f);
  }
}

TEST(Validate, UnboundedSecondaryVariable) {
  ConicModel m;
  const VarId x = m.add_continuous("x");
  const VarId y = m.add_continuous("y");
  const VarId z = m.add_continuous("z", 0.0, kInfinity);
  m.soc_secondary.push_back({SecondaryForm::FormII, {LinExpr(x, 1.0)},
                             LinExpr(y, 1.0), LinExpr(z, 1.0)});
  EXPECT_TRUE(mentions(validate(m),
                       "secondary-form bound variable not provably nonnegative"));
}

TEST(Validate, StructuralDefects) {
  ConicModel m;
  m.add_continuous("a", 2.0, 1.0);
  m.variables.push_back({VarId{7}, "b", VarKind::Binary, 0.0, 2.0});
  m.linear_eqs.push_back(LinExpr(VarId{9}, 1.0));
  m.soc_primary.push_back({{}, LinExpr(1.0)});
  const auto d = validate(m);
  EXPECT_TRUE(mentions(d, "lower bound exceeds upper bound"));
  EXPECT_TRUE(mentions(d, "id does not match position"));
  EXPECT_TRUE(mentions(d, "binary variable bounds outside"));
  EXPECT_TRUE(mentions(d, "undeclared variable"));
  EXPECT_TRUE(mentions(d, "empty norm"));
}

TEST(EvalFeasible, AcceptsFeasiblePoint) {
  const ConicModel m = one_cone_model();
  const auto r = eval_feasible(m, PointAssignment({0.5, 0.5, 1.0}));
  EXPECT_TRUE(r.feasible);
  EXPECT_TRUE(r.violations.empty());
}

TEST(EvalFeasible, ReportsFractionalBinary) {
  const ConicModel m = one_cone_model();
  const auto r = eval_feasible(m, PointAssignment({0.5, 0.5, 0.5}));
  EXPECT_FALSE(r.feasible);
  EXPECT_TRUE(mentions(r.violations, "integrality violated by 'b'"));
}

TEST(EvalFeasible, ReportsViolatedEquality) {
  const BuildReceipt b = build(testing::unit_instance(), FormulationId::M1);
  const PointAssignment zeros(
      std::vector<double>(b.model.num_variables(), 0.0));
  const auto r = eval_feasible(b.model, zeros);
  EXPECT_FALSE(r.feasible);
  EXPECT_TRUE(mentions(r.violations, "equality 0 violated"));
}

TEST(EvalFeasible, ReportsConeAndMissingValues) {
  const ConicModel m = one_cone_model();
  const auto r = eval_feasible(m, PointAssignment({1.0, 0.25, 1.0}));
  EXPECT_TRUE(mentions(r.violations, "conic row 0"));
  EXPECT_TRUE(mentions(r.violations, "secondary row 0"));
  EXPECT_THROW(eval_feasible(m, PointAssignment(3)), MissingAssignmentError);
}

TEST(Stats, CountsFamilies) {
  const ModelStats s = stats(one_cone_model());
  EXPECT_EQ(s.continuous_vars, 2);
  EXPECT_EQ(s.binary_vars, 1);
  EXPECT_EQ(s.linear_rows, 2);
  EXPECT_EQ(s.form1_rows, 1);
  EXPECT_EQ(s.form2_rows, 0);
  EXPECT_EQ(s.primary_soc_rows, 1);
}

TEST(ModelIo, JsonRoundTrip) {
  for (FormulationId f : kAllFormulations) {
    const ConicModel m = build(testing::desk_small(5), f).model;
    const std::string text = dump_model(m);
    const ConicModel back = parse_model(text);
    EXPECT_EQ(back, m);
    EXPECT_EQ(dump_model(back), text);
  }
  EXPECT_THROW(parse_model("{"), InvalidArgument);
}

TEST(ModelIo, CbfLayout) {
  const ConicModel m = build(testing::desk_small(1), FormulationId::M1).model;
  const std::string cbf = export_cbf(m);
  std::istringstream in(cbf);
  int cones = 0;
  for (std::string line; std::getline(in, line);) {
    if (line.rfind("Q ", 0) == 0) {
      ++cones;
      EXPECT_EQ(line, "Q 3");
    }
  }
  EXPECT_EQ(cones, 6);
  EXPECT_NE(cbf.find("OBJSENSE\nMIN"), std::string::npos);
  EXPECT_EQ(export_cbf(m), cbf);
}

}  // namespace
}  // namespace qconic
