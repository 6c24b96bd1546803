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

// ConicModel: a minimization MISOCP with linear rows and conic rows kept in
// primary form, secondary form, or both. Builders keep the two lists in sync
// when they populate both.

#ifndef QCONIC_MODEL_HPP_
#define QCONIC_MODEL_HPP_

#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qconic/conic.hpp"
#include "qconic/error.hpp"
#include "qconic/lin_expr.hpp"

namespace qconic {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();
inline constexpr double kFeasibilityTolerance = 1e-6;
inline constexpr double kIntegralityTolerance = 1e-6;

enum class VarKind { Continuous, Binary };

struct Variable {
  VarId id;
  std::string name;
  VarKind kind = VarKind::Continuous;
  double lower = -kInfinity;
  double upper = kInfinity;

  bool operator==(const Variable&) const = default;
};

struct ConicModel {
  std::vector<Variable> variables;
  LinExpr objective;                  // minimized
  std::vector<LinExpr> linear_eqs;    // expr == 0
  std::vector<LinExpr> linear_ineqs;  // expr <= 0
  std::vector<SocPrimary> soc_primary;
  std::vector<SocSecondary> soc_secondary;
  std::map<std::string, std::string> metadata;

  VarId add_variable(std::string name, VarKind kind, double lower,
                     double upper) {
    VarId id{static_cast<int>(variables.size())};
    variables.push_back({id, std::move(name), kind, lower, upper});
    return id;
  }
  VarId add_binary(std::string name) {
    return add_variable(std::move(name), VarKind::Binary, 0.0, 1.0);
  }
  VarId add_continuous(std::string name, double lower = -kInfinity,
                       double upper = kInfinity) {
    return add_variable(std::move(name), VarKind::Continuous, lower, upper);
  }

  std::size_t num_variables() const { return variables.size(); }
  const Variable& variable(VarId v) const {
    return variables.at(static_cast<std::size_t>(v.value));
  }

  bool operator==(const ConicModel&) const = default;
};

struct ModelStats {
  int continuous_vars = 0;
  int binary_vars = 0;
  int linear_rows = 0;
  int form1_rows = 0;
  int form2_rows = 0;
  int primary_soc_rows = 0;

  ModelStats& operator+=(const ModelStats& o) {
    continuous_vars += o.continuous_vars;
    binary_vars += o.binary_vars;
    linear_rows += o.linear_rows;
    form1_rows += o.form1_rows;
    form2_rows += o.form2_rows;
    primary_soc_rows += o.primary_soc_rows;
    return *this;
  }
  friend ModelStats operator+(ModelStats a, const ModelStats& b) {
    return a += b;
  }
  bool operator==(const ModelStats&) const = default;
};

inline ModelStats stats(const ConicModel& m) {
  ModelStats s;
  for (const Variable& v : m.variables) {
    (v.kind == VarKind::Binary ? s.binary_vars : s.continuous_vars)++;
  }
  s.linear_rows = static_cast<int>(m.linear_eqs.size() + m.linear_ineqs.size());
  for (const SocSecondary& c : m.soc_secondary) {
    (c.form == SecondaryForm::FormI ? s.form1_rows : s.form2_rows)++;
  }
  s.primary_soc_rows = static_cast<int>(m.soc_primary.size());
  return s;
}

namespace detail {

inline LinExpr shift_ids(const LinExpr& e, int offset) {
  LinExpr out(e.constant());
  for (const auto& [v, c] : e.terms()) out.add(VarId{v.value + offset}, c);
  return out;
}

}  // namespace detail

// Disjoint union: b's variables are renumbered after a's, objectives add.
inline ConicModel concat(const ConicModel& a, const ConicModel& b) {
  ConicModel m = a;
  const int off = static_cast<int>(a.variables.size());
  auto shift = [off](const LinExpr& e) { return detail::shift_ids(e, off); };
  for (Variable v : b.variables) {
    v.id.value += off;
    m.variables.push_back(std::move(v));
  }
  m.objective += shift(b.objective);
  for (const auto& e : b.linear_eqs) m.linear_eqs.push_back(shift(e));
  for (const auto& e : b.linear_ineqs) m.linear_ineqs.push_back(shift(e));
  for (const auto& c : b.soc_primary) {
    SocPrimary s;
    for (const auto& r : c.norm_rows) s.norm_rows.push_back(shift(r));
    s.rhs = shift(c.rhs);
    m.soc_primary.push_back(std::move(s));
  }
  for (const auto& c : b.soc_secondary) {
    SocSecondary s{c.form, {}, shift(c.y), std::nullopt};
    for (const auto& r : c.quad_rows) s.quad_rows.push_back(shift(r));
    if (c.z) s.z = shift(*c.z);
    m.soc_secondary.push_back(std::move(s));
  }
  for (const auto& [k, v] : b.metadata) m.metadata.emplace(k, v);
  return m;
}

namespace detail {

inline void check_expr(const ConicModel& m, const LinExpr& e,
                       const std::string& where,
                       std::vector<std::string>& defects) {
  if (!std::isfinite(e.constant())) {
    defects.push_back(where + ": non-finite constant");
  }
  for (const auto& [v, c] : e.terms()) {
    if (v.value < 0 || static_cast<std::size_t>(v.value) >= m.variables.size()) {
      defects.push_back(where + ": undeclared variable " +
                        std::to_string(v.value));
    }
    if (!std::isfinite(c)) {
      defects.push_back(where + ": non-finite coefficient");
    }
  }
}

// y = sum c_i w_i with c_i > 0 and w_i >= 0 by declared bounds.
inline bool provably_nonnegative(const ConicModel& m, const LinExpr& e) {
  if (e.terms().empty() || e.constant() != 0.0) return false;
  for (const auto& [v, c] : e.terms()) {
    if (!(c > 0.0)) return false;
    if (v.value < 0 || static_cast<std::size_t>(v.value) >= m.variables.size()) {
      return false;
    }
    if (!(m.variable(v).lower >= 0.0)) return false;
  }
  return true;
}

}  // namespace detail

// Structural defects of `m`; empty when every invariant holds, including the
// rule that secondary-form bound expressions are positive combinations of
// variables whose declared lower bound is nonnegative.
inline std::vector<std::string> validate(const ConicModel& m) {
  std::vector<std::string> defects;
  for (std::size_t i = 0; i < m.variables.size(); ++i) {
    const Variable& v = m.variables[i];
    const std::string where = "variable '" + v.name + "'";
    if (v.id.value != static_cast<int>(i)) {
      defects.push_back(where + ": id does not match position");
    }
    if (std::isnan(v.lower) || std::isnan(v.upper) || v.lower > v.upper) {
      defects.push_back(where + ": lower bound exceeds upper bound");
    }
    if (v.kind == VarKind::Binary && (v.lower < 0.0 || v.upper > 1.0)) {
      defects.push_back(where + ": binary variable bounds outside [0, 1]");
    }
  }
  detail::check_expr(m, m.objective, "objective", defects);
  for (std::size_t i = 0; i < m.linear_eqs.size(); ++i) {
    detail::check_expr(m, m.linear_eqs[i], "eq " + std::to_string(i), defects);
  }
  for (std::size_t i = 0; i < m.linear_ineqs.size(); ++i) {
    detail::check_expr(m, m.linear_ineqs[i], "ineq " + std::to_string(i),
                       defects);
  }
  for (std::size_t i = 0; i < m.soc_primary.size(); ++i) {
    const std::string where = "soc " + std::to_string(i);
    const SocPrimary& c = m.soc_primary[i];
    if (c.norm_rows.empty()) defects.push_back(where + ": empty norm");
    for (const auto& r : c.norm_rows) detail::check_expr(m, r, where, defects);
    detail::check_expr(m, c.rhs, where, defects);
  }
  for (std::size_t i = 0; i < m.soc_secondary.size(); ++i) {
    const std::string where = "secondary " + std::to_string(i);
    const SocSecondary& c = m.soc_secondary[i];
    if (c.quad_rows.empty()) defects.push_back(where + ": empty quadratic");
    for (const auto& r : c.quad_rows) detail::check_expr(m, r, where, defects);
    detail::check_expr(m, c.y, where, defects);
    if (c.form == SecondaryForm::FormI && c.z) {
      defects.push_back(where + ": form-I row carries a z expression");
    }
    if (c.form == SecondaryForm::FormII && !c.z) {
      defects.push_back(where + ": form-II row without z expression");
    }
    if (c.z) detail::check_expr(m, *c.z, where, defects);
    bool ok = detail::provably_nonnegative(m, c.y);
    if (c.z) ok = ok && detail::provably_nonnegative(m, *c.z);
    if (!ok) {
      defects.push_back(where +
                        ": secondary-form bound variable not provably "
                        "nonnegative");
    }
  }
  if (!m.soc_primary.empty() && !m.soc_secondary.empty() &&
      m.soc_primary.size() != m.soc_secondary.size()) {
    defects.push_back("primary and secondary conic row counts differ");
  }
  return defects;
}

struct FeasibilityReport {
  bool feasible = true;
  std::vector<std::string> violations;
};

// Checks bounds, integrality, linear rows and every conic row at `p`.
// Throws MissingAssignmentError when a variable has no value.
inline FeasibilityReport eval_feasible(const ConicModel& m,
                                       const PointAssignment& p,
                                       double tol = kFeasibilityTolerance) {
  FeasibilityReport r;
  auto fail = [&r](std::string what) {
    r.feasible = false;
    r.violations.push_back(std::move(what));
  };
  auto num = [](double x) {
    std::ostringstream os;
    os.precision(10);
    os << x;
    return os.str();
  };
  for (const Variable& v : m.variables) {
    const double x = p.at(v.id);
    if (!std::isfinite(x)) fail("variable '" + v.name + "' is not finite");
    if (x < v.lower - tol || x > v.upper + tol) {
      fail("bound violated by '" + v.name + "' = " + num(x));
    }
    if (v.kind == VarKind::Binary &&
        std::abs(x - std::round(x)) > kIntegralityTolerance) {
      fail("integrality violated by '" + v.name + "' = " + num(x));
    }
  }
  for (std::size_t i = 0; i < m.linear_eqs.size(); ++i) {
    const double v = m.linear_eqs[i].evaluate(p);
    if (std::abs(v) > tol) {
      fail("equality " + std::to_string(i) + " violated by " + num(v));
    }
  }
  for (std::size_t i = 0; i < m.linear_ineqs.size(); ++i) {
    const double v = m.linear_ineqs[i].evaluate(p);
    if (v > tol) {
      fail("inequality " + std::to_string(i) + " violated by " + num(v));
    }
  }
  for (std::size_t i = 0; i < m.soc_primary.size(); ++i) {
    const double v = soc_residual(m.soc_primary[i], p);
    if (v > tol) {
      fail("conic row " + std::to_string(i) + " violated by " + num(v));
    }
  }
  for (std::size_t i = 0; i < m.soc_secondary.size(); ++i) {
    const SocSecondary& c = m.soc_secondary[i];
    const double v = secondary_residual(c, p);
    bool bad = v > tol || c.y.evaluate(p) < -tol;
    if (c.z) bad = bad || c.z->evaluate(p) < -tol;
    if (bad) {
      fail("secondary row " + std::to_string(i) + " violated by " + num(v));
    }
  }
  return r;
}

}  // namespace qconic

#endif  // QCONIC_MODEL_HPP_
