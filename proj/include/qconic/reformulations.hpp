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

// Four exact MISOCP formulations of the congested location model.
//
// Write L_ik = sum_j lambda_j y_ikj for the load and c2 = (mu sigma)^2.
//
//  M1  aux r, t.     t = mu - L,  2L^2 + r^2 + t^2 <= (r + t)^2
//                    (congestion cost w (1 + c2) r / (2 mu) + w L / mu)
//  M2  aux s, t.     t = mu - L,  2 sum_j lambda_j y_j^2 + s^2 + t^2
//                    <= (s + t)^2; valid only for binary y
//  M3  aux s, p, q.  p = mu (s - 1),  q = s mu - 2L + mu,  4L^2 + p^2 <= q^2
//  M4  aux s, t, v.  t = mu - L,  v = s mu - L,  2L^2 + t^2 + v^2 <= (t + v)^2
//
// M2-M4 share the congestion cost w (1 + c2) s / 2 + w (1 - c2) L / (2 mu).
// Every builder emits the common assignment rows, the secondary-form row
// per (i, k) and the matching primary-form norm row.

#ifndef QCONIC_REFORMULATIONS_HPP_
#define QCONIC_REFORMULATIONS_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qconic/conic.hpp"
#include "qconic/error.hpp"
#include "qconic/location.hpp"
#include "qconic/model.hpp"

namespace qconic {

enum class FormulationId { M1, M2, M3, M4 };

inline constexpr std::array<FormulationId, 4> kAllFormulations = {
    FormulationId::M1, FormulationId::M2, FormulationId::M3,
    FormulationId::M4};

inline std::string_view to_string(FormulationId f) {
  switch (f) {
    case FormulationId::M1: return "M1";
    case FormulationId::M2: return "M2";
    case FormulationId::M3: return "M3";
    case FormulationId::M4: return "M4";
  }
  return "?";
}

inline int formulation_number(FormulationId f) {
  return static_cast<int>(f) + 1;
}

// Accepts "1".."4" or "M1".."M4".
inline FormulationId formulation_from_string(std::string_view s) {
  if (s.size() == 2 && (s[0] == 'M' || s[0] == 'm')) s.remove_prefix(1);
  if (s.size() == 1 && s[0] >= '1' && s[0] <= '4') {
    return static_cast<FormulationId>(s[0] - '1');
  }
  throw InvalidArgument("unknown formulation '" + std::string(s) + "'");
}

// Variable ids by family. Auxiliary families absent from a formulation hold
// invalid ids.
struct VarMap {
  std::vector<std::vector<VarId>> x;               // [i][k]
  std::vector<std::vector<std::vector<VarId>>> y;  // [i][k][j]
  std::vector<std::vector<VarId>> r, s, t, p, q, v;
};

struct BuildReceipt {
  ConicModel model;
  VarMap vars;
  FormulationId formulation = FormulationId::M1;
  LocationInstance instance;
};

namespace detail {

inline std::string ik_name(const char* fam, int i, int k) {
  return std::string(fam) + "[" + std::to_string(i) + "][" +
         std::to_string(k) + "]";
}

inline std::vector<std::vector<VarId>> aux_family(ConicModel& m,
                                                  const char* fam, int I,
                                                  int K, double lower) {
  std::vector<std::vector<VarId>> ids(static_cast<std::size_t>(I));
  for (int i = 0; i < I; ++i) {
    for (int k = 0; k < K; ++k) {
      ids[i].push_back(m.add_continuous(ik_name(fam, i, k), lower));
    }
  }
  return ids;
}

inline double cv2(const LocationInstance& in, int i, int k) {
  const double c = in.mu[i][k] * in.sigma[i][k];
  return c * c;
}

}  // namespace detail

// Load expression sum_j lambda_j y_ikj.
inline LinExpr load_expr(const BuildReceipt& b, int i, int k) {
  LinExpr e;
  for (int j = 0; j < b.instance.customers; ++j) {
    e.add(b.vars.y[i][k][j], b.instance.lambda[j]);
  }
  return e;
}

inline BuildReceipt build(const LocationInstance& in, FormulationId which) {
  validate_instance(in);
  BuildReceipt b;
  b.formulation = which;
  b.instance = in;
  ConicModel& m = b.model;
  VarMap& vm = b.vars;
  const int I = in.facilities, K = in.levels, J = in.customers;

  vm.x.assign(static_cast<std::size_t>(I), {});
  vm.y.assign(static_cast<std::size_t>(I), {});
  for (int i = 0; i < I; ++i) {
    for (int k = 0; k < K; ++k) {
      vm.x[i].push_back(m.add_binary(detail::ik_name("x", i, k)));
    }
  }
  for (int i = 0; i < I; ++i) {
    vm.y[i].assign(static_cast<std::size_t>(K), {});
    for (int k = 0; k < K; ++k) {
      for (int j = 0; j < J; ++j) {
        vm.y[i][k].push_back(m.add_binary(detail::ik_name("y", i, k) + "[" +
                                          std::to_string(j) + "]"));
      }
    }
  }
  const bool has_r = which == FormulationId::M1;
  const bool has_t = which != FormulationId::M3;
  const bool has_s = which != FormulationId::M1;
  if (has_r) vm.r = detail::aux_family(m, "r", I, K, 0.0);
  if (has_s) vm.s = detail::aux_family(m, "s", I, K, 0.0);
  if (has_t) vm.t = detail::aux_family(m, "t", I, K, 0.0);
  if (which == FormulationId::M3) {
    vm.p = detail::aux_family(m, "p", I, K, -kInfinity);
    vm.q = detail::aux_family(m, "q", I, K, 0.0);
  }
  if (which == FormulationId::M4) vm.v = detail::aux_family(m, "v", I, K, 0.0);

  // Assignment structure.
  for (int j = 0; j < J; ++j) {
    LinExpr e(-1.0);
    for (int i = 0; i < I; ++i) {
      for (int k = 0; k < K; ++k) e.add(vm.y[i][k][j], 1.0);
    }
    m.linear_eqs.push_back(std::move(e));
  }
  for (int i = 0; i < I; ++i) {
    for (int k = 0; k < K; ++k) {
      for (int j = 0; j < J; ++j) {
        m.linear_ineqs.push_back(LinExpr(vm.y[i][k][j], 1.0) -
                                 LinExpr(vm.x[i][k], 1.0));
      }
    }
  }
  for (int i = 0; i < I; ++i) {
    LinExpr e(-1.0);
    for (int k = 0; k < K; ++k) e.add(vm.x[i][k], 1.0);
    m.linear_ineqs.push_back(std::move(e));
  }
  for (int i = 0; i < I; ++i) {
    for (int k = 0; k < K; ++k) {
      m.linear_ineqs.push_back(load_expr(b, i, k) -
                               LinExpr(vm.x[i][k], in.mu[i][k]));
    }
  }

  // Formulation rows and objective.
  const double root2 = std::sqrt(2.0);
  for (int i = 0; i < I; ++i) {
    for (int k = 0; k < K; ++k) {
      const double mu = in.mu[i][k];
      const double c2 = detail::cv2(in, i, k);
      const LinExpr L = load_expr(b, i, k);
      const LinExpr slack = LinExpr(mu) - L;  // mu - L
      m.objective.add(vm.x[i][k], in.f[i][k]);
      for (int j = 0; j < J; ++j) {
        m.objective.add(vm.y[i][k][j], in.d[i][j] * in.lambda[j]);
      }
      if (has_t) {
        m.linear_eqs.push_back(LinExpr(vm.t[i][k], 1.0) - slack);
      }
      switch (which) {
        case FormulationId::M1: {
          const LinExpr r(vm.r[i][k], 1.0), t(vm.t[i][k], 1.0);
          m.objective.add(vm.r[i][k], in.w[i] * (1.0 + c2) / (2.0 * mu));
          for (int j = 0; j < J; ++j) {
            m.objective.add(vm.y[i][k][j], in.w[i] * in.lambda[j] / mu);
          }
          m.soc_secondary.push_back(
              {SecondaryForm::FormI, {root2 * L, r, t}, r + t, std::nullopt});
          m.soc_primary.push_back({{2.0 * L, r - slack}, r + slack});
          break;
        }
        case FormulationId::M2: {
          const LinExpr s(vm.s[i][k], 1.0), t(vm.t[i][k], 1.0);
          SocSecondary row{SecondaryForm::FormI, {}, s + t, std::nullopt};
          SocPrimary prim;
          for (int j = 0; j < J; ++j) {
            const double lam = in.lambda[j];
            if (lam == 0.0) continue;
            row.quad_rows.emplace_back(vm.y[i][k][j], std::sqrt(2.0 * lam));
            prim.norm_rows.emplace_back(vm.y[i][k][j], 2.0 * std::sqrt(lam));
          }
          row.quad_rows.push_back(s);
          row.quad_rows.push_back(t);
          prim.norm_rows.push_back(s - slack);
          prim.rhs = s + slack;
          m.soc_secondary.push_back(std::move(row));
          m.soc_primary.push_back(std::move(prim));
          break;
        }
        case FormulationId::M3: {
          const LinExpr s(vm.s[i][k], 1.0), p(vm.p[i][k], 1.0),
              q(vm.q[i][k], 1.0);
          // p = s mu - L - mu + L and q = s mu - L + mu - L.
          m.linear_eqs.push_back(p - (mu * s - LinExpr(mu)));
          m.linear_eqs.push_back(q - (mu * s - L + slack));
          m.soc_secondary.push_back(
              {SecondaryForm::FormI, {2.0 * L, p}, q, std::nullopt});
          m.soc_primary.push_back(
              {{2.0 * L, (mu * s - L) - slack}, (mu * s - L) + slack});
          break;
        }
        case FormulationId::M4: {
          const LinExpr s(vm.s[i][k], 1.0), t(vm.t[i][k], 1.0),
              v(vm.v[i][k], 1.0);
          m.linear_eqs.push_back(v - (mu * s - L));
          m.soc_secondary.push_back(
              {SecondaryForm::FormI, {root2 * L, t, v}, t + v, std::nullopt});
          m.soc_primary.push_back(
              {{2.0 * L, (mu * s - L) - slack}, (mu * s - L) + slack});
          break;
        }
      }
      if (has_s) {
        m.objective.add(vm.s[i][k], in.w[i] * (1.0 + c2) / 2.0);
        for (int j = 0; j < J; ++j) {
          m.objective.add(vm.y[i][k][j],
                          in.w[i] * (1.0 - c2) * in.lambda[j] / (2.0 * mu));
        }
      }
    }
  }
  m.metadata["formulation"] = std::string(to_string(which));
  m.metadata["facilities"] = std::to_string(I);
  m.metadata["levels"] = std::to_string(K);
  m.metadata["customers"] = std::to_string(J);
  for (const auto& [k, v] : in.metadata) m.metadata["instance." + k] = v;
  return b;
}

// Smallest auxiliary values compatible with assignment `a`, with x and y
// copied from `a`. Unstable loads make the point undefined and throw.
inline PointAssignment tight_point(const BuildReceipt& b, const Assignment& a) {
  const LocationInstance& in = b.instance;
  const VarMap& vm = b.vars;
  PointAssignment pt(b.model.num_variables());
  const int I = in.facilities, K = in.levels, J = in.customers;
  for (int i = 0; i < I; ++i) {
    for (int k = 0; k < K; ++k) {
      pt.set(vm.x[i][k], a.x(i, k));
      for (int j = 0; j < J; ++j) pt.set(vm.y[i][k][j], a.y(i, k, j));
      const double mu = in.mu[i][k];
      const double L = load(in, a, i, k);
      if (!(L < mu)) {
        throw UnstableQueueError("load reaches service rate at facility " +
                                 std::to_string(i));
      }
      const double s = L / (mu - L);
      if (!vm.r.empty()) pt.set(vm.r[i][k], L * L / (mu - L));
      if (!vm.s.empty()) pt.set(vm.s[i][k], s);
      if (!vm.t.empty()) pt.set(vm.t[i][k], mu - L);
      if (!vm.p.empty()) pt.set(vm.p[i][k], mu * (s - 1.0));
      if (!vm.q.empty()) pt.set(vm.q[i][k], s * mu - 2.0 * L + mu);
      if (!vm.v.empty()) pt.set(vm.v[i][k], s * mu - L);
    }
  }
  return pt;
}

struct TightnessGap {
  std::string variable;
  double value = 0.0;  // solver value
  double tight = 0.0;  // smallest value compatible with the assignment
  double gap = 0.0;    // value - tight
};

struct Extraction {
  Assignment assignment;
  std::vector<TightnessGap> gaps;

  double max_abs_gap() const {
    double g = 0.0;
    for (const auto& t : gaps) g = std::max(g, std::abs(t.gap));
    return g;
  }
};

// Rounds the binaries of `point` and reports how far each auxiliary is from
// its tight value. Throws NonIntegralError when a binary is farther than the
// integrality tolerance from {0, 1}.
inline Extraction extract(const BuildReceipt& b, const PointAssignment& point) {
  const LocationInstance& in = b.instance;
  const VarMap& vm = b.vars;
  const int I = in.facilities, K = in.levels, J = in.customers;
  Extraction out{Assignment(in), {}};
  auto round01 = [&](VarId v) {
    const double x = point.at(v);
    const double r = std::round(x);
    if (std::abs(x - r) > kIntegralityTolerance || (r != 0.0 && r != 1.0)) {
      throw NonIntegralError("variable '" + b.model.variable(v).name +
                             "' is not binary");
    }
    return static_cast<int>(r);
  };
  for (int i = 0; i < I; ++i) {
    for (int k = 0; k < K; ++k) {
      out.assignment.set_x(i, k, round01(vm.x[i][k]));
      for (int j = 0; j < J; ++j) {
        out.assignment.set_y(i, k, j, round01(vm.y[i][k][j]));
      }
    }
  }
  for (int i = 0; i < I; ++i) {
    for (int k = 0; k < K; ++k) {
      const double mu = in.mu[i][k];
      const double L = load(in, out.assignment, i, k);
      const double inf = std::numeric_limits<double>::infinity();
      const bool stable = L < mu;
      const double s = stable ? L / (mu - L) : inf;
      auto report = [&](const std::vector<std::vector<VarId>>& fam,
                        double tight) {
        if (fam.empty()) return;
        const VarId id = fam[i][k];
        const double val = point.at(id);
        out.gaps.push_back(
            {b.model.variable(id).name, val, tight, val - tight});
      };
      report(vm.r, stable ? L * L / (mu - L) : inf);
      report(vm.s, s);
      report(vm.t, mu - L);
      report(vm.p, mu * (s - 1.0));
      report(vm.q, s * mu - 2.0 * L + mu);
      report(vm.v, s * mu - L);
    }
  }
  return out;
}

// (formulation objective at the tight auxiliaries, direct evaluation).
inline std::pair<double, double> objective_identity_check(
    const BuildReceipt& b, const Assignment& a) {
  const double direct = evaluate(b.instance, a);
  return {b.model.objective.evaluate(tight_point(b, a)), direct};
}

struct StructuralRow {
  FormulationId formulation;
  int aux_reals = 0;
  int added_constraints = 0;
  int form1_rows = 0;
  int form2_rows = 0;

  bool operator==(const StructuralRow&) const = default;
};

// Auxiliary reals, linear rows beyond the assignment structure, and conic
// rows per formulation, counted from the built models.
inline std::vector<StructuralRow> structural_compare(
    const LocationInstance& in) {
  const int I = in.facilities, K = in.levels, J = in.customers;
  const int base_rows = J + I * K * J + I + I * K;
  std::vector<StructuralRow> rows;
  for (FormulationId f : kAllFormulations) {
    const ModelStats st = stats(build(in, f).model);
    rows.push_back({f, st.continuous_vars, st.linear_rows - base_rows,
                    st.form1_rows, st.form2_rows});
  }
  return rows;
}

}  // namespace qconic

#endif  // QCONIC_REFORMULATIONS_HPP_
