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

// Conic representation of a budget "metric <= RH" for one M/G/1 station
// whose service option and customer routing are decisions:
//
//   mu = sum_p mu_p X_p,  sigma^2 = sum_p sigma2_p X_p,
//   lambda = sum_p sum_r lambda_r Y_pr,
//   sum lambda_r Y_pr <= sum mu_p X_p,  sum_p X_p = 1,  X binary,
//   0 <= Y_pr <= U_pr X_p.
//
// With L_p = sum_r lambda_r Y_pr and c2_p = mu_p^2 sigma2_p the variants are
//
//   R-form   L_p^2 <= r_p (mu_p - L_p)
//   S-form   L_p^2 <= (s_p mu_p - L_p)(mu_p - L_p)
//   BinaryS  sum_r lambda_r Y_pr^2 <= s_p (mu_p - L_p)   (binary Y only)
//
// and the budget rows
//
//   L    R:  sum (1 + c2) r_p / (2 mu_p) + L_p / mu_p
//        S:  sum (1 + c2) s_p / 2 + (1 - c2) L_p / (2 mu_p)
//   W    S:  sum (1 + c2) s_p / (2 mu_p) + X_p / mu_p
//   Lq = L - sum L_p / mu_p,  Wq = W - sum X_p / mu_p,  TW = L,  TWq = Lq.

#ifndef QCONIC_METRIC_CONSTRAINT_HPP_
#define QCONIC_METRIC_CONSTRAINT_HPP_

#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "qconic/conic.hpp"
#include "qconic/error.hpp"
#include "qconic/model.hpp"
#include "qconic/queueing.hpp"

namespace qconic {

struct GeneralContext {
  std::vector<double> mu;                 // [p]
  std::vector<double> sigma2;             // [p]
  std::vector<double> lambda;             // [r]
  std::vector<std::vector<double>> U;     // [p][r]
  bool y_binary = false;
  std::vector<VarId> X;                   // [p]
  std::vector<std::vector<VarId>> Y;      // [p][r]
  LinExpr rhs;

  std::size_t options() const { return mu.size(); }
  std::size_t classes() const { return lambda.size(); }
};

// Declares X and Y in `m` and returns a context whose rhs is zero.
inline GeneralContext make_context(ConicModel& m, std::vector<double> mu,
                                   std::vector<double> sigma2,
                                   std::vector<double> lambda,
                                   std::vector<std::vector<double>> U,
                                   bool y_binary) {
  GeneralContext c{std::move(mu), std::move(sigma2), std::move(lambda),
                   std::move(U), y_binary, {}, {}, LinExpr()};
  if (c.sigma2.size() != c.mu.size() || c.U.size() != c.mu.size()) {
    throw InvalidArgument("per-option data must have equal lengths");
  }
  for (std::size_t p = 0; p < c.options(); ++p) {
    if (!(c.mu[p] > 0.0)) throw InvalidArgument("mu_p must be positive");
    if (!(c.sigma2[p] >= 0.0)) throw InvalidArgument("sigma2_p must be >= 0");
    if (c.U[p].size() != c.classes()) {
      throw InvalidArgument("U must have one entry per demand class");
    }
    c.X.push_back(m.add_binary("X[" + std::to_string(p) + "]"));
  }
  for (std::size_t p = 0; p < c.options(); ++p) {
    c.Y.emplace_back();
    for (std::size_t r = 0; r < c.classes(); ++r) {
      const std::string name =
          "Y[" + std::to_string(p) + "][" + std::to_string(r) + "]";
      c.Y[p].push_back(y_binary ? m.add_binary(name)
                                : m.add_continuous(name, 0.0, kInfinity));
    }
  }
  return c;
}

enum class MetricVariant { RForm, SForm, BinarySForm };

inline std::string_view to_string(MetricVariant v) {
  switch (v) {
    case MetricVariant::RForm: return "R-form";
    case MetricVariant::SForm: return "S-form";
    case MetricVariant::BinarySForm: return "BinaryS-form";
  }
  return "?";
}

// Which closed-form special case the coefficients were reduced to.
enum class QueueSpecialCase { General, MM1, MD1 };

struct MetricOptions {
  // Divide the s_p term of the L / Lq S-form budget by mu_p as well. This
  // form does not reproduce the metric at the tight point and exists only
  // to compare against that variant of the row.
  bool divide_s_term_by_rate = false;
};

struct MetricBundle {
  std::vector<Variable> aux;             // ids continue the model's numbering
  std::vector<VarId> aux_ids;            // [p], r_p or s_p
  std::vector<LinExpr> side_eqs;         // == 0
  std::vector<LinExpr> side_ineqs;       // <= 0
  std::vector<HyperbolicConstraint> hyperbolic;
  LinExpr lhs;                           // metric expression
  LinExpr budget;                        // lhs - rhs <= 0
  QueueSpecialCase special_case = QueueSpecialCase::General;
};

inline constexpr double kSpecialCaseTolerance = 1e-12;

inline QueueSpecialCase detect_special_case(const GeneralContext& c) {
  bool mm1 = !c.mu.empty(), md1 = !c.mu.empty();
  for (std::size_t p = 0; p < c.options(); ++p) {
    const double c2 = c.mu[p] * c.mu[p] * c.sigma2[p];
    mm1 = mm1 && std::abs(c2 - 1.0) <= kSpecialCaseTolerance;
    md1 = md1 && c.sigma2[p] == 0.0;
  }
  if (mm1) return QueueSpecialCase::MM1;
  if (md1) return QueueSpecialCase::MD1;
  return QueueSpecialCase::General;
}

// Builds the bundle for `metric <= ctx.rhs`. `next_id` is the id the first
// auxiliary variable will receive (normally the model's variable count).
inline MetricBundle metric_constraint(const GeneralContext& ctx,
                                      MetricKind kind, MetricVariant variant,
                                      int next_id,
                                      const MetricOptions& opt = {}) {
  if (variant == MetricVariant::BinarySForm && !ctx.y_binary) {
    throw InvalidArgument("BinaryS-form requires binary Y variables");
  }
  const bool waiting = kind == MetricKind::W || kind == MetricKind::Wq;
  if (waiting && variant == MetricVariant::RForm) {
    throw InvalidArgument("waiting-time metrics have no R-form");
  }
  if (ctx.X.size() != ctx.options() || ctx.Y.size() != ctx.options()) {
    throw InvalidArgument("context variables are not declared");
  }
  const bool queue_only = kind == MetricKind::Lq || kind == MetricKind::TWq ||
                          kind == MetricKind::Wq;

  MetricBundle b;
  b.special_case = detect_special_case(ctx);
  const std::size_t P = ctx.options(), R = ctx.classes();

  // Side conditions.
  LinExpr agg;
  LinExpr one(-1.0);
  for (std::size_t p = 0; p < P; ++p) {
    for (std::size_t r = 0; r < R; ++r) agg.add(ctx.Y[p][r], ctx.lambda[r]);
    agg.add(ctx.X[p], -ctx.mu[p]);
    one.add(ctx.X[p], 1.0);
  }
  b.side_ineqs.push_back(std::move(agg));
  b.side_eqs.push_back(std::move(one));
  for (std::size_t p = 0; p < P; ++p) {
    for (std::size_t r = 0; r < R; ++r) {
      b.side_ineqs.push_back(LinExpr(ctx.Y[p][r], 1.0) -
                             LinExpr(ctx.X[p], ctx.U[p][r]));
    }
  }

  const char* aux_name = variant == MetricVariant::RForm ? "r" : "s";
  for (std::size_t p = 0; p < P; ++p) {
    const VarId id{next_id + static_cast<int>(p)};
    b.aux.push_back({id, std::string(aux_name) + "[" + std::to_string(p) + "]",
                     VarKind::Continuous, 0.0, kInfinity});
    b.aux_ids.push_back(id);
  }

  for (std::size_t p = 0; p < P; ++p) {
    const double mu = ctx.mu[p];
    LinExpr Lp;
    for (std::size_t r = 0; r < R; ++r) Lp.add(ctx.Y[p][r], ctx.lambda[r]);
    const LinExpr aux(b.aux_ids[p], 1.0);
    const LinExpr slack = LinExpr(mu) - Lp;
    HyperbolicConstraint h;
    switch (variant) {
      case MetricVariant::RForm:
        h = {{Lp}, aux, slack};
        break;
      case MetricVariant::SForm:
        h = {{Lp}, mu * aux - Lp, slack};
        break;
      case MetricVariant::BinarySForm:
        for (std::size_t r = 0; r < R; ++r) {
          if (ctx.lambda[r] != 0.0) {
            h.x.emplace_back(ctx.Y[p][r], std::sqrt(ctx.lambda[r]));
          }
        }
        if (h.x.empty()) h.x.emplace_back(0.0);
        h.y = aux;
        h.z = slack;
        break;
    }
    b.hyperbolic.push_back(std::move(h));

    // Budget coefficients; the special cases use exact constants.
    double one_plus_c2 = 1.0 + mu * mu * ctx.sigma2[p];
    double one_minus_c2 = 1.0 - mu * mu * ctx.sigma2[p];
    if (b.special_case == QueueSpecialCase::MM1) {
      one_plus_c2 = 2.0;
      one_minus_c2 = 0.0;
    } else if (b.special_case == QueueSpecialCase::MD1) {
      one_plus_c2 = 1.0;
      one_minus_c2 = 1.0;
    }
    if (waiting) {
      b.lhs.add(b.aux_ids[p], one_plus_c2 / (2.0 * mu));
      if (!queue_only) b.lhs.add(ctx.X[p], 1.0 / mu);
    } else if (variant == MetricVariant::RForm) {
      b.lhs.add(b.aux_ids[p], one_plus_c2 / (2.0 * mu));
      if (!queue_only) b.lhs += (1.0 / mu) * Lp;
    } else {
      const double s_coef = opt.divide_s_term_by_rate
                                ? one_plus_c2 / (2.0 * mu)
                                : one_plus_c2 / 2.0;
      b.lhs.add(b.aux_ids[p], s_coef);
      double load_coef = one_minus_c2 / (2.0 * mu);
      if (queue_only) load_coef = -one_plus_c2 / (2.0 * mu);
      b.lhs += load_coef * Lp;
    }
  }
  b.budget = b.lhs - ctx.rhs;
  return b;
}

// Adds the bundle to `m`: auxiliaries, side rows, budget row, and each
// hyperbolic row as a primary-form cone.
inline void append_bundle(ConicModel& m, const MetricBundle& b) {
  for (const Variable& v : b.aux) {
    if (v.id.value != static_cast<int>(m.variables.size())) {
      throw InvalidArgument("bundle auxiliaries do not continue model ids");
    }
    m.variables.push_back(v);
  }
  for (const auto& e : b.side_eqs) m.linear_eqs.push_back(e);
  for (const auto& e : b.side_ineqs) m.linear_ineqs.push_back(e);
  m.linear_ineqs.push_back(b.budget);
  for (const auto& h : b.hyperbolic) m.soc_primary.push_back(hyperbolic_to_soc(h));
}

// Tight auxiliary values for a point that fixes X and Y.
inline void set_tight_auxiliaries(const GeneralContext& ctx,
                                  const MetricBundle& b, MetricVariant variant,
                                  PointAssignment& pt) {
  for (std::size_t p = 0; p < ctx.options(); ++p) {
    const double mu = ctx.mu[p];
    double Lp = 0.0;
    double Lp_sq = 0.0;
    for (std::size_t r = 0; r < ctx.classes(); ++r) {
      const double y = pt.at(ctx.Y[p][r]);
      Lp += ctx.lambda[r] * y;
      Lp_sq += ctx.lambda[r] * y * y;
    }
    if (!(Lp < mu)) throw UnstableQueueError("option load reaches mu_p");
    double v = 0.0;
    switch (variant) {
      case MetricVariant::RForm: v = Lp * Lp / (mu - Lp); break;
      case MetricVariant::SForm: v = Lp / (mu - Lp); break;
      case MetricVariant::BinarySForm: v = Lp_sq / (mu - Lp); break;
    }
    pt.set(b.aux_ids[p], v);
  }
}

}  // namespace qconic

#endif  // QCONIC_METRIC_CONSTRAINT_HPP_
