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

// Second-order cone constraints in two representations.
//
//  * Primary form:    || E x - e || <= beta^T x - delta
//  * Secondary form:  form I   x^T Q x <= y^2,  y >= 0
//                     form II  x^T Q x <= y z,  y, z >= 0
//
// Q is always carried through a factor: `quad_rows` is a list of affine
// expressions whose squared norm is x^T Q x, so Q is PSD by construction.

#ifndef QCONIC_CONIC_HPP_
#define QCONIC_CONIC_HPP_

#include <cmath>
#include <optional>
#include <vector>

#include "qconic/error.hpp"
#include "qconic/lin_expr.hpp"

namespace qconic {

// Absolute tolerance for satisfaction verdicts on residuals.
inline constexpr double kConicTolerance = 1e-7;

struct SocPrimary {
  std::vector<LinExpr> norm_rows;  // E x - e
  LinExpr rhs;                     // beta^T x - delta

  bool operator==(const SocPrimary&) const = default;
};

enum class SecondaryForm { FormI, FormII };

struct SocSecondary {
  SecondaryForm form = SecondaryForm::FormI;
  std::vector<LinExpr> quad_rows;
  LinExpr y;
  std::optional<LinExpr> z;  // form II only

  bool operator==(const SocSecondary&) const = default;
};

// ||x||^2 <= y z with y, z >= 0 enforced elsewhere. `x` is a vector so that
// sums of squares such as sum_j lambda_j y_j^2 can be expressed directly.
struct HyperbolicConstraint {
  std::vector<LinExpr> x;
  LinExpr y;
  LinExpr z;
};

// ||(2x, y - z)|| <= y + z. Since (y + z)^2 - (y - z)^2 = 4yz, this is the
// hyperbolic set intersected with {y + z >= 0}, which together with the
// implied yz >= ||x||^2 >= 0 gives y, z >= 0.
inline SocPrimary hyperbolic_to_soc(const HyperbolicConstraint& h) {
  SocPrimary c;
  c.norm_rows.reserve(h.x.size() + 1);
  for (const LinExpr& xi : h.x) c.norm_rows.push_back(2.0 * xi);
  c.norm_rows.push_back(h.y - h.z);
  c.rhs = h.y + h.z;
  return c;
}

// Hyperbolic constraint as a form-II secondary row.
inline SocSecondary hyperbolic_to_form2(const HyperbolicConstraint& h) {
  return {SecondaryForm::FormII, h.x, h.y, h.z};
}

// x^T Q x <= y z  ->  2 x^T Q x + y^2 + z^2 <= (y + z)^2.
inline SocSecondary form2_to_form1(const SocSecondary& c) {
  if (c.form != SecondaryForm::FormII) {
    throw InvalidArgument("form2_to_form1 expects a form-II constraint");
  }
  if (!c.z) throw InvalidArgument("form-II constraint without z");
  SocSecondary out;
  out.form = SecondaryForm::FormI;
  out.quad_rows.reserve(c.quad_rows.size() + 2);
  const double root2 = std::sqrt(2.0);
  for (const LinExpr& q : c.quad_rows) out.quad_rows.push_back(root2 * q);
  out.quad_rows.push_back(c.y);
  out.quad_rows.push_back(*c.z);
  out.y = c.y + *c.z;
  return out;
}

// A form-I row read as a norm constraint ||quad_rows|| <= y.
inline SocPrimary form1_as_primary(const SocSecondary& c) {
  if (c.form != SecondaryForm::FormI) {
    throw InvalidArgument("form1_as_primary expects a form-I constraint");
  }
  return {c.quad_rows, c.y};
}

inline SocPrimary secondary_as_primary(const SocSecondary& c) {
  return c.form == SecondaryForm::FormI ? form1_as_primary(c)
                                        : form1_as_primary(form2_to_form1(c));
}

inline double norm_value(const std::vector<LinExpr>& rows,
                         const PointAssignment& p) {
  double s = 0.0;
  for (const LinExpr& r : rows) {
    const double v = r.evaluate(p);
    s += v * v;
  }
  return std::sqrt(s);
}

// ||E x - e|| - (beta^T x - delta); <= 0 iff satisfied.
inline double soc_residual(const SocPrimary& c, const PointAssignment& p) {
  return norm_value(c.norm_rows, p) - c.rhs.evaluate(p);
}

// Residual of a secondary row in its norm reading. For form II the residual
// is that of the equivalent form-I row.
inline double secondary_residual(const SocSecondary& c,
                                 const PointAssignment& p) {
  return soc_residual(secondary_as_primary(c), p);
}

inline bool hyperbolic_holds(const HyperbolicConstraint& h,
                             const PointAssignment& p) {
  const double y = h.y.evaluate(p);
  const double z = h.z.evaluate(p);
  if (y < 0.0 || z < 0.0) return false;
  double xx = 0.0;
  for (const LinExpr& xi : h.x) {
    const double v = xi.evaluate(p);
    xx += v * v;
  }
  return xx <= y * z;
}

// Supporting hyperplane u^T (E x - e) / ||u|| - (beta^T x - delta) <= 0 at
// the value u of E x - e at `p`. Returns nothing when `p` satisfies the cone.
// At the apex (u = 0) the cut degenerates to -(beta^T x - delta) <= 0.
inline std::optional<LinExpr> gradient_cut(const SocPrimary& c,
                                           const PointAssignment& p) {
  std::vector<double> u;
  u.reserve(c.norm_rows.size());
  double nrm2 = 0.0;
  for (const LinExpr& r : c.norm_rows) {
    u.push_back(r.evaluate(p));
    nrm2 += u.back() * u.back();
  }
  const double nrm = std::sqrt(nrm2);
  if (nrm - c.rhs.evaluate(p) <= 0.0) return std::nullopt;
  LinExpr cut = -c.rhs;
  if (nrm == 0.0) return cut;
  for (std::size_t k = 0; k < u.size(); ++k) {
    if (u[k] != 0.0) cut += (u[k] / nrm) * c.norm_rows[k];
  }
  return cut;
}

}  // namespace qconic

#endif  // QCONIC_CONIC_HPP_
