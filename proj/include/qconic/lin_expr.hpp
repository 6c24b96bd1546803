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

#ifndef QCONIC_LIN_EXPR_HPP_
#define QCONIC_LIN_EXPR_HPP_

#include <cmath>
#include <compare>
#include <cstddef>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qconic/error.hpp"

namespace qconic {

// Dense variable identifier, assigned in creation order by ConicModel.
struct VarId {
  int value = -1;

  bool valid() const { return value >= 0; }
  auto operator<=>(const VarId&) const = default;
};

// Values for a set of variables, indexed by VarId. NaN marks "unassigned".
class PointAssignment {
 public:
  PointAssignment() = default;
  explicit PointAssignment(std::size_t n)
      : values_(n, std::numeric_limits<double>::quiet_NaN()) {}
  explicit PointAssignment(std::vector<double> values)
      : values_(std::move(values)) {}

  std::size_t size() const { return values_.size(); }

  bool has(VarId v) const {
    return v.value >= 0 && static_cast<std::size_t>(v.value) < values_.size() &&
           !std::isnan(values_[static_cast<std::size_t>(v.value)]);
  }

  double at(VarId v) const {
    if (!has(v)) {
      throw MissingAssignmentError("no value for variable " +
                                   std::to_string(v.value));
    }
    return values_[static_cast<std::size_t>(v.value)];
  }

  void set(VarId v, double value) {
    if (v.value < 0) throw InvalidArgument("invalid variable id");
    const auto idx = static_cast<std::size_t>(v.value);
    if (idx >= values_.size()) {
      values_.resize(idx + 1, std::numeric_limits<double>::quiet_NaN());
    }
    values_[idx] = value;
  }

  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> values_;
};

// Affine expression sum(coef * var) + constant. Terms with a zero
// coefficient are dropped, so each variable appears at most once.
class LinExpr {
 public:
  using Terms = std::map<VarId, double>;

  LinExpr() = default;
  explicit LinExpr(double constant) : constant_(constant) {}
  LinExpr(VarId v, double coef) { add(v, coef); }

  LinExpr& add(VarId v, double coef) {
    if (!v.valid()) throw InvalidArgument("invalid variable id in expression");
    if (coef == 0.0) return *this;
    auto [it, inserted] = terms_.try_emplace(v, coef);
    if (!inserted) {
      it->second += coef;
      if (it->second == 0.0) terms_.erase(it);
    }
    return *this;
  }

  LinExpr& add_constant(double c) {
    constant_ += c;
    return *this;
  }

  LinExpr& operator+=(const LinExpr& other) {
    for (const auto& [v, c] : other.terms_) add(v, c);
    constant_ += other.constant_;
    return *this;
  }

  LinExpr& operator-=(const LinExpr& other) {
    for (const auto& [v, c] : other.terms_) add(v, -c);
    constant_ -= other.constant_;
    return *this;
  }

  LinExpr& operator*=(double s) {
    if (s == 0.0) {
      terms_.clear();
      constant_ = 0.0;
      return *this;
    }
    for (auto& [v, c] : terms_) c *= s;
    constant_ *= s;
    return *this;
  }

  friend LinExpr operator+(LinExpr a, const LinExpr& b) { return a += b; }
  friend LinExpr operator-(LinExpr a, const LinExpr& b) { return a -= b; }
  friend LinExpr operator*(LinExpr a, double s) { return a *= s; }
  friend LinExpr operator*(double s, LinExpr a) { return a *= s; }
  friend LinExpr operator-(LinExpr a) { return a *= -1.0; }

  const Terms& terms() const { return terms_; }
  double constant() const { return constant_; }
  bool is_constant() const { return terms_.empty(); }

  double coef(VarId v) const {
    auto it = terms_.find(v);
    return it == terms_.end() ? 0.0 : it->second;
  }

  double evaluate(const PointAssignment& p) const {
    double s = constant_;
    for (const auto& [v, c] : terms_) s += c * p.at(v);
    return s;
  }

  bool operator==(const LinExpr&) const = default;

 private:
  Terms terms_;
  double constant_ = 0.0;
};

}  // namespace qconic

#endif  // QCONIC_LIN_EXPR_HPP_
