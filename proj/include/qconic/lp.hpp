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

// Bounded revised simplex with a sparse LU basis factorization.
//
// Every row is written as a.x - s = 0 with a bounded logical s, so the
// system is homogeneous: B x_B + N x_N = 0 for the basis columns B of
// [A | -I]. The basis is factorized by a left-looking sparse LU and kept
// current with product-form eta updates. Rows can be appended to a solved
// problem (cutting planes) and bounds can be changed at any time; the dual
// simplex then restores optimality from the current basis.

#ifndef QCONIC_LP_HPP_
#define QCONIC_LP_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "qconic/error.hpp"
#include "qconic/lin_expr.hpp"
#include "qconic/model.hpp"

namespace qconic {

enum class LpStatus { Optimal, Infeasible, Unbounded };

inline const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "Optimal";
    case LpStatus::Infeasible: return "Infeasible";
    case LpStatus::Unbounded: return "Unbounded";
  }
  return "?";
}

namespace detail {

using SparseVec = std::vector<std::pair<int, double>>;

// LU factors of a square basis plus an eta file. Rows are constraint
// indices; columns are basis positions.
class BasisFactor {
 public:
  static constexpr double kPivotThreshold = 0.01;
  static constexpr double kDrop = 1e-14;

  // Factorizes the columns cols[pos]. Positions whose column is numerically
  // dependent are returned in `singular`; the rows left without a pivot are
  // returned in `free_rows` (same length) and the caller must place a
  // logical of each such row at those positions via `replace_singular`.
  void factorize(int m, const std::vector<SparseVec>& cols,
                 const std::vector<char>& logical, std::vector<int>& singular,
                 std::vector<int>& free_rows) {
    m_ = m;
    singular.clear();
    free_rows.clear();
    prow_.assign(m, -1);
    colpos_.assign(m, -1);
    Lstart_.assign(1, 0);
    Lidx_.clear();
    Lval_.clear();
    Ustart_.assign(1, 0);
    Uidx_.clear();
    Uval_.clear();
    Udiag_.clear();
    clear_etas();

    std::vector<int> row_count(m, 0);
    for (const auto& c : cols) {
      for (const auto& e : c) ++row_count[e.first];
    }
    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    // Sparse columns first; logicals ahead of structurals of equal count.
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      if (cols[a].size() != cols[b].size()) {
        return cols[a].size() < cols[b].size();
      }
      return logical[a] > logical[b];
    });
    std::vector<int> row_step(m, -1);
    std::vector<double> x(m, 0.0);
    std::vector<char> mark(m, 0);
    std::vector<int> pat, heap;
    int step = 0;
    for (int pos : order) {
      pat.clear();
      double scale = 0.0;
      for (const auto& [i, v] : cols[pos]) {
        if (!mark[i]) {
          mark[i] = 1;
          pat.push_back(i);
        }
        x[i] += v;
        scale = std::max(scale, std::abs(v));
      }
      // Eliminate with earlier L columns in pivot order. Fill from L column
      // k only reaches rows pivoted after k, so a min-heap of the pivoted
      // rows in the pattern yields the steps in order.
      heap.clear();
      for (int i : pat) {
        if (row_step[i] >= 0) heap.push_back(row_step[i]);
      }
      std::make_heap(heap.begin(), heap.end(), std::greater<>());
      while (!heap.empty()) {
        std::pop_heap(heap.begin(), heap.end(), std::greater<>());
        const int k = heap.back();
        heap.pop_back();
        const double t = x[prow_[k]];
        if (t == 0.0) continue;
        for (int e = Lstart_[k]; e < Lstart_[k + 1]; ++e) {
          const int i = Lidx_[e];
          if (!mark[i]) {
            mark[i] = 1;
            pat.push_back(i);
            if (row_step[i] >= 0) {
              heap.push_back(row_step[i]);
              std::push_heap(heap.begin(), heap.end(), std::greater<>());
            }
          }
          x[i] -= Lval_[e] * t;
        }
      }
      double big = 0.0;
      for (int i : pat) {
        if (row_step[i] < 0) big = std::max(big, std::abs(x[i]));
      }
      if (big <= 1e-11 * std::max(1.0, scale)) {
        singular.push_back(pos);
        for (int i : pat) {
          x[i] = 0.0;
          mark[i] = 0;
        }
        continue;
      }
      int p = -1;
      for (int i : pat) {
        if (row_step[i] >= 0) continue;
        if (std::abs(x[i]) < kPivotThreshold * big) continue;
        if (p < 0 || row_count[i] < row_count[p] ||
            (row_count[i] == row_count[p] && i < p)) {
          p = i;
        }
      }
      for (int i : pat) {
        if (row_step[i] >= 0 && x[i] != 0.0 && std::abs(x[i]) > kDrop) {
          Uidx_.push_back(row_step[i]);
          Uval_.push_back(x[i]);
        }
      }
      Ustart_.push_back(static_cast<int>(Uidx_.size()));
      const double piv = x[p];
      Udiag_.push_back(piv);
      for (int i : pat) {
        if (row_step[i] >= 0 || i == p) continue;
        const double l = x[i] / piv;
        if (std::abs(l) > kDrop) {
          Lidx_.push_back(i);
          Lval_.push_back(l);
        }
      }
      Lstart_.push_back(static_cast<int>(Lidx_.size()));
      prow_[step] = p;
      colpos_[step] = pos;
      row_step[p] = step;
      ++step;
      for (int i : pat) {
        x[i] = 0.0;
        mark[i] = 0;
      }
    }
    for (int i = 0; i < m; ++i) {
      if (row_step[i] < 0) free_rows.push_back(i);
    }
    steps_ = step;
  }

  // Completes a factorization by pivoting the logical column -e_row at `pos`.
  void replace_singular(int pos, int row) {
    Ustart_.push_back(static_cast<int>(Uidx_.size()));
    Udiag_.push_back(-1.0);
    Lstart_.push_back(static_cast<int>(Lidx_.size()));
    prow_[steps_] = row;
    colpos_[steps_] = pos;
    ++steps_;
  }

  // Solves B z = b in place: b is indexed by row on entry, by position on
  // exit.
  void ftran(std::vector<double>& b, std::vector<double>& work) const {
    for (int k = 0; k < m_; ++k) {
      const double t = b[prow_[k]];
      if (t == 0.0) continue;
      for (int e = Lstart_[k]; e < Lstart_[k + 1]; ++e) {
        b[Lidx_[e]] -= Lval_[e] * t;
      }
    }
    work.assign(m_, 0.0);
    for (int k = 0; k < m_; ++k) work[k] = b[prow_[k]];
    for (int s = m_ - 1; s >= 0; --s) {
      const double v = work[s] / Udiag_[s];
      work[s] = v;
      if (v == 0.0) continue;
      for (int e = Ustart_[s]; e < Ustart_[s + 1]; ++e) {
        work[Uidx_[e]] -= Uval_[e] * v;
      }
    }
    for (int s = 0; s < m_; ++s) b[colpos_[s]] = work[s];
    for (const Op& op : ops_) {
      const int r = op.pos;
      if (op.border) {
        double z = -b[r];
        for (int e = op.start; e < op.end; ++e) z += op_val_[e] * b[op_idx_[e]];
        b[r] = z;
        continue;
      }
      const double zr = b[r] / op.piv;
      b[r] = zr;
      if (zr == 0.0) continue;
      for (int e = op.start; e < op.end; ++e) b[op_idx_[e]] -= op_val_[e] * zr;
    }
  }

  // Solves B^T z = c in place: c is indexed by position on entry, by row on
  // exit.
  void btran(std::vector<double>& c, std::vector<double>& work) const {
    for (std::size_t t = ops_.size(); t-- > 0;) {
      const Op& op = ops_[t];
      const int r = op.pos;
      if (op.border) {
        const double g = c[r];
        if (g != 0.0) {
          for (int e = op.start; e < op.end; ++e) c[op_idx_[e]] += op_val_[e] * g;
        }
        c[r] = -g;
        continue;
      }
      double s = c[r];
      for (int e = op.start; e < op.end; ++e) s -= op_val_[e] * c[op_idx_[e]];
      c[r] = s / op.piv;
    }
    work.assign(m_, 0.0);
    for (int s = 0; s < m_; ++s) {
      double h = c[colpos_[s]];
      for (int e = Ustart_[s]; e < Ustart_[s + 1]; ++e) {
        h -= Uval_[e] * work[Uidx_[e]];
      }
      work[s] = h / Udiag_[s];
    }
    for (int k = m_ - 1; k >= 0; --k) {
      double z = work[k];
      for (int e = Lstart_[k]; e < Lstart_[k + 1]; ++e) {
        z -= Lval_[e] * c[Lidx_[e]];
      }
      c[prow_[k]] = z;
    }
  }

  // Records the basis change at position r with entering column alpha =
  // B^{-1} a_q (indexed by position).
  void update(int r, const std::vector<double>& alpha) {
    Op op{false, r, alpha[r], static_cast<int>(op_idx_.size()), 0};
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      if (static_cast<int>(i) == r || alpha[i] == 0.0) continue;
      op_idx_.push_back(static_cast<int>(i));
      op_val_.push_back(alpha[i]);
    }
    op.end = static_cast<int>(op_idx_.size());
    ops_.push_back(op);
  }

  // Extends the basis by a new row t whose logical becomes basic at
  // position t; `a` holds the row's coefficients on the basic positions.
  void append_row(int t, const SparseVec& a) {
    Op op{true, t, 0.0, static_cast<int>(op_idx_.size()), 0};
    for (const auto& [i, v] : a) {
      op_idx_.push_back(i);
      op_val_.push_back(v);
    }
    op.end = static_cast<int>(op_idx_.size());
    ops_.push_back(op);
  }

  std::size_t num_updates() const { return ops_.size(); }
  std::size_t update_nonzeros() const { return op_idx_.size(); }
  std::size_t lu_nonzeros() const { return Lidx_.size() + Uidx_.size() + m_; }

 private:
  struct Op {
    bool border;
    int pos;
    double piv;
    int start;
    int end;
  };

  void clear_etas() {
    ops_.clear();
    op_idx_.clear();
    op_val_.clear();
  }

  int m_ = 0;
  int steps_ = 0;
  std::vector<int> prow_, colpos_;
  std::vector<int> Lstart_, Lidx_;
  std::vector<double> Lval_;
  std::vector<int> Ustart_, Uidx_;  // U column s holds (step k < s, value)
  std::vector<double> Uval_, Udiag_;
  std::vector<Op> ops_;
  std::vector<int> op_idx_;
  std::vector<double> op_val_;
};

}  // namespace detail

class Simplex {
 public:
  static constexpr double kPrimalTol = 1e-9;
  static constexpr double kDualTol = 1e-9;
  static constexpr double kPivotTol = 1e-9;
  static constexpr double kDropTol = 1e-13;
  static constexpr std::size_t kRefactorInterval = 100;

  Simplex() = default;

  // Columns must be added before the first row.
  int add_column(double lo, double hi, double cost) {
    if (m_ > 0) throw InvalidArgument("columns must precede rows");
    if (lo > hi) throw InvalidArgument("column lower bound exceeds upper");
    lo_.push_back(lo);
    hi_.push_back(hi);
    raw_cost_.push_back(cost);
    val_.push_back(initial_value(lo, hi));
    pos_.push_back(-1 - n_);
    nb_.push_back(n_);
    cols_.emplace_back();
    ++n_;
    cost_dirty_ = true;
    return n_ - 1;
  }

  void set_cost_constant(double c) { cost_constant_ = c; }

  // lo <= a.x <= hi. The row is scaled to unit max-abs coefficient.
  int add_row(const std::vector<std::pair<int, double>>& a, double lo,
              double hi) {
    if (cost_dirty_) rescale_costs();
    double scale = 0.0;
    for (const auto& [j, c] : a) {
      if (j < 0 || j >= n_) throw InvalidArgument("row references bad column");
      scale = std::max(scale, std::abs(c));
    }
    std::vector<std::pair<int, double>> row;
    if (scale == 0.0) scale = 1.0;
    for (const auto& [j, c] : a) {
      if (c != 0.0) row.emplace_back(j, c / scale);
    }
    std::sort(row.begin(), row.end());
    std::vector<std::pair<int, double>> merged;
    for (const auto& e : row) {
      if (!merged.empty() && merged.back().first == e.first) {
        merged.back().second += e.second;
      } else {
        merged.push_back(e);
      }
    }
    lo /= scale;
    hi /= scale;
    double act = 0.0;
    detail::SparseVec border;
    for (const auto& [j, c] : merged) {
      act += c * val_[j];
      cols_[j].emplace_back(m_, c);
      if (pos_[j] >= 0) border.emplace_back(pos_[j], c);
    }
    if (!factor_dirty_) factor_.append_row(m_, border);
    const int v = n_ + m_;
    rows_.push_back(std::move(merged));
    row_scale_.push_back(scale);
    lo_.push_back(lo);
    hi_.push_back(hi);
    val_.push_back(act);
    cost_.push_back(0.0);
    pos_.push_back(m_);
    head_.push_back(v);
    ++m_;
    factor_dirty_ = true;
    return m_ - 1;
  }

  void set_bounds(int j, double lo, double hi) {
    if (j < 0 || j >= n_) throw InvalidArgument("bad column");
    if (lo > hi) throw InvalidArgument("lower bound exceeds upper");
    const bool at_lo = val_[j] == lo_[j];
    const bool at_hi = val_[j] == hi_[j];
    lo_[j] = lo;
    hi_[j] = hi;
    if (pos_[j] >= 0) return;
    double target = initial_value(lo, hi);
    if (at_hi && !at_lo && std::isfinite(hi)) target = hi;
    if (target != val_[j]) {
      val_[j] = target;
      basics_dirty_ = true;
    }
  }

  double lower(int j) const { return lo_[j]; }
  double upper(int j) const { return hi_[j]; }

  // Removes rows whose logical is basic. Other rows are left in place.
  void remove_rows(const std::vector<int>& rows) {
    std::vector<char> drop(static_cast<std::size_t>(m_), 0);
    bool any = false;
    for (int i : rows) {
      if (i < 0 || i >= m_) continue;
      if (pos_[n_ + i] < 0) continue;
      drop[i] = 1;
      any = true;
    }
    if (!any) return;
    std::vector<int> remap(static_cast<std::size_t>(n_ + m_), -1);
    for (int j = 0; j < n_; ++j) remap[j] = j;
    int next = n_;
    for (int i = 0; i < m_; ++i) {
      if (!drop[i]) remap[n_ + i] = next++;
    }
    const int new_m = next - n_;
    std::vector<int> nhead;
    for (int r = 0; r < m_; ++r) {
      const int v = head_[r];
      if (v >= n_ && drop[v - n_]) continue;
      nhead.push_back(remap[v]);
    }
    for (int& v : nb_) v = remap[v];
    auto compact = [&](auto& vec) {
      auto out = vec;
      out.resize(static_cast<std::size_t>(n_ + new_m));
      for (int v = 0; v < n_ + m_; ++v) {
        if (remap[v] >= 0) out[remap[v]] = vec[v];
      }
      vec = std::move(out);
    };
    compact(lo_);
    compact(hi_);
    compact(val_);
    compact(cost_);
    std::vector<std::vector<std::pair<int, double>>> nrows;
    std::vector<double> nscale;
    for (int i = 0; i < m_; ++i) {
      if (drop[i]) continue;
      nrows.push_back(std::move(rows_[i]));
      nscale.push_back(row_scale_[i]);
    }
    rows_ = std::move(nrows);
    row_scale_ = std::move(nscale);
    head_ = std::move(nhead);
    m_ = new_m;
    pos_.assign(static_cast<std::size_t>(n_ + m_), 0);
    for (int r = 0; r < m_; ++r) pos_[head_[r]] = r;
    for (int q = 0; q < n_; ++q) pos_[nb_[q]] = -1 - q;
    for (auto& c : cols_) c.clear();
    for (int i = 0; i < m_; ++i) {
      for (const auto& [j, c] : rows_[i]) cols_[j].emplace_back(i, c);
    }
    factor_dirty_ = true;
  }

  LpStatus solve() {
    if (cost_dirty_) rescale_costs();
    for (int attempt = 0; attempt < 4; ++attempt) {
      if (attempt == 2) reset_basis();
      if (attempt > 0 || factor_dirty_) {
        refactor();
      } else if (basics_dirty_) {
        recompute_basics();
      }
      LpStatus st;
      bool ok = true;
      if (make_dual_feasible()) {
        st = dual_simplex(ok);
      } else {
        st = primal_simplex(ok);
      }
      if (!ok) continue;
      if (st == LpStatus::Optimal && !accurate()) continue;
      if (st != LpStatus::Optimal && !residuals_ok()) continue;
      return st;
    }
    throw NumericalError("simplex failed to reach an accurate basis");
  }

  int num_columns() const { return n_; }
  int num_rows() const { return m_; }
  double value(int j) const { return val_[j]; }
  std::vector<double> values() const {
    return {val_.begin(), val_.begin() + n_};
  }
  // Unscaled activity a.x of row i.
  double row_activity(int i) const { return val_[n_ + i] * row_scale_[i]; }
  bool row_is_basic(int i) const { return pos_[n_ + i] >= 0; }
  // Distance of the row activity from its nearest finite bound, unscaled.
  double row_slack(int i) const {
    const int v = n_ + i;
    double s = std::numeric_limits<double>::infinity();
    if (std::isfinite(lo_[v])) s = std::min(s, val_[v] - lo_[v]);
    if (std::isfinite(hi_[v])) s = std::min(s, hi_[v] - val_[v]);
    return s * row_scale_[i];
  }

  double objective() const {
    double z = cost_constant_;
    for (int j = 0; j < n_; ++j) z += raw_cost_[j] * val_[j];
    return z;
  }

  std::int64_t iterations() const { return iterations_; }

 private:
  static double initial_value(double lo, double hi) {
    if (std::isfinite(lo)) return lo;
    if (std::isfinite(hi)) return hi;
    return 0.0;
  }

  void rescale_costs() {
    cscale_ = 0.0;
    for (double c : raw_cost_) cscale_ = std::max(cscale_, std::abs(c));
    if (cscale_ == 0.0) cscale_ = 1.0;
    cost_.assign(static_cast<std::size_t>(n_ + m_), 0.0);
    for (int j = 0; j < n_; ++j) cost_[j] = raw_cost_[j] / cscale_;
    cost_dirty_ = false;
    factor_dirty_ = true;
  }

  // Column of variable v in [A | -I], added into the row-indexed vector b
  // with factor f.
  void add_column_to(int v, double f, std::vector<double>& b) const {
    if (v < n_) {
      for (const auto& [i, c] : cols_[v]) b[i] += f * c;
    } else {
      b[v - n_] -= f;
    }
  }

  // Tableau column of nonbasic slot q: D[:, q] = -B^{-1} a, by position.
  void tableau_column(int q, std::vector<double>& col) {
    col.assign(static_cast<std::size_t>(m_), 0.0);
    add_column_to(nb_[q], -1.0, col);
    factor_.ftran(col, work_);
  }

  // Tableau row of basis position r: D[r, q] = -(e_r^T B^{-1}) a_q per slot.
  void tableau_row(int r, std::vector<double>& row) {
    rho_.assign(static_cast<std::size_t>(m_), 0.0);
    rho_[r] = 1.0;
    factor_.btran(rho_, work_);
    combine_row(rho_, row);
  }

  // row[q] = -(rho . a_q) for every nonbasic slot q.
  void combine_row(const std::vector<double>& rho, std::vector<double>& row) {
    acc_.assign(static_cast<std::size_t>(n_), 0.0);
    for (int i = 0; i < m_; ++i) {
      const double p = rho[i];
      if (p == 0.0) continue;
      for (const auto& [j, c] : rows_[i]) acc_[j] += p * c;
    }
    row.assign(static_cast<std::size_t>(n_), 0.0);
    for (int q = 0; q < n_; ++q) {
      const int v = nb_[q];
      const double a = v < n_ ? -acc_[v] : rho[v - n_];
      row[q] = std::abs(a) < kDropTol ? 0.0 : a;
    }
  }

  void compute_duals() {
    std::vector<double> y(static_cast<std::size_t>(m_));
    for (int r = 0; r < m_; ++r) y[r] = cost_[head_[r]];
    factor_.btran(y, work_);
    std::vector<double> row;
    combine_row(y, row);
    dz_.assign(static_cast<std::size_t>(n_), 0.0);
    for (int q = 0; q < n_; ++q) dz_[q] = cost_[nb_[q]] + row[q];
  }

  // Shifts nonbasic slot q by delta along the tableau column `col`.
  void move_along(int q, double delta, const std::vector<double>& col) {
    if (delta == 0.0) return;
    val_[nb_[q]] += delta;
    for (int r = 0; r < m_; ++r) {
      if (col[r] != 0.0) val_[head_[r]] += col[r] * delta;
    }
  }

  bool can_increase(int v) const { return val_[v] < hi_[v]; }
  bool can_decrease(int v) const { return val_[v] > lo_[v]; }

  // Exchanges the basic variable at position r with nonbasic slot q, given
  // the tableau row `pr` of r and tableau column `col` of q. The leaving
  // variable is then set exactly to `target`.
  void pivot(int r, int q, const std::vector<double>& pr,
             const std::vector<double>& col, double target) {
    const double piv = pr[q];
    const double dq = dz_[q];
    if (dq != 0.0) {
      for (int c = 0; c < n_; ++c) {
        if (pr[c] != 0.0) dz_[c] -= dq * pr[c] / piv;
      }
    }
    dz_[q] = dq / piv;
    // alpha = B^{-1} a_q = -col.
    alpha_.assign(static_cast<std::size_t>(m_), 0.0);
    for (int i = 0; i < m_; ++i) alpha_[i] = -col[i];
    factor_.update(r, alpha_);
    const int leaving = head_[r];
    const int entering = nb_[q];
    head_[r] = entering;
    nb_[q] = leaving;
    pos_[entering] = r;
    pos_[leaving] = -1 - q;
    ++iterations_;
    // New tableau column of slot q is col / piv, with 1 / piv at r.
    const double delta = target - val_[leaving];
    if (delta != 0.0) {
      for (int i = 0; i < m_; ++i) {
        if (i == r) {
          val_[head_[i]] += delta / piv;
        } else if (col[i] != 0.0) {
          val_[head_[i]] += col[i] / piv * delta;
        }
      }
    }
    val_[leaving] = target;
    if (factor_.num_updates() >= kRefactorInterval ||
        factor_.update_nonzeros() > 4 * factor_.lu_nonzeros() + 10000) {
      refactor();
    }
  }

  // Flips boxed nonbasics to the bound their reduced cost prefers. Returns
  // false when some nonbasic cannot be made dual feasible that way.
  bool make_dual_feasible() {
    bool ok = true;
    bool moved = false;
    for (int q = 0; q < n_; ++q) {
      const int v = nb_[q];
      const double d = dz_[q];
      if (lo_[v] == hi_[v]) continue;
      if (d > kDualTol && val_[v] != lo_[v]) {
        if (std::isfinite(lo_[v])) {
          val_[v] = lo_[v];
          moved = true;
        } else {
          ok = false;
        }
      } else if (d < -kDualTol && val_[v] != hi_[v]) {
        if (std::isfinite(hi_[v])) {
          val_[v] = hi_[v];
          moved = true;
        } else {
          ok = false;
        }
      }
    }
    if (moved) recompute_basics();
    return ok;
  }

  double infeasibility(int v) const {
    if (val_[v] < lo_[v]) return lo_[v] - val_[v];
    if (val_[v] > hi_[v]) return val_[v] - hi_[v];
    return 0.0;
  }

  std::int64_t iteration_cap() const {
    return 50LL * (n_ + m_) + 10000;
  }

  // True when the pivot element computed from the row and from the column
  // disagree, which signals a stale factorization.
  bool pivot_mismatch(double from_row, double from_col) const {
    return std::abs(from_row - from_col) >
           1e-7 * std::max(1.0, std::abs(from_row));
  }

  LpStatus dual_simplex(bool& ok) {
    const std::int64_t cap = iteration_cap();
    int degenerate = 0;
    int retries = 0;
    for (std::int64_t it = 0; it < cap; ++it) {
      const bool bland = degenerate > 50;
      int r = -1;
      double worst = kPrimalTol;
      for (int i = 0; i < m_; ++i) {
        const double inf = infeasibility(head_[i]);
        if (inf <= kPrimalTol) continue;
        if (bland ? (r < 0 || head_[i] < head_[r]) : inf > worst) {
          worst = inf;
          r = i;
        }
      }
      if (r < 0) return LpStatus::Optimal;
      const int b = head_[r];
      const bool up = val_[b] < lo_[b];
      const double target = up ? lo_[b] : hi_[b];
      const double delta = target - val_[b];
      tableau_row(r, prow_);
      const std::vector<double>& pr = prow_;

      // Harris two-pass ratio test on the reduced costs.
      double bound = std::numeric_limits<double>::infinity();
      for (int q = 0; q < n_; ++q) {
        const double a = pr[q];
        if (std::abs(a) < kPivotTol) continue;
        const int v = nb_[q];
        const bool inc = (a > 0) == up;  // entering must increase
        if (inc ? !can_increase(v) : !can_decrease(v)) continue;
        const double ratio = (std::abs(dz_[q]) + kDualTol) / std::abs(a);
        bound = std::min(bound, ratio);
      }
      if (!std::isfinite(bound)) return LpStatus::Infeasible;
      int enter = -1;
      double best_a = 0.0;
      for (int q = 0; q < n_; ++q) {
        const double a = pr[q];
        if (std::abs(a) < kPivotTol) continue;
        const int v = nb_[q];
        const bool inc = (a > 0) == up;
        if (inc ? !can_increase(v) : !can_decrease(v)) continue;
        if (std::abs(dz_[q]) / std::abs(a) > bound) continue;
        if (bland ? (enter < 0 || v < nb_[enter]) : std::abs(a) > best_a) {
          best_a = std::abs(a);
          enter = q;
        }
      }
      if (enter < 0) return LpStatus::Infeasible;
      tableau_column(enter, col_);
      if (pivot_mismatch(pr[enter], col_[r])) {
        if (++retries > 5) {
          ok = false;
          return LpStatus::Infeasible;
        }
        refactor();
        continue;
      }
      const double step = delta / pr[enter];
      degenerate = std::abs(dz_[enter]) < kDualTol ? degenerate + 1 : 0;
      move_along(enter, step, col_);
      pivot(r, enter, pr, col_, target);
    }
    ok = false;
    return LpStatus::Infeasible;
  }

  LpStatus primal_simplex(bool& ok) {
    const std::int64_t cap = iteration_cap();
    std::vector<double> dd;
    int degenerate = 0;
    int retries = 0;
    for (std::int64_t it = 0; it < cap; ++it) {
      // Phase-one gradient when some basic is out of bounds.
      bool phase1 = false;
      std::vector<double> g(static_cast<std::size_t>(m_), 0.0);
      for (int r = 0; r < m_; ++r) {
        const int b = head_[r];
        if (val_[b] < lo_[b] - kPrimalTol) g[r] = -1.0;
        if (val_[b] > hi_[b] + kPrimalTol) g[r] = 1.0;
        phase1 |= g[r] != 0.0;
      }
      if (phase1) {
        factor_.btran(g, work_);
        // dd = sum_r g_r D[r, :] = -(B^{-T} g) . a_q.
        combine_row(g, dd);
      } else {
        dd = dz_;
      }
      const bool bland = degenerate > 50;
      int enter = -1;
      double best = 0.0;
      for (int q = 0; q < n_; ++q) {
        const int v = nb_[q];
        double score = 0.0;
        if (dd[q] < -kDualTol && can_increase(v)) score = -dd[q];
        if (dd[q] > kDualTol && can_decrease(v)) score = dd[q];
        if (score == 0.0) continue;
        if (bland) {
          if (enter < 0 || v < nb_[enter]) enter = q;
        } else if (score > best) {
          best = score;
          enter = q;
        }
      }
      if (enter < 0) {
        return phase1 ? LpStatus::Infeasible : LpStatus::Optimal;
      }
      const int ev = nb_[enter];
      const double dir = dd[enter] < 0 ? 1.0 : -1.0;
      tableau_column(enter, col_);
      const std::vector<double>& col = col_;

      double relaxed = std::numeric_limits<double>::infinity();
      for (int r = 0; r < m_; ++r) {
        const double a = col[r] * dir;
        if (std::abs(a) < kPivotTol) continue;
        const int b = head_[r];
        const double x = val_[b];
        double lim = std::numeric_limits<double>::infinity();
        if (x < lo_[b] - kPrimalTol) {
          if (a > 0) lim = (lo_[b] - x) / a;
        } else if (x > hi_[b] + kPrimalTol) {
          if (a < 0) lim = (x - hi_[b]) / -a;
        } else if (a < 0 && std::isfinite(lo_[b])) {
          lim = (x - lo_[b] + kPrimalTol) / -a;
        } else if (a > 0 && std::isfinite(hi_[b])) {
          lim = (hi_[b] - x + kPrimalTol) / a;
        }
        relaxed = std::min(relaxed, lim);
      }
      const double own = hi_[ev] - lo_[ev];
      int leave = -1;
      double leave_target = 0.0;
      double step = std::numeric_limits<double>::infinity();
      double best_a = 0.0;
      if (std::isfinite(relaxed)) {
        for (int r = 0; r < m_; ++r) {
          const double a = col[r] * dir;
          if (std::abs(a) < kPivotTol) continue;
          const int b = head_[r];
          const double x = val_[b];
          double exact = std::numeric_limits<double>::infinity();
          double tgt = 0.0;
          if (x < lo_[b] - kPrimalTol) {
            if (a > 0) {
              exact = (lo_[b] - x) / a;
              tgt = lo_[b];
            }
          } else if (x > hi_[b] + kPrimalTol) {
            if (a < 0) {
              exact = (x - hi_[b]) / -a;
              tgt = hi_[b];
            }
          } else if (a < 0 && std::isfinite(lo_[b])) {
            exact = std::max(0.0, (x - lo_[b]) / -a);
            tgt = lo_[b];
          } else if (a > 0 && std::isfinite(hi_[b])) {
            exact = std::max(0.0, (hi_[b] - x) / a);
            tgt = hi_[b];
          }
          if (exact > relaxed) continue;
          const bool take = bland ? (leave < 0 || b < head_[leave])
                                  : std::abs(a) > best_a;
          if (take) {
            best_a = std::abs(a);
            leave = r;
            step = exact;
            leave_target = tgt;
          }
        }
      }
      if (own <= step) {
        if (!std::isfinite(own)) {
          if (phase1) {
            ok = false;
            return LpStatus::Infeasible;
          }
          return LpStatus::Unbounded;
        }
        // Bound flip of the entering variable.
        move_along(enter,
                   dir > 0 ? hi_[ev] - val_[ev] : lo_[ev] - val_[ev], col);
        degenerate = 0;
        continue;
      }
      tableau_row(leave, prow_);
      if (pivot_mismatch(prow_[enter], col[leave])) {
        if (++retries > 5) {
          ok = false;
          return LpStatus::Infeasible;
        }
        refactor();
        continue;
      }
      degenerate = step < 1e-12 ? degenerate + 1 : 0;
      move_along(enter, dir * step, col);
      pivot(leave, enter, prow_, col, leave_target);
    }
    ok = false;
    return LpStatus::Infeasible;
  }

  // Logical values agree with the stored rows at the current point.
  bool residuals_ok() const {
    for (int i = 0; i < m_; ++i) {
      double act = 0.0, mag = 0.0;
      for (const auto& [j, c] : rows_[i]) {
        act += c * val_[j];
        mag = std::max(mag, std::abs(c * val_[j]));
      }
      if (std::abs(act - val_[n_ + i]) > 1e-9 * (1.0 + mag)) return false;
    }
    return true;
  }

  // Residuals plus bound feasibility of every variable.
  bool accurate() const {
    if (!residuals_ok()) return false;
    for (int v = 0; v < n_ + m_; ++v) {
      if (infeasibility(v) > 10 * kPrimalTol * (1.0 + std::abs(val_[v]))) {
        return false;
      }
    }
    return true;
  }

  // Every structural nonbasic and every logical basic.
  void reset_basis() {
    head_.resize(static_cast<std::size_t>(m_));
    nb_.resize(static_cast<std::size_t>(n_));
    for (int j = 0; j < n_; ++j) {
      nb_[j] = j;
      pos_[j] = -1 - j;
      val_[j] = std::clamp(val_[j], lo_[j], hi_[j]);
      if (!std::isfinite(val_[j])) val_[j] = initial_value(lo_[j], hi_[j]);
      if (val_[j] != lo_[j] && val_[j] != hi_[j]) {
        val_[j] = initial_value(lo_[j], hi_[j]);
      }
    }
    for (int i = 0; i < m_; ++i) {
      head_[i] = n_ + i;
      pos_[n_ + i] = i;
    }
    factor_dirty_ = true;
  }

  // x_B = -B^{-1} N x_N.
  void recompute_basics() {
    std::vector<double> b(static_cast<std::size_t>(m_), 0.0);
    for (int q = 0; q < n_; ++q) {
      const int v = nb_[q];
      if (val_[v] != 0.0) add_column_to(v, -val_[v], b);
    }
    factor_.ftran(b, work_);
    for (int r = 0; r < m_; ++r) val_[head_[r]] = b[r];
    basics_dirty_ = false;
  }

  // Factorizes the current basis, replacing dependent basic columns by
  // logicals, then recomputes basic values and reduced costs.
  void refactor() {
    std::vector<detail::SparseVec> cols(static_cast<std::size_t>(m_));
    std::vector<char> logical(static_cast<std::size_t>(m_), 0);
    for (int r = 0; r < m_; ++r) {
      const int v = head_[r];
      if (v < n_) {
        cols[r] = cols_[v];
      } else {
        cols[r] = {{v - n_, -1.0}};
        logical[r] = 1;
      }
    }
    std::vector<int> singular, free_rows;
    factor_.factorize(m_, cols, logical, singular, free_rows);
    for (std::size_t t = 0; t < singular.size(); ++t) {
      const int r = singular[t];
      const int row = free_rows[t];
      const int out = head_[r];
      const int in = n_ + row;
      const int q = -1 - pos_[in];
      head_[r] = in;
      pos_[in] = r;
      nb_[q] = out;
      pos_[out] = -1 - q;
      if (std::isfinite(lo_[out]) || std::isfinite(hi_[out])) {
        val_[out] = std::clamp(val_[out], lo_[out], hi_[out]);
      }
      factor_.replace_singular(r, row);
    }
    recompute_basics();
    compute_duals();
    factor_dirty_ = false;
  }

  int n_ = 0;
  int m_ = 0;
  std::vector<double> lo_, hi_, val_, cost_, raw_cost_;
  std::vector<int> pos_;   // >= 0: basis position; < 0: -1 - nonbasic slot
  std::vector<int> head_;  // basic variable per position
  std::vector<int> nb_;    // nonbasic variable per slot
  std::vector<double> dz_;
  std::vector<std::vector<std::pair<int, double>>> rows_;
  std::vector<detail::SparseVec> cols_;
  std::vector<double> row_scale_;
  detail::BasisFactor factor_;
  std::vector<double> work_, rho_, acc_, prow_, col_, alpha_;
  double cscale_ = 1.0;
  double cost_constant_ = 0.0;
  bool cost_dirty_ = true;
  bool factor_dirty_ = true;
  bool basics_dirty_ = false;
  std::int64_t iterations_ = 0;
};

// min objective s.t. eqs == 0, ineqs <= 0, lower <= x <= upper.
struct LpProblem {
  LinExpr objective;
  std::vector<LinExpr> eqs;
  std::vector<LinExpr> ineqs;
  std::vector<double> lower;
  std::vector<double> upper;
};

struct LpOutcome {
  LpStatus status = LpStatus::Infeasible;
  PointAssignment point;
  double objective_value = 0.0;
};

inline LpOutcome solve_lp(const LpProblem& p) {
  const std::size_t n = p.lower.size();
  if (p.upper.size() != n) throw InvalidArgument("bound vectors differ");
  Simplex lp;
  std::vector<double> cost(n, 0.0);
  auto check = [n](const LinExpr& e) {
    if (!std::isfinite(e.constant())) {
      throw InvalidArgument("non-finite constant in LP");
    }
    for (const auto& [v, c] : e.terms()) {
      if (static_cast<std::size_t>(v.value) >= n) {
        throw InvalidArgument("LP row references undeclared variable");
      }
      if (!std::isfinite(c)) throw InvalidArgument("non-finite LP coefficient");
    }
  };
  check(p.objective);
  for (const auto& [v, c] : p.objective.terms()) cost[v.value] = c;
  for (std::size_t j = 0; j < n; ++j) {
    lp.add_column(p.lower[j], p.upper[j], cost[j]);
  }
  lp.set_cost_constant(p.objective.constant());
  auto coefs = [](const LinExpr& e) {
    std::vector<std::pair<int, double>> a;
    for (const auto& [v, c] : e.terms()) a.emplace_back(v.value, c);
    return a;
  };
  for (const auto& e : p.eqs) {
    check(e);
    lp.add_row(coefs(e), -e.constant(), -e.constant());
  }
  for (const auto& e : p.ineqs) {
    check(e);
    lp.add_row(coefs(e), -kInfinity, -e.constant());
  }
  LpOutcome out;
  out.status = lp.solve();
  if (out.status == LpStatus::Optimal) {
    out.point = PointAssignment(lp.values());
    out.objective_value = lp.objective();
  }
  return out;
}

}  // namespace qconic

#endif  // QCONIC_LP_HPP_
