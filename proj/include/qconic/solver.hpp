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

// Exact MISOCP solver: branch-and-bound over binaries with node bounds from
// a linear outer approximation of the conic rows.
//
// Each conic row ||u(x)|| <= b(x) is approximated by gradient cuts
// (u(x^)/||u(x^)||) . u(x) <= b(x) taken at LP points x^ that violate it.
// Cuts are globally valid, so they are shared by every node through a pool.

#ifndef QCONIC_SOLVER_HPP_
#define QCONIC_SOLVER_HPP_

#include <algorithm>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <mutex>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>
#include "qconic/conic.hpp"
#include "qconic/error.hpp"
#include "qconic/lp.hpp"
#include "qconic/model.hpp"

namespace qconic {

enum class Branching { MostFractional, PseudoCost };
enum class NodeSelection { BestBound, DepthFirst };
// Which representation of the conic rows feeds the cut generator.
enum class ConicRows { Auto, Primary, Secondary };
enum class SolveStatus { Optimal, GapLimit, TimeLimit, Infeasible };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "Optimal";
    case SolveStatus::GapLimit: return "GapLimit";
    case SolveStatus::TimeLimit: return "TimeLimit";
    case SolveStatus::Infeasible: return "Infeasible";
  }
  return "?";
}

struct SolverConfig {
  double rel_gap = 1e-5;
  double abs_gap = 1e-9;
  double time_limit = std::numeric_limits<double>::infinity();  // seconds
  std::int64_t node_limit = std::numeric_limits<std::int64_t>::max();
  int max_oa_rounds = 50;
  double oa_tolerance = 1e-6;
  // Integral LP points are tightened to this violation before acceptance.
  double repair_tolerance = 1e-9;
  int max_repair_rounds = 200;
  Branching branching = Branching::MostFractional;
  NodeSelection node_selection = NodeSelection::BestBound;
  // Best-bound search dives into the rounding-side child before returning
  // to the queue.
  bool plunge = true;
  int threads = 1;
  std::uint64_t seed = 0;
  ConicRows conic_rows = ConicRows::Auto;
  // Nodes an inactive cut may survive in a worker LP before removal.
  int cut_age_limit = 8;
  std::int64_t log_interval = 0;  // nodes between log lines; 0 disables
  std::ostream* log = nullptr;
};

struct SolveResult {
  SolveStatus status = SolveStatus::Infeasible;
  std::optional<PointAssignment> incumbent;
  double primal = std::numeric_limits<double>::infinity();
  double dual_bound = -std::numeric_limits<double>::infinity();
  double gap = std::numeric_limits<double>::infinity();
  std::int64_t nodes = 0;
  std::int64_t cuts = 0;
  double root_bound = -std::numeric_limits<double>::infinity();
  double wall_time = 0.0;  // seconds
  std::uint64_t seed = 0;
};

inline double relative_gap(double primal, double bound) {
  if (!std::isfinite(primal)) return std::numeric_limits<double>::infinity();
  if (!std::isfinite(bound)) return std::numeric_limits<double>::infinity();
  return std::max(0.0, primal - bound) / std::max(std::abs(primal), 1e-10);
}

namespace detail {

inline std::vector<SocPrimary> cut_source_rows(const ConicModel& m,
                                               ConicRows which) {
  std::vector<SocPrimary> rows;
  const bool secondary =
      which == ConicRows::Secondary ||
      (which == ConicRows::Auto && !m.soc_secondary.empty());
  if (secondary) {
    for (const auto& c : m.soc_secondary) rows.push_back(secondary_as_primary(c));
  } else {
    rows = m.soc_primary;
  }
  return rows;
}

inline std::vector<std::pair<int, double>> coefs_of(const LinExpr& e) {
  std::vector<std::pair<int, double>> a;
  a.reserve(e.terms().size());
  for (const auto& [v, c] : e.terms()) a.emplace_back(v.value, c);
  return a;
}

// Linear outer approximation of one model, held in a warm-startable LP.
class OuterApproximation {
 public:
  OuterApproximation(const ConicModel& m, ConicRows which)
      : cones_(cut_source_rows(m, which)) {
    std::vector<double> cost(m.num_variables(), 0.0);
    for (const auto& [v, c] : m.objective.terms()) cost[v.value] = c;
    for (const Variable& v : m.variables) {
      lp_.add_column(v.lower, v.upper, cost[v.id.value]);
      if (v.kind == VarKind::Binary) binaries_.push_back(v.id.value);
    }
    lp_.set_cost_constant(m.objective.constant());
    for (const auto& e : m.linear_eqs) {
      lp_.add_row(coefs_of(e), -e.constant(), -e.constant());
    }
    for (const auto& e : m.linear_ineqs) add_le(e);
    // Bound cuts: -rhs <= each norm component <= rhs.
    for (const auto& c : cones_) {
      for (const auto& r : c.norm_rows) {
        add_le(r - c.rhs);
        add_le(-r - c.rhs);
      }
    }
    base_rows_ = lp_.num_rows();
  }

  Simplex& lp() { return lp_; }
  const std::vector<int>& binaries() const { return binaries_; }
  const std::vector<SocPrimary>& cones() const { return cones_; }

  void add_le(const LinExpr& e) {
    lp_.add_row(coefs_of(e), -kInfinity, -e.constant());
  }

  void add_cut(const LinExpr& e) {
    add_le(e);
    ages_.push_back(0);
  }

  PointAssignment point() const { return PointAssignment(lp_.values()); }

  // Largest residual over the conic rows and the gradient cuts of every row
  // violated by more than `tol`.
  double separate(const PointAssignment& p, double tol,
                  std::vector<LinExpr>& cuts) const {
    double worst = 0.0;
    for (const auto& c : cones_) {
      const double v = soc_residual(c, p);
      worst = std::max(worst, v);
      if (v > tol) {
        if (auto cut = gradient_cut(c, p)) cuts.push_back(std::move(*cut));
      }
    }
    return worst;
  }

  double max_violation(const PointAssignment& p) const {
    double worst = 0.0;
    for (const auto& c : cones_) worst = std::max(worst, soc_residual(c, p));
    return worst;
  }

  // Ages cuts that are slack at the current point and drops old ones.
  void age_cuts(int limit) {
    std::vector<int> drop;
    for (std::size_t k = 0; k < ages_.size(); ++k) {
      const int row = base_rows_ + static_cast<int>(k);
      if (lp_.row_is_basic(row) && lp_.row_slack(row) > 1e-6) {
        if (++ages_[k] > limit) drop.push_back(row);
      } else {
        ages_[k] = 0;
      }
    }
    if (drop.size() < 16 && drop.size() * 10 < ages_.size()) return;
    lp_.remove_rows(drop);
    std::vector<int> kept;
    std::size_t d = 0;
    for (std::size_t k = 0; k < ages_.size(); ++k) {
      const int row = base_rows_ + static_cast<int>(k);
      if (d < drop.size() && drop[d] == row) {
        ++d;
        continue;
      }
      kept.push_back(ages_[k]);
    }
    ages_ = std::move(kept);
  }

 private:
  Simplex lp_;
  std::vector<SocPrimary> cones_;
  std::vector<int> binaries_;
  int base_rows_ = 0;
  std::vector<int> ages_;
};

inline bool is_integral(const PointAssignment& p, const std::vector<int>& bins) {
  for (int j : bins) {
    const double x = p.values()[j];
    if (std::abs(x - std::round(x)) > kIntegralityTolerance) return false;
  }
  return true;
}

}  // namespace detail

struct RelaxationResult {
  LpOutcome outcome;
  int cuts_added = 0;
  int rounds = 0;
  double max_violation = 0.0;
};

// Continuous relaxation by outer approximation: integrality is dropped and
// the LP is re-solved with gradient cuts until every conic row is violated
// by at most config.oa_tolerance or config.max_oa_rounds is reached. The
// returned value is a lower bound on the continuous conic optimum.
inline RelaxationResult solve_relaxation(const ConicModel& m,
                                         const std::vector<LinExpr>& extra_cuts,
                                         const SolverConfig& config) {
  detail::OuterApproximation oa(m, config.conic_rows);
  for (const auto& c : extra_cuts) oa.add_cut(c);
  RelaxationResult res;
  std::vector<LinExpr> cuts;
  while (true) {
    const LpStatus st = oa.lp().solve();
    res.outcome.status = st;
    if (st != LpStatus::Optimal) return res;
    res.outcome.point = oa.point();
    res.outcome.objective_value = oa.lp().objective();
    cuts.clear();
    res.max_violation =
        oa.separate(res.outcome.point, config.oa_tolerance, cuts);
    if (cuts.empty() || res.rounds >= config.max_oa_rounds) return res;
    for (const auto& c : cuts) oa.add_cut(c);
    res.cuts_added += static_cast<int>(cuts.size());
    ++res.rounds;
  }
}

// Fully converged relaxation bound (violation <= 1e-8). Stops early only
// when the bound stalls. Returns +inf for an infeasible relaxation.
inline double root_bound(const ConicModel& m, const SolverConfig& config) {
  detail::OuterApproximation oa(m, config.conic_rows);
  std::vector<LinExpr> cuts;
  double last = -std::numeric_limits<double>::infinity();
  int stall = 0;
  for (int round = 0; round < 100000; ++round) {
    const LpStatus st = oa.lp().solve();
    if (st == LpStatus::Infeasible) {
      return std::numeric_limits<double>::infinity();
    }
    if (st == LpStatus::Unbounded) {
      return -std::numeric_limits<double>::infinity();
    }
    const double z = oa.lp().objective();
    cuts.clear();
    oa.separate(oa.point(), 1e-8, cuts);
    if (cuts.empty()) return z;
    if (z - last <= 1e-13 * std::max(1.0, std::abs(z))) {
      if (++stall >= 500) return z;
    } else {
      stall = 0;
    }
    last = z;
    for (const auto& c : cuts) oa.add_cut(c);
  }
  return last;
}

namespace detail {

struct Node {
  double bound = -std::numeric_limits<double>::infinity();
  std::uint64_t seq = 0;
  int depth = 0;
  std::vector<std::int8_t> fix;  // per binary: -1 free, 0 or 1 fixed
  int branch_var = -1;           // binary index branched on to create this
  int branch_dir = 0;            // 0 down, 1 up
  double branch_frac = 0.0;      // distance moved by the branch
  double parent_bound = 0.0;
};

struct NodeOrder {
  NodeSelection sel;
  bool operator()(const Node* a, const Node* b) const {
    if (sel == NodeSelection::DepthFirst) {
      if (a->depth != b->depth) return a->depth > b->depth;
      return a->seq > b->seq;
    }
    if (a->bound != b->bound) return a->bound < b->bound;
    return a->seq < b->seq;
  }
};

class BranchAndBound {
 public:
  BranchAndBound(const ConicModel& m, const SolverConfig& cfg)
      : model_(m), cfg_(cfg), open_(NodeOrder{cfg.node_selection}) {
    for (const Variable& v : m.variables) {
      if (v.kind == VarKind::Binary) bin_.push_back(v.id.value);
    }
    pc_sum_[0].assign(bin_.size(), 0.0);
    pc_sum_[1].assign(bin_.size(), 0.0);
    pc_cnt_[0].assign(bin_.size(), 0);
    pc_cnt_[1].assign(bin_.size(), 0);
  }

  SolveResult run() {
    start_ = std::chrono::steady_clock::now();
    SolveResult res;
    res.seed = cfg_.seed;
    OuterApproximation root(model_, cfg_.conic_rows);
    cuts_total_ = 0;

    auto* node = new Node;
    node->fix.assign(bin_.size(), -1);
    node->seq = seq_++;
    open_.insert(node);
    bounds_.insert(node->bound);

    const int threads = std::max(1, cfg_.threads);
    if (threads == 1) {
      worker(root);
    } else {
      // The root is processed alone so every worker starts from its cuts.
      {
        std::unique_lock<std::mutex> lk(mu_);
        single_step_ = true;
      }
      worker(root);
      {
        std::unique_lock<std::mutex> lk(mu_);
        single_step_ = false;
      }
      if (!stop_) {
        std::vector<OuterApproximation> copies(static_cast<std::size_t>(threads),
                                               root);
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) {
          pool.emplace_back([this, &copies, t] { worker(copies[t]); });
        }
        for (auto& th : pool) th.join();
      }
    }

    res.nodes = nodes_;
    res.cuts = cuts_total_;
    res.root_bound = root_bound_;
    res.incumbent = incumbent_;
    res.primal = primal_;
    double lb = primal_;
    if (!open_.empty() || !unresolved_.empty() || stop_reason_ != 0) {
      lb = std::numeric_limits<double>::infinity();
      for (const Node* n : open_) lb = std::min(lb, n->bound);
      for (double b : unresolved_) lb = std::min(lb, b);
      if (stop_lb_ < lb) lb = stop_lb_;
      lb = std::min(lb, primal_);
    }
    if (!incumbent_ && open_.empty() && unresolved_.empty() && stop_reason_ == 0) {
      lb = std::numeric_limits<double>::infinity();
    }
    res.dual_bound = lb;
    res.gap = relative_gap(primal_, lb);
    if (stop_reason_ == 2) {
      res.status = SolveStatus::TimeLimit;
    } else if (!incumbent_ && open_.empty() && unresolved_.empty() &&
               stop_reason_ == 0) {
      res.status = SolveStatus::Infeasible;
    } else if (incumbent_ && res.gap <= cfg_.rel_gap) {
      res.status = SolveStatus::Optimal;
    } else {
      res.status = SolveStatus::GapLimit;
    }
    for (Node* n : open_) delete n;
    open_.clear();
    res.wall_time = elapsed();
    if (cfg_.log) log_line(true);
    return res;
  }

 private:
  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

  // Lower bound over open and in-process nodes; caller holds mu_.
  double global_lb() const {
    double lb = bounds_.empty() ? primal_ : *bounds_.begin();
    for (double b : unresolved_) lb = std::min(lb, b);
    return std::min(lb, primal_);
  }

  void log_line(bool final) {
    std::ostringstream os;
    os << (final ? "final " : "") << "nodes=" << nodes_ << " incumbent=";
    if (incumbent_) {
      os << std::setprecision(12) << primal_;
    } else {
      os << "none";
    }
    const double lb = global_lb();
    os << " bound=" << std::setprecision(12) << lb
       << " gap=" << std::setprecision(4) << relative_gap(primal_, lb)
       << " cuts=" << cuts_total_ << " time=" << std::fixed
       << std::setprecision(2) << elapsed() << "\n";
    *cfg_.log << os.str() << std::defaultfloat;
    cfg_.log->flush();
  }

  void worker(OuterApproximation& oa) {
    std::vector<std::int8_t> applied(bin_.size(), -1);
    std::size_t pool_seen = 0;
    {
      std::lock_guard<std::mutex> lk(mu_);
      pool_seen = pool_.size();
    }
    Node* local = nullptr;  // plunge continuation, already counted active
    while (true) {
      Node* node = nullptr;
      std::vector<LinExpr> foreign;
      {
        std::unique_lock<std::mutex> lk(mu_);
        while (true) {
          if (stop_) break;
          check_limits_locked();
          if (stop_ || local) break;
          if (!open_.empty()) break;
          if (active_ == 0) return;
          cv_.wait(lk);
        }
        if (stop_) {
          if (local) {
            // Hand the continuation back so its bound is reported.
            open_.insert(local);
            --active_;
          }
          return;
        }
        if (local) {
          node = local;
          local = nullptr;
        } else {
          node = *open_.begin();
          open_.erase(open_.begin());
          ++active_;
        }
        for (; pool_seen < pool_.size(); ++pool_seen) {
          foreign.push_back(pool_[pool_seen]);
        }
      }
      for (const auto& c : foreign) oa.add_cut(c);

      std::vector<Node*> children;
      process(oa, applied, *node, children, pool_seen);

      {
        std::lock_guard<std::mutex> lk(mu_);
        bounds_.erase(bounds_.find(node->bound));
        bool first = true;
        for (Node* c : children) {
          c->seq = seq_++;
          if (incumbent_ && c->bound >= primal_ - cfg_.abs_gap) {
            delete c;
            first = false;
            continue;
          }
          bounds_.insert(c->bound);
          if (first && cfg_.plunge && !single_step_ &&
              cfg_.node_selection == NodeSelection::BestBound) {
            local = c;  // stays active
          } else {
            open_.insert(c);
          }
          first = false;
        }
        if (!local) --active_;
        ++nodes_;
        delete node;
        if (cfg_.log && cfg_.log_interval > 0 &&
            nodes_ % cfg_.log_interval == 0) {
          log_line(false);
        }
        if (single_step_) {
          cv_.notify_all();
          return;
        }
      }
      cv_.notify_all();
    }
  }

  // Caller holds mu_. Sets stop_ on gap, node or time limits.
  void check_limits_locked() {
    if (incumbent_ && relative_gap(primal_, global_lb()) <= cfg_.rel_gap) {
      stop_ = true;
      return;
    }
    if (nodes_ >= 1 && nodes_ >= cfg_.node_limit) {
      stop_ = true;
      stop_reason_ = 1;
      stop_lb_ = global_lb();
      return;
    }
    if (elapsed() > cfg_.time_limit) {
      stop_ = true;
      stop_reason_ = 2;
      stop_lb_ = global_lb();
    }
  }

  void apply_fixings(OuterApproximation& oa, std::vector<std::int8_t>& applied,
                     const std::vector<std::int8_t>& fix) {
    for (std::size_t b = 0; b < bin_.size(); ++b) {
      if (applied[b] == fix[b]) continue;
      const int j = bin_[b];
      const Variable& v = model_.variables[j];
      if (fix[b] < 0) {
        oa.lp().set_bounds(j, v.lower, v.upper);
      } else {
        oa.lp().set_bounds(j, fix[b], fix[b]);
      }
      applied[b] = fix[b];
    }
  }

  void publish_cuts(const std::vector<LinExpr>& cuts, std::size_t& pool_seen) {
    std::lock_guard<std::mutex> lk(mu_);
    // Cuts from other workers that arrived meanwhile are picked up later.
    const bool in_sync = pool_seen == pool_.size();
    for (const auto& c : cuts) pool_.push_back(c);
    if (in_sync) pool_seen = pool_.size();
    cuts_total_ += static_cast<std::int64_t>(cuts.size());
  }

  void process(OuterApproximation& oa, std::vector<std::int8_t>& applied,
               Node& node, std::vector<Node*>& children,
               std::size_t& pool_seen) {
    apply_fixings(oa, applied, node.fix);
    std::vector<LinExpr> cuts;
    int rounds = 0;
    double bound = node.bound;
    PointAssignment pt;
    bool integral = false;
    bool converged = false;
    while (true) {
      const LpStatus st = oa.lp().solve();
      if (st == LpStatus::Infeasible) {
        update_pseudocost(node, std::numeric_limits<double>::infinity());
        return;
      }
      if (st == LpStatus::Unbounded) {
        throw NumericalError("outer-approximation relaxation is unbounded");
      }
      bound = std::max(bound, oa.lp().objective());
      {
        std::lock_guard<std::mutex> lk(mu_);
        if (incumbent_ && bound >= primal_ - cfg_.abs_gap) {
          update_pseudocost_locked(node, bound);
          return;
        }
      }
      pt = oa.point();
      integral = is_integral(pt, bin_);
      const double tol = integral ? cfg_.repair_tolerance : cfg_.oa_tolerance;
      cuts.clear();
      oa.separate(pt, tol, cuts);
      if (cuts.empty()) {
        converged = true;
        break;
      }
      const int cap = integral ? cfg_.max_oa_rounds + cfg_.max_repair_rounds
                               : cfg_.max_oa_rounds;
      if (rounds >= cap) break;
      for (const auto& c : cuts) oa.add_cut(c);
      publish_cuts(cuts, pool_seen);
      ++rounds;
    }
    if (node.depth == 0) {
      std::lock_guard<std::mutex> lk(mu_);
      root_bound_ = bound;
    }
    update_pseudocost(node, bound);
    oa.age_cuts(cfg_.cut_age_limit);

    if (integral) {
      const double viol = oa.max_violation(pt);
      if (converged || viol <= cfg_.oa_tolerance) {
        PointAssignment snapped = pt;
        for (int j : bin_) snapped.set(VarId{j}, std::round(pt.values()[j]));
        if (eval_feasible(model_, snapped, kFeasibilityTolerance).feasible) {
          const double val = model_.objective.evaluate(snapped);
          std::lock_guard<std::mutex> lk(mu_);
          if (!incumbent_ || val < primal_) {
            incumbent_ = snapped;
            primal_ = val;
          }
          return;
        }
      }
      std::lock_guard<std::mutex> lk(mu_);
      unresolved_.push_back(bound);
      return;
    }

    const int b = choose_branch(pt, node);
    const int j = bin_[b];
    const double x = pt.values()[j];
    // The child on the rounding side comes first; it is the plunge target.
    const int first_dir = x >= 0.5 ? 1 : 0;
    for (int dir : {first_dir, 1 - first_dir}) {
      auto* c = new Node;
      c->bound = bound;
      c->depth = node.depth + 1;
      c->fix = node.fix;
      c->fix[b] = static_cast<std::int8_t>(dir);
      c->branch_var = b;
      c->branch_dir = dir;
      c->branch_frac = dir == 0 ? x : 1.0 - x;
      c->parent_bound = bound;
      children.push_back(c);
    }
  }

  int choose_branch(const PointAssignment& pt, const Node& node) {
    int best = -1;
    double best_score = -1.0;
    std::lock_guard<std::mutex> lk(mu_);
    double avg[2] = {1.0, 1.0};
    if (cfg_.branching == Branching::PseudoCost) {
      for (int d = 0; d < 2; ++d) {
        double s = 0.0;
        std::int64_t n = 0;
        for (std::size_t b = 0; b < bin_.size(); ++b) {
          if (pc_cnt_[d][b] > 0) {
            s += pc_sum_[d][b] / pc_cnt_[d][b];
            ++n;
          }
        }
        if (n > 0) avg[d] = s / n;
      }
    }
    for (std::size_t b = 0; b < bin_.size(); ++b) {
      if (node.fix[b] >= 0) continue;
      const double x = pt.values()[bin_[b]];
      const double f = x - std::floor(x);
      const double dist = std::min(f, 1.0 - f);
      if (dist <= kIntegralityTolerance) continue;
      double score = dist;
      if (cfg_.branching == Branching::PseudoCost) {
        const double down = (pc_cnt_[0][b] ? pc_sum_[0][b] / pc_cnt_[0][b]
                                           : avg[0]) * f;
        const double up = (pc_cnt_[1][b] ? pc_sum_[1][b] / pc_cnt_[1][b]
                                         : avg[1]) * (1.0 - f);
        score = std::max(down, 1e-9) * std::max(up, 1e-9);
      }
      if (score > best_score) {
        best_score = score;
        best = static_cast<int>(b);
      }
    }
    return best;
  }

  void update_pseudocost(const Node& node, double bound) {
    std::lock_guard<std::mutex> lk(mu_);
    update_pseudocost_locked(node, bound);
  }

  void update_pseudocost_locked(const Node& node, double bound) {
    if (node.branch_var < 0 || !std::isfinite(bound)) return;
    if (node.branch_frac <= 0.0) return;
    const double gain = std::max(0.0, bound - node.parent_bound);
    pc_sum_[node.branch_dir][node.branch_var] += gain / node.branch_frac;
    ++pc_cnt_[node.branch_dir][node.branch_var];
  }

  const ConicModel& model_;
  SolverConfig cfg_;
  std::vector<int> bin_;
  std::chrono::steady_clock::time_point start_;

  std::mutex mu_;
  std::condition_variable cv_;
  std::set<Node*, NodeOrder> open_;
  std::multiset<double> bounds_;  // open and in-process nodes
  std::vector<double> unresolved_;
  std::vector<LinExpr> pool_;
  std::optional<PointAssignment> incumbent_;
  double primal_ = std::numeric_limits<double>::infinity();
  double root_bound_ = -std::numeric_limits<double>::infinity();
  std::uint64_t seq_ = 0;
  std::int64_t nodes_ = 0;
  std::int64_t cuts_total_ = 0;
  int active_ = 0;
  bool stop_ = false;
  bool single_step_ = false;
  int stop_reason_ = 0;  // 1 node limit, 2 time limit
  double stop_lb_ = std::numeric_limits<double>::infinity();
  std::vector<double> pc_sum_[2];
  std::vector<std::int64_t> pc_cnt_[2];
};

}  // namespace detail

// Branch-and-bound. Requires every integer variable to be binary.
inline SolveResult solve(const ConicModel& m, const SolverConfig& config = {}) {
  for (const Variable& v : m.variables) {
    if (v.kind == VarKind::Binary && (v.lower < 0.0 || v.upper > 1.0)) {
      throw InvalidArgument("integer variables must be binary");
    }
  }
  if (!(config.rel_gap > 0.0) || !(config.abs_gap > 0.0)) {
    throw InvalidArgument("gap targets must be positive");
  }
  if (config.threads < 1 || config.max_oa_rounds < 1 ||
      config.node_limit < 0 || !(config.time_limit > 0.0)) {
    throw InvalidArgument("invalid solver limits");
  }
  detail::BranchAndBound bb(m, config);
  return bb.run();
}

inline nlohmann::json to_json(const SolveResult& r) {
  auto num = [](double x) -> nlohmann::json {
    if (std::isfinite(x)) return x;
    return nullptr;
  };
  nlohmann::json j{{"status", to_string(r.status)},
                   {"primal", num(r.primal)},
                   {"dual_bound", num(r.dual_bound)},
                   {"gap", num(r.gap)},
                   {"nodes", r.nodes},
                   {"cuts", r.cuts},
                   {"root_bound", num(r.root_bound)},
                   {"wall_time_s", r.wall_time},
                   {"seed", r.seed}};
  if (r.incumbent) {
    nlohmann::json v = nlohmann::json::array();
    for (double x : r.incumbent->values()) v.push_back(x == 0.0 ? 0.0 : x);
    j["incumbent"] = std::move(v);
  } else {
    j["incumbent"] = nullptr;
  }
  return j;
}

}  // namespace qconic

#endif  // QCONIC_SOLVER_HPP_
