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

// Congested facility location with M/G/1 service at each facility.
//
// Each facility i may be opened at one capacity level k (cost f[i][k],
// service rate mu[i][k], service-time deviation sigma[i][k]). Every customer
// j with demand rate lambda[j] is served by exactly one open facility. The
// cost is establishment + w[i] * (expected number in system) + travel.

#ifndef QCONIC_LOCATION_HPP_
#define QCONIC_LOCATION_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "qconic/error.hpp"
#include "qconic/queueing.hpp"

namespace qconic {

struct LocationInstance {
  int facilities = 0;
  int customers = 0;
  int levels = 0;
  std::vector<std::vector<double>> f;      // [i][k]
  std::vector<std::vector<double>> d;      // [i][j]
  std::vector<double> lambda;              // [j]
  std::vector<std::vector<double>> mu;     // [i][k]
  std::vector<std::vector<double>> sigma;  // [i][k]
  std::vector<double> w;                   // [i]
  std::map<std::string, std::string> metadata;

  QueueParams queue(int i, int k, double load) const {
    return {load, mu[i][k], sigma[i][k]};
  }

  bool operator==(const LocationInstance&) const = default;
};

// Upper limit on mu * sigma accepted by validate_instance.
inline constexpr double kMaxCoefficientOfVariation = 100.0;

// Throws InvalidArgument describing the first defect found.
inline void validate_instance(const LocationInstance& in) {
  auto fail = [](const std::string& what) {
    throw InvalidArgument("invalid instance: " + what);
  };
  if (in.facilities < 0 || in.customers < 0 || in.levels < 0) {
    fail("negative dimension");
  }
  const auto I = static_cast<std::size_t>(in.facilities);
  const auto J = static_cast<std::size_t>(in.customers);
  const auto K = static_cast<std::size_t>(in.levels);
  auto check_matrix = [&](const std::vector<std::vector<double>>& m,
                          std::size_t cols, const char* name) {
    if (m.size() != I) fail(std::string(name) + " has wrong row count");
    for (const auto& row : m) {
      if (row.size() != cols) fail(std::string(name) + " has wrong width");
      for (double v : row) {
        if (!std::isfinite(v)) fail(std::string(name) + " is not finite");
      }
    }
  };
  check_matrix(in.f, K, "f");
  check_matrix(in.d, J, "d");
  check_matrix(in.mu, K, "mu");
  check_matrix(in.sigma, K, "sigma");
  if (in.lambda.size() != J) fail("lambda has wrong length");
  if (in.w.size() != I) fail("w has wrong length");
  for (std::size_t i = 0; i < I; ++i) {
    if (!(in.w[i] >= 0.0) || !std::isfinite(in.w[i])) {
      fail("w must be nonnegative");
    }
    for (std::size_t k = 0; k < K; ++k) {
      if (!(in.f[i][k] >= 0.0)) fail("f must be nonnegative");
      if (!(in.mu[i][k] > 0.0)) fail("mu must be positive");
      if (!(in.sigma[i][k] >= 0.0)) fail("sigma must be nonnegative");
      if (in.mu[i][k] * in.sigma[i][k] > kMaxCoefficientOfVariation) {
        fail("coefficient of variation mu*sigma exceeds 100");
      }
    }
    for (std::size_t j = 0; j < J; ++j) {
      if (!(in.d[i][j] >= 0.0)) fail("d must be nonnegative");
    }
  }
  for (double l : in.lambda) {
    if (!(l >= 0.0) || !std::isfinite(l)) fail("lambda must be nonnegative");
  }
}

// Values of the binary decisions x[i][k] (facility i open at level k) and
// y[i][k][j] (customer j served by facility i at level k).
class Assignment {
 public:
  Assignment() = default;
  Assignment(int facilities, int levels, int customers)
      : I_(facilities), K_(levels), J_(customers),
        x_(static_cast<std::size_t>(facilities * levels), 0),
        y_(static_cast<std::size_t>(facilities * levels * customers), 0) {}
  explicit Assignment(const LocationInstance& in)
      : Assignment(in.facilities, in.levels, in.customers) {}

  int facilities() const { return I_; }
  int levels() const { return K_; }
  int customers() const { return J_; }

  int x(int i, int k) const { return x_[xi(i, k)]; }
  int y(int i, int k, int j) const { return y_[yi(i, k, j)]; }
  void set_x(int i, int k, int v) { x_[xi(i, k)] = v; }
  void set_y(int i, int k, int j, int v) { y_[yi(i, k, j)] = v; }

  // Opens facility i at level k and assigns customer j to it.
  void assign(int i, int k, int j) {
    set_x(i, k, 1);
    set_y(i, k, j, 1);
  }

  // x in (i, k) order followed by y in (i, k, j) order.
  std::vector<int> bits() const {
    std::vector<int> b = x_;
    b.insert(b.end(), y_.begin(), y_.end());
    return b;
  }

  bool operator==(const Assignment&) const = default;

 private:
  std::size_t xi(int i, int k) const {
    return static_cast<std::size_t>(i * K_ + k);
  }
  std::size_t yi(int i, int k, int j) const {
    return static_cast<std::size_t>((i * K_ + k) * J_ + j);
  }

  int I_ = 0;
  int K_ = 0;
  int J_ = 0;
  std::vector<int> x_;
  std::vector<int> y_;
};

enum class ConstraintFamily {
  SingleAssignment,  // each customer served exactly once
  AssignToOpen,      // y[i][k][j] <= x[i][k]
  OneLevel,          // sum_k x[i][k] <= 1
  Stability,         // load < mu[i][k]
  BinaryX,
  BinaryY,
};

inline std::string_view to_string(ConstraintFamily c) {
  switch (c) {
    case ConstraintFamily::SingleAssignment: return "single-assignment";
    case ConstraintFamily::AssignToOpen: return "assign-to-open";
    case ConstraintFamily::OneLevel: return "one-level";
    case ConstraintFamily::Stability: return "stability";
    case ConstraintFamily::BinaryX: return "binary-x";
    case ConstraintFamily::BinaryY: return "binary-y";
  }
  return "?";
}

struct Violation {
  ConstraintFamily family;
  std::string detail;
};

struct FeasibilityVerdict {
  bool feasible = true;
  std::vector<Violation> violations;

  bool violates(ConstraintFamily c) const {
    return std::any_of(violations.begin(), violations.end(),
                       [c](const Violation& v) { return v.family == c; });
  }
};

// Arrival rate routed to facility i at level k.
inline double load(const LocationInstance& in, const Assignment& a, int i,
                   int k) {
  double s = 0.0;
  for (int j = 0; j < in.customers; ++j) {
    if (a.y(i, k, j) != 0) s += in.lambda[j] * a.y(i, k, j);
  }
  return s;
}

namespace detail {

inline void check_dims(const LocationInstance& in, const Assignment& a) {
  if (a.facilities() != in.facilities || a.levels() != in.levels ||
      a.customers() != in.customers) {
    throw InvalidArgument("assignment dimensions do not match the instance");
  }
}

}  // namespace detail

// Checks every constraint family. Stability is strict: a load equal to the
// service rate is a violation.
inline FeasibilityVerdict check_feasible(const LocationInstance& in,
                                         const Assignment& a) {
  detail::check_dims(in, a);
  FeasibilityVerdict v;
  auto add = [&v](ConstraintFamily c, std::string detail) {
    v.feasible = false;
    v.violations.push_back({c, std::move(detail)});
  };
  const int I = in.facilities, K = in.levels, J = in.customers;
  for (int i = 0; i < I; ++i) {
    for (int k = 0; k < K; ++k) {
      if (a.x(i, k) != 0 && a.x(i, k) != 1) {
        add(ConstraintFamily::BinaryX, "x[" + std::to_string(i) + "][" +
                                           std::to_string(k) + "]");
      }
      for (int j = 0; j < J; ++j) {
        if (a.y(i, k, j) != 0 && a.y(i, k, j) != 1) {
          add(ConstraintFamily::BinaryY,
              "y[" + std::to_string(i) + "][" + std::to_string(k) + "][" +
                  std::to_string(j) + "]");
        }
      }
    }
  }
  for (int j = 0; j < J; ++j) {
    int n = 0;
    for (int i = 0; i < I; ++i) {
      for (int k = 0; k < K; ++k) n += a.y(i, k, j);
    }
    if (n != 1) {
      add(ConstraintFamily::SingleAssignment,
          "customer " + std::to_string(j) + " assigned " + std::to_string(n) +
              " times");
    }
  }
  for (int i = 0; i < I; ++i) {
    for (int k = 0; k < K; ++k) {
      for (int j = 0; j < J; ++j) {
        if (a.y(i, k, j) > a.x(i, k)) {
          add(ConstraintFamily::AssignToOpen,
              "customer " + std::to_string(j) + " at closed facility " +
                  std::to_string(i) + " level " + std::to_string(k));
        }
      }
    }
  }
  for (int i = 0; i < I; ++i) {
    int n = 0;
    for (int k = 0; k < K; ++k) n += a.x(i, k);
    if (n > 1) {
      add(ConstraintFamily::OneLevel,
          "facility " + std::to_string(i) + " open at " + std::to_string(n) +
              " levels");
    }
  }
  for (int i = 0; i < I; ++i) {
    for (int k = 0; k < K; ++k) {
      const double lam = load(in, a, i, k);
      if (lam > 0.0 && !(lam < in.mu[i][k])) {
        std::ostringstream os;
        os << "facility " << i << " level " << k << " load " << lam
           << " >= mu " << in.mu[i][k];
        add(ConstraintFamily::Stability, os.str());
      }
    }
  }
  return v;
}

// Total waiting per unit time at facility i, level k for arrival rate
// total_lambda; identical to metric(TW, ...).
inline double congestion_tw(int i, int k, double total_lambda,
                            const LocationInstance& in) {
  return metric(MetricKind::TW, in.queue(i, k, total_lambda));
}

struct CostBreakdown {
  double establishing = 0.0;
  double waiting = 0.0;
  double traveling = 0.0;

  double total() const { return establishing + waiting + traveling; }
};

// Cost components of a feasible assignment. Throws InfeasibleAssignmentError
// naming every violated family.
inline CostBreakdown evaluate_breakdown(const LocationInstance& in,
                                        const Assignment& a) {
  const FeasibilityVerdict v = check_feasible(in, a);
  if (!v.feasible) {
    std::string msg = "infeasible assignment:";
    for (const Violation& x : v.violations) {
      msg += " [" + std::string(to_string(x.family)) + "] " + x.detail + ";";
    }
    throw InfeasibleAssignmentError(msg);
  }
  CostBreakdown c;
  for (int i = 0; i < in.facilities; ++i) {
    for (int k = 0; k < in.levels; ++k) {
      if (a.x(i, k) == 0) continue;
      c.establishing += in.f[i][k];
      c.waiting += in.w[i] * congestion_tw(i, k, load(in, a, i, k), in);
      for (int j = 0; j < in.customers; ++j) {
        if (a.y(i, k, j)) c.traveling += in.d[i][j] * in.lambda[j];
      }
    }
  }
  return c;
}

inline double evaluate(const LocationInstance& in, const Assignment& a) {
  return evaluate_breakdown(in, a).total();
}

struct OracleResult {
  Assignment best;
  double value = 0.0;
  std::int64_t enumerated = 0;
};

inline constexpr int kOracleMaxLevelsTimesFacilities = 8;
inline constexpr int kOracleMaxCustomers = 8;

namespace detail {

struct OracleCandidate {
  bool found = false;
  double value = 0.0;
  Assignment best;
  std::int64_t enumerated = 0;
};

// Prefers the lower value; near-equal values fall to the lexicographically
// greater bit vector, which favours lower facility and level indices.
inline bool oracle_better(double v, const Assignment& a,
                          const OracleCandidate& cur) {
  if (!cur.found) return true;
  const double tol = 1e-12 * std::max(1.0, std::abs(cur.value));
  if (v < cur.value - tol) return true;
  if (v > cur.value + tol) return false;
  return a.bits() > cur.best.bits();
}

// All customer assignments for a fixed level selection (level[i] = -1 when
// facility i is closed).
inline OracleCandidate oracle_for_levels(const LocationInstance& in,
                                         const std::vector<int>& level) {
  OracleCandidate out;
  const int I = in.facilities, J = in.customers;
  std::vector<int> open;
  double fixed = 0.0;
  for (int i = 0; i < I; ++i) {
    if (level[i] >= 0) {
      open.push_back(i);
      fixed += in.f[i][level[i]];
    }
  }
  const auto n_open = static_cast<std::int64_t>(open.size());
  out.enumerated = 1;
  if (n_open > 0) {
    for (int j = 0; j < J; ++j) out.enumerated *= n_open;
  }
  if (J > 0 && open.empty()) return out;

  Assignment a(in);
  for (int i : open) a.set_x(i, level[i], 1);
  std::vector<int> choice(static_cast<std::size_t>(J), 0);
  // Loads are summed afresh in customer order so they match evaluate().
  auto load_of = [&](int i, int upto) {
    double s = 0.0;
    for (int jj = 0; jj <= upto; ++jj) {
      if (open[choice[jj]] == i) s += in.lambda[jj];
    }
    return s;
  };

  auto leaf = [&]() {
    double v = fixed;
    for (int i : open) {
      v += in.w[i] * congestion_tw(i, level[i], load_of(i, J - 1), in);
    }
    for (int j = 0; j < J; ++j) {
      v += in.d[open[choice[j]]][j] * in.lambda[j];
    }
    Assignment cand = a;
    for (int j = 0; j < J; ++j) {
      const int i = open[choice[j]];
      cand.set_y(i, level[i], j, 1);
    }
    if (oracle_better(v, cand, out)) {
      out.found = true;
      out.value = v;
      out.best = std::move(cand);
    }
  };

  // Depth-first over customers; loads only grow, so unstable prefixes are cut.
  int j = 0;
  if (J == 0) {
    leaf();
    return out;
  }
  choice[0] = -1;
  while (j >= 0) {
    ++choice[j];
    if (choice[j] >= static_cast<int>(open.size())) {
      --j;
      continue;
    }
    const int i = open[choice[j]];
    const double li = load_of(i, j);
    if (li > 0.0 && !(li < in.mu[i][level[i]])) continue;
    if (j + 1 == J) {
      leaf();
    } else {
      ++j;
      choice[j] = -1;
    }
  }
  return out;
}

}  // namespace detail

// Exact minimizer by exhaustive enumeration. Level selections are split
// across `threads` workers; the reduction applies the same tie-break, so the
// result does not depend on the thread count.
inline OracleResult brute_force(const LocationInstance& in, int threads = 1) {
  validate_instance(in);
  if (in.facilities * in.levels > kOracleMaxLevelsTimesFacilities ||
      in.customers > kOracleMaxCustomers) {
    throw InstanceTooLargeError(
        "brute force needs facilities*levels <= 8 and customers <= 8");
  }
  const int I = in.facilities, K = in.levels;
  std::vector<std::vector<int>> selections;
  std::vector<int> level(static_cast<std::size_t>(I), -1);
  while (true) {
    selections.push_back(level);
    int i = I - 1;
    while (i >= 0 && level[i] == K - 1) level[i--] = -1;
    if (i < 0) break;
    ++level[i];
  }

  std::vector<detail::OracleCandidate> parts(selections.size());
  threads = std::max(1, std::min<int>(threads, static_cast<int>(parts.size())));
  if (threads == 1) {
    for (std::size_t s = 0; s < selections.size(); ++s) {
      parts[s] = detail::oracle_for_levels(in, selections[s]);
    }
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (std::size_t s = static_cast<std::size_t>(t); s < selections.size();
             s += static_cast<std::size_t>(threads)) {
          parts[s] = detail::oracle_for_levels(in, selections[s]);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  detail::OracleCandidate best;
  std::int64_t enumerated = 0;
  for (const auto& p : parts) {
    enumerated += p.enumerated;
    if (p.found && detail::oracle_better(p.value, p.best, best)) {
      best.found = true;
      best.value = p.value;
      best.best = p.best;
    }
  }
  if (!best.found) {
    throw NoFeasibleAssignmentError("no assignment satisfies all constraints");
  }
  OracleResult r{best.best, 0.0, enumerated};
  r.value = evaluate(in, r.best);
  return r;
}

}  // namespace qconic

#endif  // QCONIC_LOCATION_HPP_
