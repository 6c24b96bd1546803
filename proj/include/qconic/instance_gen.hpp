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

// Seeded benchmark instance generator.
//
// Random numbers come from one SplitMix64 stream. A uniform draw on [lo, hi]
// is lo + (hi - lo) * (next() >> 11) * 2^-53. Draws happen in this order:
//
//   for each facility i:   f_i, b_i, w_i, then (Euclidean only) x_i, y_i
//   for each facility i, level k:   sigma_ik
//   for each customer j:   lambda_j, then (Euclidean only) x_j, y_j
//   for each pair (i, j):  d_ij (uniform travel only)
//
// Level rates are mu_ik = b_i * m_k for the level multipliers m (default
// m_k = k), and establishment costs follow the economy-of-scale ladder
//
//   f_ik = (f_i / b_i)^((K - 1) / (K - 1 + k - 1)) * mu_ik,   k = 1..K,
//
// with exponent 1 when K = 1.

#ifndef QCONIC_INSTANCE_GEN_HPP_
#define QCONIC_INSTANCE_GEN_HPP_

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "qconic/error.hpp"
#include "qconic/location.hpp"

namespace qconic {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  double uniform01() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

 private:
  std::uint64_t state_;
};

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

enum class TravelScheme { Uniform, Euclidean };

struct GenSpec {
  int n_facilities = 3;
  int n_customers = 5;
  int n_levels = 2;
  std::uint64_t seed = 1;
  std::string name = "custom";
  Range base_cost{100.0, 300.0};      // f_i
  Range base_capacity{10.0, 30.0};    // b_i, also the level-1 rate
  Range demand{1.0, 5.0};             // lambda_j
  std::vector<double> level_multipliers;  // empty: 1, 2, ..., K
  TravelScheme travel = TravelScheme::Uniform;
  Range travel_cost{1.0, 10.0};       // d_ij under Uniform
  double grid = 100.0;                // coordinate square side, Euclidean
  double cost_per_distance = 0.1;     // Euclidean d_ij per unit distance
  Range waiting_cost{10.0, 50.0};     // w_i
  Range cv{1.0, 3.0};                 // mu_ik sigma_ik
};

inline void validate_spec(const GenSpec& s) {
  if (s.n_facilities < 1 || s.n_customers < 0 || s.n_levels < 1) {
    throw InvalidArgument("generator dimensions must be positive");
  }
  auto check = [](const Range& r, const char* what, bool positive) {
    if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || r.lo > r.hi ||
        (positive ? r.lo <= 0.0 : r.lo < 0.0)) {
      throw InvalidArgument(std::string("invalid range for ") + what);
    }
  };
  check(s.base_cost, "base cost", false);
  check(s.base_capacity, "base capacity", true);
  check(s.demand, "demand", false);
  check(s.waiting_cost, "waiting cost", false);
  check(s.cv, "coefficient of variation", false);
  if (s.cv.hi > kMaxCoefficientOfVariation) {
    throw InvalidArgument("coefficient of variation range too large");
  }
  if (s.travel == TravelScheme::Uniform) {
    check(s.travel_cost, "travel cost", false);
  } else if (!(s.grid > 0.0) || !(s.cost_per_distance >= 0.0) ||
             !std::isfinite(s.grid) || !std::isfinite(s.cost_per_distance)) {
    throw InvalidArgument("invalid Euclidean travel parameters");
  }
  if (!s.level_multipliers.empty()) {
    if (static_cast<int>(s.level_multipliers.size()) != s.n_levels) {
      throw InvalidArgument("one level multiplier per level is required");
    }
    double prev = 0.0;
    for (double m : s.level_multipliers) {
      if (!std::isfinite(m) || !(m > prev)) {
        throw InvalidArgument("level multipliers must be positive and increasing");
      }
      prev = m;
    }
  }
}

// Establishment cost of level k (1-based) on the economy-of-scale ladder.
inline double ladder_cost(double f, double b, int levels, int k, double mu) {
  const double exponent =
      levels == 1 ? 1.0
                  : static_cast<double>(levels - 1) / (levels - 1 + k - 1);
  return std::pow(f / b, exponent) * mu;
}

namespace detail {

inline std::string fmt_num(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace detail

inline LocationInstance generate(const GenSpec& s) {
  validate_spec(s);
  const int I = s.n_facilities, J = s.n_customers, K = s.n_levels;
  SplitMix64 rng(s.seed);
  LocationInstance in;
  in.facilities = I;
  in.customers = J;
  in.levels = K;
  in.f.assign(I, std::vector<double>(K));
  in.mu.assign(I, std::vector<double>(K));
  in.sigma.assign(I, std::vector<double>(K));
  in.d.assign(I, std::vector<double>(J));
  in.lambda.assign(J, 0.0);
  in.w.assign(I, 0.0);

  std::vector<double> mult(K);
  for (int k = 0; k < K; ++k) {
    mult[k] = s.level_multipliers.empty() ? k + 1.0 : s.level_multipliers[k];
  }
  const bool euclid = s.travel == TravelScheme::Euclidean;
  std::vector<double> fx(I), fy(I), cx(J), cy(J);

  for (int i = 0; i < I; ++i) {
    const double f = rng.uniform(s.base_cost.lo, s.base_cost.hi);
    const double b = rng.uniform(s.base_capacity.lo, s.base_capacity.hi);
    in.w[i] = rng.uniform(s.waiting_cost.lo, s.waiting_cost.hi);
    if (euclid) {
      fx[i] = rng.uniform(0.0, s.grid);
      fy[i] = rng.uniform(0.0, s.grid);
    }
    for (int k = 0; k < K; ++k) {
      in.mu[i][k] = b * mult[k];
      in.f[i][k] = ladder_cost(f, b, K, k + 1, in.mu[i][k]);
    }
  }
  for (int i = 0; i < I; ++i) {
    for (int k = 0; k < K; ++k) {
      in.sigma[i][k] = rng.uniform(s.cv.lo, s.cv.hi) / in.mu[i][k];
    }
  }
  for (int j = 0; j < J; ++j) {
    in.lambda[j] = rng.uniform(s.demand.lo, s.demand.hi);
    if (euclid) {
      cx[j] = rng.uniform(0.0, s.grid);
      cy[j] = rng.uniform(0.0, s.grid);
    }
  }
  for (int i = 0; i < I; ++i) {
    for (int j = 0; j < J; ++j) {
      in.d[i][j] = euclid ? s.cost_per_distance *
                                std::hypot(fx[i] - cx[j], fy[i] - cy[j])
                          : rng.uniform(s.travel_cost.lo, s.travel_cost.hi);
    }
  }

  // Aggregate feasibility: total demand below total top-level capacity.
  double demand = 0.0, capacity = 0.0;
  for (double l : in.lambda) demand += l;
  for (int i = 0; i < I; ++i) capacity += in.mu[i][K - 1];
  double rescale = 1.0;
  if (demand >= capacity) {
    rescale = 0.9 * capacity / demand;
    for (double& l : in.lambda) l *= rescale;
  }

  std::string scheme = "linear";
  if (!s.level_multipliers.empty()) {
    scheme = "multipliers:";
    for (int k = 0; k < K; ++k) {
      scheme += (k ? "," : "") + detail::fmt_num(mult[k]);
    }
  }
  in.metadata["generator"] = "splitmix64";
  in.metadata["preset"] = s.name;
  in.metadata["seed"] = std::to_string(s.seed);
  in.metadata["level_scheme"] = scheme;
  in.metadata["travel_scheme"] = euclid ? "euclidean" : "uniform";
  in.metadata["demand_rescale"] = detail::fmt_num(rescale);
  validate_instance(in);
  return in;
}

// Named generator settings: "vj-large" (25 facilities, 400 customers,
// 5 levels), "holmberg-large" (30, 200, 10) and "desk-small" (3, 5, 2).
inline GenSpec preset(std::string_view name) {
  GenSpec s;
  s.name = std::string(name);
  if (name == "vj-large") {
    s.n_facilities = 25;
    s.n_customers = 400;
    s.n_levels = 5;
  } else if (name == "holmberg-large") {
    s.n_facilities = 30;
    s.n_customers = 200;
    s.n_levels = 10;
    s.travel = TravelScheme::Euclidean;
  } else if (name == "desk-small") {
    s.n_facilities = 3;
    s.n_customers = 5;
    s.n_levels = 2;
  } else {
    throw InvalidArgument("unknown preset '" + std::string(name) + "'");
  }
  return s;
}

inline std::string instance_filename(const GenSpec& s) {
  return s.name + "-s" + std::to_string(s.seed) + ".json";
}

}  // namespace qconic

#endif  // QCONIC_INSTANCE_GEN_HPP_
