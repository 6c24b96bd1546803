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

// Discrete-event simulation of a single-server FIFO queue with Poisson
// arrivals, used as an independent check of the closed-form metrics.
//
// Waiting times follow the Lindley recursion. Time-average counts (L, Lq)
// are integrated directly from the arrival/start/departure epochs over the
// post-warmup horizon, so they do not rely on Little's law. Confidence
// half-widths come from 32 batch means with a Student-t quantile.

#ifndef QCONIC_SIMULATION_HPP_
#define QCONIC_SIMULATION_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "qconic/error.hpp"
#include "qconic/queueing.hpp"

namespace qconic {

enum class ServiceKind { Exponential, Deterministic, Uniform, TwoPoint };

// Shape of the service-time distribution. Mean and deviation are taken from
// QueueParams (1/mu and sigma).
struct ServiceDist {
  ServiceKind kind = ServiceKind::Exponential;
  // TwoPoint only: probability of the low value. NaN picks
  // max(1/2, cv^2 / (1 + cv^2)), which keeps the low value nonnegative.
  double low_prob = std::numeric_limits<double>::quiet_NaN();

  static ServiceDist exponential() { return {ServiceKind::Exponential}; }
  static ServiceDist deterministic() { return {ServiceKind::Deterministic}; }
  static ServiceDist uniform() { return {ServiceKind::Uniform}; }
  static ServiceDist two_point(
      double p = std::numeric_limits<double>::quiet_NaN()) {
    return {ServiceKind::TwoPoint, p};
  }
};

inline ServiceKind service_kind_from_string(const std::string& name) {
  if (name == "exponential" || name == "exp") return ServiceKind::Exponential;
  if (name == "deterministic" || name == "det") {
    return ServiceKind::Deterministic;
  }
  if (name == "uniform") return ServiceKind::Uniform;
  if (name == "two-point" || name == "twopoint") return ServiceKind::TwoPoint;
  throw InvalidArgument("unknown service distribution '" + name + "'");
}

struct SimEstimate {
  double mean = 0.0;
  double half_width = 0.0;  // 95% confidence
  std::int64_t samples = 0;
};

inline constexpr int kSimBatches = 32;
// Two-sided 95% Student-t quantile with kSimBatches - 1 degrees of freedom.
inline constexpr double kSimTQuantile = 2.0395134464;

namespace detail {

// Resolved sampler for one service distribution.
class ServiceSampler {
 public:
  ServiceSampler(const ServiceDist& dist, const QueueParams& p)
      : kind_(dist.kind), mean_(1.0 / p.mu) {
    const double sd = p.sigma;
    const double rel = 1e-9 * mean_;
    switch (kind_) {
      case ServiceKind::Exponential:
        if (std::abs(sd - mean_) > rel) {
          throw InvalidArgument(
              "exponential service requires sigma == 1/mu");
        }
        break;
      case ServiceKind::Deterministic:
        if (sd > rel) {
          throw InvalidArgument("deterministic service requires sigma == 0");
        }
        break;
      case ServiceKind::Uniform: {
        const double half = std::sqrt(3.0) * sd;
        lo_ = mean_ - half;
        hi_ = mean_ + half;
        if (lo_ < -rel) {
          throw InvalidArgument(
              "uniform service with this sigma puts mass on negative times");
        }
        lo_ = std::max(lo_, 0.0);
        break;
      }
      case ServiceKind::TwoPoint: {
        const double cv = sd / mean_;
        double q = dist.low_prob;
        if (std::isnan(q)) q = std::max(0.5, cv * cv / (1.0 + cv * cv));
        if (!(q > 0.0 && q < 1.0)) {
          throw InvalidArgument("two-point probability must lie in (0, 1)");
        }
        prob_low_ = q;
        lo_ = mean_ - sd * std::sqrt((1.0 - q) / q);
        hi_ = mean_ + sd * std::sqrt(q / (1.0 - q));
        if (lo_ < -rel) {
          throw InvalidArgument(
              "two-point service with this sigma puts mass on negative times");
        }
        lo_ = std::max(lo_, 0.0);
        break;
      }
    }
  }

  template <class Rng>
  double operator()(Rng& rng) {
    switch (kind_) {
      case ServiceKind::Exponential: return mean_ * exp_(rng);
      case ServiceKind::Deterministic: return mean_;
      case ServiceKind::Uniform: return lo_ + (hi_ - lo_) * unit_(rng);
      case ServiceKind::TwoPoint: return unit_(rng) < prob_low_ ? lo_ : hi_;
    }
    return mean_;
  }

 private:
  ServiceKind kind_;
  double mean_;
  double lo_ = 0.0;
  double hi_ = 0.0;
  double prob_low_ = 0.5;
  std::exponential_distribution<double> exp_{1.0};
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
};

inline SimEstimate batch_estimate(const std::vector<double>& batches,
                                  std::int64_t samples) {
  const double n = static_cast<double>(batches.size());
  double mean = 0.0;
  for (double b : batches) mean += b;
  mean /= n;
  double ss = 0.0;
  for (double b : batches) ss += (b - mean) * (b - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  return {mean, kSimTQuantile * sd / std::sqrt(n), samples};
}

// Adds the overlap of [from, to) with each of the equal-width batches that
// partition [t0, t1).
inline void spread_interval(double from, double to, double t0, double width,
                            std::vector<double>& acc) {
  const int nb = static_cast<int>(acc.size());
  from = std::max(from, t0);
  const double t1 = t0 + width * nb;
  to = std::min(to, t1);
  if (to <= from) return;
  int b = std::clamp(static_cast<int>((from - t0) / width), 0, nb - 1);
  while (from < to && b < nb) {
    const double edge = (b == nb - 1) ? t1 : t0 + width * (b + 1);
    const double end = std::min(to, edge);
    if (end > from) acc[b] += end - from;
    from = end;
    ++b;
  }
}

}  // namespace detail

// Simulates `customers` arrivals and discards the first `warmup` of them.
// Deterministic for a fixed seed.
inline std::map<MetricKind, SimEstimate> simulate(const QueueParams& p,
                                                  const ServiceDist& dist,
                                                  std::int64_t customers,
                                                  std::int64_t warmup,
                                                  std::uint64_t seed) {
  check_stable(p);
  if (p.lambda <= 0.0) {
    throw InvalidArgument("simulation needs a positive arrival rate");
  }
  if (warmup < 0 || customers <= warmup ||
      customers - warmup < 2 * kSimBatches) {
    throw InvalidArgument("need customers > warmup + 64");
  }
  detail::ServiceSampler service(dist, p);
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> inter(p.lambda);

  const auto n = static_cast<std::size_t>(customers);
  std::vector<double> arrive(n), start(n), depart(n);
  double clock = 0.0;
  double free_at = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    clock += inter(rng);
    arrive[i] = clock;
    start[i] = std::max(clock, free_at);
    depart[i] = start[i] + service(rng);
    free_at = depart[i];
  }

  const std::int64_t kept = customers - warmup;
  std::vector<double> wq_b(kSimBatches, 0.0), w_b(kSimBatches, 0.0);
  std::vector<double> count_b(kSimBatches, 0.0);
  for (std::int64_t c = warmup; c < customers; ++c) {
    const auto b = static_cast<std::size_t>((c - warmup) * kSimBatches / kept);
    const auto i = static_cast<std::size_t>(c);
    wq_b[b] += start[i] - arrive[i];
    w_b[b] += depart[i] - arrive[i];
    count_b[b] += 1.0;
  }
  for (int b = 0; b < kSimBatches; ++b) {
    wq_b[b] /= count_b[b];
    w_b[b] /= count_b[b];
  }

  // Time averages over [first kept arrival, last arrival).
  const double t0 = arrive[static_cast<std::size_t>(warmup)];
  const double t1 = arrive[n - 1];
  const double width = (t1 - t0) / kSimBatches;
  std::vector<double> lq_b(kSimBatches, 0.0), l_b(kSimBatches, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (depart[i] <= t0) continue;
    detail::spread_interval(arrive[i], start[i], t0, width, lq_b);
    detail::spread_interval(arrive[i], depart[i], t0, width, l_b);
  }
  for (int b = 0; b < kSimBatches; ++b) {
    lq_b[b] /= width;
    l_b[b] /= width;
  }

  std::map<MetricKind, SimEstimate> out;
  out[MetricKind::Wq] = detail::batch_estimate(wq_b, kept);
  out[MetricKind::W] = detail::batch_estimate(w_b, kept);
  out[MetricKind::Lq] = detail::batch_estimate(lq_b, kept);
  out[MetricKind::L] = detail::batch_estimate(l_b, kept);
  out[MetricKind::TWq] = out[MetricKind::Lq];
  out[MetricKind::TW] = out[MetricKind::L];
  return out;
}

// Discards the first 10% of customers.
inline std::map<MetricKind, SimEstimate> simulate(const QueueParams& p,
                                                  const ServiceDist& dist,
                                                  std::int64_t customers,
                                                  std::uint64_t seed) {
  return simulate(p, dist, customers, customers / 10, seed);
}

}  // namespace qconic

#endif  // QCONIC_SIMULATION_HPP_
