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

// Closed-form stationary metrics of an M/G/1 queue (Pollaczek-Khinchine
// mean-value formulas).
//
// A station is described by its arrival rate lambda, service rate mu and the
// standard deviation sigma of the service time. All metrics require
// rho = lambda / mu < 1.

#ifndef QCONIC_QUEUEING_HPP_
#define QCONIC_QUEUEING_HPP_

#include <array>
#include <cmath>
#include <sstream>
#include <string>
#include <string_view>

#include "qconic/error.hpp"

namespace qconic {

struct QueueParams {
  double lambda = 0.0;  // arrivals per unit time
  double mu = 1.0;      // services per unit time
  double sigma = 0.0;   // service-time standard deviation

  double rho() const { return lambda / mu; }
  // Coefficient of variation of the service time, mu * sigma.
  double cv() const { return mu * sigma; }
};

enum class MetricKind { Lq, L, Wq, W, TWq, TW };

inline constexpr std::array<MetricKind, 6> kAllMetrics = {
    MetricKind::Lq, MetricKind::L,   MetricKind::Wq,
    MetricKind::W,  MetricKind::TWq, MetricKind::TW};

inline std::string_view to_string(MetricKind kind) {
  switch (kind) {
    case MetricKind::Lq: return "Lq";
    case MetricKind::L: return "L";
    case MetricKind::Wq: return "Wq";
    case MetricKind::W: return "W";
    case MetricKind::TWq: return "TWq";
    case MetricKind::TW: return "TW";
  }
  return "?";
}

inline MetricKind metric_from_string(std::string_view name) {
  for (MetricKind kind : kAllMetrics) {
    if (to_string(kind) == name) return kind;
  }
  throw InvalidArgument("unknown metric '" + std::string(name) + "'");
}

// Throws InvalidArgument on malformed parameters and UnstableQueueError when
// lambda >= mu.
inline void check_stable(const QueueParams& p) {
  if (!(p.mu > 0.0) || !std::isfinite(p.mu)) {
    throw InvalidArgument("service rate must be positive and finite");
  }
  if (!(p.lambda >= 0.0) || !std::isfinite(p.lambda)) {
    throw InvalidArgument("arrival rate must be nonnegative and finite");
  }
  if (!(p.sigma >= 0.0) || !std::isfinite(p.sigma)) {
    throw InvalidArgument("service-time deviation must be nonnegative");
  }
  if (p.lambda >= p.mu) {
    std::ostringstream os;
    os << "unstable queue: lambda=" << p.lambda << " >= mu=" << p.mu;
    throw UnstableQueueError(os.str());
  }
}

// Expected number waiting in the queue.
inline double lq(const QueueParams& p) {
  check_stable(p);
  const double rho = p.rho();
  const double ls = p.lambda * p.sigma;
  return (rho * rho + ls * ls) / (2.0 * (1.0 - rho));
}

// Expected number in the system.
inline double l(const QueueParams& p) { return p.rho() + lq(p); }

// Expected time spent waiting in the queue.
inline double wq(const QueueParams& p) {
  check_stable(p);
  const double rho = p.rho();
  return (rho + p.lambda * p.mu * p.sigma * p.sigma) /
         (2.0 * (p.mu - p.lambda));
}

// Expected time spent in the system.
inline double w(const QueueParams& p) { return wq(p) + 1.0 / p.mu; }

// Total waiting times per unit time coincide with the expected counts.
inline double metric(MetricKind kind, const QueueParams& p) {
  switch (kind) {
    case MetricKind::Lq:
    case MetricKind::TWq: return lq(p);
    case MetricKind::L:
    case MetricKind::TW: return l(p);
    case MetricKind::Wq: return wq(p);
    case MetricKind::W: return w(p);
  }
  throw InvalidArgument("unknown metric kind");
}

}  // namespace qconic

#endif  // QCONIC_QUEUEING_HPP_
