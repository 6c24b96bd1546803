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


#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "qconic/queueing.hpp"
#include "qconic/simulation.hpp"
#include "test_support.hpp"

namespace qconic {
namespace {

using testing::md1_lq;
using testing::md1_wq;
using testing::mm1_l;
using testing::mm1_w;
using testing::residual_work_l;

constexpr QueueParams kMM1{1.0, 2.0, 0.5};
constexpr QueueParams kEmpty{0.0, 2.0, 0.5};
constexpr QueueParams kMD1{1.0, 2.0, 0.0};

TEST(Formulas, QueueLength) {
  EXPECT_DOUBLE_EQ(lq(kMM1), 0.5);
  EXPECT_DOUBLE_EQ(lq(kEmpty), 0.0);
  EXPECT_DOUBLE_EQ(lq(kMD1), 0.25);
}

TEST(Formulas, NumberInSystem) {
  EXPECT_DOUBLE_EQ(l(kMM1), 1.0);
  EXPECT_DOUBLE_EQ(l(kEmpty), 0.0);
  EXPECT_DOUBLE_EQ(l(kMD1), 0.75);
}

TEST(Formulas, QueueWait) {
  EXPECT_DOUBLE_EQ(wq(kMM1), 0.5);
  EXPECT_DOUBLE_EQ(wq(kEmpty), 0.0);
  EXPECT_DOUBLE_EQ(wq(kMD1), 0.25);
}

TEST(Formulas, SystemWait) {
  EXPECT_DOUBLE_EQ(w(kMM1), 1.0);
  EXPECT_DOUBLE_EQ(w(kEmpty), 0.5);
  EXPECT_DOUBLE_EQ(w(kMD1), 0.75);
}

TEST(Formulas, TotalWaitingEqualsCounts) {
  EXPECT_DOUBLE_EQ(metric(MetricKind::TW, kMM1), 1.0);
  EXPECT_DOUBLE_EQ(metric(MetricKind::TWq, kMM1), 0.5);
  EXPECT_DOUBLE_EQ(metric(MetricKind::W, kMD1), 0.75);
}

TEST(Formulas, RejectsUnstableAndMalformed) {
  EXPECT_THROW(l({2.0, 2.0, 0.5}), UnstableQueueError);
  EXPECT_THROW(w({3.0, 2.0, 0.5}), UnstableQueueError);
  EXPECT_THROW(lq({1.0, 0.0, 0.5}), InvalidArgument);
  EXPECT_THROW(lq({-1.0, 2.0, 0.5}), InvalidArgument);
  EXPECT_THROW(lq({1.0, 2.0, -0.1}), InvalidArgument);
  EXPECT_THROW(metric_from_string("X"), InvalidArgument);
  EXPECT_EQ(metric_from_string("TWq"), MetricKind::TWq);
}

TEST(Formulas, MatchClosedFormsOnAGrid) {
  for (int a = 1; a <= 19; ++a) {
    const double mu = 0.5 + a;
    const double lambda = mu * a / 20.0;
    const QueueParams m{lambda, mu, 1.0 / mu};
    const QueueParams d{lambda, mu, 0.0};
    EXPECT_NEAR(l(m), mm1_l(lambda, mu), 1e-12 * mm1_l(lambda, mu));
    EXPECT_NEAR(w(m), mm1_w(lambda, mu), 1e-12 * mm1_w(lambda, mu));
    EXPECT_NEAR(lq(d), md1_lq(lambda, mu), 1e-12 * md1_lq(lambda, mu));
    EXPECT_NEAR(wq(d), md1_wq(lambda, mu), 1e-12 * md1_wq(lambda, mu));
  }
}

TEST(Formulas, LittlesLawAndResidualWork) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n = 0; n < 2000; ++n) {
    const double mu = 0.1 + 10.0 * u(rng);
    const double lambda = mu * 0.999 * u(rng);
    const double sigma = 3.0 * u(rng) / mu;
    const QueueParams p{lambda, mu, sigma};
    EXPECT_NEAR(l(p), lambda * w(p), 1e-12 * std::max(1.0, l(p)));
    EXPECT_NEAR(lq(p), lambda * wq(p), 1e-12 * std::max(1.0, lq(p)));
    const double ref = residual_work_l(lambda, mu, sigma);
    EXPECT_NEAR(l(p), ref, 1e-9 * std::max(1.0, ref));
  }
}

TEST(Simulation, ExponentialWaitInsideInterval) {
  const auto est = simulate({1.0, 2.0, 0.5}, ServiceDist::exponential(),
                            1000000, 7);
  const SimEstimate& e = est.at(MetricKind::W);
  EXPECT_LT(std::abs(e.mean - 1.0), e.half_width);
  EXPECT_GT(e.samples, 0);
}

TEST(Simulation, DeterministicCountInsideInterval) {
  const auto est = simulate({1.0, 2.0, 0.0}, ServiceDist::deterministic(),
                            1000000, 7);
  const SimEstimate& e = est.at(MetricKind::L);
  EXPECT_LT(std::abs(e.mean - 0.75), e.half_width);
}

TEST(Simulation, UniformAndTwoPointServices) {
  const double mu = 4.0;
  const QueueParams p{2.0, mu, 0.5 / mu};
  for (ServiceDist d : {ServiceDist::uniform(), ServiceDist::two_point()}) {
    const auto est = simulate(p, d, 400000, 3);
    const SimEstimate& e = est.at(MetricKind::L);
    EXPECT_LT(std::abs(e.mean - l(p)), 4.0 * e.half_width);
  }
}

TEST(Simulation, RejectsDegenerateInput) {
  EXPECT_THROW(simulate({0.0, 2.0, 0.5}, ServiceDist::exponential(), 1000, 1),
               InvalidArgument);
  EXPECT_THROW(simulate({2.0, 2.0, 0.5}, ServiceDist::exponential(), 1000, 1),
               UnstableQueueError);
  EXPECT_THROW(simulate({1.0, 2.0, 0.3}, ServiceDist::exponential(), 1000, 1),
               InvalidArgument);
  EXPECT_THROW(simulate({1.0, 2.0, 0.3}, ServiceDist::deterministic(), 1000, 1),
               InvalidArgument);
  EXPECT_THROW(simulate({1.0, 2.0, 0.0}, ServiceDist::deterministic(), 60, 1),
               InvalidArgument);
}

TEST(Simulation, SameSeedSameEstimate) {
  const QueueParams p{3.0, 4.0, 0.25};
  const auto a = simulate(p, ServiceDist::exponential(), 20000, 5);
  const auto b = simulate(p, ServiceDist::exponential(), 20000, 5);
  for (MetricKind m : kAllMetrics) {
    EXPECT_EQ(a.at(m).mean, b.at(m).mean);
    EXPECT_EQ(a.at(m).half_width, b.at(m).half_width);
  }
}

TEST(Simulation, ServiceSamplerMoments) {
  const QueueParams p{1.0, 2.0, 0.8};
  detail::ServiceSampler s(ServiceDist::two_point(), p);
  std::mt19937_64 rng(9);
  double sum = 0.0, sum2 = 0.0;
  const int n = 400000;
  for (int i = 0; i < n; ++i) {
    const double x = s(rng);
    ASSERT_GE(x, 0.0);
    sum += x;
    sum2 += x * x;
  }
  const double mean = sum / n;
  const double sd = std::sqrt(sum2 / n - mean * mean);
  EXPECT_NEAR(mean, 0.5, 0.01);
  EXPECT_NEAR(sd, 0.8, 0.02);
}

}  // namespace
}  // namespace qconic
