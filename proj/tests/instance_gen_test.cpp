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

#include <gtest/gtest.h>

#include "qconic/instance_gen.hpp"
#include "qconic/instance_io.hpp"

namespace qconic {
namespace {

TEST(Ladder, FirstLevelKeepsBaseCost) {
  EXPECT_DOUBLE_EQ(ladder_cost(100.0, 20.0, 5, 1, 20.0), 100.0);
}

TEST(Ladder, TopLevelIsDiscounted) {
  EXPECT_NEAR(ladder_cost(100.0, 20.0, 5, 5, 100.0), 100.0 * std::sqrt(5.0),
              1e-12);
  EXPECT_DOUBLE_EQ(ladder_cost(100.0, 20.0, 1, 1, 20.0), 100.0);
}

TEST(SplitMix, ReferenceSequence) {
  // Published SplitMix64 outputs for seed 0.
  SplitMix64 r(0);
  EXPECT_EQ(r.next(), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(r.next(), 0x6e789e6aa1b965f4ULL);
  EXPECT_EQ(r.next(), 0x06c45d188009454fULL);
  SplitMix64 u(3);
  for (int i = 0; i < 1000; ++i) {
    const double x = u.uniform(2.0, 5.0);
    ASSERT_GE(x, 2.0);
    ASSERT_LT(x, 5.0);
  }
}

TEST(Generate, SameSeedSameBytes) {
  GenSpec s = preset("desk-small");
  s.seed = 42;
  EXPECT_EQ(dump_instance(generate(s)), dump_instance(generate(s)));
  GenSpec t = s;
  t.seed = 43;
  EXPECT_NE(dump_instance(generate(s)), dump_instance(generate(t)));
}

TEST(Generate, RespectsRangesAndLadder) {
  GenSpec s;
  s.n_facilities = 6;
  s.n_levels = 4;
  s.n_customers = 30;
  s.seed = 9;
  const LocationInstance in = generate(s);
  for (int i = 0; i < in.facilities; ++i) {
    const double b = in.mu[i][0];
    EXPECT_GE(b, s.base_capacity.lo);
    EXPECT_LE(b, s.base_capacity.hi);
    const double f1 = in.f[i][0];
    for (int k = 0; k < in.levels; ++k) {
      EXPECT_NEAR(in.mu[i][k], b * (k + 1), 1e-12);
      const double cv = in.mu[i][k] * in.sigma[i][k];
      EXPECT_GE(cv, s.cv.lo - 1e-12);
      EXPECT_LE(cv, s.cv.hi + 1e-12);
      EXPECT_NEAR(in.f[i][k], ladder_cost(f1, b, 4, k + 1, in.mu[i][k]),
                  1e-9 * in.f[i][k]);
      if (k > 0) {
        // Cost per unit of capacity falls with the level.
        EXPECT_LT(in.f[i][k] / in.mu[i][k], in.f[i][k - 1] / in.mu[i][k - 1]);
      }
    }
    EXPECT_GE(in.w[i], s.waiting_cost.lo);
    EXPECT_LE(in.w[i], s.waiting_cost.hi);
  }
  for (double l : in.lambda) {
    EXPECT_GE(l, s.demand.lo);
    EXPECT_LE(l, s.demand.hi);
  }
  EXPECT_EQ(in.metadata.at("seed"), "9");
  EXPECT_EQ(in.metadata.at("demand_rescale"), "1");
}

TEST(Generate, EuclideanTravel) {
  GenSpec s = preset("holmberg-large");
  s.n_facilities = 4;
  s.n_customers = 10;
  s.n_levels = 2;
  const LocationInstance in = generate(s);
  const double diag = s.cost_per_distance * s.grid * std::sqrt(2.0);
  for (const auto& row : in.d) {
    for (double d : row) {
      EXPECT_GE(d, 0.0);
      EXPECT_LE(d, diag);
    }
  }
  EXPECT_EQ(in.metadata.at("travel_scheme"), "euclidean");
}

TEST(Generate, DemandRescaledBelowCapacity) {
  GenSpec s;
  s.n_facilities = 1;
  s.n_levels = 1;
  s.n_customers = 50;
  const LocationInstance in = generate(s);
  double total = 0.0;
  for (double l : in.lambda) total += l;
  EXPECT_NEAR(total, 0.9 * in.mu[0][0], 1e-9);
  EXPECT_NE(in.metadata.at("demand_rescale"), "1");
}

TEST(Generate, CustomMultipliers) {
  GenSpec s;
  s.level_multipliers = {1.0, 1.5};
  const LocationInstance in = generate(s);
  EXPECT_NEAR(in.mu[0][1], 1.5 * in.mu[0][0], 1e-12);
  EXPECT_EQ(in.metadata.at("level_scheme"), "multipliers:1,1.5");
  s.level_multipliers = {2.0, 1.0};
  EXPECT_THROW(generate(s), InvalidArgument);
}

TEST(Generate, RejectsBadSpecs) {
  GenSpec s;
  s.n_facilities = 0;
  EXPECT_THROW(generate(s), InvalidArgument);
  s = GenSpec{};
  s.demand = {5.0, 1.0};
  EXPECT_THROW(generate(s), InvalidArgument);
  s = GenSpec{};
  s.base_capacity = {0.0, 1.0};
  EXPECT_THROW(generate(s), InvalidArgument);
}

TEST(Preset, Dimensions) {
  const GenSpec vj = preset("vj-large");
  EXPECT_EQ(vj.n_facilities, 25);
  EXPECT_EQ(vj.n_customers, 400);
  EXPECT_EQ(vj.n_levels, 5);
  const GenSpec hb = preset("holmberg-large");
  EXPECT_EQ(hb.n_facilities, 30);
  EXPECT_EQ(hb.n_customers, 200);
  EXPECT_EQ(hb.n_levels, 10);
  const GenSpec ds = preset("desk-small");
  EXPECT_EQ(ds.n_facilities, 3);
  EXPECT_EQ(ds.n_customers, 5);
  EXPECT_EQ(ds.n_levels, 2);
  EXPECT_THROW(preset("nope"), InvalidArgument);
  EXPECT_EQ(instance_filename(ds), "desk-small-s1.json");
}

}  // namespace
}  // namespace qconic
