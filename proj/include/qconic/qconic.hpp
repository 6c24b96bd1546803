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

#ifndef QCONIC_QCONIC_HPP_
#define QCONIC_QCONIC_HPP_

#include "qconic/bench.hpp"
#include "qconic/conic.hpp"
#include "qconic/error.hpp"
#include "qconic/instance_gen.hpp"
#include "qconic/instance_io.hpp"
#include "qconic/lin_expr.hpp"
#include "qconic/location.hpp"
#include "qconic/lp.hpp"
#include "qconic/metric_constraint.hpp"
#include "qconic/model.hpp"
#include "qconic/model_io.hpp"
#include "qconic/queueing.hpp"
#include "qconic/reformulations.hpp"
#include "qconic/simulation.hpp"
#include "qconic/solver.hpp"

#endif  // QCONIC_QCONIC_HPP_
