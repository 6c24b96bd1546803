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

#ifndef QCONIC_ERROR_HPP_
#define QCONIC_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace qconic {

// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// lambda >= mu: the stationary metrics do not exist.
class UnstableQueueError : public Error {
 public:
  using Error::Error;
};

class InfeasibleAssignmentError : public Error {
 public:
  using Error::Error;
};

class NoFeasibleAssignmentError : public Error {
 public:
  using Error::Error;
};

class InstanceTooLargeError : public Error {
 public:
  using Error::Error;
};

class MissingAssignmentError : public Error {
 public:
  using Error::Error;
};

class NonIntegralError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace qconic

#endif  // QCONIC_ERROR_HPP_
