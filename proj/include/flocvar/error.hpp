// Copyright 2026 The flocvar Authors.
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

#ifndef FLOCVAR_ERROR_HPP_
#define FLOCVAR_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace flocvar {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input: wrong shapes, out-of-range parameters, malformed files.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Input that is well-formed but cannot be estimated from, e.g. a constant
// column that makes the lag-0 moment matrix singular.
class DegenerateInputError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// A computation that failed numerically (singular system, non-convergence).
class NumericalError : public Error {
 public:
  using Error::Error;
};

class SingularSystemError : public NumericalError {
 public:
  SingularSystemError(const std::string& what, double condition)
      : NumericalError(what), condition_(condition) {}
  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

}  // namespace flocvar

#endif  // FLOCVAR_ERROR_HPP_
