// Copyright 2026 The momt Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace momt {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Input deviates from (skew-)Hermitian symmetry beyond the tolerance.
class SymmetryError : public Error {
 public:
  using Error::Error;
};

/// A stack carries the wrong flavor tag for the requested operation.
class FlavorError : public Error {
 public:
  using Error::Error;
};

class DensityError : public Error {
 public:
  enum class Kind { NotUnitTrace, NotPositive };

  DensityError(Kind kind, double offending, const std::string& what)
      : Error(what), kind_(kind), offending_(offending) {}

  Kind kind() const noexcept { return kind_; }
  double offending_value() const noexcept { return offending_; }
  const char* kind_name() const noexcept {
    return kind_ == Kind::NotUnitTrace ? "NotUnitTrace" : "NotPositive";
  }

 private:
  Kind kind_;
  double offending_;
};

/// Weight matrix is not positive semidefinite, or singular where
/// definiteness is required.
class WeightError : public Error {
 public:
  using Error::Error;
};

/// Right-hand side or endpoint difference has a component in ker(grad).
class InfeasibleError : public Error {
 public:
  InfeasibleError(double kernel_norm, const std::string& what)
      : Error(what), kernel_norm_(kernel_norm) {}
  double kernel_norm() const noexcept { return kernel_norm_; }

 private:
  double kernel_norm_;
};

class StabilityError : public Error {
 public:
  using Error::Error;
};

}  // namespace momt
