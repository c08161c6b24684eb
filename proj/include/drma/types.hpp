// Copyright 2026 The drma Authors
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

#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <type_traits>

#include <Eigen/Core>

namespace drma {

// Utilization points. A server of capacity 100 maps points 1:1 onto percent.
using Points = std::int64_t;

// Per-dimension quantities. Dimension 0 is CPU, dimension 1 is memory; any
// further dimensions are opaque to the algorithms except through `fits`.
template <typename Scalar>
using Resources = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using ResourceVector = Resources<Points>;

using TaskId = std::string;
using ServerId = std::string;

inline constexpr Points kDefaultCapacity = 100;

template <typename Scalar = Points>
Resources<Scalar> make_resources(
    std::initializer_list<std::type_identity_t<Scalar>> values) {
  Resources<Scalar> out(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (Scalar v : values) out[i++] = v;
  return out;
}

template <typename Scalar = Points>
Resources<Scalar> uniform_resources(int dims, std::type_identity_t<Scalar> value) {
  return Resources<Scalar>::Constant(dims, value);
}

// a <= b in every dimension. Sizes must agree.
template <typename DerivedA, typename DerivedB>
bool all_leq(const Eigen::MatrixBase<DerivedA>& a,
             const Eigen::MatrixBase<DerivedB>& b) {
  return (a.array() <= b.array()).all();
}

template <typename Derived>
bool all_non_negative(const Eigen::MatrixBase<Derived>& v) {
  return (v.array() >= typename Derived::Scalar(0)).all();
}

// Vectors of different length compare unequal instead of asserting.
template <typename DerivedA, typename DerivedB>
bool same_resources(const Eigen::MatrixBase<DerivedA>& a,
                    const Eigen::MatrixBase<DerivedB>& b) {
  return a.size() == b.size() && (a.array() == b.array()).all();
}

// Base for every error the library raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CapacityViolation : public Error {
 public:
  using Error::Error;
};

class InvalidMove : public Error {
 public:
  using Error::Error;
};

class IntermediateCapacityViolation : public Error {
 public:
  using Error::Error;
};

class StateMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace drma
