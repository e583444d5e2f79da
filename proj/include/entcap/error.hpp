// Copyright 2026 The entcap Authors
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

namespace entcap {

/// Base class for every domain error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define ENTCAP_DEFINE_ERROR(Name)            \
  class Name : public Error {                \
   public:                                   \
    explicit Name(const std::string &what)   \
        : Error(#Name ": " + what) {}        \
  }

ENTCAP_DEFINE_ERROR(IndexOutOfRange);
ENTCAP_DEFINE_ERROR(WrongPartition);
ENTCAP_DEFINE_ERROR(DimensionMismatch);
ENTCAP_DEFINE_ERROR(NotUnitary);
ENTCAP_DEFINE_ERROR(NotNormalized);
ENTCAP_DEFINE_ERROR(NotCanonical);
ENTCAP_DEFINE_ERROR(OutOfRange);
ENTCAP_DEFINE_ERROR(ZeroVector);
ENTCAP_DEFINE_ERROR(BranchResolutionFailure);
ENTCAP_DEFINE_ERROR(ConvergenceFailure);
ENTCAP_DEFINE_ERROR(ZeroCapacityDenominator);
ENTCAP_DEFINE_ERROR(ParseError);
ENTCAP_DEFINE_ERROR(IoError);

/// A measure asked of a state whose dimension it is not defined for. Also a
/// DimensionMismatch, so either handler catches it.
class UnsupportedMeasureForDimension : public DimensionMismatch {
 public:
  explicit UnsupportedMeasureForDimension(const std::string &what)
      : DimensionMismatch("unsupported measure: " + what) {}
};

#undef ENTCAP_DEFINE_ERROR

}  // namespace entcap
