// Copyright 2026 The RawHDR Authors. All Rights Reserved.
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

#ifndef RAWHDR_ERRORS_HPP_
#define RAWHDR_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace rawhdr {

// Base class for all toolkit errors. The CLI maps these to a single
// "error: <message>" line on stderr and a nonzero exit code.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Image/tensor geometry violations (odd mosaic sides, plane mismatches, ...).
class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& msg) : Error(msg) {}
};

// Invalid numeric configuration (non-positive gains, negative variances, ...).
class ParameterError : public Error {
 public:
  explicit ParameterError(const std::string& msg) : Error(msg) {}
};

// Content-level contract violations (non-binary mask, bad graph wiring, ...).
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& msg) : Error(msg) {}
};

// File format / filesystem failures.
class IoError : public Error {
 public:
  explicit IoError(const std::string& msg) : Error(msg) {}
};

}  // namespace rawhdr

#endif  // RAWHDR_ERRORS_HPP_
