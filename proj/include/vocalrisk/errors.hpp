// vocalrisk/errors.hpp

// Copyright 2026  The vocalrisk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace vocalrisk {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input: out-of-range values, malformed manifests, violated preconditions.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// File could not be opened, read or written, or has an unsupported encoding.
class IoError : public Error {
 public:
  using Error::Error;
};

/// The statistics cannot be computed on this data (single group,
/// rank-deficient design, constant variable, ...).
class DegenerateError : public Error {
 public:
  using Error::Error;
};

// Process exit codes used by the command line tool.
enum class ExitCode : int {
  kSuccess = 0,
  kValidation = 1,
  kIo = 2,
  kDegenerate = 3,
};

}  // namespace vocalrisk
