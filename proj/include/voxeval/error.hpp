// Copyright 2026 The voxeval Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef VOXEVAL_ERROR_HPP_
#define VOXEVAL_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace voxeval {

// Every error raised by the library derives from Error. The CLI maps the
// three families below onto distinct exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad flags, bad config file, inconsistent run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Input data violates a documented invariant (schema, ranges, ids).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Filesystem failures: missing files, unwritable directories, short reads.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace voxeval

#endif  // VOXEVAL_ERROR_HPP_
