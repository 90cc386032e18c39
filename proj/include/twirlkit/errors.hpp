// Copyright 2026 The twirlkit Authors
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

namespace twirlkit {

enum class ErrorKind {
  NotTracePreserving,
  NotUnitary,
  DimensionMismatch,
  ParamOutOfRange,
  MixedModulus,
  TooLarge,
  CapExceeded,
  FitDiverged,
  InvalidArgument,
  Numerical,
};

const char* error_kind_name(ErrorKind kind);

/**
 * Single exception type for the library. The kind distinguishes bad input
 * (validation) from numerical breakdown so front ends can map exit codes.
 */
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const { return kind_; }
  bool is_validation() const;

 private:
  ErrorKind kind_;
};

}  // namespace twirlkit
