// Copyright 2026 The riccinets Authors
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

#ifndef RICCINETS_ERROR_HPP
#define RICCINETS_ERROR_HPP

#include <stdexcept>
#include <string>

namespace riccinets {

// Numeric values are mirrored by rn_status in riccinets.h.
enum class ErrorCode : int {
  kParameter = 1,
  kParse = 2,
  kIo = 3,
  kDisconnected = 4,
  kDegenerateNode = 5,
  kTransportInfeasible = 6,
  kDegenerateDistance = 7,
  kDegenerateFlow = 8,
  kEmptyNetwork = 9,
  kNonFinite = 10,
  kStageOrder = 11,
  kConfig = 12,
  kInternal = 13,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace riccinets

#endif  // RICCINETS_ERROR_HPP
