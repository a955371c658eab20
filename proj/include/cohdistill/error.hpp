// Copyright 2026 The cohdistill Authors
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
#include <string_view>

namespace cohdistill {

enum class Errc {
  NonSquare,
  NotHermitian,
  NotPSD,
  TraceNotOne,
  NotNormalized,
  InvalidDistribution,
  DegenerateState,
  InconsistentSubspace,
  TargetIncoherent,
  RankDeficit,
  NotStrictlyIncoherent,
  IncompletePlan,
  DimensionTooLarge,
  Precondition,
  InvalidArgument,
  Parse,
};

std::string_view to_string(Errc code) noexcept;

// Every library failure is reported through this type; `code()` names the
// violated contract and `what()` carries the details (e.g. the offending
// eigenvalue or JSON path).
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), detail_(message) {}

  Errc code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  Errc code_;
  std::string detail_;
};

}  // namespace cohdistill
