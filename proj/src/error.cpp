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

#include "cohdistill/error.hpp"

namespace cohdistill {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::NonSquare: return "NonSquare";
    case Errc::NotHermitian: return "NotHermitian";
    case Errc::NotPSD: return "NotPSD";
    case Errc::TraceNotOne: return "TraceNotOne";
    case Errc::NotNormalized: return "NotNormalized";
    case Errc::InvalidDistribution: return "InvalidDistribution";
    case Errc::DegenerateState: return "DegenerateState";
    case Errc::InconsistentSubspace: return "InconsistentSubspace";
    case Errc::TargetIncoherent: return "TargetIncoherent";
    case Errc::RankDeficit: return "RankDeficit";
    case Errc::NotStrictlyIncoherent: return "NotStrictlyIncoherent";
    case Errc::IncompletePlan: return "IncompletePlan";
    case Errc::DimensionTooLarge: return "DimensionTooLarge";
    case Errc::Precondition: return "Precondition";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::Parse: return "Parse";
  }
  return "Unknown";
}

}  // namespace cohdistill
