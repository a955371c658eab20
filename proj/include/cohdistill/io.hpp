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

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "cohdistill/catalysis.hpp"
#include "cohdistill/distill.hpp"
#include "cohdistill/oracles.hpp"
#include "cohdistill/states.hpp"
#include "cohdistill/subspaces.hpp"

namespace cohdistill::io {

using nlohmann::json;

// File could not be opened, read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One of the three state-file layouts:
//   {"dim": d, "matrix": [[c, ...], ...]}   density matrix
//   {"amplitudes": [c, ...]}                pure state
//   {"weights": [x, ...]}                   probability vector
// where c is [re, im] or a plain real number.
struct StateFile {
  std::optional<DensityMatrix> density;
  std::optional<PureStateVector> pure;
  std::optional<ProbabilityVector> weights;

  std::string kind() const;
};

/// Throws Error{Parse} naming the JSON path on malformed input; value checks
/// surface as the matching validation code (NotPSD, NotNormalized, ...).
StateFile parse_state(const json& doc);
StateFile load_state(const std::filesystem::path& path);

/// A pure state file is promoted to its projector.
DensityMatrix require_density(const StateFile& file);
PureStateVector require_pure(const StateFile& file);
ProbabilityVector require_weights(const StateFile& file);

json to_json(Complex z);
json to_json(const Matrix& m);
json to_json(const DensityMatrix& rho);
json to_json(const PureStateVector& psi);
json to_json(const ProbabilityVector& p);

/// {"branches": [{"id", "kraus", "probability"}], "p_max", "family"}
json to_json(const Protocol& protocol);
/// Checks layout and strict incoherence of every Kraus matrix.
Protocol parse_protocol(const json& doc);
Protocol load_protocol(const std::filesystem::path& path);

json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const json& doc);

// Machine-readable reports printed by `--json`.
json subspaces_report(const DensityMatrix& rho);
json plan_report(const DistillationPlan& plan);
json probabilistic_gate_report(const ProbabilisticGate& gate);
json deterministic_gate_report(const DeterministicGate& gate);
json search_report(const CatalystSearch& search, SearchMode mode);
json simulation_report(const SimulationResult& result);

}  // namespace cohdistill::io
