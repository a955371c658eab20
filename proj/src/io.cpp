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

#include "cohdistill/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "cohdistill/error.hpp"
#include "cohdistill/measures.hpp"

namespace cohdistill::io {

namespace {

[[noreturn]] void parse_fail(const std::string& path, const std::string& what) {
  throw Error(Errc::Parse, (path.empty() ? std::string("/") : path) + ": " + what);
}

double parse_real(const json& j, const std::string& path) {
  if (!j.is_number()) parse_fail(path, "expected a number");
  return j.get<double>();
}

Complex parse_complex(const json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) parse_fail(path, "expected [re, im] or a real number");
  return {parse_real(j[0], path + "/0"), parse_real(j[1], path + "/1")};
}

Matrix parse_matrix(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) parse_fail(path, "expected a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const json& first = j[0];
  if (!first.is_array()) parse_fail(path + "/0", "expected a row array");
  const auto cols = static_cast<Eigen::Index>(first.size());
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const std::string rp = path + "/" + std::to_string(r);
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array()) parse_fail(rp, "expected a row array");
    if (static_cast<Eigen::Index>(row.size()) != cols) {
      std::ostringstream msg;
      msg << rp << ": row has " << row.size() << " entries, expected " << cols;
      throw Error(Errc::NonSquare, msg.str());
    }
    for (Eigen::Index c = 0; c < cols; ++c)
      m(r, c) = parse_complex(row[static_cast<std::size_t>(c)], rp + "/" + std::to_string(c));
  }
  return m;
}

std::string alpha_label(double alpha) {
  if (std::isinf(alpha)) return alpha > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os.precision(17);
  os << alpha;
  return os.str();
}

json alpha_json(double alpha) {
  if (std::isinf(alpha)) return alpha_label(alpha);
  return alpha;
}

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

template <class F>
auto at_path(const std::string& path, F&& build) {
  try {
    return build();
  } catch (const Error& e) {
    if (e.code() == Errc::Parse) throw;
    throw Error(e.code(), path + ": " + e.detail());
  }
}

json enhancement_json(const EnhancementCheck& c) {
  return {{"indices", c.indices}, {"p_max", c.p_max}, {"bound", c.bound}, {"margin", c.margin}, {"enhanceable", c.enhanceable}};
}

}  // namespace

std::string StateFile::kind() const {
  if (density) return "density";
  if (pure) return "pure";
  return "weights";
}

StateFile parse_state(const json& doc) {
  if (!doc.is_object()) parse_fail("", "expected a JSON object");
  StateFile out;
  if (doc.contains("matrix")) {
    Matrix m = parse_matrix(doc["matrix"], "/matrix");
    if (doc.contains("dim")) {
      if (!doc["dim"].is_number_integer()) parse_fail("/dim", "expected an integer");
      const auto dim = doc["dim"].get<long long>();
      if (dim != m.rows() || dim != m.cols()) {
        std::ostringstream msg;
        msg << "/dim: declared " << dim << " but matrix is " << m.rows() << "x" << m.cols();
        throw Error(Errc::NonSquare, msg.str());
      }
    }
    out.density = at_path("/matrix", [&] { return validate_density(m); });
  } else if (doc.contains("amplitudes")) {
    const json& a = doc["amplitudes"];
    if (!a.is_array() || a.empty()) parse_fail("/amplitudes", "expected a non-empty array");
    Vector v(static_cast<Eigen::Index>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i) v(static_cast<Eigen::Index>(i)) = parse_complex(a[i], "/amplitudes/" + std::to_string(i));
    out.pure = at_path("/amplitudes", [&] { return PureStateVector(std::move(v)); });
  } else if (doc.contains("weights")) {
    const json& w = doc["weights"];
    if (!w.is_array() || w.empty()) parse_fail("/weights", "expected a non-empty array");
    std::vector<double> x;
    for (std::size_t i = 0; i < w.size(); ++i) x.push_back(parse_real(w[i], "/weights/" + std::to_string(i)));
    out.weights = at_path("/weights", [&] { return ProbabilityVector(std::move(x)); });
  } else {
    parse_fail("", "expected one of \"matrix\", \"amplitudes\" or \"weights\"");
  }
  return out;
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(Errc::Parse, path.string() + ": " + e.what());
  }
}

void write_json(const std::filesystem::path& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << doc.dump(2) << '\n';
  if (!out) throw IoError("write failed for " + path.string());
}

StateFile load_state(const std::filesystem::path& path) { return parse_state(read_json(path)); }

DensityMatrix require_density(const StateFile& file) {
  if (file.density) return *file.density;
  if (file.pure) return DensityMatrix::from_pure(*file.pure);
  throw Error(Errc::Parse, "/: expected a density matrix or pure state, got weights");
}

PureStateVector require_pure(const StateFile& file) {
  if (file.pure) return *file.pure;
  throw Error(Errc::Parse, "/: expected a pure state (\"amplitudes\")");
}

ProbabilityVector require_weights(const StateFile& file) {
  if (file.weights) return *file.weights;
  if (file.pure) return file.pure->squared_moduli();
  throw Error(Errc::Parse, "/: expected \"weights\" or \"amplitudes\"");
}

json to_json(Complex z) { return json::array({z.real(), z.imag()}); }

json to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(const DensityMatrix& rho) { return {{"dim", rho.dim()}, {"matrix", to_json(rho.matrix())}}; }

json to_json(const PureStateVector& psi) {
  json amps = json::array();
  for (Eigen::Index i = 0; i < psi.dim(); ++i) amps.push_back(to_json(psi[i]));
  return {{"amplitudes", std::move(amps)}};
}

json to_json(const ProbabilityVector& p) { return {{"weights", p.weights()}}; }

json to_json(const Protocol& protocol) {
  json branches = json::array();
  for (const auto& b : protocol.branches)
    branches.push_back({{"id", b.id}, {"kraus", to_json(b.kraus)}, {"probability", b.probability}});
  return {{"branches", std::move(branches)}, {"p_max", protocol.p_max}, {"family", protocol.family}};
}

Protocol parse_protocol(const json& doc) {
  if (!doc.is_object()) parse_fail("", "expected a JSON object");
  if (!doc.contains("branches") || !doc["branches"].is_array()) parse_fail("/branches", "expected an array");
  Protocol out;
  out.p_max = doc.contains("p_max") ? parse_real(doc["p_max"], "/p_max") : 0.0;
  const json& branches = doc["branches"];
  for (std::size_t i = 0; i < branches.size(); ++i) {
    const std::string bp = "/branches/" + std::to_string(i);
    const json& b = branches[i];
    if (!b.is_object()) parse_fail(bp, "expected an object");
    ProtocolBranch pb;
    pb.id = b.contains("id") && b["id"].is_string() ? b["id"].get<std::string>() : "b" + std::to_string(i);
    if (!b.contains("kraus")) parse_fail(bp + "/kraus", "missing");
    pb.kraus = parse_matrix(b["kraus"], bp + "/kraus");
    if (!is_strictly_incoherent(pb.kraus))
      throw Error(Errc::NotStrictlyIncoherent, bp + "/kraus: more than one nonzero in a row or column");
    if (!out.branches.empty() &&
        (pb.kraus.rows() != out.branches.front().kraus.rows() || pb.kraus.cols() != out.branches.front().kraus.cols()))
      parse_fail(bp + "/kraus", "shape differs from the first branch");
    pb.probability = b.contains("probability") ? parse_real(b["probability"], bp + "/probability") : 0.0;
    out.branches.push_back(std::move(pb));
  }
  if (doc.contains("family")) {
    const json& fam = doc["family"];
    if (!fam.is_array()) parse_fail("/family", "expected an array of index arrays");
    for (std::size_t i = 0; i < fam.size(); ++i) {
      if (!fam[i].is_array()) parse_fail("/family/" + std::to_string(i), "expected an index array");
      IndexSet idx;
      for (std::size_t k = 0; k < fam[i].size(); ++k) {
        const json& x = fam[i][k];
        if (!x.is_number_unsigned() && !(x.is_number_integer() && x.get<long long>() >= 0))
          parse_fail("/family/" + std::to_string(i) + "/" + std::to_string(k), "expected a nonnegative integer");
        idx.push_back(x.get<std::size_t>());
      }
      out.family.push_back(std::move(idx));
    }
  }
  return out;
}

Protocol load_protocol(const std::filesystem::path& path) { return parse_protocol(read_json(path)); }

json subspaces_report(const DensityMatrix& rho) {
  const RealMatrix a = a_matrix(rho);
  json a_rows = json::array();
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < a.cols(); ++c) row.push_back(a(r, c));
    a_rows.push_back(std::move(row));
  }
  json subs = json::array();
  for (const auto& s : maximal_pure_subspaces(rho)) {
    json st = to_json(s.state)["amplitudes"];
    subs.push_back({{"indices", s.indices}, {"weight", s.weight}, {"coherence_rank", s.coherence_rank()}, {"state", std::move(st)}});
  }
  return {{"dim", rho.dim()}, {"a_matrix", std::move(a_rows)}, {"subspaces", std::move(subs)}, {"distillable", has_rank2_subspace(rho)}};
}

json plan_report(const DistillationPlan& plan) {
  json branches = json::array();
  for (const auto& s : plan.summaries)
    branches.push_back({{"indices", s.indices}, {"weight", s.weight}, {"min_ratio", s.min_ratio}, {"argmin_l", s.argmin_l}, {"achieved", s.achieved}});
  json family = json::array();
  for (const auto& m : plan.family.members) family.push_back(m.indices);
  json cliques = json::array();
  for (const auto& s : plan.all_subspaces) cliques.push_back(s.indices);
  return {{"p_max", plan.p_max},
          {"family", std::move(family)},
          {"cliques", std::move(cliques)},
          {"branches", std::move(branches)},
          {"overlap_detected", plan.family.overlap_detected},
          {"overlap_changes_answer", plan.overlap_changes_answer},
          {"kraus_branches", plan.branches.size()}};
}

json probabilistic_gate_report(const ProbabilisticGate& gate) {
  json cliques = json::array();
  for (const auto& c : gate.cliques) cliques.push_back(enhancement_json(c));
  json family = json::array();
  for (const auto& c : gate.family) family.push_back(enhancement_json(c));
  return {{"enhanceable_family", gate.verdict_family},
          {"enhanceable_cliques", gate.verdict_cliques},
          {"family", std::move(family)},
          {"cliques", std::move(cliques)}};
}

json deterministic_gate_report(const DeterministicGate& gate) {
  json members = json::array();
  for (const auto& m : gate.members) {
    json margins = json::array();
    for (const auto& s : m.margins) margins.push_back({{"alpha", alpha_json(s.alpha)}, {"margin", s.margin}});
    members.push_back({{"indices", m.indices},
                       {"passes", m.passes},
                       {"zero_entry_support", m.zero_entry_support},
                       {"entropy_margin", m.entropy_margin},
                       {"worst_below_one", {{"alpha", alpha_json(m.worst_below_one.alpha)}, {"margin", finite_or_null(m.worst_below_one.margin)}}},
                       {"worst_above_one", {{"alpha", alpha_json(m.worst_above_one.alpha)}, {"margin", finite_or_null(m.worst_above_one.margin)}}},
                       {"margins", std::move(margins)}});
  }
  return {{"catalyzable", gate.verdict},
          {"baseline", gate.baseline},
          {"weight_deficit", gate.weight_deficit},
          {"worst", {{"alpha", alpha_json(gate.worst.alpha)}, {"margin", finite_or_null(gate.worst.margin)}}},
          {"members", std::move(members)}};
}

json search_report(const CatalystSearch& search, SearchMode mode) {
  json out = {{"mode", mode == SearchMode::Probabilistic ? "probabilistic" : "deterministic"},
              {"baseline", search.baseline},
              {"evaluated", search.evaluated},
              {"candidates_per_dim", search.candidates_per_dim},
              {"best", search.best.weights()},
              {"best_achieved", search.best_achieved}};
  if (search.found) {
    out["found"] = search.found->weights();
    out["achieved"] = search.found_achieved;
  } else {
    out["found"] = nullptr;
    out["achieved"] = nullptr;
  }
  return out;
}

json simulation_report(const SimulationResult& result) {
  return {{"shots", result.shots},
          {"successes", result.successes},
          {"empirical_probability", result.empirical_probability},
          {"standard_error", result.standard_error},
          {"seed", result.seed},
          {"rng", result.rng},
          {"per_branch_counts", result.per_branch_counts}};
}

}  // namespace cohdistill::io
