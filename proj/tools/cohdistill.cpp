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

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cohdistill/catalysis.hpp"
#include "cohdistill/distill.hpp"
#include "cohdistill/error.hpp"
#include "cohdistill/io.hpp"
#include "cohdistill/measures.hpp"
#include "cohdistill/oracles.hpp"
#include "cohdistill/subspaces.hpp"

namespace {

using namespace cohdistill;
using io::json;

enum Exit : int { kOk = 0, kIo = 1, kValidation = 2, kDegenerate = 3, kPrecondition = 4 };

std::string num(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  std::string s = buf;
  if (s.find_first_of(".en") == std::string::npos) s += ".0";
  return s;
}

std::string indices(const IndexSet& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out + "}";
}

std::string complex_str(Complex z) {
  if (z.imag() == 0.0) return num(z.real());
  return num(z.real()) + (z.imag() < 0 ? "-" : "+") + num(std::abs(z.imag())) + "i";
}

std::string weights_str(const std::vector<double>& w) {
  std::string out = "(";
  for (std::size_t i = 0; i < w.size(); ++i) out += (i ? ", " : "") + num(w[i]);
  return out + ")";
}

void emit(const json& doc) { std::cout << doc.dump(2) << '\n'; }

PureStateVector load_target(const std::string& path) {
  const auto file = io::load_state(path);
  if (file.pure) return *file.pure;
  if (file.weights) {
    Vector v(static_cast<Eigen::Index>(file.weights->size()));
    for (std::size_t i = 0; i < file.weights->size(); ++i) v(static_cast<Eigen::Index>(i)) = std::sqrt((*file.weights)[i]);
    return PureStateVector::normalized(std::move(v));
  }
  throw Error(Errc::Parse, "/: target must be a pure state (\"amplitudes\") or a profile (\"weights\")");
}

int cmd_validate(const std::string& path, bool as_json) {
  const auto file = io::load_state(path);
  std::size_t dim = 0;
  if (file.density) dim = static_cast<std::size_t>(file.density->dim());
  if (file.pure) dim = static_cast<std::size_t>(file.pure->dim());
  if (file.weights) dim = file.weights->size();
  if (as_json) {
    emit({{"valid", true}, {"kind", file.kind()}, {"dim", dim}});
  } else {
    std::cout << "valid: " << file.kind() << ", dim " << dim << '\n';
  }
  return kOk;
}

int cmd_subspaces(const std::string& path, bool as_json) {
  const auto rho = io::require_density(io::load_state(path));
  if (as_json) {
    emit(io::subspaces_report(rho));
    return kOk;
  }
  const RealMatrix a = a_matrix(rho);
  std::cout << "A-matrix:\n";
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    std::cout << " ";
    for (Eigen::Index c = 0; c < a.cols(); ++c) std::cout << ' ' << num(a(r, c));
    std::cout << '\n';
  }
  std::cout << "maximal pure subspaces:\n";
  for (const auto& s : maximal_pure_subspaces(rho)) {
    std::cout << "  " << indices(s.indices) << "  weight " << num(s.weight) << "  coherence rank "
              << s.coherence_rank() << "  state [";
    for (std::size_t k = 0; k < s.indices.size(); ++k)
      std::cout << (k ? ", " : "") << complex_str(s.state[static_cast<Eigen::Index>(s.indices[k])]);
    std::cout << "]\n";
  }
  std::cout << "distillable: " << (has_rank2_subspace(rho) ? "true" : "false") << '\n';
  return kOk;
}

int cmd_pmax(const std::string& state, const std::string& target, bool as_json, const std::string& protocol_out) {
  const auto rho = io::require_density(io::load_state(state));
  const auto phi = load_target(target);
  const auto plan = full_plan(rho, phi);
  if (!protocol_out.empty()) io::write_json(protocol_out, io::to_json(to_protocol(plan)));
  if (as_json) {
    emit(io::plan_report(plan));
    return kOk;
  }
  std::cout << "p_max: " << num(plan.p_max) << '\n';
  std::cout << "subspace  weight  min_ratio  argmin_l  achieved\n";
  for (const auto& s : plan.summaries)
    std::cout << indices(s.indices) << "  " << num(s.weight) << "  " << num(s.min_ratio) << "  " << s.argmin_l << "  "
              << num(s.achieved) << '\n';
  std::cout << "family:";
  for (const auto& m : plan.family.members) std::cout << ' ' << indices(m.indices);
  std::cout << '\n';
  if (plan.family.overlap_detected)
    std::cout << "overlapping subspaces detected; changes the answer: " << (plan.overlap_changes_answer ? "yes" : "no")
              << '\n';
  if (!protocol_out.empty()) std::cout << "protocol written to " << protocol_out << '\n';
  return kOk;
}

int cmd_protocol(const std::string& state, const std::string& target, const std::string& out) {
  const auto rho = io::require_density(io::load_state(state));
  const auto doc = io::to_json(to_protocol(full_plan(rho, load_target(target))));
  if (out.empty())
    emit(doc);
  else
    io::write_json(out, doc);
  return kOk;
}

int cmd_simulate(const std::string& protocol_path, const std::string& state, std::uint64_t shots, std::uint64_t seed,
                 bool as_json) {
  const auto protocol = io::load_protocol(protocol_path);
  const auto rho = io::require_density(io::load_state(state));
  const auto r = simulate(protocol, rho, shots, seed);
  if (as_json) {
    emit(io::simulation_report(r));
    return kOk;
  }
  std::cout << "shots: " << r.shots << "\nsuccesses: " << r.successes
            << "\nempirical_probability: " << num(r.empirical_probability)
            << "\nstandard_error: " << num(r.standard_error) << "\nseed: " << r.seed << "\nrng: " << r.rng << '\n';
  for (const auto& [id, n] : r.per_branch_counts) std::cout << "  " << id << ": " << n << '\n';
  return kOk;
}

int cmd_verify(const std::string& protocol_path, const std::string& state, const std::string& target, bool as_json) {
  const auto protocol = io::load_protocol(protocol_path);
  const auto rho = io::require_density(io::load_state(state));
  const auto v = verify_branch_outputs(protocol, rho, load_target(target));
  if (as_json) {
    emit({{"ok", v.ok}, {"offending_branch", v.offending_branch}, {"worst_fidelity", v.worst_fidelity}});
  } else {
    std::cout << "verified: " << (v.ok ? "true" : "false") << "\nworst fidelity: " << num(v.worst_fidelity) << '\n';
    if (!v.ok) std::cout << "offending branch: " << v.offending_branch << '\n';
  }
  return v.ok ? kOk : kValidation;
}

std::string margin_str(const AlphaMargin& m) { return num(m.margin) + " at alpha " + num(m.alpha); }

int cmd_gate(const std::string& state, const std::string& target, std::size_t alpha_points, bool as_json) {
  const auto rho = io::require_density(io::load_state(state));
  const auto phi = load_target(target);
  const auto prob = gate_probabilistic(rho, phi);
  const auto grid = default_alpha_grid(alpha_points);
  std::optional<DeterministicGate> det;
  std::string det_note;
  try {
    det = gate_deterministic(rho, phi, grid);
  } catch (const Error& e) {
    if (e.code() != Errc::Precondition) throw;
    det_note = e.detail();
  }
  if (as_json) {
    json doc = {{"probabilistic", io::probabilistic_gate_report(prob)}};
    if (det)
      doc["deterministic"] = io::deterministic_gate_report(*det);
    else
      doc["deterministic"] = {{"applicable", false}, {"reason", det_note}};
    emit(doc);
    return kOk;
  }
  std::cout << "probabilistic gate: " << (prob.verdict_family ? "enhanceable" : "not enhanceable")
            << " (family), " << (prob.verdict_cliques ? "enhanceable" : "not enhanceable") << " (all cliques)\n";
  for (const auto& c : prob.cliques)
    std::cout << "  " << indices(c.indices) << "  p_max " << num(c.p_max) << "  bound " << num(c.bound) << "  margin "
              << num(c.margin) << '\n';
  if (!det) {
    std::cout << "deterministic gate: not applicable (" << det_note << ")\n";
    return kOk;
  }
  std::cout << "deterministic gate: " << (det->verdict ? "catalyzable" : "not catalyzable");
  if (det->weight_deficit) std::cout << " (selected family does not carry all weight)";
  std::cout << "\n  worst margin " << margin_str(det->worst) << '\n';
  for (const auto& m : det->members)
    std::cout << "  " << indices(m.indices) << "  alpha<1 " << margin_str(m.worst_below_one) << "  alpha>1 "
              << margin_str(m.worst_above_one) << "  entropy " << num(m.entropy_margin) << "  "
              << (m.passes ? "pass" : "fail") << '\n';
  return kOk;
}

int cmd_search(const std::string& state, const std::string& target, std::size_t max_dim, double step,
               const std::string& mode_name, bool as_json) {
  const auto rho = io::require_density(io::load_state(state));
  const auto phi = load_target(target);
  const SearchMode mode = mode_name == "deterministic" ? SearchMode::Deterministic : SearchMode::Probabilistic;
  const auto s = search_catalyst(rho, phi, max_dim, step, mode);
  if (as_json) {
    emit(io::search_report(s, mode));
    return kOk;
  }
  std::cout << "baseline: " << num(s.baseline) << '\n';
  if (s.found)
    std::cout << "catalyst: " << weights_str(s.found->weights()) << "\nachieved: " << num(s.found_achieved) << '\n';
  else
    std::cout << "no improvement found\nbest candidate: " << weights_str(s.best.weights()) << " achieves "
              << num(s.best_achieved) << '\n';
  std::cout << "evaluated: " << s.evaluated << " candidates (";
  for (std::size_t k = 0; k < s.candidates_per_dim.size(); ++k)
    std::cout << (k ? ", " : "") << "k=" << k + 2 << ": " << s.candidates_per_dim[k];
  std::cout << ")\n";
  return kOk;
}

int cmd_majorize(const std::string& p_path, const std::string& q_path, bool as_json) {
  const auto p = io::require_weights(io::load_state(p_path));
  const auto q = io::require_weights(io::load_state(q_path));
  const bool result = majorized_by(p, q);
  const std::size_t n = std::max(p.size(), q.size());
  const auto ps = p.padded(n).sorted().weights();
  const auto qs = q.padded(n).sorted().weights();
  std::vector<double> sp, sq;
  double a = 0.0, b = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sp.push_back(a += ps[i]);
    sq.push_back(b += qs[i]);
  }
  if (as_json) {
    emit({{"majorized", result}, {"partial_sums_p", sp}, {"partial_sums_q", sq}});
  } else {
    std::cout << "p majorized by q: " << (result ? "true" : "false") << "\npartial sums p: " << weights_str(sp)
              << "\npartial sums q: " << weights_str(sq) << '\n';
  }
  return kOk;
}

int exit_code(Errc code) {
  switch (code) {
    case Errc::TargetIncoherent: return kDegenerate;
    case Errc::Precondition: return kPrecondition;
    default: return kValidation;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coherence distillation and catalysis toolkit"};
  app.require_subcommand(1);
  bool as_json = false;
  std::string state, target, protocol_path, out;
  std::uint64_t shots = 100000, seed = 1;
  std::size_t alpha_points = 60, max_dim = 2;
  double step = 0.05;
  std::string mode = "probabilistic";

  auto* validate = app.add_subcommand("validate", "Validate a state file");
  validate->add_option("state", state, "State file")->required();
  validate->add_flag("--json", as_json, "Machine-readable output");

  auto* subspaces = app.add_subcommand("subspaces", "List maximal pure coherent-state subspaces");
  subspaces->add_option("state", state, "Density matrix or pure state file")->required();
  subspaces->add_flag("--json", as_json, "Machine-readable output");

  auto* pmax = app.add_subcommand("pmax", "Maximal success probability of distilling the target");
  pmax->add_option("state", state, "Initial state file")->required();
  pmax->add_option("target", target, "Target pure state file")->required();
  pmax->add_flag("--json", as_json, "Machine-readable output");
  pmax->add_option("--protocol", protocol_path, "Write the optimal protocol to this file");

  auto* protocol = app.add_subcommand("protocol", "Synthesize the optimal Kraus protocol");
  protocol->add_option("state", state, "Initial state file")->required();
  protocol->add_option("target", target, "Target pure state file")->required();
  protocol->add_option("-o,--output", out, "Output file (default: stdout)");

  auto* sim = app.add_subcommand("simulate", "Monte Carlo simulation of a protocol");
  sim->add_option("protocol", protocol_path, "Protocol file")->required();
  sim->add_option("state", state, "Initial state file")->required();
  sim->add_option("--shots", shots, "Number of shots")->capture_default_str()->check(CLI::PositiveNumber);
  sim->add_option("--seed", seed, "RNG seed")->capture_default_str();
  sim->add_flag("--json", as_json, "Machine-readable output");

  auto* verify = app.add_subcommand("verify", "Check that every protocol branch outputs the target");
  verify->add_option("protocol", protocol_path, "Protocol file")->required();
  verify->add_option("state", state, "Initial state file")->required();
  verify->add_option("target", target, "Target pure state file")->required();
  verify->add_flag("--json", as_json, "Machine-readable output");

  auto* catalyst = app.add_subcommand("catalyst", "Catalysis gates and catalyst search");
  catalyst->require_subcommand(1);
  auto* gate = catalyst->add_subcommand("gate", "Evaluate the probabilistic and deterministic gates");
  gate->add_option("state", state, "Initial state file")->required();
  gate->add_option("target", target, "Target pure state file")->required();
  gate->add_option("--alpha-points", alpha_points, "Finite alpha samples (split over three intervals)")
      ->capture_default_str()
      ->check(CLI::Range(3, 100000));
  gate->add_flag("--json", as_json, "Machine-readable output");
  auto* search = catalyst->add_subcommand("search", "Grid search for a catalyst");
  search->add_option("state", state, "Initial state file")->required();
  search->add_option("target", target, "Target pure state file")->required();
  search->add_option("--max-dim", max_dim, "Largest catalyst dimension")->capture_default_str()->check(CLI::Range(2, 16));
  search->add_option("--step", step, "Simplex grid step")->capture_default_str();
  search->add_option("--mode", mode, "probabilistic or deterministic")
      ->capture_default_str()
      ->check(CLI::IsMember({"probabilistic", "deterministic"}));
  search->add_flag("--json", as_json, "Machine-readable output");

  auto* majorize = app.add_subcommand("majorize", "Test whether p is majorized by q");
  majorize->add_option("p", state, "Distribution or pure state file")->required();
  majorize->add_option("q", target, "Distribution or pure state file")->required();
  majorize->add_flag("--json", as_json, "Machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (validate->parsed()) return cmd_validate(state, as_json);
    if (subspaces->parsed()) return cmd_subspaces(state, as_json);
    if (pmax->parsed()) return cmd_pmax(state, target, as_json, protocol_path);
    if (protocol->parsed()) return cmd_protocol(state, target, out);
    if (sim->parsed()) return cmd_simulate(protocol_path, state, shots, seed, as_json);
    if (verify->parsed()) return cmd_verify(protocol_path, state, target, as_json);
    if (gate->parsed()) return cmd_gate(state, target, alpha_points, as_json);
    if (search->parsed()) return cmd_search(state, target, max_dim, step, mode, as_json);
    if (majorize->parsed()) return cmd_majorize(state, target, as_json);
  } catch (const io::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.code());
  }
  return kValidation;
}
