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

#include "cohdistill/catalysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "cohdistill/error.hpp"
#include "cohdistill/measures.hpp"
#include "parallel.hpp"

namespace cohdistill {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kRefineSteps = 20;

std::size_t support_size(const std::vector<double>& sorted) {
  return static_cast<std::size_t>(
      std::count_if(sorted.begin(), sorted.end(), [](double x) { return x > kZeroTol; }));
}

// Sorted profiles cut (or padded) to n = max of the two support sizes.
std::pair<std::vector<double>, std::vector<double>> joint_profiles(const ProbabilityVector& initial,
                                                                   const ProbabilityVector& target) {
  auto p = initial.sorted().weights();
  auto q = target.sorted().weights();
  const std::size_t n = std::max(support_size(p), support_size(q));
  p.resize(n, 0.0);
  q.resize(n, 0.0);
  return {std::move(p), std::move(q)};
}

std::vector<double> geomspace(double lo, double hi, std::size_t count) {
  std::vector<double> out;
  if (count == 0) return out;
  if (count == 1) return {std::sqrt(lo * hi)};
  const double step = std::log(hi / lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) out.push_back(lo * std::exp(step * static_cast<double>(i)));
  out.back() = hi;
  return out;
}

class MarginFunction {
 public:
  MarginFunction(const std::vector<double>& p, const std::vector<double>& q)
      : p_(unchecked(p)), q_(unchecked(q)), n_(p.size()) {}

  double operator()(double alpha) const {
    const double ap = power_mean(p_, alpha, n_);
    const double aq = power_mean(q_, alpha, n_);
    return alpha < 1.0 ? ap - aq : aq - ap;
  }

  double entropy_margin() const { return shannon_entropy(p_) - shannon_entropy(q_); }

 private:
  // Renormalize trimmed profiles.
  static ProbabilityVector unchecked(std::vector<double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    if (s > 0.0)
      for (double& x : v) x /= s;
    return ProbabilityVector(std::move(v));
  }

  ProbabilityVector p_, q_;
  std::size_t n_;
};

// Halve the bracket around the smallest finite-alpha margin on one side of 1.
void refine(const MarginFunction& f, std::vector<AlphaMargin>& samples, bool below_one) {
  std::vector<AlphaMargin> side;
  for (const auto& s : samples)
    if (std::isfinite(s.alpha) && (below_one ? s.alpha < 1.0 : s.alpha > 1.0)) side.push_back(s);
  if (side.size() < 2) return;
  std::sort(side.begin(), side.end(), [](const AlphaMargin& a, const AlphaMargin& b) { return a.alpha < b.alpha; });
  std::size_t i = 0;
  for (std::size_t k = 1; k < side.size(); ++k)
    if (side[k].margin < side[i].margin) i = k;
  double lo = side[i > 0 ? i - 1 : i].alpha;
  double hi = side[i + 1 < side.size() ? i + 1 : i].alpha;
  AlphaMargin best = side[i];
  for (int step = 0; step < kRefineSteps; ++step) {
    const double left = 0.5 * (lo + best.alpha);
    const double right = 0.5 * (best.alpha + hi);
    const AlphaMargin l{left, f(left)};
    const AlphaMargin r{right, f(right)};
    samples.push_back(l);
    samples.push_back(r);
    if (l.margin < best.margin && l.margin <= r.margin) {
      hi = best.alpha;
      best = l;
    } else if (r.margin < best.margin) {
      lo = best.alpha;
      best = r;
    } else {
      lo = left;
      hi = right;
    }
  }
}

ProbabilisticGate build_probabilistic(const DistillationPlan& plan, const PureStateVector& phi) {
  const ProbabilityVector target = phi.squared_moduli();
  ProbabilisticGate gate;
  for (const auto& s : plan.all_subspaces) {
    EnhancementCheck c = enhancement_check(s.state.squared_moduli(), target);
    c.indices = s.indices;
    gate.verdict_cliques = gate.verdict_cliques || c.enhanceable;
    gate.cliques.push_back(std::move(c));
  }
  for (const auto& s : plan.family.members) {
    EnhancementCheck c = enhancement_check(s.state.squared_moduli(), target);
    c.indices = s.indices;
    gate.verdict_family = gate.verdict_family || c.enhanceable;
    gate.family.push_back(std::move(c));
  }
  return gate;
}

void partitions(std::size_t remaining, std::size_t parts, std::size_t cap, std::vector<std::size_t>& prefix,
                std::vector<std::vector<std::size_t>>& out) {
  if (parts == 0) {
    if (remaining == 0) out.push_back(prefix);
    return;
  }
  // Largest first.
  const std::size_t hi = std::min(cap, remaining - (parts - 1));
  for (std::size_t first = hi; first >= 1 && first * parts >= remaining; --first) {
    prefix.push_back(first);
    partitions(remaining - first, parts - 1, first, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

EnhancementCheck enhancement_check(const ProbabilityVector& initial, const ProbabilityVector& target) {
  const auto [p, q] = joint_profiles(initial, target);
  EnhancementCheck c;
  c.p_max = min_cl_ratio(initial, target).value;
  if (p.empty()) {
    c.bound = 1.0;
  } else {
    const double pn = p.back();
    const double qn = q.back();
    if (qn <= kZeroTol)
      c.bound = 1.0;
    else if (pn <= kZeroTol)
      c.bound = 0.0;
    else
      c.bound = std::min(pn / qn, 1.0);
  }
  c.margin = c.bound - c.p_max;
  c.enhanceable = c.margin > kGateTol;
  return c;
}

ProbabilisticGate gate_probabilistic(const DensityMatrix& rho, const PureStateVector& phi) {
  return build_probabilistic(pmax_mixed(rho, phi), phi);
}

std::vector<double> default_alpha_grid(std::size_t points) {
  const std::size_t per = std::max<std::size_t>(1, points / 3);
  std::vector<double> grid;
  for (double a : geomspace(0.01, 40.0, per)) grid.push_back(-a);
  for (double a : geomspace(0.01, 0.99, per)) grid.push_back(a);
  for (double a : geomspace(1.01, 40.0, per)) grid.push_back(a);
  grid.push_back(0.0);
  grid.push_back(-kInf);
  grid.push_back(kInf);
  std::sort(grid.begin(), grid.end());
  return grid;
}

CatalysisCheck catalysis_check(const ProbabilityVector& initial, const ProbabilityVector& target,
                               std::span<const double> alpha_grid) {
  const auto [p, q] = joint_profiles(initial, target);
  CatalysisCheck c;
  c.zero_entry_support = std::any_of(p.begin(), p.end(), [](double x) { return x <= kZeroTol; });
  if (p.empty()) return c;

  const MarginFunction f(p, q);
  for (double alpha : alpha_grid) {
    if (alpha == 1.0 || std::isnan(alpha)) continue;
    c.margins.push_back({alpha, f(alpha)});
  }
  refine(f, c.margins, true);
  refine(f, c.margins, false);
  std::sort(c.margins.begin(), c.margins.end(),
            [](const AlphaMargin& a, const AlphaMargin& b) { return a.alpha < b.alpha; });

  c.worst_below_one = {-kInf, kInf};
  c.worst_above_one = {kInf, kInf};
  for (const auto& s : c.margins) {
    AlphaMargin& slot = s.alpha < 1.0 ? c.worst_below_one : c.worst_above_one;
    if (s.margin < slot.margin) slot = s;
  }
  c.entropy_margin = f.entropy_margin();
  c.passes = c.worst_below_one.margin > kGateTol && c.worst_above_one.margin > kGateTol &&
             c.entropy_margin > kGateTol;
  return c;
}

DeterministicGate gate_deterministic(const DensityMatrix& rho, const PureStateVector& phi,
                                     std::span<const double> alpha_grid) {
  const DistillationPlan plan = pmax_mixed(rho, phi);
  if (plan.p_max >= 1.0 - kDeterministicTol) {
    std::ostringstream msg;
    msg.precision(12);
    msg << "P_max is already " << plan.p_max << "; no catalyst needed";
    throw Error(Errc::Precondition, msg.str());
  }
  DeterministicGate gate;
  gate.baseline = plan.p_max;
  gate.weight_deficit = std::abs(plan.family.total_weight - 1.0) > kDeterministicTol;
  gate.worst = {0.0, kInf};
  const ProbabilityVector target = phi.squared_moduli();
  bool all_pass = !plan.family.members.empty();
  for (const auto& member : plan.family.members) {
    CatalysisCheck c = catalysis_check(member.state.squared_moduli(), target, alpha_grid);
    c.indices = member.indices;
    all_pass = all_pass && c.passes;
    for (const AlphaMargin& w : {c.worst_below_one, c.worst_above_one})
      if (w.margin < gate.worst.margin) gate.worst = w;
    gate.members.push_back(std::move(c));
  }
  gate.verdict = all_pass && !gate.weight_deficit;
  return gate;
}

double catalyzed_pmax(std::span<const PureSubspace> subspaces, const PureStateVector& phi,
                      const ProbabilityVector& catalyst) {
  const ProbabilityVector target = tensor(phi.squared_moduli(), catalyst);
  std::vector<double> scores;
  scores.reserve(subspaces.size());
  for (const auto& s : subspaces)
    scores.push_back(min_cl_ratio(tensor(s.state.squared_moduli(), catalyst), target).value);
  return select_disjoint_family(subspaces, scores).value;
}

std::vector<ProbabilityVector> catalyst_grid(std::size_t max_dim, double grid_step) {
  if (max_dim < 2) throw Error(Errc::InvalidArgument, "max_dim must be at least 2");
  if (!(grid_step > 0.0 && grid_step <= 0.5)) throw Error(Errc::InvalidArgument, "grid_step must lie in (0, 0.5]");
  const auto units = static_cast<std::size_t>(std::llround(1.0 / grid_step));
  std::vector<ProbabilityVector> out;
  for (std::size_t k = 2; k <= max_dim; ++k) {
    std::vector<std::vector<std::size_t>> parts;
    std::vector<std::size_t> prefix;
    if (k <= units) partitions(units, k, units, prefix, parts);
    for (const auto& part : parts) {
      std::vector<double> c;
      c.reserve(k);
      for (std::size_t x : part) c.push_back(static_cast<double>(x) / static_cast<double>(units));
      out.emplace_back(std::move(c));
    }
  }
  return out;
}

CatalystSearch search_catalyst(const DensityMatrix& rho, const PureStateVector& phi, std::size_t max_dim,
                               double grid_step, SearchMode mode) {
  const std::vector<ProbabilityVector> grid = catalyst_grid(max_dim, grid_step);
  const DistillationPlan plan = pmax_mixed(rho, phi);

  CatalystSearch out;
  out.baseline = plan.p_max;
  if (mode == SearchMode::Deterministic && out.baseline >= 1.0 - kDeterministicTol) {
    std::ostringstream msg;
    msg.precision(12);
    msg << "P_max is already " << out.baseline << "; deterministic catalysis is moot";
    throw Error(Errc::Precondition, msg.str());
  }

  out.candidates_per_dim.assign(max_dim - 1, 0);
  for (const auto& c : grid) ++out.candidates_per_dim[c.size() - 2];

  std::vector<double> achieved(grid.size(), 0.0);
  detail::parallel_for(grid.size(), [&](std::size_t i) { achieved[i] = catalyzed_pmax(plan.all_subspaces, phi, grid[i]); });
  out.evaluated = grid.size();

  std::ptrdiff_t best = -1;
  std::ptrdiff_t first_deterministic = -1;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (best < 0 || achieved[i] > achieved[static_cast<std::size_t>(best)] + 1e-12) best = static_cast<std::ptrdiff_t>(i);
    if (first_deterministic < 0 && achieved[i] >= 1.0 - kDeterministicTol)
      first_deterministic = static_cast<std::ptrdiff_t>(i);
  }
  if (best >= 0) {
    out.best = grid[static_cast<std::size_t>(best)];
    out.best_achieved = achieved[static_cast<std::size_t>(best)];
  }
  if (mode == SearchMode::Probabilistic) {
    if (best >= 0 && out.best_achieved > out.baseline + kDeterministicTol) {
      out.found = out.best;
      out.found_achieved = out.best_achieved;
    }
  } else if (first_deterministic >= 0) {
    out.found = grid[static_cast<std::size_t>(first_deterministic)];
    out.found_achieved = achieved[static_cast<std::size_t>(first_deterministic)];
  }
  return out;
}

}  // namespace cohdistill
