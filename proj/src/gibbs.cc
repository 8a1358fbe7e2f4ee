// Copyright 2026 The histfilter Authors
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

#include "histfilter/gibbs.h"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "histfilter/construction.h"
#include "histfilter/errors.h"

namespace histfilter {

namespace {

double LogOf(const BigInt& n) { return std::log(n.convert_to<double>()); }

}  // namespace

void ChainConfig::Validate() const {
  if (thinning_interval < 1) throw std::invalid_argument("thinning interval must be >= 1");
  if (num_samples < 1) throw std::invalid_argument("number of samples must be >= 1");
  if (discard_prefix < 0) throw std::invalid_argument("discard prefix must be >= 0");
}

double AcceptanceProbability(double log_reach_from, const BigInt& omega_from, double log_reach_to,
                             const BigInt& omega_to) {
  const double log_ratio = log_reach_to - log_reach_from + LogOf(omega_from) - LogOf(omega_to);
  return log_ratio >= 0.0 ? 1.0 : std::exp(log_ratio);
}

GibbsSampler::GibbsSampler(PublicState state, Policy policy)
    : state_(std::move(state)),
      policy_(std::move(policy)),
      constraints_(ExtractConstraints(state_)),
      steps_(state_.Steps()) {}

double GibbsSampler::LogReach(const Deal& deal) const {
  return UnnormalizedLogReach(state_.config, deal, steps_, policy_);
}

const NeighborSet& GibbsSampler::Neighborhood(const SuitLengthMatrix& assignment) {
  auto it = cache_.find(assignment);
  if (it == cache_.end()) {
    it = cache_.emplace(assignment, NeighborSetOf(assignment, constraints_)).first;
  }
  return it->second;
}

ChainState GibbsSampler::StateAt(const History& history) {
  if (!VerifyConsistency(state_, history, policy_)) {
    throw ContractViolation("history is not consistent with the public state");
  }
  ChainState chain;
  chain.history = history;
  chain.assignment = MatrixOf(history.deal, constraints_);
  chain.log_reach = LogReach(history.deal);
  chain.omega_size = Neighborhood(chain.assignment).total_deal_count;
  return chain;
}

ChainState GibbsSampler::Init(InitMode mode, Rng& rng, const PublicBeliefState* oracle) {
  if (mode == InitMode::kConstruct) {
    std::optional<History> h = ConstructHistory(state_, policy_, rng);
    if (!h) throw EmptyBeliefError("public state admits no history");
    return StateAt(*h);
  }
  PublicBeliefState enumerated;
  if (oracle == nullptr) {
    enumerated = Enumerate(state_, policy_);
    oracle = &enumerated;
  }
  if (oracle->empty()) throw EmptyBeliefError("public state admits no history");
  const int pick = UniformInt(rng, 0, static_cast<int>(oracle->size()) - 1);
  return StateAt(oracle->members[pick].history);
}

void GibbsSampler::Step(ChainState& state, Rng& rng) {
  ++state.step_count;
  const NeighborSet& omega = Neighborhood(state.assignment);
  if (omega.total_deal_count == 0) return;
  int chosen = -1;
  Deal proposal = SampleNeighborDeal(state.history.deal, omega, constraints_, rng, &chosen);
  const SuitLengthMatrix& next_assignment =
      chosen < 0 ? state.assignment : omega.assignments[chosen];
  const BigInt& next_omega = Neighborhood(next_assignment).total_deal_count;

  double next_log_reach;
  try {
    next_log_reach = LogReach(proposal);
  } catch (const ContractViolation& e) {
    throw InvariantError(std::string("proposed history is illegal: ") + e.what());
  }
  if (!std::isfinite(next_log_reach)) {
    throw InvariantError("proposed history has zero reach; the policy lacks full support");
  }
  const double z =
      AcceptanceProbability(state.log_reach, state.omega_size, next_log_reach, next_omega);
  if (z >= 1.0 || UniformReal(rng) < z) {
    state.omega_size = next_omega;
    if (chosen >= 0) state.assignment = next_assignment;
    state.history.deal = std::move(proposal);
    state.log_reach = next_log_reach;
    ++state.accepted;
  }
}

ChainState GibbsSampler::Run(const ChainConfig& cfg,
                             const std::function<void(const ChainState&)>& visit,
                             const PublicBeliefState* oracle) {
  cfg.Validate();
  Rng rng = MakeRng(cfg.rng_seed, cfg.chain_id);
  ChainState chain = Init(cfg.init_mode, rng, oracle);
  for (int t = 0; t < cfg.discard_prefix; ++t) Step(chain, rng);
  for (int s = 0; s < cfg.num_samples; ++s) {
    for (int t = 0; t < cfg.thinning_interval; ++t) Step(chain, rng);
    visit(chain);
  }
  return chain;
}

std::vector<History> GibbsSampler::Run(const ChainConfig& cfg, const PublicBeliefState* oracle) {
  std::vector<History> samples;
  samples.reserve(cfg.num_samples);
  Run(cfg, [&](const ChainState& chain) { samples.push_back(chain.history); }, oracle);
  return samples;
}

double GibbsSampler::LogTransitionProbability(const History& from, const History& to) {
  const double minus_inf = -std::numeric_limits<double>::infinity();
  if (from.deal == to.deal) return minus_inf;
  const SuitLengthMatrix a = MatrixOf(from.deal, constraints_);
  const SuitLengthMatrix b = MatrixOf(to.deal, constraints_);
  const NeighborSet omega_from = Neighborhood(a);
  bool neighbor = (a == b);
  for (const SuitLengthMatrix& m : omega_from.assignments) neighbor = neighbor || (m == b);
  if (!neighbor) return minus_inf;
  const BigInt omega_to = Neighborhood(b).total_deal_count;
  const double z = AcceptanceProbability(LogReach(from.deal), omega_from.total_deal_count,
                                         LogReach(to.deal), omega_to);
  return std::log(z) - LogOf(omega_from.total_deal_count);
}

std::vector<History> RunChain(const PublicState& state, const Policy& policy,
                              const ChainConfig& cfg, const PublicBeliefState* oracle) {
  GibbsSampler sampler(state, policy);
  return sampler.Run(cfg, oracle);
}

}  // namespace histfilter
