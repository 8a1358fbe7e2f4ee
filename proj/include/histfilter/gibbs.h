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

#ifndef HISTFILTER_GIBBS_H_
#define HISTFILTER_GIBBS_H_

// Metropolis-Hastings over the histories of one public state. A move swaps
// the deal for a uniform draw from its deal-level ring-swap neighborhood and
// is accepted with min{1, reach' |Omega| / (reach |Omega'|)}, which leaves
// P(. | S) stationary.

#include <cstdint>
#include <functional>
#include <unordered_map>
#include <vector>

#include "histfilter/assignment.h"
#include "histfilter/enumeration.h"
#include "histfilter/game.h"
#include "histfilter/observation.h"
#include "histfilter/policy.h"
#include "histfilter/rng.h"

namespace histfilter {

enum class InitMode { kConstruct, kUniformExact };

struct ChainConfig {
  int thinning_interval = 20;  // transitions between retained samples
  int num_samples = 400;
  int discard_prefix = 0;      // transitions dropped before the first sample
  InitMode init_mode = InitMode::kConstruct;
  std::uint64_t rng_seed = 0;
  std::uint64_t chain_id = 0;

  // Throws std::invalid_argument.
  void Validate() const;
};

struct ChainState {
  History history;
  SuitLengthMatrix assignment;
  double log_reach = 0.0;
  BigInt omega_size;
  std::int64_t step_count = 0;
  std::int64_t accepted = 0;

  const Deal& deal() const { return history.deal; }
};

// z for a proposal from a history with (log_reach_from, omega_from) to one
// with (log_reach_to, omega_to).
double AcceptanceProbability(double log_reach_from, const BigInt& omega_from, double log_reach_to,
                             const BigInt& omega_to);

// One sampler per chain: the neighborhood cache is not shared.
class GibbsSampler {
 public:
  GibbsSampler(PublicState state, Policy policy);

  const PublicState& public_state() const { return state_; }
  const ConstraintSummary& constraints() const { return constraints_; }
  const Policy& policy() const { return policy_; }

  // Throws EmptyBeliefError when H_S is empty. kUniformExact enumerates H_S
  // unless `oracle` is supplied.
  ChainState Init(InitMode mode, Rng& rng, const PublicBeliefState* oracle = nullptr);
  // Chain state at a given member of H_S. Throws ContractViolation otherwise.
  ChainState StateAt(const History& history);

  // One transition, in place. Self-loops when the neighborhood is empty.
  void Step(ChainState& state, Rng& rng);

  // Retains a sample every cfg.thinning_interval transitions.
  std::vector<History> Run(const ChainConfig& cfg, const PublicBeliefState* oracle = nullptr);
  // Same transitions as Run, handing each retained state to `visit` instead
  // of storing it. Returns the final chain state.
  ChainState Run(const ChainConfig& cfg, const std::function<void(const ChainState&)>& visit,
                 const PublicBeliefState* oracle = nullptr);

  // log Q(from -> to) for to != from; -inf when `to` is not a neighbor.
  double LogTransitionProbability(const History& from, const History& to);

  const NeighborSet& Neighborhood(const SuitLengthMatrix& assignment);

 private:
  double LogReach(const Deal& deal) const;

  PublicState state_;
  Policy policy_;
  ConstraintSummary constraints_;
  std::vector<histfilter::Step> steps_;
  std::unordered_map<SuitLengthMatrix, NeighborSet, SuitLengthMatrixHash> cache_;
};

std::vector<History> RunChain(const PublicState& state, const Policy& policy,
                              const ChainConfig& cfg, const PublicBeliefState* oracle = nullptr);

}  // namespace histfilter

#endif  // HISTFILTER_GIBBS_H_
