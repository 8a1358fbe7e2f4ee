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

#ifndef HISTFILTER_ENUMERATION_H_
#define HISTFILTER_ENUMERATION_H_

// Exact public belief states: every history consistent with a public state
// together with its normalized reach. The ground truth for the samplers.

#include <cstddef>
#include <vector>

#include "histfilter/game.h"
#include "histfilter/observation.h"
#include "histfilter/policy.h"

namespace histfilter {

inline constexpr std::size_t kDefaultMemberCap = 2'000'000;

struct BeliefMember {
  History history;
  double log_reach = 0.0;    // log of the unnormalized reach
  double probability = 0.0;  // P(h | S)
};

struct PublicBeliefState {
  PublicState public_state;
  std::vector<BeliefMember> members;
  double total_unnormalized = 0.0;  // sum of exp(log_reach)
  double log_total = 0.0;

  std::size_t size() const { return members.size(); }
  bool empty() const { return members.empty(); }
};

// Deal-space enumeration driven by the suit-length constraints. Throws
// ResourceError when the number of consistent deals exceeds `cap`.
PublicBeliefState Enumerate(const PublicState& state, const Policy& policy,
                            std::size_t cap = kDefaultMemberCap);

// Generic route: every deal given the upcard, then a breadth-first match of
// each prefix against the public observations. Only for tiny games; `cap`
// bounds the number of candidate deals.
PublicBeliefState EnumerateByReplay(const PublicState& state, const Policy& policy,
                                    std::size_t cap = 200'000);

// Expected terminal utility below `history` when everyone follows `policy`.
std::vector<double> HistoryValue(const History& history, const Policy& policy);

// HistoryValue of every member. The parallel version splits members over
// OpenMP threads; the serial one is the reference it is tested against.
std::vector<std::vector<double>> MemberValues(const PublicBeliefState& belief,
                                              const Policy& policy);
std::vector<std::vector<double>> MemberValuesSerial(const PublicBeliefState& belief,
                                                    const Policy& policy);

std::vector<double> PbsValue(const PublicBeliefState& belief,
                             const std::vector<std::vector<double>>& member_values);
std::vector<double> PbsValue(const PublicBeliefState& belief, const Policy& policy);

// Shannon entropy of P(. | S) in bits.
double PbsEntropy(const PublicBeliefState& belief);
double PbsVariance(const PublicBeliefState& belief,
                   const std::vector<std::vector<double>>& member_values, int player);

}  // namespace histfilter

#endif  // HISTFILTER_ENUMERATION_H_
