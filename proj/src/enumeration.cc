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

#include "histfilter/enumeration.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "histfilter/assignment.h"
#include "histfilter/errors.h"

namespace histfilter {

namespace {

void Normalize(PublicBeliefState& belief) {
  if (belief.members.empty()) {
    belief.total_unnormalized = 0.0;
    belief.log_total = -std::numeric_limits<double>::infinity();
    return;
  }
  double top = -std::numeric_limits<double>::infinity();
  for (const BeliefMember& m : belief.members) top = std::max(top, m.log_reach);
  double scaled = 0.0;
  for (const BeliefMember& m : belief.members) scaled += std::exp(m.log_reach - top);
  belief.log_total = top + std::log(scaled);
  belief.total_unnormalized = std::exp(belief.log_total);
  for (BeliefMember& m : belief.members) m.probability = std::exp(m.log_reach - belief.log_total);
}

// Hands for players p.. drawn from `remaining`; the kitty takes the rest.
void VisitAllDeals(const GameConfig& config, int player, CardSet remaining, Deal& deal,
                   const std::function<void(const Deal&)>& visit) {
  if (player == config.num_players) {
    deal.kitty = remaining;
    visit(deal);
    return;
  }
  const std::vector<int> cards = CardsOf(remaining);
  const int n = static_cast<int>(cards.size());
  const int k = config.hand_size;
  std::vector<int> pick(k);
  for (int t = 0; t < k; ++t) pick[t] = t;
  while (true) {
    CardSet hand = 0;
    for (int t : pick) hand |= CardBit(cards[t]);
    deal.hands[player] = hand;
    VisitAllDeals(config, player + 1, remaining & ~hand, deal, visit);
    int t = k - 1;
    while (t >= 0 && pick[t] == n - k + t) --t;
    if (t < 0) break;
    ++pick[t];
    for (int u = t + 1; u < k; ++u) pick[u] = pick[u - 1] + 1;
  }
}

void ValueRecursive(const WorldState& state, std::uint64_t fp, const Policy& policy, double weight,
                    std::vector<double>& acc) {
  if (state.phase == Phase::kTerminal) {
    const std::vector<double> u = Utility(state);
    for (std::size_t p = 0; p < u.size(); ++p) acc[p] += weight * u[p];
    return;
  }
  const int player = state.to_act;
  const std::vector<Action> legal = LegalActions(state);
  const std::uint64_t info = InfoStateFingerprint(fp, player, state.hands[player]);
  const int k = static_cast<int>(legal.size());
  for (int i = 0; i < k; ++i) {
    const double p = policy.Probability(info, player, k, i);
    if (p <= 0.0) continue;
    WorldState child = state;
    ApplyActionInPlace(child, legal[i]);
    ValueRecursive(child, ExtendPublicFingerprint(fp, Step{player, legal[i]}), policy, weight * p,
                   acc);
  }
}

}  // namespace

PublicBeliefState Enumerate(const PublicState& state, const Policy& policy, std::size_t cap) {
  const ConstraintSummary c = ExtractConstraints(state);
  PublicBeliefState belief;
  belief.public_state = state;
  const std::vector<SuitLengthMatrix> assignments = EnumerateAssignments(c);
  BigInt total = 0;
  for (const SuitLengthMatrix& a : assignments) total += DealCount(a, c);
  if (total > BigInt(cap)) {
    throw ResourceError("public state has " + total.str() + " histories, cap is " +
                        std::to_string(cap));
  }
  belief.members.reserve(total.convert_to<std::size_t>());
  const std::vector<Step> steps = state.Steps();
  for (const SuitLengthMatrix& a : assignments) {
    ForEachDealIn(a, c, [&](const Deal& deal) {
      BeliefMember m;
      m.history = History{state.config, deal, steps};
      m.log_reach = UnnormalizedLogReach(m.history, policy);
      if (std::isfinite(m.log_reach)) belief.members.push_back(std::move(m));
    });
  }
  Normalize(belief);
  return belief;
}

PublicBeliefState EnumerateByReplay(const PublicState& state, const Policy& policy,
                                    std::size_t cap) {
  const GameConfig& config = state.config;
  config.Validate();
  if (DealCountGivenUpcard(config) > BigInt(cap)) {
    throw ResourceError("too many deals for replay enumeration");
  }
  PublicBeliefState belief;
  belief.public_state = state;
  const std::vector<Step> observed = state.Steps();
  Deal deal;
  deal.trump_upcard = state.trump_upcard;
  deal.hands.assign(config.num_players, 0);
  const CardSet rest = DeckMask(config) & ~CardBit(state.trump_upcard);

  struct Prefix {
    WorldState world;
    std::uint64_t fp;
    double log_reach;
  };
  VisitAllDeals(config, 0, rest, deal, [&](const Deal& candidate) {
    std::vector<Prefix> frontier{
        {InitialState(config, candidate), InitialPublicFingerprint(config, candidate.trump_upcard),
         0.0}};
    for (const Step& obs : observed) {
      std::vector<Prefix> next;
      for (const Prefix& prefix : frontier) {
        if (prefix.world.phase == Phase::kTerminal) continue;
        const int player = prefix.world.to_act;
        const std::vector<Action> legal = LegalActions(prefix.world);
        const std::uint64_t info =
            InfoStateFingerprint(prefix.fp, player, prefix.world.hands[player]);
        for (std::size_t i = 0; i < legal.size(); ++i) {
          // The public observation of an action is (actor, action).
          const Step produced{player, legal[i]};
          if (!(produced == obs)) continue;
          const double p =
              policy.Probability(info, player, static_cast<int>(legal.size()), static_cast<int>(i));
          if (p <= 0.0) continue;
          next.push_back({ApplyAction(prefix.world, legal[i]),
                          ExtendPublicFingerprint(prefix.fp, produced),
                          prefix.log_reach + std::log(p)});
        }
      }
      frontier = std::move(next);
      if (frontier.empty()) return;
    }
    for (const Prefix& prefix : frontier) {
      belief.members.push_back({History{config, candidate, observed}, prefix.log_reach, 0.0});
    }
  });
  Normalize(belief);
  return belief;
}

std::vector<double> HistoryValue(const History& history, const Policy& policy) {
  const WorldState state = Replay(history);
  std::uint64_t fp = InitialPublicFingerprint(history.config, history.deal.trump_upcard);
  for (const Step& step : history.actions) fp = ExtendPublicFingerprint(fp, step);
  std::vector<double> acc(history.config.num_players, 0.0);
  ValueRecursive(state, fp, policy, 1.0, acc);
  return acc;
}

std::vector<std::vector<double>> MemberValuesSerial(const PublicBeliefState& belief,
                                                    const Policy& policy) {
  std::vector<std::vector<double>> values(belief.members.size());
  for (std::size_t i = 0; i < belief.members.size(); ++i) {
    values[i] = HistoryValue(belief.members[i].history, policy);
  }
  return values;
}

std::vector<std::vector<double>> MemberValues(const PublicBeliefState& belief,
                                              const Policy& policy) {
  const auto n = static_cast<std::int64_t>(belief.members.size());
  std::vector<std::vector<double>> values(n);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t i = 0; i < n; ++i) {
    values[i] = HistoryValue(belief.members[i].history, policy);
  }
  return values;
}

std::vector<double> PbsValue(const PublicBeliefState& belief,
                             const std::vector<std::vector<double>>& member_values) {
  std::vector<double> value(belief.public_state.config.num_players, 0.0);
  for (std::size_t i = 0; i < belief.members.size(); ++i) {
    for (std::size_t p = 0; p < value.size(); ++p) {
      value[p] += belief.members[i].probability * member_values[i][p];
    }
  }
  return value;
}

std::vector<double> PbsValue(const PublicBeliefState& belief, const Policy& policy) {
  return PbsValue(belief, MemberValues(belief, policy));
}

double PbsEntropy(const PublicBeliefState& belief) {
  double h = 0.0;
  for (const BeliefMember& m : belief.members) {
    if (m.probability > 0.0) h -= m.probability * std::log2(m.probability);
  }
  return std::max(h, 0.0);
}

double PbsVariance(const PublicBeliefState& belief,
                   const std::vector<std::vector<double>>& member_values, int player) {
  double mean = 0.0;
  for (std::size_t i = 0; i < belief.members.size(); ++i) {
    mean += belief.members[i].probability * member_values[i][player];
  }
  double var = 0.0;
  for (std::size_t i = 0; i < belief.members.size(); ++i) {
    const double d = member_values[i][player] - mean;
    var += belief.members[i].probability * d * d;
  }
  return var;
}

}  // namespace histfilter
