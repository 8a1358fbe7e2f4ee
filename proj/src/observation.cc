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

#include "histfilter/observation.h"

#include <cmath>

#include "histfilter/errors.h"
#include "histfilter/policy.h"

namespace histfilter {

std::vector<int> PublicState::HandCounts() const {
  std::vector<int> counts(config.num_players, config.hand_size);
  for (const TrickCard& play : plays) --counts[play.player];
  return counts;
}

std::vector<Step> PublicState::Steps() const {
  std::vector<Step> steps;
  steps.reserve(bids.size() + plays.size());
  for (std::size_t p = 0; p < bids.size(); ++p) {
    steps.push_back(Step{static_cast<int>(p), Action::Bid(bids[p])});
  }
  for (const TrickCard& play : plays) steps.push_back(Step{play.player, Action::Play(play.card)});
  return steps;
}

CardSet PublicState::PlayedCards() const {
  CardSet played = 0;
  for (const TrickCard& play : plays) played |= CardBit(play.card);
  return played;
}

void ValidatePublicState(const PublicState& state) {
  const GameConfig& config = state.config;
  try {
    config.Validate();
  } catch (const ConfigError& e) {
    throw InconsistencyError(std::string("bad config: ") + e.what());
  }
  const int n = config.DeckSize();
  if (state.trump_upcard < 0 || state.trump_upcard >= n) {
    throw InconsistencyError("trump upcard out of range");
  }
  if (static_cast<int>(state.bids.size()) > config.num_players) {
    throw InconsistencyError("more bids than players");
  }
  for (int bid : state.bids) {
    if (bid < 0 || bid > config.hand_size) throw InconsistencyError("bid out of range");
  }
  if (!state.plays.empty() && static_cast<int>(state.bids.size()) != config.num_players) {
    throw InconsistencyError("card played before bidding finished");
  }
  if (static_cast<int>(state.plays.size()) > config.num_players * config.hand_size) {
    throw InconsistencyError("more plays than dealt cards");
  }
  const int trump = SuitOf(config, state.trump_upcard);
  CardSet seen = CardBit(state.trump_upcard);
  std::vector<TrickCard> trick;
  int to_act = 0;
  for (const TrickCard& play : state.plays) {
    if (play.card < 0 || play.card >= n) throw InconsistencyError("card out of range");
    if (Contains(seen, play.card)) {
      throw InconsistencyError("card " + CardString(config, play.card) + " appears twice");
    }
    if (play.player != to_act) throw InconsistencyError("play out of turn");
    seen |= CardBit(play.card);
    trick.push_back(play);
    if (static_cast<int>(trick.size()) == config.num_players) {
      to_act = TrickWinner(config, trump, trick);
      trick.clear();
    } else {
      to_act = (to_act + 1) % config.num_players;
    }
  }
}

PublicState PublicStateOf(const History& history) {
  PublicState state;
  state.config = history.config;
  state.trump_upcard = history.deal.trump_upcard;
  for (const Step& step : history.actions) {
    if (step.action.IsBid()) {
      state.bids.push_back(step.action.value);
    } else {
      state.plays.push_back(TrickCard{step.player, step.action.value});
    }
  }
  return state;
}

std::uint64_t InitialPublicFingerprint(const GameConfig& config, int trump_upcard) {
  return HashCombine(config.Fingerprint(), static_cast<std::uint64_t>(trump_upcard));
}

std::uint64_t ExtendPublicFingerprint(std::uint64_t fingerprint, const Step& step) {
  const std::uint64_t tag = (static_cast<std::uint64_t>(step.action.kind) << 40) |
                            (static_cast<std::uint64_t>(step.player) << 20) |
                            static_cast<std::uint64_t>(step.action.value);
  return HashCombine(fingerprint, tag);
}

std::uint64_t PublicFingerprint(const PublicState& state) {
  std::uint64_t fp = InitialPublicFingerprint(state.config, state.trump_upcard);
  for (const Step& step : state.Steps()) fp = ExtendPublicFingerprint(fp, step);
  return fp;
}

std::uint64_t InfoStateFingerprint(std::uint64_t public_fingerprint, int player, CardSet hand) {
  return HashCombine(HashCombine(public_fingerprint, static_cast<std::uint64_t>(player)), hand);
}

int ConstraintSummary::TotalUnknown() const {
  int total = 0;
  for (CardSet pool : unknown_pool) total += CardCount(pool);
  return total;
}

ConstraintSummary ExtractConstraints(const PublicState& state) {
  ValidatePublicState(state);
  const GameConfig& config = state.config;
  ConstraintSummary c;
  c.config = config;
  c.trump_upcard = state.trump_upcard;
  c.has_kitty = config.KittySize() > 0;
  c.num_rows = config.num_players + (c.has_kitty ? 1 : 0);
  c.void_suits.assign(c.num_rows, 0);
  c.forced_cards.assign(config.num_players, 0);

  const CardSet unknown = DeckMask(config) & ~CardBit(state.trump_upcard) & ~state.PlayedCards();
  c.unknown_pool.resize(config.num_suits);
  for (int s = 0; s < config.num_suits; ++s) c.unknown_pool[s] = unknown & SuitMask(config, s);

  int led = -1;
  int in_trick = 0;
  for (const TrickCard& play : state.plays) {
    const int suit = SuitOf(config, play.card);
    if (c.IsVoid(play.player, suit)) c.contradiction = true;
    c.forced_cards[play.player] |= CardBit(play.card);
    if (in_trick == 0) {
      led = suit;
    } else if (suit != led) {
      c.void_suits[play.player] |= 1U << led;
    }
    in_trick = (in_trick + 1) % config.num_players;
  }

  c.unknown_per_row = state.HandCounts();
  if (c.has_kitty) c.unknown_per_row.push_back(config.KittySize());
  return c;
}

bool VerifyConsistency(const PublicState& state, const History& history, const Policy& policy,
                       VerifyCounters* counters) {
  if (history.config != state.config || history.deal.trump_upcard != state.trump_upcard) {
    return false;
  }
  const std::vector<Step> expected = state.Steps();
  if (expected.size() != history.actions.size()) return false;
  try {
    ValidateDeal(history.config, history.deal);
  } catch (const ContractViolation&) {
    return false;
  }
  WorldState world = InitialState(history.config, history.deal);
  std::uint64_t fp = InitialPublicFingerprint(history.config, history.deal.trump_upcard);
  for (std::size_t t = 0; t < expected.size(); ++t) {
    const Step& step = history.actions[t];
    if (counters) ++counters->observation_checks;
    if (!(step == expected[t])) return false;
    if (world.phase == Phase::kTerminal || step.player != world.to_act ||
        !IsLegal(world, step.action)) {
      return false;
    }
    if (counters) ++counters->policy_evaluations;
    if (!(StepProbability(world, fp, step.action, policy) > 0.0)) return false;
    fp = ExtendPublicFingerprint(fp, step);
    ApplyActionInPlace(world, step.action);
  }
  return true;
}

}  // namespace histfilter
