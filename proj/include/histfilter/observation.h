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

#ifndef HISTFILTER_OBSERVATION_H_
#define HISTFILTER_OBSERVATION_H_

#include <cstdint>
#include <vector>

#include "histfilter/game.h"

namespace histfilter {

class Policy;

// Everything all players have observed: the upcard, the bids so far and the
// cards played so far. Every action in this game is public.
struct PublicState {
  GameConfig config;
  int trump_upcard = -1;
  std::vector<int> bids;          // bids[i] was made by player i
  std::vector<TrickCard> plays;   // in play order

  std::vector<int> HandCounts() const;
  // The public action sequence as history steps (bids, then plays).
  std::vector<Step> Steps() const;
  CardSet PlayedCards() const;

  bool operator==(const PublicState&) const = default;
};

// Throws InconsistencyError if bids or plays cannot come from a legal game
// with this upcard, judged from public information alone: wrong actor, a card
// played twice or equal to the upcard, bids out of range, plays before
// bidding ends.
void ValidatePublicState(const PublicState& state);

PublicState PublicStateOf(const History& history);

// Canonical 64-bit fingerprints. The public one is folded one action at a
// time, so replay loops can keep it current without rebuilding a PublicState.
std::uint64_t InitialPublicFingerprint(const GameConfig& config, int trump_upcard);
std::uint64_t ExtendPublicFingerprint(std::uint64_t fingerprint, const Step& step);
std::uint64_t PublicFingerprint(const PublicState& state);
std::uint64_t InfoStateFingerprint(std::uint64_t public_fingerprint, int player, CardSet hand);

struct InfoStateKey {
  PublicState public_state;
  int player = 0;
  CardSet hand = 0;

  std::uint64_t Fingerprint() const {
    return InfoStateFingerprint(PublicFingerprint(public_state), player, hand);
  }
};

// Deal constraints read off a public state. Rows are the players followed by
// the kitty when the kitty is non-empty.
struct ConstraintSummary {
  GameConfig config;
  int trump_upcard = -1;
  int num_rows = 0;
  bool has_kitty = false;
  std::vector<int> unknown_per_row;
  std::vector<CardSet> unknown_pool;       // per suit
  std::vector<std::uint32_t> void_suits;   // per row, bit j set => void in suit j
  std::vector<CardSet> forced_cards;       // per player, revealed by play
  // A player shown void in a suit later played that suit: no deal fits.
  bool contradiction = false;

  int NumSuits() const { return static_cast<int>(unknown_pool.size()); }
  bool IsVoid(int row, int suit) const { return (void_suits[row] >> suit) & 1U; }
  int PoolSize(int suit) const { return CardCount(unknown_pool[suit]); }
  int TotalUnknown() const;
  bool IsKittyRow(int row) const { return has_kitty && row == num_rows - 1; }
};

ConstraintSummary ExtractConstraints(const PublicState& state);

// Counts of the per-step work done by VerifyConsistency.
struct VerifyCounters {
  std::int64_t observation_checks = 0;
  std::int64_t policy_evaluations = 0;
};

// True iff `history` projects onto `state` and has positive reach under
// `policy`. Linear in the history length.
bool VerifyConsistency(const PublicState& state, const History& history, const Policy& policy,
                       VerifyCounters* counters = nullptr);

}  // namespace histfilter

#endif  // HISTFILTER_OBSERVATION_H_
