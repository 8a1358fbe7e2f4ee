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

#ifndef HISTFILTER_GAME_H_
#define HISTFILTER_GAME_H_

// Oh Hell, single round. Bidding runs 0..N-1, player 0 leads the first
// trick, the suit of the public upcard is trump, following suit is
// mandatory. A player scores tricks won plus a bonus on an exact bid.

#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "histfilter/rng.h"

namespace histfilter {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

// Set of card indices. Decks are limited to 64 cards.
using CardSet = std::uint64_t;

inline constexpr int kMaxDeckSize = 64;

inline CardSet CardBit(int card) { return CardSet{1} << card; }
inline bool Contains(CardSet set, int card) { return (set >> card) & 1U; }
inline int CardCount(CardSet set) { return std::popcount(set); }
std::vector<int> CardsOf(CardSet set);

struct GameConfig {
  int num_players = 3;
  int num_suits = 2;
  int num_ranks = 4;
  int hand_size = 2;
  int scoring_bonus = 10;

  int DeckSize() const { return num_suits * num_ranks; }
  int KittySize() const { return DeckSize() - num_players * hand_size - 1; }
  // Throws ConfigError.
  void Validate() const;
  std::uint64_t Fingerprint() const;

  bool operator==(const GameConfig&) const = default;
};

struct Card {
  int suit = 0;
  int rank = 0;

  int Index(const GameConfig& config) const { return suit * config.num_ranks + rank; }
  static Card FromIndex(const GameConfig& config, int index) {
    return Card{index / config.num_ranks, index % config.num_ranks};
  }
  bool operator==(const Card&) const = default;
};

inline int SuitOf(const GameConfig& config, int card) { return card / config.num_ranks; }
inline int RankOf(const GameConfig& config, int card) { return card % config.num_ranks; }
CardSet SuitMask(const GameConfig& config, int suit);
CardSet DeckMask(const GameConfig& config);
std::string CardString(const GameConfig& config, int card);

struct Deal {
  std::vector<CardSet> hands;
  int trump_upcard = -1;
  CardSet kitty = 0;

  bool operator==(const Deal&) const = default;
};

// Throws ContractViolation unless hands, upcard and kitty partition the deck
// with the configured sizes.
void ValidateDeal(const GameConfig& config, const Deal& deal);

struct Action {
  enum class Kind : std::uint8_t { kBid, kPlay };
  Kind kind = Kind::kBid;
  int value = 0;  // bid count or card index

  static Action Bid(int count) { return Action{Kind::kBid, count}; }
  static Action Play(int card) { return Action{Kind::kPlay, card}; }
  bool IsBid() const { return kind == Kind::kBid; }
  bool IsPlay() const { return kind == Kind::kPlay; }
  bool operator==(const Action&) const = default;
};

struct Step {
  int player = 0;
  Action action;
  bool operator==(const Step&) const = default;
};

enum class Phase : std::uint8_t { kBidding, kTrickPlay, kTerminal };

struct TrickCard {
  int player = 0;
  int card = 0;
  bool operator==(const TrickCard&) const = default;
};

struct WorldState {
  GameConfig config;
  Deal deal;
  Phase phase = Phase::kBidding;
  std::vector<std::optional<int>> bids;
  std::vector<CardSet> hands;  // cards still held
  CardSet played = 0;
  std::vector<TrickCard> current_trick;
  std::vector<int> tricks_won;
  int to_act = 0;
  int trick_leader = 0;
  int tricks_completed = 0;

  bool operator==(const WorldState&) const = default;
};

// Post-deal state for a given deal.
WorldState InitialState(const GameConfig& config, const Deal& deal);
// Uniform random deal (unordered hands), upcard exposed, bidding phase.
WorldState NewGame(const GameConfig& config, std::uint64_t rng_seed);
Deal RandomDeal(const GameConfig& config, Rng& rng);

// Canonical order: bids ascending, cards by ascending index.
std::vector<Action> LegalActions(const WorldState& state);
// Cards the player to act may play (trick phase only).
CardSet LegalCards(const WorldState& state);
bool IsLegal(const WorldState& state, const Action& action);

WorldState ApplyAction(const WorldState& state, const Action& action);
void ApplyActionInPlace(WorldState& state, const Action& action);

std::vector<double> Utility(const WorldState& state);

// Winner of a completed trick given the trump suit.
int TrickWinner(const GameConfig& config, int trump_suit,
                const std::vector<TrickCard>& trick);

// Number of deals given the upcard: the multinomial (n-1)! / (h!^N k!).
BigInt DealCountGivenUpcard(const GameConfig& config);
// Chance probability of any single deal given the upcard.
BigRational DealChanceProbability(const GameConfig& config);

struct History {
  GameConfig config;
  Deal deal;
  std::vector<Step> actions;

  // The deal counts as one chance step.
  std::size_t Length() const { return 1 + actions.size(); }
  bool operator==(const History&) const = default;
};

// Replays `history` from its deal. Throws ContractViolation on an illegal
// step or a step attributed to the wrong player.
WorldState Replay(const History& history);

std::string ActionString(const GameConfig& config, const Action& action);

}  // namespace histfilter

#endif  // HISTFILTER_GAME_H_
