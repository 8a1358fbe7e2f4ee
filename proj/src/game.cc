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

#include "histfilter/game.h"

#include <algorithm>
#include <numeric>

#include "histfilter/errors.h"

namespace histfilter {

std::vector<int> CardsOf(CardSet set) {
  std::vector<int> cards;
  cards.reserve(CardCount(set));
  while (set != 0) {
    cards.push_back(std::countr_zero(set));
    set &= set - 1;
  }
  return cards;
}

void GameConfig::Validate() const {
  if (num_players < 2) throw ConfigError("num_players must be >= 2");
  if (num_suits < 1) throw ConfigError("num_suits must be >= 1");
  if (num_ranks < 2) throw ConfigError("num_ranks must be >= 2");
  if (hand_size < 1) throw ConfigError("hand_size must be >= 1");
  if (DeckSize() > kMaxDeckSize) {
    throw ConfigError("deck larger than 64 cards is not supported");
  }
  if (num_players * hand_size > DeckSize() - 1) {
    throw ConfigError("num_players * hand_size must leave one card for the upcard");
  }
}

std::uint64_t GameConfig::Fingerprint() const {
  std::uint64_t h = 0x4f68'4865'6c6cULL;
  for (int v : {num_players, num_suits, num_ranks, hand_size, scoring_bonus}) {
    h = HashCombine(h, static_cast<std::uint64_t>(v));
  }
  return h;
}

CardSet SuitMask(const GameConfig& config, int suit) {
  const CardSet one_suit = (CardSet{1} << config.num_ranks) - 1;
  return one_suit << (suit * config.num_ranks);
}

CardSet DeckMask(const GameConfig& config) {
  const int n = config.DeckSize();
  return n == 64 ? ~CardSet{0} : (CardSet{1} << n) - 1;
}

std::string CardString(const GameConfig& config, int card) {
  static constexpr char kRanks[] = "23456789TJQKA";
  const int rank = RankOf(config, card);
  std::string s;
  if (config.num_ranks <= 13) {
    // Ranks are the top of a standard suit so the highest is always an ace.
    s += kRanks[13 - config.num_ranks + rank];
  } else {
    s += std::to_string(rank);
  }
  s += static_cast<char>('a' + SuitOf(config, card));
  return s;
}

std::string ActionString(const GameConfig& config, const Action& action) {
  if (action.IsBid()) return "bid" + std::to_string(action.value);
  return CardString(config, action.value);
}

void ValidateDeal(const GameConfig& config, const Deal& deal) {
  if (static_cast<int>(deal.hands.size()) != config.num_players) {
    throw ContractViolation("deal has the wrong number of hands");
  }
  if (deal.trump_upcard < 0 || deal.trump_upcard >= config.DeckSize()) {
    throw ContractViolation("trump upcard out of range");
  }
  CardSet seen = CardBit(deal.trump_upcard);
  auto add = [&](CardSet s) {
    if ((seen & s) != 0) throw ContractViolation("deal assigns a card twice");
    seen |= s;
  };
  for (CardSet hand : deal.hands) {
    if (CardCount(hand) != config.hand_size) {
      throw ContractViolation("hand has the wrong size");
    }
    add(hand);
  }
  if (CardCount(deal.kitty) != config.KittySize()) {
    throw ContractViolation("kitty has the wrong size");
  }
  add(deal.kitty);
  if (seen != DeckMask(config)) throw ContractViolation("deal does not cover the deck");
}

WorldState InitialState(const GameConfig& config, const Deal& deal) {
  WorldState state;
  state.config = config;
  state.deal = deal;
  state.phase = Phase::kBidding;
  state.bids.assign(config.num_players, std::nullopt);
  state.hands = deal.hands;
  state.tricks_won.assign(config.num_players, 0);
  state.to_act = 0;
  state.trick_leader = 0;
  return state;
}

Deal RandomDeal(const GameConfig& config, Rng& rng) {
  std::vector<int> deck(config.DeckSize());
  std::iota(deck.begin(), deck.end(), 0);
  std::shuffle(deck.begin(), deck.end(), rng);
  Deal deal;
  deal.trump_upcard = deck[0];
  deal.hands.assign(config.num_players, 0);
  int next = 1;
  for (int p = 0; p < config.num_players; ++p) {
    for (int i = 0; i < config.hand_size; ++i) deal.hands[p] |= CardBit(deck[next++]);
  }
  for (; next < config.DeckSize(); ++next) deal.kitty |= CardBit(deck[next]);
  return deal;
}

WorldState NewGame(const GameConfig& config, std::uint64_t rng_seed) {
  config.Validate();
  Rng rng = MakeRng(rng_seed);
  return InitialState(config, RandomDeal(config, rng));
}

CardSet LegalCards(const WorldState& state) {
  const CardSet hand = state.hands[state.to_act];
  if (state.current_trick.empty()) return hand;
  const int led = SuitOf(state.config, state.current_trick.front().card);
  const CardSet follow = hand & SuitMask(state.config, led);
  return follow != 0 ? follow : hand;
}

std::vector<Action> LegalActions(const WorldState& state) {
  std::vector<Action> actions;
  switch (state.phase) {
    case Phase::kBidding:
      for (int b = 0; b <= state.config.hand_size; ++b) actions.push_back(Action::Bid(b));
      break;
    case Phase::kTrickPlay:
      for (int card : CardsOf(LegalCards(state))) actions.push_back(Action::Play(card));
      break;
    case Phase::kTerminal:
      throw ContractViolation("no legal actions in a terminal state");
  }
  return actions;
}

bool IsLegal(const WorldState& state, const Action& action) {
  switch (state.phase) {
    case Phase::kBidding:
      return action.IsBid() && action.value >= 0 && action.value <= state.config.hand_size;
    case Phase::kTrickPlay:
      return action.IsPlay() && action.value >= 0 && action.value < state.config.DeckSize() &&
             Contains(LegalCards(state), action.value);
    case Phase::kTerminal:
      return false;
  }
  return false;
}

int TrickWinner(const GameConfig& config, int trump_suit, const std::vector<TrickCard>& trick) {
  const int led = SuitOf(config, trick.front().card);
  int best = 0;
  auto beats = [&](int challenger, int holder) {
    const int cs = SuitOf(config, challenger);
    const int hs = SuitOf(config, holder);
    if (cs == hs) return RankOf(config, challenger) > RankOf(config, holder);
    if (cs == trump_suit) return true;
    return false;
  };
  for (std::size_t i = 1; i < trick.size(); ++i) {
    const int suit = SuitOf(config, trick[i].card);
    if (suit != led && suit != trump_suit) continue;
    if (beats(trick[i].card, trick[best].card)) best = static_cast<int>(i);
  }
  return trick[best].player;
}

void ApplyActionInPlace(WorldState& state, const Action& action) {
  if (!IsLegal(state, action)) {
    throw ContractViolation("illegal action " + ActionString(state.config, action));
  }
  const GameConfig& config = state.config;
  if (action.IsBid()) {
    state.bids[state.to_act] = action.value;
    state.to_act = (state.to_act + 1) % config.num_players;
    if (state.to_act == 0) {
      state.phase = Phase::kTrickPlay;
      state.to_act = state.trick_leader;
    }
    return;
  }
  const int card = action.value;
  state.hands[state.to_act] &= ~CardBit(card);
  state.played |= CardBit(card);
  state.current_trick.push_back(TrickCard{state.to_act, card});
  if (static_cast<int>(state.current_trick.size()) < config.num_players) {
    state.to_act = (state.to_act + 1) % config.num_players;
    return;
  }
  const int winner =
      TrickWinner(config, SuitOf(config, state.deal.trump_upcard), state.current_trick);
  ++state.tricks_won[winner];
  ++state.tricks_completed;
  state.current_trick.clear();
  state.trick_leader = winner;
  state.to_act = winner;
  if (state.tricks_completed == config.hand_size) state.phase = Phase::kTerminal;
}

WorldState ApplyAction(const WorldState& state, const Action& action) {
  WorldState next = state;
  ApplyActionInPlace(next, action);
  return next;
}

std::vector<double> Utility(const WorldState& state) {
  if (state.phase != Phase::kTerminal) {
    throw ContractViolation("utility requested for a non-terminal state");
  }
  std::vector<double> u(state.config.num_players);
  for (int p = 0; p < state.config.num_players; ++p) {
    u[p] = state.tricks_won[p];
    if (state.bids[p] && *state.bids[p] == state.tricks_won[p]) u[p] += state.config.scoring_bonus;
  }
  return u;
}

namespace {

BigInt Factorial(int n) {
  BigInt f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

BigInt DealCountGivenUpcard(const GameConfig& config) {
  config.Validate();
  BigInt denom = Factorial(config.KittySize());
  const BigInt hand = Factorial(config.hand_size);
  for (int p = 0; p < config.num_players; ++p) denom *= hand;
  return Factorial(config.DeckSize() - 1) / denom;
}

BigRational DealChanceProbability(const GameConfig& config) {
  return BigRational(BigInt(1), DealCountGivenUpcard(config));
}

WorldState Replay(const History& history) {
  WorldState state = InitialState(history.config, history.deal);
  for (const Step& step : history.actions) {
    if (state.phase == Phase::kTerminal) throw ContractViolation("action after game end");
    if (step.player != state.to_act) throw ContractViolation("action by the wrong player");
    ApplyActionInPlace(state, step.action);
  }
  return state;
}

}  // namespace histfilter
