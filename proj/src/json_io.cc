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

#include "histfilter/json_io.h"

#include <string>

namespace histfilter {

namespace {

Json CardList(CardSet set) {
  Json arr = Json::array();
  for (int card : CardsOf(set)) arr.push_back(card);
  return arr;
}

CardSet CardSetFromJson(const Json& j, const GameConfig& config) {
  CardSet set = 0;
  for (const Json& c : j) {
    const int card = c.get<int>();
    if (card < 0 || card >= config.DeckSize()) {
      throw Json::other_error::create(501, "card index out of range", &c);
    }
    set |= CardBit(card);
  }
  return set;
}

}  // namespace

Json ToJson(const GameConfig& config) {
  return Json{{"players", config.num_players},
              {"suits", config.num_suits},
              {"ranks", config.num_ranks},
              {"hand_size", config.hand_size},
              {"bonus", config.scoring_bonus}};
}

GameConfig ConfigFromJson(const Json& j) {
  GameConfig config;
  config.num_players = j.at("players").get<int>();
  config.num_suits = j.at("suits").get<int>();
  config.num_ranks = j.at("ranks").get<int>();
  config.hand_size = j.at("hand_size").get<int>();
  config.scoring_bonus = j.value("bonus", 10);
  return config;
}

Json ToJson(const PublicState& state) {
  Json plays = Json::array();
  for (const TrickCard& play : state.plays) plays.push_back(Json::array({play.player, play.card}));
  return Json{{"config", ToJson(state.config)},
              {"trump", state.trump_upcard},
              {"bids", state.bids},
              {"plays", plays}};
}

PublicState PublicStateFromJson(const Json& j) {
  PublicState state;
  state.config = ConfigFromJson(j.at("config"));
  state.trump_upcard = j.at("trump").get<int>();
  state.bids = j.value("bids", std::vector<int>{});
  for (const Json& play : j.value("plays", Json::array())) {
    state.plays.push_back(TrickCard{play.at(0).get<int>(), play.at(1).get<int>()});
  }
  return state;
}

Json ToJson(const PolicySpec& spec) {
  if (std::holds_alternative<UniformSpec>(spec)) return Json{{"type", "uniform"}};
  if (const auto* b = std::get_if<BiasedRandomSpec>(&spec)) {
    return Json{{"type", "biased"}, {"bias", b->bias}, {"seed", b->seed}};
  }
  const auto& q = std::get<TabularQSpec>(spec);
  Json j{{"type", "q"},
         {"episodes", q.episodes},
         {"learning_rate", q.learning_rate},
         {"discount", q.discount},
         {"exploration", q.exploration},
         {"support_floor", q.support_floor},
         {"seed", q.seed}};
  if (!q.table_path.empty()) j["table"] = q.table_path;
  return j;
}

PolicySpec PolicySpecFromJson(const Json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "uniform") return UniformSpec{};
  if (type == "biased") {
    return BiasedRandomSpec{j.at("bias").get<double>(), j.value("seed", std::uint64_t{0})};
  }
  if (type == "q") {
    TabularQSpec q;
    q.episodes = j.value("episodes", q.episodes);
    q.learning_rate = j.value("learning_rate", q.learning_rate);
    q.discount = j.value("discount", q.discount);
    q.exploration = j.value("exploration", q.exploration);
    q.support_floor = j.value("support_floor", q.support_floor);
    q.seed = j.value("seed", q.seed);
    q.table_path = j.value("table", std::string());
    return q;
  }
  throw Json::other_error::create(501, "unknown policy type " + type, &j);
}

Json ToJson(const Instance& instance) {
  return Json{{"config", ToJson(instance.config)},
              {"policy", ToJson(instance.policy_spec)},
              {"tricks_played", instance.tricks_played},
              {"seed", instance.seed},
              {"public", ToJson(instance.public_state)}};
}

Instance InstanceFromJson(const Json& j) {
  const GameConfig config = ConfigFromJson(j.at("config"));
  const PolicySpec spec = PolicySpecFromJson(j.value("policy", Json{{"type", "uniform"}}));
  const int tricks = j.value("tricks_played", 0);
  const std::uint64_t seed = j.value("seed", std::uint64_t{0});
  if (j.contains("public")) {
    Instance inst{config, spec, tricks, seed, PublicStateFromJson(j.at("public"))};
    if (!(inst.public_state.config == config)) {
      throw Json::other_error::create(501, "public state config differs from instance config", &j);
    }
    return inst;
  }
  return GenerateInstance(config, spec, tricks, seed);
}

Json ToJson(const History& history) {
  Json hands = Json::array();
  for (CardSet hand : history.deal.hands) hands.push_back(CardList(hand));
  Json actions = Json::array();
  for (const Step& step : history.actions) {
    actions.push_back(Json{{"player", step.player},
                           {step.action.IsBid() ? "bid" : "card", step.action.value}});
  }
  return Json{{"config", ToJson(history.config)},
              {"deal",
               Json{{"hands", hands},
                    {"trump", history.deal.trump_upcard},
                    {"kitty", CardList(history.deal.kitty)}}},
              {"actions", actions}};
}

History HistoryFromJson(const Json& j) {
  History h;
  h.config = ConfigFromJson(j.at("config"));
  const Json& deal = j.at("deal");
  for (const Json& hand : deal.at("hands")) h.deal.hands.push_back(CardSetFromJson(hand, h.config));
  h.deal.trump_upcard = deal.at("trump").get<int>();
  h.deal.kitty = CardSetFromJson(deal.value("kitty", Json::array()), h.config);
  for (const Json& a : j.at("actions")) {
    const int player = a.at("player").get<int>();
    if (a.contains("bid")) {
      h.actions.push_back(Step{player, Action::Bid(a.at("bid").get<int>())});
    } else {
      h.actions.push_back(Step{player, Action::Play(a.at("card").get<int>())});
    }
  }
  return h;
}

std::string DealEncoding(const Deal& deal) {
  std::string out;
  auto row = [&](CardSet set) {
    bool first = true;
    for (int card : CardsOf(set)) {
      if (!first) out += '.';
      out += std::to_string(card);
      first = false;
    }
  };
  for (std::size_t p = 0; p < deal.hands.size(); ++p) {
    if (p > 0) out += '|';
    row(deal.hands[p]);
  }
  if (deal.kitty != 0) {
    out += '|';
    row(deal.kitty);
  }
  return out;
}

}  // namespace histfilter
