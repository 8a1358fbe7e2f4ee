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

#ifndef HISTFILTER_JSON_IO_H_
#define HISTFILTER_JSON_IO_H_

// JSON forms of the file-level types. Cards are always canonical indices
// (suit * num_ranks + rank).
//
//   GameConfig   {"players", "suits", "ranks", "hand_size", "bonus"}
//   PublicState  {"config", "trump", "bids": [..], "plays": [[player, card], ..]}
//   PolicySpec   {"type": "uniform"} | {"type": "biased", "bias", "seed"} |
//                {"type": "q", "episodes", "learning_rate", "discount",
//                 "exploration", "support_floor", "seed", "table"?}
//   Instance     {"config", "policy", "tricks_played", "seed", "public"?}
//   History      {"config", "deal": {"hands": [[..]], "trump", "kitty": [..]},
//                 "actions": [{"player", "bid"} | {"player", "card"}, ..]}
//
// Parsers throw nlohmann::json::exception on missing or mistyped fields.

#include <json.hpp>

#include "histfilter/estimation.h"
#include "histfilter/game.h"
#include "histfilter/observation.h"
#include "histfilter/policy.h"

namespace histfilter {

using Json = nlohmann::ordered_json;

Json ToJson(const GameConfig& config);
GameConfig ConfigFromJson(const Json& j);

Json ToJson(const PublicState& state);
PublicState PublicStateFromJson(const Json& j);

Json ToJson(const PolicySpec& spec);
PolicySpec PolicySpecFromJson(const Json& j);

Json ToJson(const Instance& instance);
// Regenerates the public state by self-play unless "public" is present.
Instance InstanceFromJson(const Json& j);

Json ToJson(const History& history);
History HistoryFromJson(const Json& j);

// Rows (players, then kitty) of card indices joined by '.', rows by '|'.
std::string DealEncoding(const Deal& deal);

}  // namespace histfilter

#endif  // HISTFILTER_JSON_IO_H_
