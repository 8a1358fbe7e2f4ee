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

#include "histfilter/policy.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "histfilter/errors.h"

namespace histfilter {

std::size_t QTables::NumStates() const {
  std::size_t n = 0;
  for (const auto& table : per_player) n += table.size();
  return n;
}

Policy Policy::Uniform() { return Policy(); }

Policy Policy::BiasedRandom(double bias, std::uint64_t seed) {
  if (!(bias >= 0.0 && bias < 1.0)) throw std::invalid_argument("bias must lie in [0, 1)");
  Policy p;
  p.kind_ = Kind::kBiased;
  p.bias_ = bias;
  p.seed_ = seed;
  return p;
}

Policy Policy::DeterministicLimit(std::uint64_t seed) {
  Policy p;
  p.kind_ = Kind::kBiased;
  p.bias_ = 1.0;
  p.seed_ = seed;
  return p;
}

Policy Policy::FromQTables(std::shared_ptr<const QTables> tables, double support_floor) {
  if (!(support_floor > 0.0 && support_floor <= 1.0)) {
    throw std::invalid_argument("support_floor must lie in (0, 1]");
  }
  Policy p;
  p.kind_ = Kind::kQ;
  p.support_floor_ = support_floor;
  p.tables_ = std::move(tables);
  return p;
}

int Policy::FavoredIndex(std::uint64_t infostate, int num_legal) const {
  return static_cast<int>(HashCombine(seed_, infostate) % static_cast<std::uint64_t>(num_legal));
}

double Policy::Probability(std::uint64_t infostate, int player, int num_legal, int index) const {
  if (num_legal <= 1) return 1.0;
  switch (kind_) {
    case Kind::kUniform:
      return 1.0 / num_legal;
    case Kind::kBiased:
      return index == FavoredIndex(infostate, num_legal) ? bias_
                                                         : (1.0 - bias_) / (num_legal - 1);
    case Kind::kQ: {
      const double uniform = support_floor_ / num_legal;
      const auto& table = tables_->per_player[player];
      const auto it = table.find(infostate);
      if (it == table.end() || static_cast<int>(it->second.size()) != num_legal) {
        return 1.0 / num_legal;
      }
      const std::vector<double>& q = it->second;
      const double best = *std::max_element(q.begin(), q.end());
      if (q[index] != best) return uniform;
      const auto ties = std::count(q.begin(), q.end(), best);
      return (1.0 - support_floor_) / static_cast<double>(ties) + uniform;
    }
  }
  return 0.0;
}

std::vector<double> Policy::Distribution(std::uint64_t infostate, int player,
                                         int num_legal) const {
  std::vector<double> probs(num_legal);
  for (int i = 0; i < num_legal; ++i) probs[i] = Probability(infostate, player, num_legal, i);
  return probs;
}

std::vector<Action> LegalActionsAt(const InfoStateKey& key) {
  const PublicState& pub = key.public_state;
  const GameConfig& config = pub.config;
  std::vector<Action> actions;
  if (static_cast<int>(pub.bids.size()) < config.num_players) {
    for (int b = 0; b <= config.hand_size; ++b) actions.push_back(Action::Bid(b));
    return actions;
  }
  CardSet legal = key.hand;
  const std::size_t in_trick = pub.plays.size() % config.num_players;
  if (in_trick != 0) {
    const int led = SuitOf(config, pub.plays[pub.plays.size() - in_trick].card);
    const CardSet follow = key.hand & SuitMask(config, led);
    if (follow != 0) legal = follow;
  }
  for (int card : CardsOf(legal)) actions.push_back(Action::Play(card));
  return actions;
}

InfoStateDistribution ActionDistribution(const Policy& policy, const InfoStateKey& key) {
  InfoStateDistribution dist;
  dist.actions = LegalActionsAt(key);
  dist.probabilities =
      policy.Distribution(key.Fingerprint(), key.player, static_cast<int>(dist.actions.size()));
  return dist;
}

LegalPosition PositionOf(const WorldState& state, const Action& action) {
  LegalPosition pos;
  if (state.phase == Phase::kBidding) {
    pos.count = state.config.hand_size + 1;
    if (action.IsBid() && action.value >= 0 && action.value <= state.config.hand_size) {
      pos.index = action.value;
    }
  } else if (state.phase == Phase::kTrickPlay) {
    const CardSet legal = LegalCards(state);
    pos.count = CardCount(legal);
    if (action.IsPlay() && action.value >= 0 && action.value < state.config.DeckSize() &&
        Contains(legal, action.value)) {
      pos.index = CardCount(legal & (CardBit(action.value) - 1));
    }
  }
  return pos;
}

double StepProbability(const WorldState& state, std::uint64_t public_fp, const Action& action,
                       const Policy& policy) {
  const LegalPosition pos = PositionOf(state, action);
  if (pos.index < 0) return 0.0;
  const int player = state.to_act;
  const std::uint64_t info = InfoStateFingerprint(public_fp, player, state.hands[player]);
  return policy.Probability(info, player, pos.count, pos.index);
}

double UnnormalizedLogReach(const GameConfig& config, const Deal& deal,
                            std::span<const Step> actions, const Policy& policy) {
  WorldState state = InitialState(config, deal);
  std::uint64_t fp = InitialPublicFingerprint(config, deal.trump_upcard);
  double log_reach = 0.0;
  for (const Step& step : actions) {
    if (state.phase == Phase::kTerminal || step.player != state.to_act) {
      throw ContractViolation("history is not a legal action sequence");
    }
    const double p = StepProbability(state, fp, step.action, policy);
    if (!(p > 0.0)) {
      if (PositionOf(state, step.action).index < 0) {
        throw ContractViolation("illegal action " + ActionString(config, step.action));
      }
      return -std::numeric_limits<double>::infinity();
    }
    log_reach += std::log(p);
    fp = ExtendPublicFingerprint(fp, step);
    ApplyActionInPlace(state, step.action);
  }
  return log_reach;
}

double UnnormalizedLogReach(const History& history, const Policy& policy) {
  return UnnormalizedLogReach(history.config, history.deal, history.actions, policy);
}

std::shared_ptr<const QTables> TrainQTables(const GameConfig& config, const TabularQSpec& spec) {
  config.Validate();
  auto tables = std::make_shared<QTables>();
  tables->config = config;
  tables->per_player.resize(config.num_players);
  Rng rng = MakeRng(spec.seed, 0x51);

  struct Pending {
    std::vector<double>* q = nullptr;
    int action = 0;
  };
  std::vector<Pending> pending(config.num_players);

  for (int episode = 0; episode < spec.episodes; ++episode) {
    WorldState state = InitialState(config, RandomDeal(config, rng));
    std::uint64_t fp = InitialPublicFingerprint(config, state.deal.trump_upcard);
    std::fill(pending.begin(), pending.end(), Pending{});
    while (state.phase != Phase::kTerminal) {
      const int player = state.to_act;
      const std::vector<Action> legal = LegalActions(state);
      const int k = static_cast<int>(legal.size());
      const std::uint64_t info = InfoStateFingerprint(fp, player, state.hands[player]);
      std::vector<double>& q = tables->per_player[player][info];
      if (q.empty()) q.assign(k, 0.0);
      const double best = *std::max_element(q.begin(), q.end());
      Pending& prev = pending[player];
      if (prev.q != nullptr) {
        double& v = (*prev.q)[prev.action];
        v += spec.learning_rate * (spec.discount * best - v);
      }
      int choice;
      if (UniformReal(rng) < spec.exploration) {
        choice = UniformInt(rng, 0, k - 1);
      } else {
        choice = static_cast<int>(std::max_element(q.begin(), q.end()) - q.begin());
      }
      prev = Pending{&q, choice};
      const Step step{player, legal[choice]};
      fp = ExtendPublicFingerprint(fp, step);
      ApplyActionInPlace(state, step.action);
    }
    const std::vector<double> u = Utility(state);
    for (int p = 0; p < config.num_players; ++p) {
      if (pending[p].q == nullptr) continue;
      double& v = (*pending[p].q)[pending[p].action];
      v += spec.learning_rate * (u[p] - v);
    }
    if (tables->NumStates() > spec.max_states) {
      throw ResourceError("Q table exceeds " + std::to_string(spec.max_states) + " states");
    }
  }
  return tables;
}

Policy TrainQPolicies(const GameConfig& config, const TabularQSpec& spec) {
  return Policy::FromQTables(TrainQTables(config, spec), spec.support_floor);
}

Policy MakePolicy(const PolicySpec& spec, const GameConfig& config) {
  if (std::holds_alternative<UniformSpec>(spec)) return Policy::Uniform();
  if (const auto* b = std::get_if<BiasedRandomSpec>(&spec)) {
    return Policy::BiasedRandom(b->bias, b->seed);
  }
  const auto& q = std::get<TabularQSpec>(spec);
  if (!q.table_path.empty()) return Policy::FromQTables(LoadQTables(q.table_path, config), q.support_floor);
  return TrainQPolicies(config, q);
}

namespace {

constexpr char kQMagic[4] = {'H', 'F', 'Q', 'T'};
constexpr std::uint32_t kQVersion = 1;

template <typename T>
void WritePod(std::ofstream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T ReadPod(std::ifstream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw Error("truncated Q table file");
  return value;
}

}  // namespace

void SaveQTables(const QTables& tables, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out.write(kQMagic, sizeof(kQMagic));
  WritePod(out, kQVersion);
  WritePod(out, tables.config.Fingerprint());
  WritePod(out, static_cast<std::uint32_t>(tables.per_player.size()));
  for (const auto& table : tables.per_player) {
    // Sorted so identical tables give identical files.
    std::vector<std::uint64_t> keys;
    keys.reserve(table.size());
    for (const auto& [key, values] : table) keys.push_back(key);
    std::sort(keys.begin(), keys.end());
    WritePod(out, static_cast<std::uint64_t>(keys.size()));
    for (std::uint64_t key : keys) {
      const std::vector<double>& q = table.at(key);
      WritePod(out, key);
      WritePod(out, static_cast<std::uint32_t>(q.size()));
      out.write(reinterpret_cast<const char*>(q.data()),
                static_cast<std::streamsize>(q.size() * sizeof(double)));
    }
  }
  if (!out) throw Error("failed writing " + path);
}

std::shared_ptr<const QTables> LoadQTables(const std::string& path, const GameConfig& config) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  char magic[4];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kQMagic, sizeof(magic)) != 0) {
    throw Error(path + " is not a Q table file");
  }
  if (ReadPod<std::uint32_t>(in) != kQVersion) throw Error("unsupported Q table version");
  if (ReadPod<std::uint64_t>(in) != config.Fingerprint()) {
    throw Error("Q table was trained for a different game config");
  }
  auto tables = std::make_shared<QTables>();
  tables->config = config;
  const auto players = ReadPod<std::uint32_t>(in);
  if (static_cast<int>(players) != config.num_players) throw Error("player count mismatch");
  tables->per_player.resize(players);
  for (auto& table : tables->per_player) {
    const auto count = ReadPod<std::uint64_t>(in);
    for (std::uint64_t i = 0; i < count; ++i) {
      const auto key = ReadPod<std::uint64_t>(in);
      const auto n = ReadPod<std::uint32_t>(in);
      std::vector<double> q(n);
      in.read(reinterpret_cast<char*>(q.data()), static_cast<std::streamsize>(n * sizeof(double)));
      if (!in) throw Error("truncated Q table file");
      table.emplace(key, std::move(q));
    }
  }
  return tables;
}

}  // namespace histfilter
