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

#ifndef HISTFILTER_POLICY_H_
#define HISTFILTER_POLICY_H_

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "histfilter/game.h"
#include "histfilter/observation.h"

namespace histfilter {

struct UniformSpec {
  bool operator==(const UniformSpec&) const = default;
};

// Each infostate favors one legal action with probability `bias`; the other
// legal actions share the rest uniformly.
struct BiasedRandomSpec {
  double bias = 0.7;
  std::uint64_t seed = 0;
  bool operator==(const BiasedRandomSpec&) const = default;
};

struct TabularQSpec {
  int episodes = 200000;
  double learning_rate = 0.1;
  double discount = 1.0;
  double exploration = 0.1;
  double support_floor = 0.05;
  std::uint64_t seed = 0;
  std::size_t max_states = 4'000'000;
  // When set, the tables are loaded from this file instead of trained.
  std::string table_path;
  bool operator==(const TabularQSpec&) const = default;
};

using PolicySpec = std::variant<UniformSpec, BiasedRandomSpec, TabularQSpec>;

// Per-player action values keyed by infostate fingerprint.
struct QTables {
  GameConfig config;
  std::vector<std::unordered_map<std::uint64_t, std::vector<double>>> per_player;

  std::size_t NumStates() const;
};

// A joint policy. Immutable after construction and cheap to copy.
class Policy {
 public:
  static Policy Uniform();
  // Throws std::invalid_argument unless 0 <= bias < 1.
  static Policy BiasedRandom(double bias, std::uint64_t seed);
  // bias = 1: all mass on the favored action. Breaks full support, only
  // meant for value checks against single rollouts.
  static Policy DeterministicLimit(std::uint64_t seed);
  // (1 - floor) * greedy + floor * uniform. Greedy mass is split over tied
  // maxima, so an untrained table is uniform.
  static Policy FromQTables(std::shared_ptr<const QTables> tables, double support_floor);

  // Probability of the legal action at position `index` (canonical order)
  // among `num_legal` at the given infostate.
  double Probability(std::uint64_t infostate, int player, int num_legal, int index) const;
  std::vector<double> Distribution(std::uint64_t infostate, int player, int num_legal) const;

  bool HasFullSupport() const { return kind_ != Kind::kBiased || bias_ < 1.0; }
  const QTables* tables() const { return tables_.get(); }

 private:
  enum class Kind { kUniform, kBiased, kQ };
  int FavoredIndex(std::uint64_t infostate, int num_legal) const;

  Kind kind_ = Kind::kUniform;
  double bias_ = 0.0;
  std::uint64_t seed_ = 0;
  double support_floor_ = 0.0;
  std::shared_ptr<const QTables> tables_;
};

struct InfoStateDistribution {
  std::vector<Action> actions;
  std::vector<double> probabilities;
};

// Legal actions at an infostate, derived from public information and the
// player's hand.
std::vector<Action> LegalActionsAt(const InfoStateKey& key);
InfoStateDistribution ActionDistribution(const Policy& policy, const InfoStateKey& key);

// Position of `action` within LegalActions(state), and their count.
struct LegalPosition {
  int count = 0;
  int index = -1;
};
LegalPosition PositionOf(const WorldState& state, const Action& action);

// pi(action) for the player to act, `public_fp` being the public fingerprint
// of the state. Zero for illegal actions.
double StepProbability(const WorldState& state, std::uint64_t public_fp, const Action& action,
                       const Policy& policy);

// log of the product of action probabilities along the history; chance is
// left out. -inf when some action has zero probability. Throws
// ContractViolation if the history is not legal.
double UnnormalizedLogReach(const History& history, const Policy& policy);
double UnnormalizedLogReach(const GameConfig& config, const Deal& deal,
                            std::span<const Step> actions, const Policy& policy);

// Builds the joint policy described by `spec`, training Q tables when needed.
Policy MakePolicy(const PolicySpec& spec, const GameConfig& config);

// Independent tabular Q-learning in self-play with epsilon-greedy
// exploration. Throws ResourceError past spec.max_states entries.
std::shared_ptr<const QTables> TrainQTables(const GameConfig& config, const TabularQSpec& spec);
Policy TrainQPolicies(const GameConfig& config, const TabularQSpec& spec);

// Binary table files: magic, version, config fingerprint, then entries.
void SaveQTables(const QTables& tables, const std::string& path);
// Throws Error when the file is unreadable, has another version, or was
// trained for another config.
std::shared_ptr<const QTables> LoadQTables(const std::string& path, const GameConfig& config);

}  // namespace histfilter

#endif  // HISTFILTER_POLICY_H_
