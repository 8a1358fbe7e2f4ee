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

#ifndef HISTFILTER_ESTIMATION_H_
#define HISTFILTER_ESTIMATION_H_

// Value-estimation experiments: random public states, three estimators of
// the public belief state value, replicate sweeps and entropy/variance
// tables.

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "histfilter/assignment.h"
#include "histfilter/enumeration.h"
#include "histfilter/gibbs.h"
#include "histfilter/observation.h"
#include "histfilter/policy.h"

namespace histfilter {

struct Instance {
  GameConfig config;
  PolicySpec policy_spec;
  int tricks_played = 0;
  std::uint64_t seed = 0;
  PublicState public_state;
};

// Deals with NewGame(config, seed) and self-plays every bid plus
// `tricks_played` complete tricks under `policy`.
Instance GenerateInstance(const GameConfig& config, const PolicySpec& spec, const Policy& policy,
                          int tricks_played, std::uint64_t seed);
Instance GenerateInstance(const GameConfig& config, const PolicySpec& spec, int tricks_played,
                          std::uint64_t seed);

// |H_S| counted the way ordered dealing would count it: every unordered deal
// stands for (hand_size!)^num_players ordered deal sequences.
BigInt OrderedHistoryCount(const GameConfig& config, std::size_t unordered_count);

enum class Method { kTrue, kImportance, kGibbs };
std::string MethodName(Method method);
// Throws std::invalid_argument.
Method ParseMethod(const std::string& name);

struct EstimateRecord {
  Method method = Method::kTrue;
  int samples_used = 0;
  int thinning = 0;
  std::vector<double> estimate;
  double error = 0.0;  // max over players of |estimate - exact|
  std::int64_t transitions = 0;
  std::int64_t wall_ms = 0;
};

// The exact belief, member values and value of one instance, shared
// read-only by every estimator run.
class Evaluation {
 public:
  Evaluation(PublicState state, Policy policy, std::size_t cap = kDefaultMemberCap);

  const PublicState& public_state() const { return belief_.public_state; }
  const Policy& policy() const { return policy_; }
  const PublicBeliefState& belief() const { return belief_; }
  const std::vector<std::vector<double>>& member_values() const { return values_; }
  const std::vector<double>& exact_value() const { return exact_; }

  double Error(const std::vector<double>& estimate) const;
  // Index of the member with this deal. Throws ContractViolation.
  std::size_t IndexOf(const Deal& deal) const;
  std::size_t DrawFromRange(Rng& rng) const;
  std::size_t DrawUniform(Rng& rng) const;

 private:
  Policy policy_;
  PublicBeliefState belief_;
  std::vector<std::vector<double>> values_;
  std::vector<double> exact_;
  std::vector<double> cumulative_;
  std::unordered_map<DealKey, std::size_t, DealKeyHash> index_;
};

std::vector<double> MeanEstimate(const Evaluation& eval, std::span<const std::size_t> members);
// sum w_i V_i / sum w_i with w_i the unnormalized reach of member i.
std::vector<double> SelfNormalizedEstimate(const Evaluation& eval,
                                           std::span<const std::size_t> members);

EstimateRecord EstimateTrue(const Evaluation& eval, int samples, Rng& rng);
EstimateRecord EstimateImportance(const Evaluation& eval, int samples, Rng& rng);
// The chain starts uniformly in H_S, as in the value-estimation protocol.
EstimateRecord EstimateGibbs(const Evaluation& eval, int samples, int thinning,
                             std::uint64_t chain_seed, InitMode init = InitMode::kUniformExact);

struct SweepSpec {
  std::string instance_id = "0";
  std::vector<Method> methods = {Method::kTrue, Method::kImportance, Method::kGibbs};
  std::vector<int> sample_grid = {400};
  std::vector<int> thinning_grid = {20};  // used by Gibbs rows only
  int replicates = 100;
  std::uint64_t seed = 0;
  bool timing = false;  // wall_ms is 0 unless set
};

struct SweepRow {
  std::string instance_id;
  Method method = Method::kTrue;
  int samples = 0;
  int thinning = 0;
  std::int64_t transitions = 0;
  double error_mean = 0.0;
  std::optional<double> error_sem;
  std::int64_t wall_ms = 0;
  std::vector<double> errors;  // per replicate, not written to CSV
};

// Replicates run in parallel with OpenMP; each owns its RNG stream derived
// from (seed, cell, replicate), so the output does not depend on threads.
std::vector<SweepRow> Sweep(const Evaluation& eval, const SweepSpec& spec);
std::vector<SweepRow> SweepSerial(const Evaluation& eval, const SweepSpec& spec);

inline constexpr char kSweepCsvHeader[] =
    "instance_id,method,samples,thinning,transitions,error_mean,error_sem,wall_ms";
void WriteSweepCsv(std::ostream& out, const std::vector<SweepRow>& rows);

struct SizeRegime {
  std::string label;
  GameConfig config;
  int tricks_played = 0;
};

// The three configurations of the value-estimation experiments.
std::vector<SizeRegime> SizeRegimes();

struct StatsCell {
  std::string label;
  double bias = 0.0;
  int instances = 0;
  double histories_mean = 0.0;
  double ordered_histories_mean = 0.0;
  double entropy_mean = 0.0;
  double entropy_sem = 0.0;
  double variance_mean = 0.0;
  double variance_sem = 0.0;
  int entropy_bound_violations = 0;  // instances with entropy > log2 |H_S|
  std::vector<double> entropies;
};

// Entropy and player-0 value variance of `replicates` random biased-policy
// instances per (regime, bias) cell.
std::vector<StatsCell> StatsTable(const std::vector<SizeRegime>& regimes,
                                  const std::vector<double>& biases, int replicates,
                                  std::uint64_t seed);

inline constexpr char kStatsCsvHeader[] =
    "size,bias,instances,histories_mean,ordered_histories_mean,entropy_mean,entropy_sem,"
    "variance_mean,variance_sem";
void WriteStatsCsv(std::ostream& out, const std::vector<StatsCell>& cells);

double MeanOf(std::span<const double> xs);
// Standard error of the mean; nullopt for fewer than two values.
std::optional<double> SemOf(std::span<const double> xs);

}  // namespace histfilter

#endif  // HISTFILTER_ESTIMATION_H_
