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

#include "histfilter/estimation.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "histfilter/errors.h"

namespace histfilter {

namespace {

Step SampleStep(const WorldState& state, std::uint64_t fp, const Policy& policy, Rng& rng) {
  const int player = state.to_act;
  const std::vector<Action> legal = LegalActions(state);
  const std::uint64_t info = InfoStateFingerprint(fp, player, state.hands[player]);
  const std::vector<double> probs =
      policy.Distribution(info, player, static_cast<int>(legal.size()));
  double u = UniformReal(rng);
  std::size_t pick = legal.size() - 1;
  for (std::size_t i = 0; i < legal.size(); ++i) {
    if (u < probs[i]) {
      pick = i;
      break;
    }
    u -= probs[i];
  }
  return Step{player, legal[pick]};
}

std::string FormatDouble(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace

Instance GenerateInstance(const GameConfig& config, const PolicySpec& spec, const Policy& policy,
                          int tricks_played, std::uint64_t seed) {
  config.Validate();
  if (tricks_played < 0 || tricks_played > config.hand_size) {
    throw std::invalid_argument("tricks_played must lie in [0, hand_size]");
  }
  Instance inst{config, spec, tricks_played, seed, {}};
  WorldState state = NewGame(config, seed);
  Rng rng = MakeRng(seed, 1);
  std::uint64_t fp = InitialPublicFingerprint(config, state.deal.trump_upcard);
  std::vector<Step> steps;
  while (state.phase != Phase::kTerminal && state.tricks_completed < tricks_played) {
    const Step step = SampleStep(state, fp, policy, rng);
    steps.push_back(step);
    fp = ExtendPublicFingerprint(fp, step);
    ApplyActionInPlace(state, step.action);
  }
  // Bidding always completes, even when no trick is played.
  while (state.phase == Phase::kBidding) {
    const Step step = SampleStep(state, fp, policy, rng);
    steps.push_back(step);
    fp = ExtendPublicFingerprint(fp, step);
    ApplyActionInPlace(state, step.action);
  }
  inst.public_state = PublicStateOf(History{config, state.deal, steps});
  return inst;
}

Instance GenerateInstance(const GameConfig& config, const PolicySpec& spec, int tricks_played,
                          std::uint64_t seed) {
  return GenerateInstance(config, spec, MakePolicy(spec, config), tricks_played, seed);
}

BigInt OrderedHistoryCount(const GameConfig& config, std::size_t unordered_count) {
  BigInt hand_orders = 1;
  for (int i = 2; i <= config.hand_size; ++i) hand_orders *= i;
  BigInt count = unordered_count;
  for (int p = 0; p < config.num_players; ++p) count *= hand_orders;
  return count;
}

std::string MethodName(Method method) {
  switch (method) {
    case Method::kTrue:
      return "true";
    case Method::kImportance:
      return "importance";
    case Method::kGibbs:
      return "gibbs";
  }
  return "?";
}

Method ParseMethod(const std::string& name) {
  if (name == "true") return Method::kTrue;
  if (name == "importance") return Method::kImportance;
  if (name == "gibbs") return Method::kGibbs;
  throw std::invalid_argument("unknown method " + name);
}

Evaluation::Evaluation(PublicState state, Policy policy, std::size_t cap)
    : policy_(std::move(policy)), belief_(Enumerate(state, policy_, cap)) {
  if (belief_.empty()) throw EmptyBeliefError("public state admits no history");
  values_ = MemberValues(belief_, policy_);
  exact_ = PbsValue(belief_, values_);
  cumulative_.resize(belief_.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < belief_.size(); ++i) {
    acc += belief_.members[i].probability;
    cumulative_[i] = acc;
    index_.emplace(KeyOf(belief_.members[i].history.deal), i);
  }
}

double Evaluation::Error(const std::vector<double>& estimate) const {
  double err = 0.0;
  for (std::size_t p = 0; p < exact_.size(); ++p) {
    err = std::max(err, std::abs(estimate[p] - exact_[p]));
  }
  return err;
}

std::size_t Evaluation::IndexOf(const Deal& deal) const {
  const auto it = index_.find(KeyOf(deal));
  if (it == index_.end()) throw ContractViolation("deal is not in the public belief state");
  return it->second;
}

std::size_t Evaluation::DrawFromRange(Rng& rng) const {
  const double u = UniformReal(rng) * cumulative_.back();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  return std::min<std::size_t>(it - cumulative_.begin(), cumulative_.size() - 1);
}

std::size_t Evaluation::DrawUniform(Rng& rng) const {
  return std::uniform_int_distribution<std::size_t>(0, belief_.size() - 1)(rng);
}

std::vector<double> MeanEstimate(const Evaluation& eval, std::span<const std::size_t> members) {
  std::vector<double> est(eval.exact_value().size(), 0.0);
  for (std::size_t m : members) {
    for (std::size_t p = 0; p < est.size(); ++p) est[p] += eval.member_values()[m][p];
  }
  for (double& v : est) v /= static_cast<double>(members.size());
  return est;
}

std::vector<double> SelfNormalizedEstimate(const Evaluation& eval,
                                           std::span<const std::size_t> members) {
  const PublicBeliefState& belief = eval.belief();
  std::vector<double> est(eval.exact_value().size(), 0.0);
  double weight_sum = 0.0;
  for (std::size_t m : members) {
    const double w = std::exp(belief.members[m].log_reach - belief.log_total);
    weight_sum += w;
    for (std::size_t p = 0; p < est.size(); ++p) est[p] += w * eval.member_values()[m][p];
  }
  for (double& v : est) v /= weight_sum;
  return est;
}

EstimateRecord EstimateTrue(const Evaluation& eval, int samples, Rng& rng) {
  std::vector<std::size_t> picks(samples);
  for (auto& m : picks) m = eval.DrawFromRange(rng);
  EstimateRecord rec;
  rec.method = Method::kTrue;
  rec.samples_used = samples;
  rec.estimate = MeanEstimate(eval, picks);
  rec.error = eval.Error(rec.estimate);
  return rec;
}

EstimateRecord EstimateImportance(const Evaluation& eval, int samples, Rng& rng) {
  std::vector<std::size_t> picks(samples);
  for (auto& m : picks) m = eval.DrawUniform(rng);
  EstimateRecord rec;
  rec.method = Method::kImportance;
  rec.samples_used = samples;
  rec.estimate = SelfNormalizedEstimate(eval, picks);
  rec.error = eval.Error(rec.estimate);
  return rec;
}

EstimateRecord EstimateGibbs(const Evaluation& eval, int samples, int thinning,
                             std::uint64_t chain_seed, InitMode init) {
  GibbsSampler sampler(eval.public_state(), eval.policy());
  ChainConfig cfg;
  cfg.thinning_interval = thinning;
  cfg.num_samples = samples;
  cfg.init_mode = init;
  cfg.rng_seed = chain_seed;
  std::vector<std::size_t> picks;
  picks.reserve(samples);
  const ChainState last = sampler.Run(
      cfg, [&](const ChainState& chain) { picks.push_back(eval.IndexOf(chain.deal())); },
      &eval.belief());
  EstimateRecord rec;
  rec.method = Method::kGibbs;
  rec.samples_used = samples;
  rec.thinning = thinning;
  rec.transitions = last.step_count;
  rec.estimate = MeanEstimate(eval, picks);
  rec.error = eval.Error(rec.estimate);
  return rec;
}

double MeanOf(std::span<const double> xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
}

std::optional<double> SemOf(std::span<const double> xs) {
  if (xs.size() < 2) return std::nullopt;
  const double mean = MeanOf(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double n = static_cast<double>(xs.size());
  return std::sqrt(ss / (n - 1.0) / n);
}

namespace {

struct Cell {
  Method method;
  int samples;
  int thinning;
};

std::vector<Cell> CellsOf(const SweepSpec& spec) {
  std::vector<Cell> cells;
  for (Method method : spec.methods) {
    for (int samples : spec.sample_grid) {
      if (method == Method::kGibbs) {
        for (int thinning : spec.thinning_grid) cells.push_back({method, samples, thinning});
      } else {
        cells.push_back({method, samples, 0});
      }
    }
  }
  return cells;
}

std::uint64_t ReplicateSeed(std::uint64_t seed, const Cell& cell, int replicate) {
  std::uint64_t id = HashCombine(static_cast<std::uint64_t>(cell.method),
                                 static_cast<std::uint64_t>(cell.samples));
  id = HashCombine(id, static_cast<std::uint64_t>(cell.thinning));
  return StreamSeed(seed, HashCombine(id, static_cast<std::uint64_t>(replicate)));
}

struct Outcome {
  double error = 0.0;
  std::int64_t transitions = 0;
  std::int64_t micros = 0;
};

Outcome RunReplicate(const Evaluation& eval, const Cell& cell, std::uint64_t seed, bool timing) {
  const auto start = std::chrono::steady_clock::now();
  EstimateRecord rec;
  if (cell.method == Method::kGibbs) {
    rec = EstimateGibbs(eval, cell.samples, cell.thinning, seed);
  } else {
    Rng rng = MakeRng(seed);
    rec = cell.method == Method::kTrue ? EstimateTrue(eval, cell.samples, rng)
                                       : EstimateImportance(eval, cell.samples, rng);
  }
  Outcome out{rec.error, rec.transitions, 0};
  if (timing) {
    out.micros = std::chrono::duration_cast<std::chrono::microseconds>(
                     std::chrono::steady_clock::now() - start)
                     .count();
  }
  return out;
}

std::vector<SweepRow> Collect(const SweepSpec& spec, const std::vector<Cell>& cells,
                              const std::vector<Outcome>& outcomes) {
  std::vector<SweepRow> rows;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    SweepRow row;
    row.instance_id = spec.instance_id;
    row.method = cells[c].method;
    row.samples = cells[c].samples;
    row.thinning = cells[c].thinning;
    std::int64_t micros = 0;
    for (int r = 0; r < spec.replicates; ++r) {
      const Outcome& o = outcomes[c * spec.replicates + r];
      row.errors.push_back(o.error);
      row.transitions = o.transitions;
      micros += o.micros;
    }
    row.error_mean = MeanOf(row.errors);
    row.error_sem = SemOf(row.errors);
    row.wall_ms = micros / 1000;
    rows.push_back(std::move(row));
  }
  return rows;
}

void CheckSpec(const SweepSpec& spec) {
  if (spec.replicates < 1) throw std::invalid_argument("replicates must be >= 1");
  for (int k : spec.sample_grid) {
    if (k < 1) throw std::invalid_argument("sample counts must be >= 1");
  }
  for (int t : spec.thinning_grid) {
    if (t < 1) throw std::invalid_argument("thinning intervals must be >= 1");
  }
}

}  // namespace

std::vector<SweepRow> SweepSerial(const Evaluation& eval, const SweepSpec& spec) {
  CheckSpec(spec);
  const std::vector<Cell> cells = CellsOf(spec);
  std::vector<Outcome> outcomes(cells.size() * spec.replicates);
  for (std::size_t t = 0; t < outcomes.size(); ++t) {
    const Cell& cell = cells[t / spec.replicates];
    const int r = static_cast<int>(t % spec.replicates);
    outcomes[t] = RunReplicate(eval, cell, ReplicateSeed(spec.seed, cell, r), spec.timing);
  }
  return Collect(spec, cells, outcomes);
}

std::vector<SweepRow> Sweep(const Evaluation& eval, const SweepSpec& spec) {
  CheckSpec(spec);
  const std::vector<Cell> cells = CellsOf(spec);
  const auto tasks = static_cast<std::int64_t>(cells.size() * spec.replicates);
  std::vector<Outcome> outcomes(tasks);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t t = 0; t < tasks; ++t) {
    const Cell& cell = cells[t / spec.replicates];
    const int r = static_cast<int>(t % spec.replicates);
    outcomes[t] = RunReplicate(eval, cell, ReplicateSeed(spec.seed, cell, r), spec.timing);
  }
  return Collect(spec, cells, outcomes);
}

void WriteSweepCsv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << kSweepCsvHeader << '\n';
  for (const SweepRow& row : rows) {
    out << row.instance_id << ',' << MethodName(row.method) << ',' << row.samples << ','
        << row.thinning << ',' << row.transitions << ',' << FormatDouble(row.error_mean) << ','
        << (row.error_sem ? FormatDouble(*row.error_sem) : "") << ',' << row.wall_ms << '\n';
  }
}

std::vector<SizeRegime> SizeRegimes() {
  return {
      {"192", GameConfig{3, 2, 4, 2, 10}, 1},
      {"12960", GameConfig{3, 3, 4, 3, 10}, 2},
      {"544320", GameConfig{3, 3, 4, 3, 10}, 1},
  };
}

std::vector<StatsCell> StatsTable(const std::vector<SizeRegime>& regimes,
                                  const std::vector<double>& biases, int replicates,
                                  std::uint64_t seed) {
  if (replicates < 1) throw std::invalid_argument("replicates must be >= 1");
  struct Sample {
    double histories = 0.0;
    double entropy = 0.0;
    double variance = 0.0;
    bool bound_ok = true;
  };
  const std::size_t num_cells = regimes.size() * biases.size();
  const auto tasks = static_cast<std::int64_t>(num_cells * replicates);
  std::vector<Sample> samples(tasks);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t t = 0; t < tasks; ++t) {
    const std::size_t cell = t / replicates;
    const std::size_t ri = cell / biases.size();
    const std::size_t bi = cell % biases.size();
    const int r = static_cast<int>(t % replicates);
    const std::uint64_t inst_seed = StreamSeed(seed, HashCombine(HashCombine(ri, bi), r));
    const BiasedRandomSpec spec{biases[bi], StreamSeed(inst_seed, 7)};
    const Policy policy = Policy::BiasedRandom(spec.bias, spec.seed);
    const Instance inst = GenerateInstance(regimes[ri].config, spec, policy,
                                           regimes[ri].tricks_played, inst_seed);
    const PublicBeliefState belief = Enumerate(inst.public_state, policy);
    const auto values = MemberValuesSerial(belief, policy);
    Sample& s = samples[t];
    s.histories = static_cast<double>(belief.size());
    s.entropy = PbsEntropy(belief);
    s.variance = PbsVariance(belief, values, 0);
    s.bound_ok = s.entropy <= std::log2(s.histories) + 1e-9;
  }
  std::vector<StatsCell> cells;
  for (std::size_t cell = 0; cell < num_cells; ++cell) {
    const SizeRegime& regime = regimes[cell / biases.size()];
    StatsCell out;
    out.label = regime.label;
    out.bias = biases[cell % biases.size()];
    out.instances = replicates;
    std::vector<double> histories;
    std::vector<double> variances;
    for (int r = 0; r < replicates; ++r) {
      const Sample& s = samples[cell * replicates + r];
      histories.push_back(s.histories);
      out.entropies.push_back(s.entropy);
      variances.push_back(s.variance);
      if (!s.bound_ok) ++out.entropy_bound_violations;
    }
    out.histories_mean = MeanOf(histories);
    out.ordered_histories_mean =
        out.histories_mean * OrderedHistoryCount(regime.config, 1).convert_to<double>();
    out.entropy_mean = MeanOf(out.entropies);
    out.entropy_sem = SemOf(out.entropies).value_or(0.0);
    out.variance_mean = MeanOf(variances);
    out.variance_sem = SemOf(variances).value_or(0.0);
    cells.push_back(std::move(out));
  }
  return cells;
}

void WriteStatsCsv(std::ostream& out, const std::vector<StatsCell>& cells) {
  out << kStatsCsvHeader << '\n';
  for (const StatsCell& c : cells) {
    out << c.label << ',' << FormatDouble(c.bias) << ',' << c.instances << ','
        << FormatDouble(c.histories_mean) << ',' << FormatDouble(c.ordered_histories_mean) << ','
        << FormatDouble(c.entropy_mean) << ',' << FormatDouble(c.entropy_sem) << ','
        << FormatDouble(c.variance_mean) << ',' << FormatDouble(c.variance_sem) << '\n';
  }
}

}  // namespace histfilter
