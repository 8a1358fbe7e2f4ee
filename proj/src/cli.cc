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

#include "histfilter/cli.h"

#include <omp.h>

#include <cmath>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "histfilter/construction.h"
#include "histfilter/enumeration.h"
#include "histfilter/errors.h"
#include "histfilter/estimation.h"
#include "histfilter/gibbs.h"
#include "histfilter/json_io.h"

#ifndef HISTFILTER_VERSION
#define HISTFILTER_VERSION "dev"
#endif

namespace histfilter {

namespace {

// Bad input rather than a domain outcome.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json LoadJson(const std::string& input) {
  std::string text;
  if (!input.empty() && input.front() == '{') {
    text = input;
  } else if (input == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  } else {
    std::ifstream in(input);
    if (!in) throw UsageError("cannot open " + input);
    text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  return Json::parse(text);
}

std::string FormatDouble(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct Common {
  std::string input;
  std::uint64_t seed = 0;
  int jobs = 0;
};

void ApplyJobs(int jobs) {
  if (jobs > 0) omp_set_num_threads(jobs);
}

int GenInstance(const GameConfig& config, int tricks, std::uint64_t seed, const std::string& policy,
                std::ostream& out) {
  const PolicySpec spec = PolicySpecFromJson(Json::parse(policy));
  out << ToJson(GenerateInstance(config, spec, tricks, seed)).dump() << '\n';
  return kExitOk;
}

int EnumerateCmd(const Common& common, std::size_t cap, const std::string& table,
                 std::ostream& out) {
  const Instance inst = InstanceFromJson(LoadJson(common.input));
  ApplyJobs(common.jobs);
  const Policy policy = MakePolicy(inst.policy_spec, inst.config);
  const PublicBeliefState belief = Enumerate(inst.public_state, policy, cap);
  const auto values = MemberValues(belief, policy);
  if (!table.empty()) {
    std::ofstream file;
    std::ostream* sink = &out;
    if (table != "-") {
      file.open(table);
      if (!file) throw UsageError("cannot write " + table);
      sink = &file;
    }
    *sink << "deal_encoding,unnormalized_reach,probability";
    for (int p = 0; p < inst.config.num_players; ++p) *sink << ",value_p" << p;
    *sink << '\n';
    for (std::size_t i = 0; i < belief.size(); ++i) {
      const BeliefMember& m = belief.members[i];
      *sink << DealEncoding(m.history.deal) << ',' << FormatDouble(std::exp(m.log_reach)) << ','
            << FormatDouble(m.probability);
      for (double v : values[i]) *sink << ',' << FormatDouble(v);
      *sink << '\n';
    }
    if (table == "-") return kExitOk;
  }
  Json summary{{"histories", belief.size()},
               {"ordered_histories", OrderedHistoryCount(inst.config, belief.size()).str()},
               {"entropy", PbsEntropy(belief)}};
  Json variance = Json::array();
  for (int p = 0; p < inst.config.num_players; ++p) {
    variance.push_back(belief.empty() ? 0.0 : PbsVariance(belief, values, p));
  }
  summary["variance"] = variance;
  summary["value"] = belief.empty() ? Json::array() : Json(PbsValue(belief, values));
  out << summary.dump() << '\n';
  return kExitOk;
}

int ConstructCmd(const Common& common, std::ostream& out) {
  const Instance inst = InstanceFromJson(LoadJson(common.input));
  const Policy policy = MakePolicy(inst.policy_spec, inst.config);
  Rng rng = MakeRng(common.seed);
  const std::optional<History> h = ConstructHistory(inst.public_state, policy, rng);
  if (!h) {
    out << "EMPTY\n";
  } else {
    out << ToJson(*h).dump() << '\n';
  }
  return kExitOk;
}

int SampleCmd(const Common& common, const ChainConfig& cfg, std::ostream& out) {
  const Instance inst = InstanceFromJson(LoadJson(common.input));
  const Policy policy = MakePolicy(inst.policy_spec, inst.config);
  GibbsSampler sampler(inst.public_state, policy);
  sampler.Run(cfg, [&](const ChainState& chain) { out << ToJson(chain.history).dump() << '\n'; });
  return kExitOk;
}

std::vector<int> ParseIntList(const std::string& csv) {
  std::vector<int> xs;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) xs.push_back(std::stoi(item));
  }
  return xs;
}

int EstimateCmd(const Common& common, SweepSpec spec, const std::string& methods,
                const std::string& samples, const std::string& thinning, std::ostream& out) {
  spec.methods.clear();
  std::stringstream ss(methods);
  std::string item;
  while (std::getline(ss, item, ',')) spec.methods.push_back(ParseMethod(item));
  spec.sample_grid = ParseIntList(samples);
  spec.thinning_grid = ParseIntList(thinning);
  spec.seed = common.seed;
  const Instance inst = InstanceFromJson(LoadJson(common.input));
  ApplyJobs(common.jobs);
  const Evaluation eval(inst.public_state, MakePolicy(inst.policy_spec, inst.config));
  WriteSweepCsv(out, Sweep(eval, spec));
  return kExitOk;
}

int StatsCmd(const Common& common, int replicates, const std::string& biases,
             const std::vector<std::string>& regimes, std::ostream& out) {
  std::vector<double> bias_list;
  std::stringstream ss(biases);
  std::string item;
  while (std::getline(ss, item, ',')) bias_list.push_back(std::stod(item));
  std::vector<SizeRegime> chosen;
  for (const SizeRegime& r : SizeRegimes()) {
    if (regimes.empty() || std::find(regimes.begin(), regimes.end(), r.label) != regimes.end()) {
      chosen.push_back(r);
    }
  }
  if (chosen.empty()) throw UsageError("no matching size regime");
  ApplyJobs(common.jobs);
  WriteStatsCsv(out, StatsTable(chosen, bias_list, replicates, common.seed));
  return kExitOk;
}

}  // namespace

std::string VersionString() { return std::string("histfilter ") + HISTFILTER_VERSION; }

int RunCli(int argc, const char* const argv[], std::ostream& out, std::ostream& err) {
  CLI::App app{"History filtering for public belief states in Oh Hell"};
  app.set_version_flag("--version", VersionString());
  app.require_subcommand(1);

  Common common;
  auto add_input = [&](CLI::App* sub) {
    sub->add_option("input", common.input, "instance JSON file, '-' for stdin, or inline JSON")
        ->required();
  };
  auto add_seed = [&](CLI::App* sub) { sub->add_option("--seed", common.seed, "RNG seed"); };

  GameConfig gen_config;
  int gen_tricks = 1;
  std::string gen_regime;
  std::string gen_policy = R"({"type":"biased","bias":0.7,"seed":0})";
  auto* gen = app.add_subcommand("gen-instance", "generate a random public state by self-play");
  gen->add_option("--regime", gen_regime, "preset: 192, 12960 or 544320");
  gen->add_option("--players", gen_config.num_players);
  gen->add_option("--suits", gen_config.num_suits);
  gen->add_option("--ranks", gen_config.num_ranks);
  gen->add_option("--hand-size", gen_config.hand_size);
  gen->add_option("--bonus", gen_config.scoring_bonus);
  gen->add_option("--tricks-played", gen_tricks);
  gen->add_option("--policy", gen_policy, "policy JSON");
  add_seed(gen);

  std::size_t cap = kDefaultMemberCap;
  std::string table;
  auto* enumerate = app.add_subcommand("enumerate", "enumerate H_S exactly");
  add_input(enumerate);
  enumerate->add_option("--cap", cap, "maximum number of histories");
  enumerate->add_option("--table", table, "write the member table as CSV ('-' for stdout)");
  enumerate->add_option("--jobs", common.jobs, "OpenMP threads");

  auto* construct = app.add_subcommand("construct", "construct one history via max flow");
  add_input(construct);
  add_seed(construct);

  ChainConfig chain;
  std::string init = "construct";
  auto* sample = app.add_subcommand("sample", "run the Gibbs chain");
  add_input(sample);
  add_seed(sample);
  sample->add_option("--thinning", chain.thinning_interval)->check(CLI::PositiveNumber);
  sample->add_option("--samples", chain.num_samples)->check(CLI::PositiveNumber);
  sample->add_option("--discard", chain.discard_prefix)->check(CLI::NonNegativeNumber);
  sample->add_option("--init", init)->check(CLI::IsMember({"construct", "uniform"}));

  SweepSpec sweep;
  std::string methods = "true,importance,gibbs";
  std::string samples = "400";
  std::string thinning = "20";
  auto* estimate = app.add_subcommand("estimate", "value-estimation error sweep (CSV)");
  add_input(estimate);
  add_seed(estimate);
  estimate->add_option("--methods", methods);
  estimate->add_option("--samples", samples, "comma-separated sample counts");
  estimate->add_option("--thinning", thinning, "comma-separated thinning intervals");
  estimate->add_option("--replicates", sweep.replicates)->check(CLI::PositiveNumber);
  estimate->add_option("--instance-id", sweep.instance_id);
  estimate->add_flag("--timing", sweep.timing, "record wall_ms (output is then not reproducible)");
  estimate->add_option("--jobs", common.jobs, "OpenMP threads");

  int stats_replicates = 100;
  std::string biases = "0.5,0.7,0.9";
  std::vector<std::string> regimes;
  auto* stats = app.add_subcommand("stats", "entropy/variance table of random belief states");
  add_seed(stats);
  stats->add_option("--replicates", stats_replicates)->check(CLI::PositiveNumber);
  stats->add_option("--biases", biases);
  stats->add_option("--regime", regimes, "restrict to these size regimes");
  stats->add_option("--jobs", common.jobs, "OpenMP threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsageError;
  }

  try {
    if (gen->parsed()) {
      if (!gen_regime.empty()) {
        bool found = false;
        for (const SizeRegime& r : SizeRegimes()) {
          if (r.label != gen_regime) continue;
          const int bonus = gen_config.scoring_bonus;
          gen_config = r.config;
          gen_config.scoring_bonus = bonus;
          if (gen->count("--tricks-played") == 0) gen_tricks = r.tricks_played;
          found = true;
        }
        if (!found) throw UsageError("unknown regime " + gen_regime);
      }
      return GenInstance(gen_config, gen_tricks, common.seed, gen_policy, out);
    }
    if (enumerate->parsed()) return EnumerateCmd(common, cap, table, out);
    if (construct->parsed()) return ConstructCmd(common, out);
    if (sample->parsed()) {
      chain.rng_seed = common.seed;
      chain.init_mode = init == "uniform" ? InitMode::kUniformExact : InitMode::kConstruct;
      return SampleCmd(common, chain, out);
    }
    if (estimate->parsed()) return EstimateCmd(common, sweep, methods, samples, thinning, out);
    if (stats->parsed()) return StatsCmd(common, stats_replicates, biases, regimes, out);
  } catch (const Json::exception& e) {
    err << "error: malformed JSON: " << e.what() << '\n';
    return kExitUsageError;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsageError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsageError;
  } catch (const ConfigError& e) {
    err << "error: invalid config: " << e.what() << '\n';
    return kExitUsageError;
  } catch (const InconsistencyError& e) {
    err << "error: malformed public state: " << e.what() << '\n';
    return kExitUsageError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomainError;
  }
  return kExitUsageError;
}

}  // namespace histfilter
