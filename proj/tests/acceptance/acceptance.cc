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

// End-to-end checks of the sampler, construction, counting and estimators
// against the exact enumeration. Prints one PASS/FAIL line per property.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "histfilter/assignment.h"
#include "histfilter/construction.h"
#include "histfilter/enumeration.h"
#include "histfilter/estimation.h"
#include "histfilter/gibbs.h"
#include "test_util.h"

namespace histfilter {
namespace {

using DealIndex = std::unordered_map<DealKey, std::size_t, DealKeyHash>;

struct Case {
  std::string name;
  PublicState state;
  Policy policy;
};

DealIndex IndexOf(const PublicBeliefState& belief) {
  DealIndex index;
  for (std::size_t i = 0; i < belief.size(); ++i) index[KeyOf(belief.members[i].history.deal)] = i;
  return index;
}

// Instances drawn by seed from a size regime, keeping those whose belief size
// lies in [lo, hi].
std::vector<Case> PickInstances(const SizeRegime& regime, std::size_t lo, std::size_t hi, int count,
                                std::uint64_t first_seed) {
  std::vector<Case> out;
  for (std::uint64_t seed = first_seed; static_cast<int>(out.size()) < count; ++seed) {
    if (seed > first_seed + 1000) throw std::runtime_error("no instance of the requested size");
    const Instance inst =
        GenerateInstance(regime.config, BiasedRandomSpec{0.7, seed}, regime.tricks_played, seed);
    const Policy policy = MakePolicy(inst.policy_spec, inst.config);
    const std::size_t n = Enumerate(inst.public_state, policy).size();
    if (n >= lo && n <= hi) {
      out.push_back({"regime " + regime.label + " seed " + std::to_string(seed), inst.public_state,
                     policy});
    }
  }
  return out;
}

Case ThreeDealCase() {
  return {"unique assignment, three deals", testing::ThreeDealState(), Policy::BiasedRandom(0.7, 1)};
}

Case QPolicyCase() {
  const GameConfig config = SizeRegimes()[0].config;
  TabularQSpec spec;
  spec.episodes = 20000;
  spec.seed = 5;
  const Policy policy = TrainQPolicies(config, spec);
  const Instance inst = GenerateInstance(config, spec, policy, 1, 21);
  return {"q-learning policy", inst.public_state, policy};
}

class Report {
 public:
  void Line(bool pass, const std::string& name, const std::string& detail, double seconds) {
    std::printf("%s  %-28s %s [%.1fs]\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str(),
                seconds);
    std::fflush(stdout);
    all_pass_ = all_pass_ && pass;
  }
  bool all_pass() const { return all_pass_; }

 private:
  bool all_pass_ = true;
};

double Seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string Fmt(const char* format, double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, x);
  return buf;
}

// Empirical deal distribution of one long chain against the exact belief.
void CheckStationarity(Report& report) {
  const auto start = std::chrono::steady_clock::now();
  constexpr std::int64_t kTransitions = 1'000'000;
  std::vector<Case> cases = PickInstances(SizeRegimes()[0], 10, 1000, 4, 0);
  for (Case& c : PickInstances(SizeRegimes()[1], 10, 1000, 2, 0)) cases.push_back(c);
  for (Case& c : PickInstances(SizeRegimes()[2], 10, 1000, 1, 0)) cases.push_back(c);
  cases.push_back(ThreeDealCase());
  double worst = 0.0;
  std::string detail;
  for (const Case& c : cases) {
    const PublicBeliefState belief = Enumerate(c.state, c.policy);
    const DealIndex index = IndexOf(belief);
    std::vector<std::int64_t> visits(belief.size(), 0);
    GibbsSampler sampler(c.state, c.policy);
    Rng rng = MakeRng(2024);
    ChainState state = sampler.Init(InitMode::kConstruct, rng);
    for (std::int64_t t = 0; t < kTransitions; ++t) {
      sampler.Step(state, rng);
      ++visits[index.at(KeyOf(state.deal()))];
    }
    double tv = 0.0;
    for (std::size_t i = 0; i < belief.size(); ++i) {
      tv += std::abs(static_cast<double>(visits[i]) / kTransitions - belief.members[i].probability);
    }
    tv *= 0.5;
    worst = std::max(worst, tv);
    detail += Fmt("%.4f", tv) + "(" + std::to_string(belief.size()) + ") ";
  }
  report.Line(worst < 0.02, "stationarity",
              std::to_string(cases.size()) + " instances, 1e6 transitions, TV(|H_S|): " + detail,
              Seconds(start));
}

void CheckDetailedBalance(Report& report) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<Case> cases = PickInstances(SizeRegimes()[0], 10, 1000, 3, 100);
  for (Case& c : PickInstances(SizeRegimes()[1], 10, 5000, 2, 100)) cases.push_back(c);
  cases.push_back(ThreeDealCase());
  cases.push_back(QPolicyCase());
  double worst = 0.0;
  int pairs = 0;
  bool ok = true;
  for (const Case& c : cases) {
    const PublicBeliefState belief = Enumerate(c.state, c.policy);
    const DealIndex index = IndexOf(belief);
    GibbsSampler sampler(c.state, c.policy);
    const ConstraintSummary& cons = sampler.constraints();
    Rng rng = MakeRng(77);
    for (int k = 0; k < 100; ++k) {
      const BeliefMember& from = belief.members[UniformInt(rng, 0, static_cast<int>(belief.size()) - 1)];
      const NeighborSet omega = ComputeNeighborSet(from.history.deal, cons);
      if (omega.total_deal_count == 0) continue;
      const Deal proposed = SampleNeighborDeal(from.history.deal, omega, cons, rng);
      const auto it = index.find(KeyOf(proposed));
      if (it == index.end()) {
        ok = false;
        continue;
      }
      const BeliefMember& to = belief.members[it->second];
      const double lhs = std::log(from.probability) +
                         sampler.LogTransitionProbability(from.history, to.history);
      const double rhs = std::log(to.probability) +
                         sampler.LogTransitionProbability(to.history, from.history);
      if (!std::isfinite(lhs) || !std::isfinite(rhs)) {
        ok = false;
        continue;
      }
      const double hi = std::max(lhs, rhs);
      // |a - b| / max(a, b) computed in log space.
      worst = std::max(worst, -std::expm1(std::min(lhs, rhs) - hi));
      ++pairs;
    }
  }
  report.Line(ok && worst <= 1e-9 && pairs >= 100 * static_cast<int>(cases.size()) / 2,
              "detailed balance",
              std::to_string(cases.size()) + " instances, " + std::to_string(pairs) +
                  " pairs, max relative gap " + Fmt("%.3g", worst),
              Seconds(start));
}

// Every deal reachable in the transition graph from a constructed history.
// A deal's neighbors are all deals of the neighbor assignments plus the other
// deals of its own assignment, so the search runs over assignments and then
// checks each reached assignment's deals once.
std::set<DealKey> Reachable(GibbsSampler& sampler, const History& root, const DealIndex& index,
                            const PublicBeliefState& belief, bool& escaped) {
  const ConstraintSummary& c = sampler.constraints();
  const SuitLengthMatrix start = MatrixOf(root.deal, c);
  std::unordered_map<SuitLengthMatrix, bool, SuitLengthMatrixHash> seen{{start, true}};
  std::queue<SuitLengthMatrix> frontier;
  frontier.push(start);
  std::set<DealKey> deals;
  const bool start_moves =
      DealCount(start, c) > 1 || !sampler.Neighborhood(start).assignments.empty();
  while (!frontier.empty()) {
    const SuitLengthMatrix a = frontier.front();
    frontier.pop();
    ForEachDealIn(a, c, [&](const Deal& e) {
      const auto it = index.find(KeyOf(e));
      if (it == index.end() || !std::isfinite(belief.members[it->second].log_reach)) {
        escaped = true;
        return;
      }
      if (start_moves || e == root.deal) deals.insert(KeyOf(e));
    });
    for (const SuitLengthMatrix& b : sampler.Neighborhood(a).assignments) {
      if (seen.emplace(b, true).second) frontier.push(b);
    }
  }
  return deals;
}

void CheckIrreducibility(Report& report) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<Case> cases{ThreeDealCase()};
  for (Case& c : PickInstances(SizeRegimes()[0], 10, 10000, 2, 200)) cases.push_back(c);
  for (Case& c : PickInstances(SizeRegimes()[1], 30, 10000, 2, 200)) cases.push_back(c);
  for (Case& c : PickInstances(SizeRegimes()[2], 1000, 10000, 1, 200)) cases.push_back(c);
  bool ok = true;
  std::string detail;
  for (const Case& c : cases) {
    const PublicBeliefState belief = Enumerate(c.state, c.policy);
    const DealIndex index = IndexOf(belief);
    GibbsSampler sampler(c.state, c.policy);
    Rng rng = MakeRng(5);
    const ChainState init = sampler.Init(InitMode::kConstruct, rng);
    bool escaped = false;
    const auto seen = Reachable(sampler, init.history, index, belief, escaped);
    ok = ok && !escaped && seen.size() == belief.size();
    detail += std::to_string(seen.size()) + "/" + std::to_string(belief.size()) + " ";
  }
  const ConstraintSummary unique = ExtractConstraints(testing::ThreeDealState());
  const auto unique_assignments = EnumerateAssignments(unique);
  const bool unique_pattern =
      unique_assignments.size() == 1 && DealCount(unique_assignments[0], unique) > 1;
  report.Line(ok && unique_pattern, "irreducibility",
              std::to_string(cases.size()) + " instances, reached/enumerated: " + detail,
              Seconds(start));
}

std::vector<PublicState> RandomPublicStates() {
  std::vector<PublicState> states{testing::ThreeDealState(), testing::ContradictoryState()};
  Rng rng = MakeRng(4242);
  const GameConfig small = SizeRegimes()[0].config;
  const GameConfig mid = SizeRegimes()[1].config;
  while (states.size() < 500) {
    states.push_back(testing::RandomStructuralState(small, UniformInt(rng, 0, 6), rng));
  }
  while (states.size() < 800) {
    states.push_back(testing::RandomStructuralState(mid, UniformInt(rng, 3, 9), rng));
  }
  for (std::uint64_t seed = 0; states.size() < 1000; ++seed) {
    const SizeRegime& r = SizeRegimes()[seed % 2];
    const double bias = 0.5 + 0.2 * static_cast<double>(seed % 3);
    states.push_back(
        GenerateInstance(r.config, BiasedRandomSpec{bias, seed}, UniformInt(rng, 1, 2), seed)
            .public_state);
  }
  return states;
}

void CheckConstructionAndCounting(Report& report) {
  auto start = std::chrono::steady_clock::now();
  const std::vector<PublicState> states = RandomPublicStates();
  const Policy policy = Policy::BiasedRandom(0.7, 3);
  int agree = 0, empty = 0, verified = 0, constructed = 0, counted = 0;
  bool counting_ok = true;
  Rng rng = MakeRng(31);
  for (const PublicState& s : states) {
    const auto h = ConstructHistory(s, policy, rng);
    const PublicBeliefState belief = Enumerate(s, policy);
    agree += (h.has_value() == !belief.empty()) ? 1 : 0;
    empty += belief.empty() ? 1 : 0;
    if (h) {
      ++constructed;
      verified += VerifyConsistency(s, *h, policy) ? 1 : 0;
    }
    const ConstraintSummary c = ExtractConstraints(s);
    BigInt total = 0;
    for (const SuitLengthMatrix& a : EnumerateAssignments(c)) total += DealCount(a, c);
    counting_ok = counting_ok && total == BigInt(belief.size());
    ++counted;
  }
  const int n = static_cast<int>(states.size());
  report.Line(agree == n && verified == constructed && empty > 0 && empty < n,
              "construction totality",
              std::to_string(n) + " public states (" + std::to_string(empty) +
                  " empty), agreement " + std::to_string(agree) + "/" + std::to_string(n) +
                  ", verified " + std::to_string(verified) + "/" + std::to_string(constructed),
              Seconds(start));

  start = std::chrono::steady_clock::now();
  // Larger beliefs on top of the random states above.
  for (const SizeRegime& r : SizeRegimes()) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const Instance inst = GenerateInstance(r.config, BiasedRandomSpec{0.7, seed}, r.tricks_played,
                                             seed);
      const ConstraintSummary c = ExtractConstraints(inst.public_state);
      BigInt total = 0;
      for (const SuitLengthMatrix& a : EnumerateAssignments(c)) total += DealCount(a, c);
      counting_ok = counting_ok && total == BigInt(Enumerate(inst.public_state, policy).size());
      ++counted;
    }
  }
  report.Line(counting_ok, "counting identity",
              std::to_string(counted) + " public states, sum of deal counts == |H_S|",
              Seconds(start));
}

void CheckEstimators(Report& report) {
  const auto start = std::chrono::steady_clock::now();
  const SizeRegime mid = SizeRegimes()[1];
  // First seed whose ordered-equivalent size is around 10^4.
  std::optional<Instance> chosen;
  for (std::uint64_t seed = 0; !chosen; ++seed) {
    const Instance inst =
        GenerateInstance(mid.config, BiasedRandomSpec{0.7, seed}, mid.tricks_played, seed);
    const std::size_t n =
        Enumerate(inst.public_state, MakePolicy(inst.policy_spec, inst.config)).size();
    const BigInt ordered = OrderedHistoryCount(mid.config, n);
    if (ordered >= 5000 && ordered <= 50000) chosen = inst;
  }
  const Evaluation eval(chosen->public_state, MakePolicy(chosen->policy_spec, chosen->config));
  SweepSpec spec;
  spec.sample_grid = {400};
  spec.thinning_grid = {20};
  spec.replicates = 100;
  spec.seed = 20240607;
  const auto rows = Sweep(eval, spec);
  const SweepRow* rows_by_method[3] = {nullptr, nullptr, nullptr};
  for (const SweepRow& row : rows) rows_by_method[static_cast<int>(row.method)] = &row;
  const SweepRow& truth = *rows_by_method[0];
  const SweepRow& imp = *rows_by_method[1];
  const SweepRow& gibbs = *rows_by_method[2];
  std::vector<double> diff;
  for (std::size_t r = 0; r < imp.errors.size(); ++r) diff.push_back(imp.errors[r] - gibbs.errors[r]);
  const double slack = 2.0 * SemOf(diff).value_or(0.0);
  const bool ok = gibbs.transitions == 8000 && gibbs.error_mean <= 1.5 * truth.error_mean &&
                  gibbs.error_mean <= imp.error_mean + slack;
  report.Line(ok, "transition accounting",
              "|H_S|=" + std::to_string(eval.belief().size()) + " (ordered " +
                  OrderedHistoryCount(mid.config, eval.belief().size()).str() +
                  "), transitions " + std::to_string(gibbs.transitions) + ", error true " +
                  Fmt("%.4f", truth.error_mean) + " gibbs " + Fmt("%.4f", gibbs.error_mean) +
                  " importance " + Fmt("%.4f", imp.error_mean) + " (2 SEM " +
                  Fmt("%.4f", slack) + ")",
              Seconds(start));
}

void CheckEntropyTrend(Report& report) {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<double> biases{0.5, 0.7, 0.9};
  const auto cells = StatsTable(SizeRegimes(), biases, 100, 99);
  bool ok = true;
  std::string detail;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    ok = ok && cells[i].entropy_bound_violations == 0 && cells[i].instances == 100;
    if (i % biases.size() != 0) ok = ok && cells[i].entropy_mean < cells[i - 1].entropy_mean;
    if (i % biases.size() == 0) detail += cells[i].label + ":";
    detail += " " + Fmt("%.3f", cells[i].entropy_mean);
    if (i % biases.size() == biases.size() - 1) detail += "; ";
  }
  report.Line(ok, "entropy trend", "mean entropy by bias 0.5/0.7/0.9: " + detail, Seconds(start));
}

// Every public state of the one-suit, three-rank, one-card game.
std::vector<PublicState> AllTinyPublicStates() {
  const GameConfig config{2, 1, 3, 1, 10};
  std::vector<PublicState> out;
  std::function<void(const WorldState&, std::vector<Step>&)> walk = [&](const WorldState& w,
                                                                       std::vector<Step>& steps) {
    if (w.phase != Phase::kBidding) {
      out.push_back(PublicStateOf(History{config, w.deal, steps}));
    }
    if (w.phase == Phase::kTerminal) return;
    for (const Action& a : LegalActions(w)) {
      steps.push_back({w.to_act, a});
      walk(ApplyAction(w, a), steps);
      steps.pop_back();
    }
  };
  for (int up = 0; up < 3; ++up) {
    for (int c0 = 0; c0 < 3; ++c0) {
      if (c0 == up) continue;
      const int c1 = 3 - up - c0;
      std::vector<Step> steps;
      walk(InitialState(config, Deal{{CardBit(c0), CardBit(c1)}, up, 0}), steps);
    }
  }
  std::sort(out.begin(), out.end(), [](const PublicState& a, const PublicState& b) {
    return std::tie(a.trump_upcard, a.bids) < std::tie(b.trump_upcard, b.bids) ||
           (std::tie(a.trump_upcard, a.bids) == std::tie(b.trump_upcard, b.bids) &&
            a.plays.size() < b.plays.size()) ||
           (std::tie(a.trump_upcard, a.bids) == std::tie(b.trump_upcard, b.bids) &&
            a.plays.size() == b.plays.size() &&
            std::lexicographical_compare(
                a.plays.begin(), a.plays.end(), b.plays.begin(), b.plays.end(),
                [](const TrickCard& x, const TrickCard& y) {
                  return std::tie(x.player, x.card) < std::tie(y.player, y.card);
                }));
  });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void CheckValueOracle(Report& report) {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<PublicState> states = AllTinyPublicStates();
  std::vector<Policy> policies{Policy::Uniform()};
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    for (double bias : {0.5, 0.7, 0.9}) policies.push_back(Policy::BiasedRandom(bias, seed));
  }
  double worst = 0.0;
  int checks = 0;
  for (const Policy& policy : policies) {
    for (const PublicState& s : states) {
      const auto expected = testing::BruteForcePbsValue(s, policy);
      const auto value = PbsValue(Enumerate(s, policy), policy);
      for (std::size_t p = 0; p < value.size(); ++p) {
        worst = std::max(worst, std::abs(value[p] - expected[p]));
      }
      ++checks;
    }
  }
  report.Line(worst <= 1e-10, "value oracle",
              std::to_string(checks) + " (public state, policy) pairs, max deviation " +
                  Fmt("%.3g", worst),
              Seconds(start));
}

}  // namespace
}  // namespace histfilter

int main(int argc, char** argv) {
  // Optional arguments restrict the run to the named checks.
  const std::vector<std::string> only(argv + 1, argv + argc);
  const auto wanted = [&](const std::string& name) {
    return only.empty() || std::find(only.begin(), only.end(), name) != only.end();
  };
  histfilter::Report report;
  if (wanted("stationarity")) histfilter::CheckStationarity(report);
  if (wanted("balance")) histfilter::CheckDetailedBalance(report);
  if (wanted("irreducibility")) histfilter::CheckIrreducibility(report);
  if (wanted("construction")) histfilter::CheckConstructionAndCounting(report);
  if (wanted("estimators")) histfilter::CheckEstimators(report);
  if (wanted("entropy")) histfilter::CheckEntropyTrend(report);
  if (wanted("values")) histfilter::CheckValueOracle(report);
  return report.all_pass() ? 0 : 1;
}
