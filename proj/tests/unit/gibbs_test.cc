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

#include <doctest.h>

#include <cmath>
#include <set>

#include "histfilter/assignment.h"
#include "histfilter/errors.h"
#include "histfilter/gibbs.h"
#include "test_util.h"

namespace histfilter {
namespace {

TEST_CASE("acceptance probability") {
  CHECK(AcceptanceProbability(0.0, 4, 0.0, 4) == 1.0);
  CHECK(AcceptanceProbability(0.0, 4, std::log(0.5), 4) == doctest::Approx(0.5));
  CHECK(AcceptanceProbability(0.0, 2, 0.0, 4) == doctest::Approx(0.5));
  CHECK(AcceptanceProbability(0.0, 4, 0.0, 2) == 1.0);
  CHECK(AcceptanceProbability(0.0, BigInt(1) << 200, 0.0, BigInt(3) << 199) ==
        doctest::Approx(2.0 / 3.0));
}

TEST_CASE("chain config validation") {
  ChainConfig cfg;
  CHECK_NOTHROW(cfg.Validate());
  cfg.thinning_interval = 0;
  CHECK_THROWS_AS(cfg.Validate(), std::invalid_argument);
}

TEST_CASE("chain states stay consistent with the public state") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const Instance inst = testing::SmallInstance(seed, 1);
    const Policy policy = MakePolicy(inst.policy_spec, inst.config);
    GibbsSampler sampler(inst.public_state, policy);
    Rng rng = MakeRng(seed);
    ChainState state = sampler.Init(InitMode::kConstruct, rng);
    for (int i = 0; i < 200; ++i) {
      sampler.Step(state, rng);
      REQUIRE(VerifyConsistency(inst.public_state, state.history, policy));
      CHECK(state.assignment == MatrixOf(state.deal(), sampler.constraints()));
      CHECK(state.log_reach == doctest::Approx(UnnormalizedLogReach(state.history, policy)));
    }
    CHECK(state.step_count == 200);
    CHECK(state.accepted > 0);
  }
}

TEST_CASE("the chain moves between all deals of the three-deal fixture") {
  GibbsSampler sampler(testing::ThreeDealState(), Policy::BiasedRandom(0.7, 1));
  ChainConfig cfg;
  cfg.thinning_interval = 1;
  cfg.num_samples = 200;
  std::set<DealKey> seen;
  for (const History& h : sampler.Run(cfg)) seen.insert(KeyOf(h.deal));
  CHECK(seen.size() == 3);
}

TEST_CASE("runs are reproducible and stream-separated") {
  const Instance inst = testing::SmallInstance(2, 1);
  const Policy policy = MakePolicy(inst.policy_spec, inst.config);
  ChainConfig cfg;
  cfg.num_samples = 30;
  cfg.thinning_interval = 3;
  cfg.rng_seed = 11;
  const auto a = RunChain(inst.public_state, policy, cfg);
  CHECK(a.size() == 30);
  CHECK(a == RunChain(inst.public_state, policy, cfg));
  cfg.chain_id = 1;
  CHECK_FALSE(a == RunChain(inst.public_state, policy, cfg));

  GibbsSampler sampler(inst.public_state, policy);
  cfg.discard_prefix = 7;
  const ChainState last = sampler.Run(cfg, [](const ChainState&) {});
  CHECK(last.step_count == 7 + 30 * 3);
}

TEST_CASE("empty beliefs cannot start a chain") {
  GibbsSampler sampler(testing::ContradictoryState(), Policy::Uniform());
  Rng rng = MakeRng(0);
  CHECK_THROWS_AS(sampler.Init(InitMode::kConstruct, rng), EmptyBeliefError);
  CHECK_THROWS_AS(sampler.Init(InitMode::kUniformExact, rng), EmptyBeliefError);
}

TEST_CASE("transition probabilities are normalized") {
  const Instance inst = testing::SmallInstance(3, 1);
  const Policy policy = MakePolicy(inst.policy_spec, inst.config);
  const PublicBeliefState b = Enumerate(inst.public_state, policy);
  GibbsSampler sampler(inst.public_state, policy);
  for (std::size_t i = 0; i < std::min<std::size_t>(b.size(), 10); ++i) {
    const History& from = b.members[i].history;
    double leave = 0.0;
    for (const auto& m : b.members) {
      if (m.history == from) continue;
      const double lq = sampler.LogTransitionProbability(from, m.history);
      if (std::isfinite(lq)) leave += std::exp(lq);
    }
    CHECK(leave <= 1.0 + 1e-12);
    CHECK(leave >= 0.0);
  }
}

}  // namespace
}  // namespace histfilter
