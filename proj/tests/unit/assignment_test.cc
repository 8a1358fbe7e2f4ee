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

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "histfilter/assignment.h"
#include "histfilter/enumeration.h"
#include "histfilter/policy.h"
#include "test_util.h"

namespace histfilter {
namespace {

SuitLengthMatrix Matrix(int rows, int cols, std::vector<int> entries,
                        std::vector<std::uint8_t> voids = {}) {
  SuitLengthMatrix m;
  m.rows = rows;
  m.cols = cols;
  m.entries = std::move(entries);
  m.void_mask = voids.empty() ? std::vector<std::uint8_t>(rows * cols, 0) : std::move(voids);
  m.row_sums.assign(rows, 0);
  m.col_sums.assign(cols, 0);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      m.row_sums[i] += m.at(i, j);
      m.col_sums[j] += m.at(i, j);
    }
  }
  return m;
}

std::set<std::vector<int>> EntriesOf(const std::vector<SuitLengthMatrix>& ms) {
  std::set<std::vector<int>> out;
  for (const auto& m : ms) out.insert(m.entries);
  return out;
}

TEST_CASE("ring swap on a 2x2 matrix") {
  const auto n = RingSwap(Matrix(2, 2, {1, 1, 1, 1}));
  CHECK(EntriesOf(n) == std::set<std::vector<int>>{{2, 0, 0, 2}, {0, 2, 2, 0}});
  CHECK(n.size() == 2);
}

TEST_CASE("ring swap respects voids") {
  CHECK(RingSwap(Matrix(2, 2, {2, 0, 0, 2}, {0, 1, 0, 0})).empty());
  const auto n = RingSwap(Matrix(3, 2, {1, 0, 1, 1, 0, 1}, {0, 1, 0, 0, 0, 0}));
  for (const auto& m : n) {
    CHECK(m.IsValid());
    CHECK(m.at(0, 1) == 0);
  }
  CHECK(EntriesOf(n) == std::set<std::vector<int>>{{1, 0, 0, 2, 1, 0}});
}

TEST_CASE("ring swap moves across three rows") {
  // Row 0 can only trade with row 2 through row 1 because of the voids.
  const auto m = Matrix(3, 3, {1, 1, 0, 0, 1, 1, 1, 0, 1},
                        {0, 0, 1, 1, 0, 0, 0, 1, 0});
  const auto n = RingSwap(m);
  for (const auto& b : n) {
    CHECK(b.IsValid());
    CHECK_FALSE(b == m);
  }
  CHECK(EntriesOf(n).count({0, 2, 0, 0, 0, 2, 2, 0, 0}) == 1);
  CHECK(EntriesOf(n).count({2, 0, 0, 0, 2, 0, 0, 0, 2}) == 1);
}

TEST_CASE("ring swap neighborhoods are symmetric and connect all assignments") {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const Instance inst = testing::SmallInstance(seed, static_cast<int>(seed % 3));
    const ConstraintSummary c = ExtractConstraints(inst.public_state);
    const auto all = EnumerateAssignments(c);
    std::map<std::vector<int>, std::set<std::vector<int>>> graph;
    for (const auto& a : all) graph[a.entries] = EntriesOf(RingSwap(a));
    for (const auto& [a, ns] : graph) {
      for (const auto& b : ns) {
        REQUIRE(graph.count(b) == 1);
        CHECK(graph[b].count(a) == 1);
      }
    }
    std::set<std::vector<int>> seen{all.front().entries};
    std::vector<std::vector<int>> frontier{all.front().entries};
    while (!frontier.empty()) {
      const auto a = frontier.back();
      frontier.pop_back();
      for (const auto& b : graph[a]) {
        if (seen.insert(b).second) frontier.push_back(b);
      }
    }
    CHECK(seen.size() == all.size());
  }
}

TEST_CASE("deal counts add up to the belief size") {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const Instance inst = testing::SmallInstance(seed, static_cast<int>(seed % 3));
    const ConstraintSummary c = ExtractConstraints(inst.public_state);
    BigInt total = 0;
    for (const auto& a : EnumerateAssignments(c)) {
      const BigInt n = DealCount(a, c);
      total += n;
      std::size_t visited = 0;
      ForEachDealIn(a, c, [&](const Deal& d) {
        ++visited;
        CHECK(MatrixOf(d, c) == a);
      });
      CHECK(BigInt(visited) == n);
    }
    const auto belief = Enumerate(inst.public_state, Policy::BiasedRandom(0.7, seed));
    CHECK(total == BigInt(belief.size()));
  }
}

TEST_CASE("sampling within an assignment is uniform") {
  const Instance inst = testing::SmallInstance(4, 0);
  const ConstraintSummary c = ExtractConstraints(inst.public_state);
  const auto all = EnumerateAssignments(c);
  const auto it = std::max_element(all.begin(), all.end(), [&](const auto& x, const auto& y) {
    return DealCount(x, c) < DealCount(y, c);
  });
  const int n = static_cast<int>(DealCount(*it, c));
  REQUIRE(n >= 6);
  std::map<DealKey, int> counts;
  ForEachDealIn(*it, c, [&](const Deal& d) { counts[KeyOf(d)] = 0; });
  Rng rng = MakeRng(1);
  const int draws = 2000 * n;
  for (int i = 0; i < draws; ++i) {
    const Deal d = SampleDealIn(*it, c, rng);
    REQUIRE(counts.count(KeyOf(d)) == 1);
    ++counts[KeyOf(d)];
  }
  const double sd = std::sqrt(2000.0 * (1.0 - 1.0 / n));
  for (const auto& [key, k] : counts) CHECK(std::abs(k - 2000.0) < 5.0 * sd);
}

TEST_CASE("neighbor sets of the three-deal fixture") {
  const PublicState s = testing::ThreeDealState();
  const ConstraintSummary c = ExtractConstraints(s);
  const auto all = EnumerateAssignments(c);
  REQUIRE(all.size() == 1);
  CHECK(DealCount(all[0], c) == 3);
  const NeighborSet omega = NeighborSetOf(all[0], c);
  CHECK(omega.assignments.empty());
  CHECK(omega.total_deal_count == 2);
  Rng rng = MakeRng(3);
  Deal d = SampleDealIn(all[0], c, rng);
  for (int i = 0; i < 50; ++i) {
    int chosen = 0;
    const Deal e = SampleNeighborDeal(d, omega, c, rng, &chosen);
    CHECK(chosen == -1);
    CHECK_FALSE(e == d);
    CHECK(MatrixOf(e, c) == all[0]);
    d = e;
  }
}

TEST_CASE("neighbor deal proposals stay in the neighborhood") {
  const Instance inst = testing::SmallInstance(6, 1);
  const ConstraintSummary c = ExtractConstraints(inst.public_state);
  const auto all = EnumerateAssignments(c);
  Rng rng = MakeRng(8);
  for (const auto& a : all) {
    const Deal d = SampleDealIn(a, c, rng);
    const NeighborSet omega = ComputeNeighborSet(d, c);
    BigInt sum = omega.self_count - 1;
    for (const auto& n : omega.deal_counts) sum += n;
    CHECK(sum == omega.total_deal_count);
    if (omega.total_deal_count == 0) continue;
    const auto neighbors = EntriesOf(omega.assignments);
    for (int i = 0; i < 20; ++i) {
      const Deal e = SampleNeighborDeal(d, omega, c, rng);
      CHECK_FALSE(e == d);
      const auto m = MatrixOf(e, c);
      CHECK((m == a || neighbors.count(m.entries) == 1));
    }
  }
}

}  // namespace
}  // namespace histfilter
