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

#ifndef HISTFILTER_ASSIGNMENT_H_
#define HISTFILTER_ASSIGNMENT_H_

// Suit-length assignments: how many unknown cards of each suit every holder
// (players, then the kitty) receives. Row sums are the holders' unknown card
// counts, column sums the unknown pool sizes, void cells are pinned to zero.

#include <compare>
#include <cstddef>
#include <functional>
#include <vector>

#include "histfilter/game.h"
#include "histfilter/observation.h"
#include "histfilter/rng.h"

namespace histfilter {

struct SuitLengthMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<int> entries;  // row-major
  std::vector<int> row_sums;
  std::vector<int> col_sums;
  std::vector<std::uint8_t> void_mask;  // row-major

  int at(int row, int col) const { return entries[row * cols + col]; }
  int& at(int row, int col) { return entries[row * cols + col]; }
  bool IsVoid(int row, int col) const { return void_mask[row * cols + col] != 0; }
  bool IsValid() const;

  bool operator==(const SuitLengthMatrix& other) const { return entries == other.entries; }
};

struct SuitLengthMatrixHash {
  std::size_t operator()(const SuitLengthMatrix& m) const;
};

// Zero matrix carrying the sums and voids of `c`.
SuitLengthMatrix BlankAssignment(const ConstraintSummary& c);
SuitLengthMatrix MakeAssignment(const ConstraintSummary& c, std::vector<int> entries);

// Throws ContractViolation when the deal does not respect the public cards.
SuitLengthMatrix MatrixOf(const Deal& deal, const ConstraintSummary& c);

// Neighbors of `a` reachable by one ring of swaps: an initial swap inside one
// row, then corrective swaps in distinct other rows until the column sums are
// restored. Deduplicated, never contains `a`.
std::vector<SuitLengthMatrix> RingSwap(const SuitLengthMatrix& a);

// Number of concrete deals realizing `a`: prod_j |pool_j|! / prod_i a_ij!.
BigInt DealCount(const SuitLengthMatrix& a, const ConstraintSummary& c);

// Every matrix satisfying the sums and voids of `c`.
std::vector<SuitLengthMatrix> EnumerateAssignments(const ConstraintSummary& c);

// The deal with the given unknown cards per row plus the publicly forced ones.
Deal AssembleDeal(const ConstraintSummary& c, const std::vector<CardSet>& row_cards);

// Uniform over the DealCount(a, c) deals realizing `a`.
Deal SampleDealIn(const SuitLengthMatrix& a, const ConstraintSummary& c, Rng& rng);

// Calls `visit` on every deal realizing `a`, in a fixed order.
void ForEachDealIn(const SuitLengthMatrix& a, const ConstraintSummary& c,
                   const std::function<void(const Deal&)>& visit);

// Deal-level neighborhood: every deal of a ring-swap neighbor assignment plus
// the other deals of the current assignment.
struct NeighborSet {
  SuitLengthMatrix current;
  std::vector<SuitLengthMatrix> assignments;
  std::vector<BigInt> deal_counts;  // parallel to assignments
  bool include_self = true;
  BigInt self_count;                // DealCount(current)
  BigInt total_deal_count;          // |Omega|
};

NeighborSet NeighborSetOf(const SuitLengthMatrix& current, const ConstraintSummary& c);
NeighborSet ComputeNeighborSet(const Deal& deal, const ConstraintSummary& c);

// Uniform draw from the neighborhood of `deal`, whose assignment has
// neighborhood `omega`. Requires omega.total_deal_count > 0. `chosen`
// receives the index of the drawn assignment, or -1 for the current one.
Deal SampleNeighborDeal(const Deal& deal, const NeighborSet& omega, const ConstraintSummary& c,
                        Rng& rng, int* chosen = nullptr);

// Compact deal identity: the card set of every row.
struct DealKey {
  std::vector<CardSet> rows;
  auto operator<=>(const DealKey&) const = default;
};
struct DealKeyHash {
  std::size_t operator()(const DealKey& key) const;
};
DealKey KeyOf(const Deal& deal);

}  // namespace histfilter

#endif  // HISTFILTER_ASSIGNMENT_H_
