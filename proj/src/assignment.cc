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

#include "histfilter/assignment.h"

#include <algorithm>
#include <deque>
#include <limits>
#include <random>
#include <unordered_set>

#include <boost/random/uniform_int_distribution.hpp>

#include "histfilter/errors.h"

namespace histfilter {

bool SuitLengthMatrix::IsValid() const {
  for (int i = 0; i < rows; ++i) {
    int sum = 0;
    for (int j = 0; j < cols; ++j) {
      const int v = at(i, j);
      if (v < 0 || (IsVoid(i, j) && v != 0)) return false;
      sum += v;
    }
    if (sum != row_sums[i]) return false;
  }
  for (int j = 0; j < cols; ++j) {
    int sum = 0;
    for (int i = 0; i < rows; ++i) sum += at(i, j);
    if (sum != col_sums[j]) return false;
  }
  return true;
}

std::size_t SuitLengthMatrixHash::operator()(const SuitLengthMatrix& m) const {
  std::uint64_t h = 0x5157;
  for (int v : m.entries) h = HashCombine(h, static_cast<std::uint64_t>(v));
  return static_cast<std::size_t>(h);
}

SuitLengthMatrix BlankAssignment(const ConstraintSummary& c) {
  SuitLengthMatrix m;
  m.rows = c.num_rows;
  m.cols = c.NumSuits();
  m.entries.assign(m.rows * m.cols, 0);
  m.row_sums = c.unknown_per_row;
  m.col_sums.resize(m.cols);
  for (int j = 0; j < m.cols; ++j) m.col_sums[j] = c.PoolSize(j);
  m.void_mask.resize(m.rows * m.cols);
  for (int i = 0; i < m.rows; ++i) {
    for (int j = 0; j < m.cols; ++j) m.void_mask[i * m.cols + j] = c.IsVoid(i, j) ? 1 : 0;
  }
  return m;
}

SuitLengthMatrix MakeAssignment(const ConstraintSummary& c, std::vector<int> entries) {
  SuitLengthMatrix m = BlankAssignment(c);
  if (entries.size() != m.entries.size()) throw ContractViolation("assignment has the wrong shape");
  m.entries = std::move(entries);
  return m;
}

SuitLengthMatrix MatrixOf(const Deal& deal, const ConstraintSummary& c) {
  const GameConfig& config = c.config;
  if (static_cast<int>(deal.hands.size()) != config.num_players ||
      deal.trump_upcard != c.trump_upcard) {
    throw ContractViolation("deal does not match the constraints");
  }
  SuitLengthMatrix m = BlankAssignment(c);
  CardSet unknown = 0;
  for (CardSet pool : c.unknown_pool) unknown |= pool;
  for (int i = 0; i < c.num_rows; ++i) {
    CardSet held;
    if (c.IsKittyRow(i)) {
      held = deal.kitty;
    } else {
      const CardSet hand = deal.hands[i];
      if ((hand & c.forced_cards[i]) != c.forced_cards[i]) {
        throw ContractViolation("deal does not give a player the cards they played");
      }
      held = hand & ~c.forced_cards[i];
    }
    if ((held & ~unknown) != 0) throw ContractViolation("deal misplaces a public card");
    for (int j = 0; j < m.cols; ++j) m.at(i, j) = CardCount(held & c.unknown_pool[j]);
  }
  if (!c.has_kitty && deal.kitty != 0) throw ContractViolation("unexpected kitty cards");
  if (!m.IsValid()) throw ContractViolation("deal violates the suit-length constraints");
  return m;
}

std::vector<SuitLengthMatrix> RingSwap(const SuitLengthMatrix& a) {
  struct Partial {
    SuitLengthMatrix m;
    int deficit;      // column one card short
    std::uint32_t used;  // rows already swapped
  };
  struct PartialKey {
    std::vector<int> entries;
    int deficit;
    std::uint32_t used;
    bool operator==(const PartialKey&) const = default;
  };
  struct PartialKeyHash {
    std::size_t operator()(const PartialKey& k) const {
      std::uint64_t h = HashCombine(k.deficit, k.used);
      for (int v : k.entries) h = HashCombine(h, static_cast<std::uint64_t>(v));
      return static_cast<std::size_t>(h);
    }
  };

  std::vector<SuitLengthMatrix> found;
  std::unordered_set<SuitLengthMatrix, SuitLengthMatrixHash> seen_result;
  std::unordered_set<PartialKey, PartialKeyHash> seen_partial;
  std::deque<Partial> queue;

  for (int i = 0; i < a.rows; ++i) {
    for (int j = 0; j < a.cols; ++j) {
      for (int k = 0; k < a.cols; ++k) {
        if (j == k || a.IsVoid(i, j) || a.IsVoid(i, k) || a.at(i, k) == 0) continue;
        Partial start{a, k, 1U << i};
        ++start.m.at(i, j);
        --start.m.at(i, k);
        queue.push_back(std::move(start));
        while (!queue.empty()) {
          Partial cur = std::move(queue.front());
          queue.pop_front();
          for (int l = 0; l < a.rows; ++l) {
            if ((cur.used >> l) & 1U) continue;
            if (a.IsVoid(l, cur.deficit)) continue;
            for (int z = 0; z < a.cols; ++z) {
              if (z == cur.deficit || cur.m.at(l, z) == 0) continue;
              Partial next{cur.m, z, cur.used | (1U << l)};
              ++next.m.at(l, cur.deficit);
              --next.m.at(l, z);
              if (z == j) {
                if (!(next.m == a) && seen_result.insert(next.m).second) {
                  found.push_back(std::move(next.m));
                }
              } else if (seen_partial.insert(PartialKey{next.m.entries, z, next.used}).second) {
                queue.push_back(std::move(next));
              }
            }
          }
        }
        seen_partial.clear();
      }
    }
  }
  return found;
}

namespace {

const BigInt& FactorialOf(int n) {
  static const std::vector<BigInt> table = [] {
    std::vector<BigInt> t(kMaxDeckSize + 1);
    t[0] = 1;
    for (int i = 1; i <= kMaxDeckSize; ++i) t[i] = t[i - 1] * i;
    return t;
  }();
  return table.at(n);
}

void EnumerateCell(const ConstraintSummary& c, SuitLengthMatrix& m, std::vector<int>& row_left,
                   std::vector<int>& col_left, int cell, std::vector<SuitLengthMatrix>& out) {
  if (cell == m.rows * m.cols) {
    out.push_back(m);
    return;
  }
  const int i = cell / m.cols;
  const int j = cell % m.cols;
  int lo = 0;
  int hi = std::min(row_left[i], col_left[j]);
  if (m.IsVoid(i, j)) hi = 0;
  if (j == m.cols - 1) lo = row_left[i];  // row must close
  if (i == m.rows - 1) lo = std::max(lo, col_left[j]);  // column must close
  for (int v = lo; v <= hi; ++v) {
    if ((j == m.cols - 1 && v != row_left[i]) || (i == m.rows - 1 && v != col_left[j])) continue;
    m.at(i, j) = v;
    row_left[i] -= v;
    col_left[j] -= v;
    EnumerateCell(c, m, row_left, col_left, cell + 1, out);
    row_left[i] += v;
    col_left[j] += v;
  }
  m.at(i, j) = 0;
}

void VisitDeals(const SuitLengthMatrix& a, const ConstraintSummary& c, int suit, int row,
                CardSet remaining, std::vector<CardSet>& row_cards,
                const std::function<void(const Deal&)>& visit) {
  if (suit == a.cols) {
    visit(AssembleDeal(c, row_cards));
    return;
  }
  if (row == a.rows) {
    VisitDeals(a, c, suit + 1, 0, suit + 1 < a.cols ? c.unknown_pool[suit + 1] : 0, row_cards,
               visit);
    return;
  }
  const int need = a.at(row, suit);
  const std::vector<int> cards = CardsOf(remaining);
  const int n = static_cast<int>(cards.size());
  if (need > n) return;
  // Gosper-style walk over need-subsets of the remaining cards.
  std::vector<int> pick(need);
  for (int t = 0; t < need; ++t) pick[t] = t;
  while (true) {
    CardSet chosen = 0;
    for (int t : pick) chosen |= CardBit(cards[t]);
    row_cards[row] |= chosen;
    VisitDeals(a, c, suit, row + 1, remaining & ~chosen, row_cards, visit);
    row_cards[row] &= ~chosen;
    int t = need - 1;
    while (t >= 0 && pick[t] == n - need + t) --t;
    if (t < 0) break;
    ++pick[t];
    for (int u = t + 1; u < need; ++u) pick[u] = pick[u - 1] + 1;
  }
}

BigInt UniformBelow(const BigInt& bound, Rng& rng) {
  if (bound <= BigInt(std::numeric_limits<std::uint64_t>::max())) {
    const auto b = bound.convert_to<std::uint64_t>();
    return BigInt(std::uniform_int_distribution<std::uint64_t>(0, b - 1)(rng));
  }
  return boost::random::uniform_int_distribution<BigInt>(0, bound - 1)(rng);
}

}  // namespace

BigInt DealCount(const SuitLengthMatrix& a, const ConstraintSummary& c) {
  BigInt count = 1;
  for (int j = 0; j < a.cols; ++j) {
    BigInt denom = 1;
    for (int i = 0; i < a.rows; ++i) denom *= FactorialOf(a.at(i, j));
    count *= FactorialOf(c.PoolSize(j)) / denom;
  }
  return count;
}

std::vector<SuitLengthMatrix> EnumerateAssignments(const ConstraintSummary& c) {
  std::vector<SuitLengthMatrix> out;
  if (c.contradiction) return out;
  SuitLengthMatrix m = BlankAssignment(c);
  std::vector<int> row_left = m.row_sums;
  std::vector<int> col_left = m.col_sums;
  int total_rows = 0;
  for (int v : row_left) total_rows += v;
  if (total_rows != c.TotalUnknown()) return out;
  if (m.rows == 0 || m.cols == 0) {
    if (total_rows == 0) out.push_back(m);
    return out;
  }
  EnumerateCell(c, m, row_left, col_left, 0, out);
  return out;
}

Deal AssembleDeal(const ConstraintSummary& c, const std::vector<CardSet>& row_cards) {
  Deal deal;
  deal.trump_upcard = c.trump_upcard;
  deal.hands.resize(c.config.num_players);
  for (int p = 0; p < c.config.num_players; ++p) deal.hands[p] = c.forced_cards[p] | row_cards[p];
  deal.kitty = c.has_kitty ? row_cards[c.num_rows - 1] : 0;
  return deal;
}

Deal SampleDealIn(const SuitLengthMatrix& a, const ConstraintSummary& c, Rng& rng) {
  std::vector<CardSet> row_cards(a.rows, 0);
  for (int j = 0; j < a.cols; ++j) {
    std::vector<int> cards = CardsOf(c.unknown_pool[j]);
    std::shuffle(cards.begin(), cards.end(), rng);
    std::size_t next = 0;
    for (int i = 0; i < a.rows; ++i) {
      for (int t = 0; t < a.at(i, j); ++t) row_cards[i] |= CardBit(cards[next++]);
    }
  }
  return AssembleDeal(c, row_cards);
}

void ForEachDealIn(const SuitLengthMatrix& a, const ConstraintSummary& c,
                   const std::function<void(const Deal&)>& visit) {
  std::vector<CardSet> row_cards(a.rows, 0);
  if (a.cols == 0) {
    visit(AssembleDeal(c, row_cards));
    return;
  }
  VisitDeals(a, c, 0, 0, c.unknown_pool[0], row_cards, visit);
}

NeighborSet NeighborSetOf(const SuitLengthMatrix& current, const ConstraintSummary& c) {
  NeighborSet omega;
  omega.current = current;
  omega.assignments = RingSwap(current);
  omega.self_count = DealCount(current, c);
  omega.total_deal_count = omega.self_count - 1;
  omega.deal_counts.reserve(omega.assignments.size());
  for (const SuitLengthMatrix& m : omega.assignments) {
    omega.deal_counts.push_back(DealCount(m, c));
    omega.total_deal_count += omega.deal_counts.back();
  }
  return omega;
}

NeighborSet ComputeNeighborSet(const Deal& deal, const ConstraintSummary& c) {
  return NeighborSetOf(MatrixOf(deal, c), c);
}

Deal SampleNeighborDeal(const Deal& deal, const NeighborSet& omega, const ConstraintSummary& c,
                        Rng& rng, int* chosen) {
  if (omega.total_deal_count <= 0) throw ContractViolation("empty neighborhood");
  BigInt r = UniformBelow(omega.total_deal_count, rng);
  for (std::size_t t = 0; t < omega.assignments.size(); ++t) {
    if (r < omega.deal_counts[t]) {
      if (chosen) *chosen = static_cast<int>(t);
      return SampleDealIn(omega.assignments[t], c, rng);
    }
    r -= omega.deal_counts[t];
  }
  // Another deal of the current assignment, uniform by rejection.
  if (chosen) *chosen = -1;
  while (true) {
    Deal other = SampleDealIn(omega.current, c, rng);
    if (!(other == deal)) return other;
  }
}

std::size_t DealKeyHash::operator()(const DealKey& key) const {
  std::uint64_t h = 0xdea1;
  for (CardSet row : key.rows) h = HashCombine(h, row);
  return static_cast<std::size_t>(h);
}

DealKey KeyOf(const Deal& deal) {
  DealKey key;
  key.rows = deal.hands;
  key.rows.push_back(deal.kitty);
  return key;
}

}  // namespace histfilter
