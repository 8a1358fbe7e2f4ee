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

#ifndef HISTFILTER_CONSTRUCTION_H_
#define HISTFILTER_CONSTRUCTION_H_

// One history consistent with a public state, or none, via integral max flow
// over the network source -> suits -> holders -> sink.

#include <cstdint>
#include <optional>
#include <vector>

#include "histfilter/assignment.h"
#include "histfilter/game.h"
#include "histfilter/observation.h"
#include "histfilter/policy.h"
#include "histfilter/rng.h"

namespace histfilter {

struct FlowEdge {
  int from = 0;
  int to = 0;
  std::int64_t capacity = 0;
};

// Vertex layout: source, one vertex per suit, one per holder row, sink.
// Edges: source->suit (all suits), suit->row for every non-void pair in
// (suit, row) order, row->sink (all rows).
struct FlowNetwork {
  int num_suits = 0;
  int num_rows = 0;
  std::vector<FlowEdge> edges;
  std::vector<int> middle_edge;  // [suit * num_rows + row] -> edge index or -1

  int NumVertices() const { return num_suits + num_rows + 2; }
  int Source() const { return 0; }
  int Sink() const { return num_suits + num_rows + 1; }
  int SuitVertex(int suit) const { return 1 + suit; }
  int RowVertex(int row) const { return 1 + num_suits + row; }
};

struct MaxFlowResult {
  std::int64_t flow_value = 0;
  std::vector<std::int64_t> flow;  // per edge
};

FlowNetwork BuildFlowNetwork(const ConstraintSummary& c);

// Edmonds-Karp: shortest augmenting paths, deterministic for a fixed edge
// order. Works on any network, not only the ones built above.
MaxFlowResult MaxFlow(int num_vertices, int source, int sink, const std::vector<FlowEdge>& edges);
MaxFlowResult MaxFlow(const FlowNetwork& net);

// Suit-length assignment read from the suit->row flows, or nullopt when the
// flow does not saturate every row.
std::optional<SuitLengthMatrix> AssignmentFromFlow(const FlowNetwork& net,
                                                   const MaxFlowResult& result,
                                                   const ConstraintSummary& c);

// A feasible suit-length assignment for `c`, or nullopt.
std::optional<SuitLengthMatrix> FeasibleAssignment(const ConstraintSummary& c);

// A history in H_S with cards drawn uniformly inside the flow's assignment,
// or nullopt when H_S is empty. Throws InvariantError if the result fails
// verification.
std::optional<History> ConstructHistory(const PublicState& state, const Policy& policy, Rng& rng);

}  // namespace histfilter

#endif  // HISTFILTER_CONSTRUCTION_H_
