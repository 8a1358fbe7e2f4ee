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

#include "histfilter/construction.h"

#include <algorithm>
#include <limits>
#include <queue>

#include "histfilter/errors.h"

namespace histfilter {

FlowNetwork BuildFlowNetwork(const ConstraintSummary& c) {
  FlowNetwork net;
  net.num_suits = c.NumSuits();
  net.num_rows = c.num_rows;
  const std::int64_t unbounded = c.TotalUnknown();
  for (int j = 0; j < net.num_suits; ++j) {
    net.edges.push_back({net.Source(), net.SuitVertex(j), c.PoolSize(j)});
  }
  net.middle_edge.assign(net.num_suits * net.num_rows, -1);
  for (int j = 0; j < net.num_suits; ++j) {
    for (int i = 0; i < net.num_rows; ++i) {
      if (c.IsVoid(i, j)) continue;
      net.middle_edge[j * net.num_rows + i] = static_cast<int>(net.edges.size());
      net.edges.push_back({net.SuitVertex(j), net.RowVertex(i), unbounded});
    }
  }
  for (int i = 0; i < net.num_rows; ++i) {
    net.edges.push_back({net.RowVertex(i), net.Sink(), c.unknown_per_row[i]});
  }
  return net;
}

MaxFlowResult MaxFlow(int num_vertices, int source, int sink, const std::vector<FlowEdge>& edges) {
  // Residual arcs: 2e is edge e, 2e+1 its reverse.
  const std::size_t m = edges.size();
  std::vector<std::int64_t> residual(2 * m);
  std::vector<std::vector<int>> adjacent(num_vertices);
  for (std::size_t e = 0; e < m; ++e) {
    residual[2 * e] = edges[e].capacity;
    residual[2 * e + 1] = 0;
    adjacent[edges[e].from].push_back(static_cast<int>(2 * e));
    adjacent[edges[e].to].push_back(static_cast<int>(2 * e + 1));
  }
  auto head = [&](int arc) {
    const FlowEdge& e = edges[arc / 2];
    return (arc % 2 == 0) ? e.to : e.from;
  };

  MaxFlowResult result;
  std::vector<int> parent_arc(num_vertices);
  while (source != sink) {
    std::fill(parent_arc.begin(), parent_arc.end(), -1);
    std::queue<int> frontier;
    frontier.push(source);
    parent_arc[source] = -2;
    while (!frontier.empty() && parent_arc[sink] == -1) {
      const int u = frontier.front();
      frontier.pop();
      for (int arc : adjacent[u]) {
        const int v = head(arc);
        if (residual[arc] > 0 && parent_arc[v] == -1) {
          parent_arc[v] = arc;
          frontier.push(v);
        }
      }
    }
    if (parent_arc[sink] == -1) break;
    std::int64_t push = std::numeric_limits<std::int64_t>::max();
    for (int v = sink; v != source; v = head(parent_arc[v] ^ 1)) {
      push = std::min(push, residual[parent_arc[v]]);
    }
    for (int v = sink; v != source; v = head(parent_arc[v] ^ 1)) {
      residual[parent_arc[v]] -= push;
      residual[parent_arc[v] ^ 1] += push;
    }
    result.flow_value += push;
  }
  result.flow.resize(m);
  for (std::size_t e = 0; e < m; ++e) result.flow[e] = residual[2 * e + 1];
  return result;
}

MaxFlowResult MaxFlow(const FlowNetwork& net) {
  return MaxFlow(net.NumVertices(), net.Source(), net.Sink(), net.edges);
}

std::optional<SuitLengthMatrix> AssignmentFromFlow(const FlowNetwork& net,
                                                   const MaxFlowResult& result,
                                                   const ConstraintSummary& c) {
  std::int64_t demand = 0;
  for (int v : c.unknown_per_row) demand += v;
  if (result.flow_value != demand || demand != c.TotalUnknown()) return std::nullopt;
  SuitLengthMatrix a = BlankAssignment(c);
  for (int j = 0; j < net.num_suits; ++j) {
    for (int i = 0; i < net.num_rows; ++i) {
      const int e = net.middle_edge[j * net.num_rows + i];
      if (e >= 0) a.at(i, j) = static_cast<int>(result.flow[e]);
    }
  }
  if (!a.IsValid()) throw InvariantError("saturating flow is not a valid assignment");
  return a;
}

std::optional<SuitLengthMatrix> FeasibleAssignment(const ConstraintSummary& c) {
  if (c.contradiction) return std::nullopt;
  const FlowNetwork net = BuildFlowNetwork(c);
  return AssignmentFromFlow(net, MaxFlow(net), c);
}

std::optional<History> ConstructHistory(const PublicState& state, const Policy& policy, Rng& rng) {
  const ConstraintSummary c = ExtractConstraints(state);
  const std::optional<SuitLengthMatrix> a = FeasibleAssignment(c);
  if (!a) return std::nullopt;
  History h{state.config, SampleDealIn(*a, c, rng), state.Steps()};
  if (!VerifyConsistency(state, h, policy)) {
    throw InvariantError("constructed history fails verification");
  }
  return h;
}

}  // namespace histfilter
