// Copyright 2026 The xtalk Authors
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

#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <queue>
#include <utility>
#include <vector>

#include "xtalk/circuit.hpp"

namespace xtalk {

using Precedence = std::pair<std::size_t, std::size_t>;

/// Dependency graph over gate indices of a circuit.
///
/// a -> b when b is the next instruction after a on a shared qubit or
/// classical bit. Barriers are ordinary nodes, so every gate before a
/// barrier on its qubits reaches every gate after it. Source order is a
/// topological order.
struct CircuitDag {
  std::vector<std::vector<std::size_t>> preds;
  std::vector<std::vector<std::size_t>> succs;

  std::size_t size() const { return preds.size(); }

  std::vector<Precedence> edges() const {
    std::vector<Precedence> out;
    for (std::size_t b = 0; b < preds.size(); ++b) {
      for (std::size_t a : preds[b]) out.emplace_back(a, b);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  bool has_edge(std::size_t a, std::size_t b) const {
    const auto& s = succs[a];
    return std::find(s.begin(), s.end(), b) != s.end();
  }

  void add_edge(std::size_t a, std::size_t b) {
    if (a == b || has_edge(a, b)) return;
    succs[a].push_back(b);
    preds[b].push_back(a);
  }

  /// True when `to` is reachable from `from` along edges.
  bool reaches(std::size_t from, std::size_t to) const {
    if (from == to) return true;
    std::vector<bool> seen(size(), false);
    std::vector<std::size_t> stack{from};
    seen[from] = true;
    while (!stack.empty()) {
      std::size_t v = stack.back();
      stack.pop_back();
      for (std::size_t w : succs[v]) {
        if (w == to) return true;
        if (!seen[w]) {
          seen[w] = true;
          stack.push_back(w);
        }
      }
    }
    return false;
  }

  /// Kahn's algorithm, smallest index first. Empty if the graph has a cycle.
  std::vector<std::size_t> topological_order() const {
    std::vector<std::size_t> indeg(size());
    for (std::size_t v = 0; v < size(); ++v) indeg[v] = preds[v].size();
    std::priority_queue<std::size_t, std::vector<std::size_t>,
                        std::greater<>>
        ready;
    for (std::size_t v = 0; v < size(); ++v) {
      if (indeg[v] == 0) ready.push(v);
    }
    std::vector<std::size_t> order;
    order.reserve(size());
    while (!ready.empty()) {
      std::size_t v = ready.top();
      ready.pop();
      order.push_back(v);
      for (std::size_t w : succs[v]) {
        if (--indeg[w] == 0) ready.push(w);
      }
    }
    if (order.size() != size()) order.clear();
    return order;
  }

  bool is_acyclic() const { return size() == 0 || !topological_order().empty(); }
};

inline CircuitDag build_dag(const Circuit& c) {
  CircuitDag dag;
  dag.preds.resize(c.size());
  dag.succs.resize(c.size());
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> last_q(c.num_qubits(), kNone);
  std::vector<std::size_t> last_c(c.num_clbits(), kNone);
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Gate& g = c[i];
    for (Qubit q : g.qubits()) {
      if (last_q[q] != kNone) dag.add_edge(last_q[q], i);
      last_q[q] = i;
    }
    if (auto cb = g.clbit()) {
      if (last_c[*cb] != kNone) dag.add_edge(last_c[*cb], i);
      last_c[*cb] = i;
    }
  }
  return dag;
}

/// Longest dependency chain counted in non-barrier gates.
inline std::size_t gate_depth(const Circuit& c, const CircuitDag& dag) {
  std::vector<std::size_t> depth(c.size(), 0);
  std::size_t best = 0;
  for (std::size_t v : dag.topological_order()) {
    std::size_t d = 0;
    for (std::size_t p : dag.preds[v]) d = std::max(d, depth[p]);
    depth[v] = d + (c[v].is_barrier() ? 0 : 1);
    best = std::max(best, depth[v]);
  }
  return best;
}

}  // namespace xtalk
