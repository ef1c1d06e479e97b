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

// Brute-force scheduling reference: its own ASAP, overlap, cost and
// conflict detection, and a full sweep over all 3^k fence decisions.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "xtalk/circuit.hpp"
#include "xtalk/device.hpp"

namespace sched_oracle {

using xtalk::Circuit;
using xtalk::DeviceModel;
using xtalk::Edge;
using xtalk::Gate;

struct Times {
  std::vector<long> start, dur;
  long makespan = 0;
};

inline long duration(const Gate& g, const DeviceModel& d) {
  if (g.is_barrier()) return 0;
  if (g.is_measure()) return static_cast<long>(std::ceil(d.durations.measure_ns));
  if (g.is_cx()) return static_cast<long>(std::ceil(d.durations.cx_ns));
  return static_cast<long>(std::ceil(d.durations.sq_ns));
}

inline bool shares_wire(const Gate& a, const Gate& b) {
  for (auto q : a.qubits())
    if (b.acts_on(q)) return true;
  return a.clbit() && b.clbit() && *a.clbit() == *b.clbit();
}

/// Earliest start times under wire order plus extra (before, after) pairs;
/// nullopt when the constraints are cyclic.
inline std::optional<Times> asap(const Circuit& c, const DeviceModel& d,
                                 const std::vector<std::pair<std::size_t, std::size_t>>& extra) {
  const std::size_t n = c.size();
  std::vector<std::pair<std::size_t, std::size_t>> cons = extra;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (shares_wire(c[i], c[j])) cons.emplace_back(i, j);
  Times t;
  t.start.assign(n, 0);
  for (const Gate& g : c) t.dur.push_back(duration(g, d));
  for (std::size_t pass = 0; pass <= n + 1; ++pass) {
    bool changed = false;
    for (auto [a, b] : cons) {
      if (t.start[b] < t.start[a] + t.dur[a]) {
        t.start[b] = t.start[a] + t.dur[a];
        changed = true;
      }
    }
    if (!changed) {
      for (std::size_t i = 0; i < n; ++i) t.makespan = std::max(t.makespan, t.start[i] + t.dur[i]);
      return t;
    }
  }
  return std::nullopt;
}

inline bool overlap(const Times& t, std::size_t i, std::size_t j) {
  return std::max(t.start[i], t.start[j]) < std::min(t.start[i] + t.dur[i], t.start[j] + t.dur[j]);
}

inline Edge edge_of(const Gate& g) { return Edge(g.qubits()[0], g.qubits()[1]); }

inline double cost(const Circuit& c, const DeviceModel& d, const Times& t, double omega) {
  double xt = 0.0, deco = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (!c[i].is_cx()) continue;
    const Edge e = edge_of(c[i]);
    double worst = 1.0;
    for (std::size_t j = 0; j < c.size(); ++j) {
      if (j == i || !c[j].is_cx() || !overlap(t, i, j)) continue;
      const Edge f = edge_of(c[j]);
      if (e.shares_qubit(f)) continue;
      worst = std::max(worst, d.crosstalk.ratio(e, f));
    }
    const double eps = d.edge_error(e);
    const double eff = worst == 1.0 ? eps : std::max(eps, std::min(0.75, eps * worst));
    xt -= std::log(1.0 - eff);
  }
  for (std::size_t q = 0; q < c.num_qubits(); ++q) {
    long busy = 0;
    bool used = false;
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (c[i].is_barrier() || !c[i].acts_on(static_cast<int>(q))) continue;
      used = true;
      if (!c[i].is_measure()) busy += t.dur[i];
    }
    const double coh = std::min(d.t1_ns[q], d.t2_ns[q]);
    if (used && std::isfinite(coh)) deco += static_cast<double>(t.makespan - busy) / coh;
  }
  return omega * xt + (1.0 - omega) * deco;
}

inline std::vector<std::pair<std::size_t, std::size_t>> conflicts(const Circuit& c,
                                                                  const DeviceModel& d,
                                                                  const Times& t,
                                                                  double threshold) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = i + 1; j < c.size(); ++j) {
      if (!c[i].is_cx() || !c[j].is_cx() || !overlap(t, i, j)) continue;
      const Edge e = edge_of(c[i]), f = edge_of(c[j]);
      if (e.shares_qubit(f)) continue;
      if (std::max(d.crosstalk.ratio(e, f), d.crosstalk.ratio(f, e)) >= threshold)
        out.emplace_back(i, j);
    }
  return out;
}

/// Minimum cost over every keep/serialize-either-way choice for the
/// baseline conflicts.
inline double brute_force_min_cost(const Circuit& c, const DeviceModel& d, double omega,
                                   double threshold) {
  const Times base = *asap(c, d, {});
  const auto cs = conflicts(c, d, base, threshold);
  std::size_t total = 1;
  for (std::size_t k = 0; k < cs.size(); ++k) total *= 3;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t code = 0; code < total; ++code) {
    std::vector<std::pair<std::size_t, std::size_t>> fences;
    std::size_t rest = code;
    for (const auto& [a, b] : cs) {
      const std::size_t choice = rest % 3;
      rest /= 3;
      if (choice == 1) fences.emplace_back(a, b);
      if (choice == 2) fences.emplace_back(b, a);
    }
    if (auto t = asap(c, d, fences)) best = std::min(best, cost(c, d, *t, omega));
  }
  return best;
}

/// Device on a 2x4 grid with strong crosstalk between several disjoint
/// edge pairs.
inline DeviceModel grid_device() {
  std::vector<Edge> edges;
  for (int r = 0; r < 2; ++r)
    for (int k = 0; k + 1 < 4; ++k) edges.emplace_back(4 * r + k, 4 * r + k + 1);
  for (int k = 0; k < 4; ++k) edges.emplace_back(k, 4 + k);
  DeviceModel d = xtalk::noiseless_device(8, edges);
  for (const Edge& e : d.edges) d.cx_error[e] = 0.01 + 0.002 * (e.a + e.b);
  d.sq_error.assign(8, 2e-4);
  d.t1_ns.assign(8, 60e3);
  d.t2_ns.assign(8, 50e3);
  d.crosstalk.set(Edge(0, 1), Edge(2, 3), 4.0);
  d.crosstalk.set(Edge(2, 3), Edge(0, 1), 2.5);
  d.crosstalk.set(Edge(4, 5), Edge(6, 7), 6.0);
  d.crosstalk.set(Edge(0, 4), Edge(2, 6), 3.0);
  d.crosstalk.set(Edge(1, 5), Edge(3, 7), 8.0);
  d.crosstalk.set(Edge(0, 1), Edge(6, 7), 2.2);
  d.crosstalk.set(Edge(5, 6), Edge(0, 1), 1.5);
  return d;
}

/// Random circuit of single-qubit gates and device-edge CXs.
inline Circuit random_device_circuit(const DeviceModel& d, int num_gates, std::mt19937_64& rng) {
  Circuit c(d.num_qubits, d.num_qubits);
  for (int g = 0; g < num_gates; ++g) {
    if (rng() % 3 == 0) {
      const auto q = static_cast<int>(rng() % d.num_qubits);
      c.add(Gate::single(rng() % 2 ? xtalk::GateKind::kH : xtalk::GateKind::kSX, q));
    } else {
      const Edge e = d.edges[rng() % d.edges.size()];
      c.add(rng() % 2 ? Gate::cx(e.a, e.b) : Gate::cx(e.b, e.a));
    }
  }
  for (std::size_t q = 0; q < d.num_qubits; ++q)
    c.add(Gate::measure(static_cast<int>(q), static_cast<int>(q)));
  return c;
}

}  // namespace sched_oracle
