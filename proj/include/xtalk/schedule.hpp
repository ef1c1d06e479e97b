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
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <nlohmann/json.hpp>
#include <string>
#include <utility>
#include <vector>

#include "xtalk/circuit.hpp"
#include "xtalk/dag.hpp"
#include "xtalk/device.hpp"
#include "xtalk/error.hpp"

namespace xtalk {

using TimeNs = std::int64_t;

/// Gate duration rounded up onto the 1 ns grid.
inline TimeNs duration_ns(const Gate& g, const GateDurations& d) {
  double t = 0.0;
  if (g.is_barrier()) {
    t = 0.0;
  } else if (g.is_measure()) {
    t = d.measure_ns;
  } else if (g.is_cx()) {
    t = d.cx_ns;
  } else if (is_single_qubit_unitary(g.kind())) {
    t = d.sq_ns;
  } else {
    throw MismatchError("gate '" + std::string(gate_name(g.kind())) +
                        "' has no device duration; lower macros first");
  }
  return static_cast<TimeNs>(std::ceil(t - 1e-9));
}

/// A circuit with start times. `fences` are precedence edges added on top of
/// the circuit's own dependencies (the serialization barriers).
struct ScheduledCircuit {
  Circuit circuit;
  std::vector<TimeNs> start;
  std::vector<TimeNs> duration;
  TimeNs makespan = 0;
  std::vector<Precedence> fences;

  TimeNs end(std::size_t i) const { return start[i] + duration[i]; }

  bool overlaps(std::size_t i, std::size_t j) const {
    return start[i] < end(j) && start[j] < end(i);
  }

  /// Circuit dependencies plus fences.
  CircuitDag constraint_graph() const {
    CircuitDag dag = build_dag(circuit);
    for (auto [a, b] : fences) dag.add_edge(a, b);
    return dag;
  }

  friend bool operator==(const ScheduledCircuit&, const ScheduledCircuit&) = default;
};

/// Checks exclusivity, dependency order and makespan. Returns an empty
/// string when valid, else the first violation.
inline std::string schedule_violation(const ScheduledCircuit& sc) {
  const Circuit& c = sc.circuit;
  if (sc.start.size() != c.size() || sc.duration.size() != c.size()) {
    return "schedule size mismatch";
  }
  TimeNs span = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (sc.start[i] < 0) return "negative start time";
    span = std::max(span, sc.end(i));
  }
  if (span != sc.makespan) return "makespan mismatch";
  const CircuitDag dag = sc.constraint_graph();
  for (auto [a, b] : dag.edges()) {
    if (sc.start[b] < sc.end(a)) {
      return "dependency " + std::to_string(a) + "->" + std::to_string(b) +
             " violated";
    }
  }
  std::vector<std::vector<std::size_t>> per_qubit(c.num_qubits());
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i].is_barrier() || sc.duration[i] == 0) continue;
    for (Qubit q : c[i].qubits()) per_qubit[q].push_back(i);
  }
  for (std::size_t q = 0; q < per_qubit.size(); ++q) {
    auto& gates = per_qubit[q];
    std::sort(gates.begin(), gates.end(), [&](std::size_t x, std::size_t y) {
      return sc.start[x] < sc.start[y];
    });
    for (std::size_t k = 1; k < gates.size(); ++k) {
      if (sc.overlaps(gates[k - 1], gates[k])) {
        return "gates " + std::to_string(gates[k - 1]) + " and " +
               std::to_string(gates[k]) + " overlap on q[" + std::to_string(q) +
               "]";
      }
    }
  }
  return {};
}

namespace schedule_detail {

inline void check_runnable(const Circuit& c, const DeviceModel& d) {
  if (c.num_qubits() > d.num_qubits) {
    throw MismatchError("circuit uses " + std::to_string(c.num_qubits()) +
                        " qubits but the device has " +
                        std::to_string(d.num_qubits));
  }
  for (const Gate& g : c) {
    if (is_macro(g.kind())) {
      throw MismatchError("macro gate '" + std::string(gate_name(g.kind())) +
                          "' must be lowered before scheduling");
    }
    if (g.is_cx()) {
      Edge e(g.qubits()[0], g.qubits()[1]);
      if (!d.has_edge(e)) {
        throw MismatchError("cx on " + e.label() + " is not a device edge");
      }
    }
  }
}

// Longest-path start times over the constraint graph. Returns false if the
// fences create a cycle.
inline bool asap(const Circuit& c, const CircuitDag& dag,
                 const std::vector<TimeNs>& dur, std::vector<TimeNs>& start,
                 TimeNs& makespan) {
  const auto order = dag.topological_order();
  if (order.size() != c.size()) return false;
  start.assign(c.size(), 0);
  makespan = 0;
  for (std::size_t v : order) {
    TimeNs t = 0;
    for (std::size_t p : dag.preds[v]) t = std::max(t, start[p] + dur[p]);
    start[v] = t;
    makespan = std::max(makespan, t + dur[v]);
  }
  return true;
}

}  // namespace schedule_detail

/// Schedules `c` ASAP under its dependencies plus `fences`. Throws if the
/// fences make the constraint graph cyclic.
inline ScheduledCircuit asap_schedule(const Circuit& c, const DeviceModel& d,
                                      std::vector<Precedence> fences = {}) {
  schedule_detail::check_runnable(c, d);
  ScheduledCircuit sc;
  sc.circuit = c;
  sc.duration.reserve(c.size());
  for (const Gate& g : c) sc.duration.push_back(duration_ns(g, d.durations));
  std::sort(fences.begin(), fences.end());
  sc.fences = std::move(fences);
  if (!schedule_detail::asap(c, sc.constraint_graph(), sc.duration, sc.start,
                             sc.makespan)) {
    throw std::logic_error("fences create a dependency cycle");
  }
  return sc;
}

/// Maximally parallel baseline: every gate at its earliest start.
inline ScheduledCircuit par_sched(const Circuit& c, const DeviceModel& d) {
  return asap_schedule(c, d);
}

/// Gate-level depth of the scheduled circuit, fences included.
inline std::size_t gate_depth(const ScheduledCircuit& sc) {
  return gate_depth(sc.circuit, sc.constraint_graph());
}

struct ConflictPair {
  std::size_t gate_a = 0;
  std::size_t gate_b = 0;
  Edge edge_a;
  Edge edge_b;
  double ratio = 1.0;

  friend bool operator==(const ConflictPair&, const ConflictPair&) = default;
};

inline Edge cx_edge(const Gate& g) { return Edge(g.qubits()[0], g.qubits()[1]); }

/// For each CX gate, the edges of CX gates running at the same time.
inline std::vector<std::vector<Edge>> concurrent_cx_edges(
    const ScheduledCircuit& sc) {
  const Circuit& c = sc.circuit;
  std::vector<std::size_t> cx;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i].is_cx()) cx.push_back(i);
  std::vector<std::vector<Edge>> out(c.size());
  for (std::size_t x = 0; x < cx.size(); ++x) {
    for (std::size_t y = x + 1; y < cx.size(); ++y) {
      const std::size_t i = cx[x], j = cx[y];
      if (!sc.overlaps(i, j)) continue;
      const Edge ei = cx_edge(c[i]), ej = cx_edge(c[j]);
      if (ei.shares_qubit(ej)) continue;
      out[i].push_back(ej);
      out[j].push_back(ei);
    }
  }
  return out;
}

/// Time-overlapping CX pairs on disjoint edges whose stronger direction
/// has ratio >= threshold. Ordered by gate indices.
inline std::vector<ConflictPair> find_conflicts(const ScheduledCircuit& sc,
                                                const DeviceModel& d,
                                                double threshold) {
  const Circuit& c = sc.circuit;
  std::vector<std::size_t> cx;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i].is_cx()) cx.push_back(i);
  std::vector<ConflictPair> out;
  for (std::size_t x = 0; x < cx.size(); ++x) {
    for (std::size_t y = x + 1; y < cx.size(); ++y) {
      const std::size_t i = cx[x], j = cx[y];
      if (!sc.overlaps(i, j)) continue;
      const Edge e = cx_edge(c[i]), f = cx_edge(c[j]);
      if (e.shares_qubit(f)) continue;
      const double r = std::max(d.crosstalk.ratio(e, f), d.crosstalk.ratio(f, e));
      if (r >= threshold) out.push_back({i, j, e, f, r});
    }
  }
  return out;
}

/// omega * crosstalk_term + (1 - omega) * decoherence_term, where
///   crosstalk_term   = sum over CX of -log(1 - effective error)
///   decoherence_term = sum over active qubits of idle / min(t1, t2)
/// and idle = makespan - time spent in non-measure gates on that qubit.
struct ScheduleCost {
  double crosstalk_term = 0.0;
  double decoherence_term = 0.0;
  double omega = 0.5;
  double total = 0.0;
};

inline ScheduleCost schedule_cost(const ScheduledCircuit& sc,
                                  const DeviceModel& d, double omega) {
  if (!(omega >= 0.0 && omega <= 1.0)) {
    throw std::invalid_argument("omega must lie in [0, 1]");
  }
  const Circuit& c = sc.circuit;
  ScheduleCost cost;
  cost.omega = omega;
  const auto concurrent = concurrent_cx_edges(sc);
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (!c[i].is_cx()) continue;
    const double eps = effective_cx_error(d, cx_edge(c[i]), concurrent[i]);
    cost.crosstalk_term += -std::log1p(-eps);
  }
  std::vector<TimeNs> busy(c.num_qubits(), 0);
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i].is_barrier() || c[i].is_measure()) continue;
    for (Qubit q : c[i].qubits()) busy[q] += sc.duration[i];
  }
  const auto active = c.active_qubits();
  for (std::size_t q = 0; q < c.num_qubits(); ++q) {
    if (!active[q]) continue;
    const double coherence = std::min(d.t1_ns[q], d.t2_ns[q]);
    if (std::isinf(coherence)) continue;
    cost.decoherence_term +=
        static_cast<double>(sc.makespan - busy[q]) / coherence;
  }
  cost.total = omega * cost.crosstalk_term + (1.0 - omega) * cost.decoherence_term;
  return cost;
}

enum class SearchStrategy { kAuto, kExhaustive, kGreedy };

struct XtalkOptions {
  double omega = 0.5;
  double threshold = 2.0;
  SearchStrategy strategy = SearchStrategy::kAuto;
  /// kAuto switches from exhaustive to greedy above this many conflicts.
  std::size_t exhaustive_limit = 6;
};

namespace schedule_detail {

struct Candidate {
  ScheduledCircuit schedule;
  ScheduleCost cost;
};

// Decision per conflict: 0 keep parallel, 1 a before b, 2 b before a.
inline std::vector<Precedence> fences_for(const std::vector<ConflictPair>& conflicts,
                                          const std::vector<int>& decision) {
  std::vector<Precedence> out;
  for (std::size_t k = 0; k < conflicts.size(); ++k) {
    if (decision[k] == 1) out.emplace_back(conflicts[k].gate_a, conflicts[k].gate_b);
    if (decision[k] == 2) out.emplace_back(conflicts[k].gate_b, conflicts[k].gate_a);
  }
  return out;
}

inline bool try_schedule(const Circuit& c, const DeviceModel& d,
                         std::vector<Precedence> fences, double omega,
                         Candidate& out) {
  ScheduledCircuit sc;
  sc.circuit = c;
  sc.duration.reserve(c.size());
  for (const Gate& g : c) sc.duration.push_back(duration_ns(g, d.durations));
  std::sort(fences.begin(), fences.end());
  sc.fences = std::move(fences);
  if (!asap(c, sc.constraint_graph(), sc.duration, sc.start, sc.makespan)) {
    return false;
  }
  out.cost = schedule_cost(sc, d, omega);
  out.schedule = std::move(sc);
  return true;
}

// Lexicographic sweep over all 3^k decision vectors; ties keep the earlier
// vector, so the all-parallel baseline wins unless strictly beaten.
inline Candidate exhaustive(const Circuit& c, const DeviceModel& d,
                            const std::vector<ConflictPair>& conflicts,
                            double omega, const Candidate& baseline) {
  Candidate best = baseline;
  std::vector<int> decision(conflicts.size(), 0);
  for (;;) {
    std::size_t k = conflicts.size();
    while (k > 0 && decision[k - 1] == 2) decision[--k] = 0;
    if (k == 0) break;
    ++decision[k - 1];
    Candidate cand;
    if (try_schedule(c, d, fences_for(conflicts, decision), omega, cand) &&
        cand.cost.total < best.cost.total) {
      best = std::move(cand);
    }
  }
  return best;
}

// Local search over the per-conflict decisions: single changes, highest
// ratio first, then changes to two decisions at once, repeated until
// nothing improves. Run from the all-parallel baseline and from
// "serialize everything"; the cheaper result wins.
inline Candidate greedy(const Circuit& c, const DeviceModel& d,
                        const std::vector<ConflictPair>& conflicts, double omega,
                        const Candidate& baseline) {
  std::vector<std::size_t> order(conflicts.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return conflicts[x].ratio > conflicts[y].ratio;
  });
  auto descend = [&](std::vector<int> decision, Candidate current) {
    auto attempt = [&](std::vector<int> trial) {
      Candidate cand;
      if (try_schedule(c, d, fences_for(conflicts, trial), omega, cand) &&
          cand.cost.total < current.cost.total) {
        current = std::move(cand);
        decision = std::move(trial);
        return true;
      }
      return false;
    };
    for (bool improved = true; improved;) {
      improved = false;
      for (std::size_t k : order) {
        for (int option = 0; option < 3; ++option) {
          if (option == decision[k]) continue;
          std::vector<int> trial = decision;
          trial[k] = option;
          improved |= attempt(std::move(trial));
        }
      }
      if (improved) continue;
      for (std::size_t x = 0; x < order.size() && !improved; ++x) {
        for (std::size_t y = x + 1; y < order.size() && !improved; ++y) {
          for (int ox = 0; ox < 3 && !improved; ++ox) {
            for (int oy = 0; oy < 3 && !improved; ++oy) {
              if (ox == decision[order[x]] || oy == decision[order[y]]) continue;
              std::vector<int> trial = decision;
              trial[order[x]] = ox;
              trial[order[y]] = oy;
              improved = attempt(std::move(trial));
            }
          }
        }
      }
    }
    return current;
  };
  Candidate best = descend(std::vector<int>(conflicts.size(), 0), baseline);
  const std::vector<int> serial(conflicts.size(), 1);
  Candidate start;
  if (try_schedule(c, d, fences_for(conflicts, serial), omega, start)) {
    Candidate other = descend(serial, std::move(start));
    if (other.cost.total < best.cost.total) best = std::move(other);
  }
  return best;
}

}  // namespace schedule_detail

/// Crosstalk-adaptive scheduling.
///
/// Starts from the ParSched schedule and decides, for each conflict pair,
/// whether to keep it parallel or to fence one gate behind the other, then
/// re-runs ASAP. Up to `exhaustive_limit` conflicts are searched
/// exhaustively, larger sets greedily in descending ratio. The schedule
/// with the lowest ScheduleCost wins. At omega = 1 any conflict left
/// over is fenced in source order until none remain.
inline ScheduledCircuit xtalk_sched(const Circuit& c, const DeviceModel& d,
                                    const XtalkOptions& opt = {}) {
  if (!(opt.threshold > 0.0)) throw std::invalid_argument("threshold must be > 0");
  schedule_detail::Candidate base;
  base.schedule = par_sched(c, d);
  base.cost = schedule_cost(base.schedule, d, opt.omega);
  const auto conflicts = find_conflicts(base.schedule, d, opt.threshold);
  if (conflicts.empty()) return base.schedule;

  const bool use_exhaustive =
      opt.strategy == SearchStrategy::kExhaustive ||
      (opt.strategy == SearchStrategy::kAuto &&
       conflicts.size() <= opt.exhaustive_limit);
  schedule_detail::Candidate best =
      use_exhaustive
          ? schedule_detail::exhaustive(c, d, conflicts, opt.omega, base)
          : schedule_detail::greedy(c, d, conflicts, opt.omega, base);

  if (opt.omega == 1.0) {
    for (;;) {
      const auto left = find_conflicts(best.schedule, d, opt.threshold);
      if (left.empty()) break;
      auto fences = best.schedule.fences;
      fences.emplace_back(left.front().gate_a, left.front().gate_b);
      schedule_detail::try_schedule(c, d, std::move(fences), opt.omega, best);
    }
  }
  return best.schedule;
}

/// {"makespan_ns", "gates": {"<index>": {"start_ns", "duration_ns"}},
///  "fences": [[a, b], ...]}
inline nlohmann::json schedule_to_json(const ScheduledCircuit& sc) {
  nlohmann::json gates = nlohmann::json::object();
  for (std::size_t i = 0; i < sc.circuit.size(); ++i) {
    gates[std::to_string(i)] = {{"start_ns", sc.start[i]},
                                {"duration_ns", sc.duration[i]}};
  }
  nlohmann::json fences = nlohmann::json::array();
  for (auto [a, b] : sc.fences) fences.push_back({a, b});
  return {{"makespan_ns", sc.makespan}, {"gates", gates}, {"fences", fences}};
}

/// QASM in start-time order with a barrier line in front of every fenced
/// gate, spanning both gates of the fence.
inline std::string emit_scheduled_qasm(const ScheduledCircuit& sc) {
  const Circuit& c = sc.circuit;
  std::vector<std::size_t> order(c.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return sc.start[x] < sc.start[y];
  });
  std::string out = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n";
  out += "qreg q[" + std::to_string(c.num_qubits()) + "];\n";
  if (c.num_clbits() > 0) {
    out += "creg c[" + std::to_string(c.num_clbits()) + "];\n";
  }
  auto operand_list = [](const std::vector<Qubit>& qs) {
    std::string s;
    for (std::size_t i = 0; i < qs.size(); ++i) {
      s += (i ? ",q[" : "q[") + std::to_string(qs[i]) + "]";
    }
    return s;
  };
  for (std::size_t i : order) {
    for (auto [a, b] : sc.fences) {
      if (b != i) continue;
      std::vector<Qubit> qs = c[a].qubits();
      for (Qubit q : c[b].qubits())
        if (std::find(qs.begin(), qs.end(), q) == qs.end()) qs.push_back(q);
      out += "barrier " + operand_list(qs) + "; // fence " + std::to_string(a) +
             " -> " + std::to_string(b) + "\n";
    }
    const Gate& g = c[i];
    std::string line;
    if (g.is_measure()) {
      line = "measure q[" + std::to_string(g.qubits().front()) + "] -> c[" +
             std::to_string(*g.clbit()) + "];";
    } else {
      line = std::string(gate_name(g.kind()));
      if (g.kind() == GateKind::kRZ) {
        line += "(" + nlohmann::json(g.angle()).dump() + ")";
      }
      line += " " + operand_list(g.qubits()) + ";";
    }
    out += line + " // t=" + std::to_string(sc.start[i]) + "\n";
  }
  return out;
}

}  // namespace xtalk
