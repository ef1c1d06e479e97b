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
#include <cstdint>
#include <functional>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "xtalk/circuit.hpp"
#include "xtalk/density_matrix.hpp"
#include "xtalk/device.hpp"
#include "xtalk/error.hpp"
#include "xtalk/schedule.hpp"

namespace xtalk {

/// How measurement outcomes are reported.
struct ShotMode {
  bool sampled = false;
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;

  static ShotMode analytic() { return {}; }
  static ShotMode sample(std::uint64_t shots, std::uint64_t seed) {
    if (shots < 1) throw std::invalid_argument("sampled mode needs shots >= 1");
    return {true, shots, seed};
  }
};

struct NoiseBinding {
  const DeviceModel* device = nullptr;
  ShotMode mode;
};

/// Probabilities keyed by classical bitstring; the leftmost character is
/// the highest classical bit. Without measurements the key covers all
/// qubits, leftmost = highest qubit.
struct OutcomeDistribution {
  std::map<std::string, double> probabilities;
  ShotMode mode;

  double probability(const std::string& bits) const {
    auto it = probabilities.find(bits);
    return it == probabilities.end() ? 0.0 : it->second;
  }

  double total() const {
    double s = 0.0;
    for (const auto& [k, p] : probabilities) s += p;
    return s;
  }
};

inline nlohmann::json to_json(const OutcomeDistribution& d) {
  nlohmann::json probs = nlohmann::json::object();
  for (const auto& [k, p] : d.probabilities) probs[k] = p;
  nlohmann::json out = {{"mode", d.mode.sampled ? "sampled" : "analytic"},
                        {"probabilities", probs}};
  out["shots"] = d.mode.sampled ? nlohmann::json(d.mode.shots) : nlohmann::json();
  out["seed"] = d.mode.sampled ? nlohmann::json(d.mode.seed) : nlohmann::json();
  return out;
}

/// Called after every unitary or channel the simulator applies.
using StateObserver = std::function<void(const DensityMatrix&)>;

namespace simulate_detail {

// Uniform double in [0, 1) from the top 53 bits; stable across standard
// library implementations.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::string bits_to_string(std::uint64_t value, std::size_t width) {
  std::string s(width, '0');
  for (std::size_t i = 0; i < width; ++i) {
    if ((value >> i) & 1) s[width - 1 - i] = '1';
  }
  return s;
}

// Folds the joint distribution over simulated qubits into classical bits.
// `measured[k]` = (local qubit, clbit, readout flip probability).
inline OutcomeDistribution fold(const std::vector<double>& probs,
                                const std::vector<std::tuple<int, Clbit, double>>& measured,
                                std::size_t width, const ShotMode& mode) {
  std::map<std::uint64_t, double> acc;
  for (std::size_t basis = 0; basis < probs.size(); ++basis) {
    if (probs[basis] == 0.0) continue;
    // Readout flips enumerate the subsets of measured bits with weight.
    std::vector<std::pair<std::uint64_t, double>> outcomes{{0, probs[basis]}};
    for (const auto& [q, cb, flip] : measured) {
      const bool bit = (basis >> q) & 1;
      std::vector<std::pair<std::uint64_t, double>> next;
      next.reserve(outcomes.size() * 2);
      for (const auto& [val, w] : outcomes) {
        const std::uint64_t cleared = val & ~(std::uint64_t{1} << cb);
        const std::uint64_t set = val | (std::uint64_t{1} << cb);
        if (flip == 0.0) {
          next.emplace_back(bit ? set : cleared, w);
        } else {
          next.emplace_back(bit ? set : cleared, w * (1.0 - flip));
          next.emplace_back(bit ? cleared : set, w * flip);
        }
      }
      outcomes = std::move(next);
    }
    for (const auto& [val, w] : outcomes) acc[val] += w;
  }
  double total = 0.0;
  for (const auto& [k, p] : acc) total += p;
  OutcomeDistribution out;
  out.mode = mode;
  if (!mode.sampled) {
    for (const auto& [k, p] : acc) out.probabilities[bits_to_string(k, width)] = p / total;
    return out;
  }
  std::mt19937_64 rng(mode.seed);
  std::vector<std::pair<std::uint64_t, double>> cdf;
  double run = 0.0;
  for (const auto& [k, p] : acc) {
    run += p / total;
    cdf.emplace_back(k, run);
  }
  std::map<std::uint64_t, std::uint64_t> counts;
  for (std::uint64_t s = 0; s < mode.shots; ++s) {
    const double u = uniform01(rng);
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u,
                               [](double x, const auto& e) { return x < e.second; });
    if (it == cdf.end()) --it;
    ++counts[it->first];
  }
  for (const auto& [k, n] : counts) {
    out.probabilities[bits_to_string(k, width)] =
        static_cast<double>(n) / static_cast<double>(mode.shots);
  }
  return out;
}

}  // namespace simulate_detail

/// Noisy execution of a schedule.
///
/// Sweeps the distinct start/end times. At each time the gates starting
/// there are applied in source order, each followed by its depolarizing
/// error: CX gates use the crosstalk-amplified error against every CX
/// overlapping them in time, single-qubit gates the qubit's sq_error.
/// Qubits that are not inside any gate during an interval relax thermally
/// for its length. Measurement is terminal; readout flips apply per
/// measured qubit. Qubits untouched by the circuit are not simulated.
inline OutcomeDistribution run_scheduled(const ScheduledCircuit& sc,
                                         const NoiseBinding& nb,
                                         const StateObserver& observer = {}) {
  if (!nb.device) throw std::invalid_argument("noise binding has no device");
  const DeviceModel& d = *nb.device;
  const Circuit& c = sc.circuit;
  if (const auto why = schedule_violation(sc); !why.empty()) {
    throw MismatchError("invalid schedule: " + why);
  }
  if (c.num_qubits() > d.num_qubits) {
    throw MismatchError("schedule has more qubits than the device");
  }
  for (const Gate& g : c) {
    if (is_macro(g.kind())) {
      throw MismatchError("schedule contains unlowered macro gates");
    }
    if (g.is_cx() && !d.has_edge(cx_edge(g))) {
      throw MismatchError("cx on " + cx_edge(g).label() + " is not a device edge");
    }
  }

  // Local numbering for the qubits the circuit actually touches.
  const auto active = c.active_qubits();
  std::vector<int> local(c.num_qubits(), -1);
  std::vector<Qubit> physical;
  for (std::size_t q = 0; q < c.num_qubits(); ++q) {
    if (active[q]) {
      local[q] = static_cast<int>(physical.size());
      physical.push_back(static_cast<Qubit>(q));
    }
  }
  DensityMatrix rho(static_cast<int>(physical.size()));
  auto notify = [&] {
    if (observer) observer(rho);
  };

  std::vector<TimeNs> times{0, sc.makespan};
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i].is_barrier()) continue;
    times.push_back(sc.start[i]);
    times.push_back(sc.end(i));
  }
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());

  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (!c[i].is_barrier()) order.push_back(i);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return sc.start[x] < sc.start[y];
  });

  const auto concurrent = concurrent_cx_edges(sc);
  std::vector<bool> retired(physical.size(), false);
  std::vector<std::tuple<int, Clbit, double>> measured;
  std::map<std::pair<int, TimeNs>, KrausChannel> relax_cache;
  std::map<std::pair<int, double>, KrausChannel> depol_cache;
  std::vector<std::size_t> in_flight;
  std::size_t next = 0;

  for (std::size_t k = 0; k < times.size(); ++k) {
    const TimeNs t = times[k];
    for (; next < order.size() && sc.start[order[next]] == t; ++next) {
      const std::size_t i = order[next];
      const Gate& g = c[i];
      std::vector<Qubit> targets;
      for (Qubit q : g.qubits()) targets.push_back(local[q]);
      if (g.is_measure()) {
        if (sc.duration[i] > 0) in_flight.push_back(i);
        const int lq = targets.front();
        retired[lq] = true;
        measured.emplace_back(lq, *g.clbit(), d.readout_error[g.qubits().front()]);
        continue;
      }
      if (sc.duration[i] > 0) in_flight.push_back(i);
      rho.apply_matrix(targets, gate_unitary(g));
      notify();
      double p = 0.0;
      if (g.is_cx()) {
        p = effective_cx_error(d, cx_edge(g), concurrent[i]);
      } else {
        p = d.sq_error[g.qubits().front()];
      }
      if (p > 0.0) {
        const int arity = static_cast<int>(targets.size());
        auto it = depol_cache.find({arity, p});
        if (it == depol_cache.end()) {
          it = depol_cache.emplace(std::make_pair(arity, p),
                                   depolarizing_channel(arity, p)).first;
        }
        rho.apply_channel(targets, it->second);
        notify();
      }
    }
    if (k + 1 == times.size()) break;
    const TimeNs dt = times[k + 1] - t;
    std::erase_if(in_flight, [&](std::size_t i) { return sc.end(i) <= t; });
    std::vector<bool> busy(physical.size(), false);
    for (std::size_t i : in_flight) {
      for (Qubit q : c[i].qubits()) busy[local[q]] = true;
    }
    for (std::size_t lq = 0; lq < physical.size(); ++lq) {
      if (busy[lq] || retired[lq]) continue;
      const Qubit q = physical[lq];
      if (std::isinf(d.t1_ns[q]) && std::isinf(d.t2_ns[q])) continue;
      auto key = std::make_pair(q, dt);
      auto it = relax_cache.find(key);
      if (it == relax_cache.end()) {
        it = relax_cache
                 .emplace(key, thermal_relaxation_channel(d.t1_ns[q], d.t2_ns[q],
                                                          static_cast<double>(dt)))
                 .first;
      }
      const Qubit target = static_cast<Qubit>(lq);
      rho.apply_channel(std::span<const Qubit>(&target, 1), it->second);
      notify();
    }
  }

  std::size_t width = c.num_clbits();
  if (measured.empty()) {
    width = c.num_qubits();
    for (std::size_t lq = 0; lq < physical.size(); ++lq) {
      measured.emplace_back(static_cast<int>(lq), physical[lq], 0.0);
    }
  }
  return simulate_detail::fold(rho.probabilities(), measured, width, nb.mode);
}

/// Noiseless output distribution of `c` executed gate by gate in source
/// order. Macro gates are applied directly.
inline OutcomeDistribution ideal_distribution(const Circuit& c) {
  const auto active = c.active_qubits();
  std::vector<int> local(c.num_qubits(), -1);
  int count = 0;
  for (std::size_t q = 0; q < c.num_qubits(); ++q)
    if (active[q]) local[q] = count++;
  DensityMatrix rho(count);
  std::vector<std::tuple<int, Clbit, double>> measured;
  for (const Gate& g : c) {
    if (g.is_barrier()) continue;
    std::vector<Qubit> targets;
    for (Qubit q : g.qubits()) targets.push_back(local[q]);
    if (g.is_measure()) {
      measured.emplace_back(targets.front(), *g.clbit(), 0.0);
      continue;
    }
    rho.apply_matrix(targets, gate_unitary(g));
  }
  std::size_t width = c.num_clbits();
  if (measured.empty()) {
    width = c.num_qubits();
    for (std::size_t q = 0; q < c.num_qubits(); ++q)
      if (active[q]) measured.emplace_back(local[q], static_cast<Clbit>(q), 0.0);
  }
  return simulate_detail::fold(rho.probabilities(), measured, width, ShotMode::analytic());
}

}  // namespace xtalk
