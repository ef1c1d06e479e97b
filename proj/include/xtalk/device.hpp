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
#include <compare>
#include <cstddef>
#include <fstream>
#include <limits>
#include <map>
#include <nlohmann/json.hpp>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "xtalk/circuit.hpp"
#include "xtalk/error.hpp"

namespace xtalk {

/// Undirected coupler between two qubits, stored as (min, max).
struct Edge {
  Qubit a = 0;
  Qubit b = 0;

  Edge() = default;
  Edge(Qubit x, Qubit y) : a(std::min(x, y)), b(std::max(x, y)) {}

  bool touches(Qubit q) const { return a == q || b == q; }
  bool shares_qubit(const Edge& o) const { return touches(o.a) || touches(o.b); }
  std::string label() const { return std::to_string(a) + "-" + std::to_string(b); }

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Parses "a-b" with a < b.
inline Edge parse_edge_label(const std::string& s) {
  const auto dash = s.find('-');
  auto bad = [&] { return DeviceError("malformed edge key '" + s + "'"); };
  if (dash == std::string::npos || dash == 0 || dash + 1 == s.size()) throw bad();
  std::size_t used_a = 0, used_b = 0;
  int a = 0, b = 0;
  try {
    a = std::stoi(s.substr(0, dash), &used_a);
    b = std::stoi(s.substr(dash + 1), &used_b);
  } catch (const std::exception&) {
    throw bad();
  }
  if (used_a != dash || used_b != s.size() - dash - 1 || a < 0 || a >= b) {
    throw DeviceError("edge key '" + s + "' must be \"min-max\"");
  }
  return Edge(a, b);
}

/// Directed crosstalk ratios r(e|f): the error of a CX on e while a CX on
/// f runs concurrently is r(e|f) times its independent error. Missing
/// entries mean 1.
class CrosstalkMap {
 public:
  using Key = std::pair<Edge, Edge>;

  double ratio(const Edge& e, const Edge& f) const {
    auto it = entries_.find({e, f});
    return it == entries_.end() ? 1.0 : it->second;
  }

  void set(const Edge& e, const Edge& f, double r) {
    if (e.shares_qubit(f)) {
      throw DeviceError("crosstalk pair " + e.label() + "|" + f.label() +
                        " shares a qubit");
    }
    if (!(r >= 0.0) || !std::isfinite(r)) {
      throw DeviceError("crosstalk ratio for " + e.label() + "|" + f.label() +
                        " must be a finite number >= 0");
    }
    entries_[{e, f}] = r;
  }

  const std::map<Key, double>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  friend bool operator==(const CrosstalkMap&, const CrosstalkMap&) = default;

 private:
  std::map<Key, double> entries_;
};

/// How ratios from several concurrent partners combine.
enum class CrosstalkAggregation { kMax, kProductCapped };

struct GateDurations {
  double cx_ns = 0.0;
  double sq_ns = 0.0;
  double measure_ns = 0.0;

  friend bool operator==(const GateDurations&, const GateDurations&) = default;
};

/// Upper bound on a crosstalk-amplified CX error.
inline constexpr double kMaxCxError = 0.75;

/// Machine description. Times are stored in nanoseconds.
struct DeviceModel {
  std::string name;
  std::size_t num_qubits = 0;
  std::vector<Edge> edges;
  std::map<Edge, double> cx_error;
  std::vector<double> sq_error;
  std::vector<double> t1_ns;
  std::vector<double> t2_ns;
  std::vector<double> readout_error;
  GateDurations durations;
  CrosstalkMap crosstalk;
  CrosstalkAggregation aggregation = CrosstalkAggregation::kMax;

  bool has_edge(const Edge& e) const {
    return std::binary_search(edges.begin(), edges.end(), e);
  }

  double edge_error(const Edge& e) const {
    auto it = cx_error.find(e);
    if (it == cx_error.end()) {
      throw MismatchError("unknown edge " + e.label());
    }
    return it->second;
  }

  /// Throws DeviceError on the first violated constraint.
  void validate() const {
    auto check_prob = [](double p, const std::string& what) {
      if (!(p >= 0.0 && p < 1.0)) {
        throw DeviceError(what + " must lie in [0, 1)");
      }
    };
    if (sq_error.size() != num_qubits || t1_ns.size() != num_qubits ||
        t2_ns.size() != num_qubits || readout_error.size() != num_qubits) {
      throw DeviceError("per-qubit tables must cover all " +
                        std::to_string(num_qubits) + " qubits");
    }
    if (!std::is_sorted(edges.begin(), edges.end()) ||
        std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
      throw DeviceError("edges must be sorted and unique");
    }
    for (const Edge& e : edges) {
      if (static_cast<std::size_t>(e.b) >= num_qubits || e.a == e.b) {
        throw DeviceError("edge " + e.label() + " out of range");
      }
      if (!cx_error.count(e)) {
        throw DeviceError("cx_error: missing entry for edge " + e.label());
      }
      check_prob(cx_error.at(e), "cx_error[" + e.label() + "]");
    }
    if (cx_error.size() != edges.size()) {
      throw DeviceError("cx_error: entry for an edge not in edges");
    }
    for (std::size_t q = 0; q < num_qubits; ++q) {
      const std::string qs = std::to_string(q);
      check_prob(sq_error[q], "sq_error[" + qs + "]");
      check_prob(readout_error[q], "readout_error[" + qs + "]");
      if (!(t1_ns[q] > 0.0)) throw DeviceError("t1[" + qs + "] must be > 0");
      if (!(t2_ns[q] > 0.0 && t2_ns[q] <= 2.0 * t1_ns[q])) {
        throw DeviceError("t2[" + qs + "] must satisfy 0 < t2 <= 2*t1");
      }
    }
    for (double d : {durations.cx_ns, durations.sq_ns, durations.measure_ns}) {
      if (!(d >= 0.0) || !std::isfinite(d)) {
        throw DeviceError("durations must be finite and >= 0");
      }
    }
    for (const auto& [key, r] : crosstalk.entries()) {
      if (!has_edge(key.first) || !has_edge(key.second)) {
        throw DeviceError("crosstalk entry " + key.first.label() + "|" +
                          key.second.label() + " names an unknown edge");
      }
    }
  }

  /// Sub-device on `qubits`; qubit qubits[i] becomes qubit i.
  DeviceModel restrict_to(std::span<const Qubit> qubits) const {
    std::vector<int> remap(num_qubits, -1);
    for (std::size_t i = 0; i < qubits.size(); ++i) {
      remap.at(static_cast<std::size_t>(qubits[i])) = static_cast<int>(i);
    }
    DeviceModel out;
    out.name = name;
    out.num_qubits = qubits.size();
    out.durations = durations;
    out.aggregation = aggregation;
    for (Qubit q : qubits) {
      out.sq_error.push_back(sq_error[q]);
      out.t1_ns.push_back(t1_ns[q]);
      out.t2_ns.push_back(t2_ns[q]);
      out.readout_error.push_back(readout_error[q]);
    }
    auto map_edge = [&](const Edge& e) -> std::pair<bool, Edge> {
      if (remap[e.a] < 0 || remap[e.b] < 0) return {false, {}};
      return {true, Edge(remap[e.a], remap[e.b])};
    };
    for (const Edge& e : edges) {
      auto [ok, m] = map_edge(e);
      if (!ok) continue;
      out.edges.push_back(m);
      out.cx_error[m] = cx_error.at(e);
    }
    std::sort(out.edges.begin(), out.edges.end());
    for (const auto& [key, r] : crosstalk.entries()) {
      auto [ok1, e] = map_edge(key.first);
      auto [ok2, f] = map_edge(key.second);
      if (ok1 && ok2) out.crosstalk.set(e, f, r);
    }
    return out;
  }

  friend bool operator==(const DeviceModel&, const DeviceModel&) = default;
};

/// Error of a CX on `e` while CXs on `concurrent` overlap it in time.
///
/// Partner ratios combine by max (or capped product) and never lower the
/// error below the independent value; amplification saturates at
/// kMaxCxError.
inline double effective_cx_error(const DeviceModel& d, const Edge& e,
                                 std::span<const Edge> concurrent) {
  const double eps = d.edge_error(e);
  double factor = 1.0;
  for (const Edge& f : concurrent) {
    if (f.shares_qubit(e)) {
      throw MismatchError("concurrent edge " + f.label() + " overlaps " +
                          e.label());
    }
    const double r = std::max(1.0, d.crosstalk.ratio(e, f));
    factor = d.aggregation == CrosstalkAggregation::kMax ? std::max(factor, r)
                                                         : factor * r;
  }
  if (factor == 1.0) return eps;
  return std::max(eps, std::min(eps * factor, kMaxCxError));
}

/// Device with zero gate error, infinite coherence, and no crosstalk.
inline DeviceModel noiseless_device(std::size_t num_qubits,
                                    std::vector<Edge> edges,
                                    GateDurations durations = {300.0, 35.0,
                                                               1000.0}) {
  DeviceModel d;
  d.name = "noiseless";
  d.num_qubits = num_qubits;
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  d.edges = std::move(edges);
  for (const Edge& e : d.edges) d.cx_error[e] = 0.0;
  d.sq_error.assign(num_qubits, 0.0);
  d.readout_error.assign(num_qubits, 0.0);
  d.t1_ns.assign(num_qubits, std::numeric_limits<double>::infinity());
  d.t2_ns.assign(num_qubits, std::numeric_limits<double>::infinity());
  d.durations = durations;
  return d;
}

/// Same device with every crosstalk ratio removed.
inline DeviceModel without_crosstalk(DeviceModel d) {
  d.crosstalk = CrosstalkMap{};
  return d;
}

namespace device_detail {

using nlohmann::json;

inline const json& field(const json& j, const char* key) {
  if (!j.contains(key)) {
    throw DeviceError(std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

inline double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw DeviceError(where + ": expected a number");
  return j.get<double>();
}

inline std::vector<double> per_qubit(const json& j, const char* key,
                                     std::size_t n, double scale,
                                     bool required, double fallback) {
  std::vector<double> out(n, fallback);
  if (!j.contains(key)) {
    if (required) throw DeviceError(std::string("missing field '") + key + "'");
    return out;
  }
  const json& m = j.at(key);
  if (!m.is_object()) {
    throw DeviceError(std::string(key) + ": expected an object keyed by qubit");
  }
  std::vector<bool> seen(n, false);
  for (const auto& [k, v] : m.items()) {
    std::size_t used = 0;
    long q = -1;
    try {
      q = std::stol(k, &used);
    } catch (const std::exception&) {
    }
    if (used != k.size() || q < 0 || static_cast<std::size_t>(q) >= n) {
      throw DeviceError(std::string(key) + ": bad qubit key '" + k + "'");
    }
    out[q] = number(v, std::string(key) + "[" + k + "]") * scale;
    seen[q] = true;
  }
  if (required) {
    for (std::size_t q = 0; q < n; ++q) {
      if (!seen[q]) {
        throw DeviceError(std::string(key) + ": missing qubit " +
                          std::to_string(q));
      }
    }
  }
  return out;
}

}  // namespace device_detail

/// Builds and validates a device from its JSON form.
inline DeviceModel device_from_json(const nlohmann::json& j) {
  using namespace device_detail;
  if (!j.is_object()) throw DeviceError("device file must hold a JSON object");
  DeviceModel d;
  d.name = j.value("name", std::string("device"));
  const json& nq = field(j, "num_qubits");
  if (!nq.is_number_integer() || nq.get<long>() <= 0) {
    throw DeviceError("num_qubits: expected a positive integer");
  }
  d.num_qubits = nq.get<std::size_t>();

  const json& edges = field(j, "edges");
  if (!edges.is_array()) throw DeviceError("edges: expected an array");
  for (const json& e : edges) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
        !e[1].is_number_integer()) {
      throw DeviceError("edges: each entry must be [a, b]");
    }
    const int a = e[0].get<int>(), b = e[1].get<int>();
    if (a < 0 || b < 0 || a == b) throw DeviceError("edges: invalid pair");
    d.edges.emplace_back(a, b);
  }
  std::sort(d.edges.begin(), d.edges.end());
  if (std::adjacent_find(d.edges.begin(), d.edges.end()) != d.edges.end()) {
    throw DeviceError("edges: duplicate edge");
  }

  const json& cx = field(j, "cx_error");
  if (!cx.is_object()) throw DeviceError("cx_error: expected an object");
  for (const auto& [k, v] : cx.items()) {
    Edge e = parse_edge_label(k);
    if (!d.has_edge(e)) throw DeviceError("cx_error: unknown edge " + k);
    d.cx_error[e] = number(v, "cx_error[" + k + "]");
  }
  d.sq_error = per_qubit(j, "sq_error", d.num_qubits, 1.0, true, 0.0);
  d.t1_ns = per_qubit(j, "t1_us", d.num_qubits, 1e3, true, 0.0);
  d.t2_ns = per_qubit(j, "t2_us", d.num_qubits, 1e3, true, 0.0);
  d.readout_error =
      per_qubit(j, "readout_error", d.num_qubits, 1.0, false, 0.0);

  const json& dur = field(j, "durations_ns");
  if (!dur.is_object()) throw DeviceError("durations_ns: expected an object");
  d.durations.cx_ns = number(field(dur, "cx"), "durations_ns.cx");
  d.durations.sq_ns = number(field(dur, "sq"), "durations_ns.sq");
  d.durations.measure_ns = number(field(dur, "measure"), "durations_ns.measure");

  if (j.contains("crosstalk")) {
    const json& xt = j.at("crosstalk");
    if (!xt.is_array()) throw DeviceError("crosstalk: expected an array");
    for (const json& entry : xt) {
      if (!entry.is_object()) {
        throw DeviceError("crosstalk: each entry must be an object");
      }
      const json& ek = field(entry, "edge");
      const json& ok = field(entry, "other");
      if (!ek.is_string() || !ok.is_string()) {
        throw DeviceError("crosstalk: edge/other must be \"a-b\" strings");
      }
      Edge e = parse_edge_label(ek.get<std::string>());
      Edge f = parse_edge_label(ok.get<std::string>());
      if (!d.has_edge(e) || !d.has_edge(f)) {
        throw DeviceError("crosstalk: unknown edge in " + e.label() + "|" +
                          f.label());
      }
      if (d.crosstalk.entries().count({e, f})) {
        throw DeviceError("crosstalk: duplicate entry " + e.label() + "|" +
                          f.label());
      }
      d.crosstalk.set(e, f, number(field(entry, "ratio"), "crosstalk.ratio"));
    }
  }
  if (j.contains("aggregation")) {
    const auto agg = j.at("aggregation").get<std::string>();
    if (agg == "max") {
      d.aggregation = CrosstalkAggregation::kMax;
    } else if (agg == "product-capped") {
      d.aggregation = CrosstalkAggregation::kProductCapped;
    } else {
      throw DeviceError("aggregation: expected \"max\" or \"product-capped\"");
    }
  }
  d.validate();
  return d;
}

inline DeviceModel load_device(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open device file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DeviceError(path + ": " + e.what());
  }
  try {
    return device_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw DeviceError(path + ": " + e.what());
  }
}

}  // namespace xtalk
