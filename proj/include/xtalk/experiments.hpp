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
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "xtalk/circuit.hpp"
#include "xtalk/decompose.hpp"
#include "xtalk/device.hpp"
#include "xtalk/error.hpp"
#include "xtalk/qasm.hpp"
#include "xtalk/schedule.hpp"
#include "xtalk/simulate.hpp"
#include "xtalk/util.hpp"

namespace xtalk {

enum class FidelityMetric { kSuccessProbability, kClassicalFidelity };

inline const char* metric_name(FidelityMetric m) {
  return m == FidelityMetric::kSuccessProbability ? "success_probability"
                                                  : "classical_fidelity";
}

/// A QASM benchmark with its ideal outcomes, lowered to native gates.
///
/// The source carries a line `// expect: <bits> [<bits> ...]` listing the
/// outcomes of the noiseless circuit, which must be equally likely. One
/// outcome is scored by its probability, several by classical fidelity.
struct Benchmark {
  std::string name;
  Circuit circuit;
  std::vector<std::string> expected;

  FidelityMetric metric() const {
    return expected.size() == 1 ? FidelityMetric::kSuccessProbability
                                : FidelityMetric::kClassicalFidelity;
  }
};

inline double fidelity(const Benchmark& b, const OutcomeDistribution& noisy) {
  if (b.metric() == FidelityMetric::kSuccessProbability) {
    return std::clamp(noisy.probability(b.expected.front()), 0.0, 1.0);
  }
  const double ideal = 1.0 / static_cast<double>(b.expected.size());
  double f = 0.0;
  for (const auto& bits : b.expected) f += std::sqrt(ideal * std::max(0.0, noisy.probability(bits)));
  return std::clamp(f, 0.0, 1.0);
}

inline Benchmark parse_benchmark(const std::string& name, const std::string& text) {
  Benchmark b;
  b.name = name;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto at = line.find("// expect:");
    if (at == std::string::npos) continue;
    std::istringstream words(line.substr(at + 10));
    std::string w;
    while (words >> w) b.expected.push_back(w);
    break;
  }
  if (b.expected.empty()) {
    throw InputError(name + ": missing '// expect:' line");
  }
  try {
    b.circuit = decompose_to_native(parse_qasm(text));
  } catch (const ParseError& e) {
    throw InputError(name + ":" + e.what());
  }
  const auto ideal = ideal_distribution(b.circuit);
  const double share = 1.0 / static_cast<double>(b.expected.size());
  double covered = 0.0;
  for (const auto& bits : b.expected) {
    const double p = ideal.probability(bits);
    if (std::abs(p - share) > 1e-9) {
      throw InputError(name + ": ideal probability of '" + bits + "' is " +
                       format_double(p) + ", expected " + format_double(share));
    }
    covered += p;
  }
  if (std::abs(covered - 1.0) > 1e-9) {
    throw InputError(name + ": expected outcomes do not cover the ideal output");
  }
  return b;
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
}

inline Benchmark load_benchmark(const std::filesystem::path& path) {
  return parse_benchmark(path.stem().string(), read_text(path));
}

/// Every *.qasm file in `dir`, sorted by file name.
inline std::vector<Benchmark> load_benchmarks(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw InputError("benchmark directory '" + dir.string() + "' does not exist");
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".qasm") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw InputError("no .qasm files in '" + dir.string() + "'");
  std::vector<Benchmark> out;
  for (const auto& f : files) out.push_back(load_benchmark(f));
  return out;
}

// ---------------------------------------------------------------------------
// Injection

inline constexpr int kMaxInjected = 3;

/// For injected pair j: index among the lowered CSWAP's CX gates that
/// CX(2j+3, 2j+4) runs beside. They sit on edges 1-2, 0-2 and 0-1.
inline constexpr int kInjectionSlots[kMaxInjected] = {0, 2, 5};

/// Edge of the CSWAP-internal CX beside injected pair j.
inline Edge injection_target_edge(int j) {
  static const Edge edges[kMaxInjected] = {Edge(1, 2), Edge(0, 2), Edge(0, 1)};
  return edges[j];
}

inline Edge injected_edge(int j) { return Edge(2 * j + 3, 2 * j + 4); }

/// X on q0 and q1, then cswap q0, q1, q2 lowered to native gates; measured
/// into c[0..2], so the ideal output is '101'. Each of the three slots is
/// fenced by barriers over all qubits, and slot j < k also holds
/// cx q[2j+3], q[2j+4].
inline Circuit injection_circuit(int k, std::size_t num_qubits = 2 * kMaxInjected + 3) {
  if (k < 0 || k > kMaxInjected) {
    throw InputError("number of injected pairs must be in 0.." + std::to_string(kMaxInjected));
  }
  if (num_qubits < static_cast<std::size_t>(3 + 2 * k)) {
    throw MismatchError("injecting " + std::to_string(k) + " pairs needs " +
                        std::to_string(3 + 2 * k) + " qubits");
  }
  Circuit cswap(3, 0);
  cswap.add(Gate(GateKind::kCSWAP, {0, 1, 2}));
  const Circuit lowered = decompose_to_native(cswap);
  std::vector<Qubit> all(num_qubits);
  for (std::size_t q = 0; q < num_qubits; ++q) all[q] = static_cast<Qubit>(q);

  Circuit c(num_qubits, 3);
  c.add(Gate::single(GateKind::kX, 0));
  c.add(Gate::single(GateKind::kX, 1));
  int cx_seen = 0;
  for (const Gate& g : lowered) {
    int slot = -1;
    if (g.is_cx()) {
      for (int j = 0; j < kMaxInjected; ++j)
        if (kInjectionSlots[j] == cx_seen) slot = j;
      ++cx_seen;
    }
    if (slot < 0) {
      c.add(g);
      continue;
    }
    c.add(Gate::barrier(all));
    c.add(g);
    if (slot < k) {
      const Edge e = injected_edge(slot);
      c.add(Gate::cx(e.a, e.b));
    }
    c.add(Gate::barrier(all));
  }
  for (Qubit q = 0; q < 3; ++q) c.add(Gate::measure(q, q));
  return c;
}

inline const std::string kInjectionExpected = "101";

struct InjectionRow {
  int k = 0;
  double p_correct = 0.0;
  /// 1 - p_correct / p_correct(k = 0).
  double relative_drop = 0.0;
  OutcomeDistribution distribution;
};

struct InjectionResult {
  std::string device;
  std::vector<InjectionRow> rows;
  double worst_drop = 0.0;
  std::vector<std::string> warnings;
};

/// Runs the injection circuits for k = 0..max_k under ParSched.
inline InjectionResult run_injection(const DeviceModel& d, int max_k, const ShotMode& mode = {},
                                     unsigned workers = 1) {
  if (max_k < 0 || max_k > kMaxInjected) {
    throw InputError("max k must be in 0.." + std::to_string(kMaxInjected));
  }
  const std::size_t width = static_cast<std::size_t>(3 + 2 * max_k);
  if (d.num_qubits < width) {
    throw MismatchError("device '" + d.name + "' has " + std::to_string(d.num_qubits) +
                        " qubits; injecting " + std::to_string(max_k) + " pairs needs " +
                        std::to_string(width));
  }
  InjectionResult res;
  res.device = d.name;
  for (int j = 0; j < max_k; ++j) {
    const Edge e = injection_target_edge(j), f = injected_edge(j);
    if (!d.crosstalk.entries().count({e, f}) && !d.crosstalk.entries().count({f, e})) {
      res.warnings.push_back("no crosstalk entry between " + e.label() + " and " + f.label() +
                             "; ratio taken as 1");
    }
  }
  auto rows = parallel_map<InjectionRow>(
      static_cast<std::size_t>(max_k + 1), workers, [&](std::size_t k) {
        const Circuit c = injection_circuit(static_cast<int>(k), width);
        ShotMode m = mode;
        if (m.sampled) m.seed += k;
        InjectionRow row;
        row.k = static_cast<int>(k);
        row.distribution = run_scheduled(par_sched(c, d), {&d, m});
        row.p_correct = row.distribution.probability(kInjectionExpected);
        return row;
      });
  const double base = rows.front().p_correct;
  for (auto& r : rows) {
    r.relative_drop = base > 0.0 ? 1.0 - r.p_correct / base : 0.0;
    res.worst_drop = std::max(res.worst_drop, r.relative_drop);
  }
  res.rows = std::move(rows);
  return res;
}

inline std::string injection_csv(const InjectionResult& r) {
  std::string out = "k,p_correct,relative_drop\n";
  for (const auto& row : r.rows) {
    out += std::to_string(row.k) + "," + format_double(row.p_correct) + "," +
           format_double(row.relative_drop) + "\n";
  }
  return out;
}

inline nlohmann::json to_json(const InjectionResult& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"k", row.k},
                    {"p_correct", row.p_correct},
                    {"relative_drop", row.relative_drop},
                    {"distribution", to_json(row.distribution)}});
  }
  return {{"device", r.device},
          {"expected", kInjectionExpected},
          {"rows", rows},
          {"worst_drop", r.worst_drop},
          {"warnings", r.warnings}};
}

// ---------------------------------------------------------------------------
// Comparison

/// Same device with its crosstalk ratios replaced.
inline DeviceModel with_crosstalk(DeviceModel d, CrosstalkMap m) {
  d.crosstalk = std::move(m);
  return d;
}

struct CompareOptions {
  double omega = 0.5;
  double threshold = 2.0;
  SearchStrategy strategy = SearchStrategy::kAuto;
};

struct ComparisonRecord {
  std::string benchmark;
  FidelityMetric metric = FidelityMetric::kSuccessProbability;
  double fidelity_par = 0.0;
  double fidelity_xtalk = 0.0;
  std::size_t depth_par = 0;
  std::size_t depth_xtalk = 0;
  TimeNs makespan_par_ns = 0;
  TimeNs makespan_xtalk_ns = 0;
  ScheduleCost cost_par;
  ScheduleCost cost_xtalk;
  std::size_t conflicts_par = 0;
  std::size_t conflicts_xtalk = 0;
  double omega = 0.5;
  double threshold = 2.0;
};

/// ParSched and XtalkSched on one benchmark. `model` supplies the crosstalk
/// ratios the scheduler sees; `truth` is the device that is simulated.
inline ComparisonRecord compare_benchmark(const Benchmark& b, const DeviceModel& truth,
                                          const DeviceModel& model,
                                          const CompareOptions& opt) {
  try {
    ComparisonRecord r;
    r.benchmark = b.name;
    r.metric = b.metric();
    r.omega = opt.omega;
    r.threshold = opt.threshold;
    const auto par = par_sched(b.circuit, model);
    const auto xt = xtalk_sched(b.circuit, model, {opt.omega, opt.threshold, opt.strategy});
    r.fidelity_par = fidelity(b, run_scheduled(par, {&truth, ShotMode::analytic()}));
    r.fidelity_xtalk = fidelity(b, run_scheduled(xt, {&truth, ShotMode::analytic()}));
    r.depth_par = gate_depth(par);
    r.depth_xtalk = gate_depth(xt);
    r.makespan_par_ns = par.makespan;
    r.makespan_xtalk_ns = xt.makespan;
    r.cost_par = schedule_cost(par, model, opt.omega);
    r.cost_xtalk = schedule_cost(xt, model, opt.omega);
    r.conflicts_par = find_conflicts(par, truth, opt.threshold).size();
    r.conflicts_xtalk = find_conflicts(xt, truth, opt.threshold).size();
    return r;
  } catch (const MismatchError& e) {
    throw MismatchError(b.name + ": " + e.what());
  }
}

inline std::vector<ComparisonRecord> run_compare(const DeviceModel& truth,
                                                 const DeviceModel& model,
                                                 const std::vector<Benchmark>& benchmarks,
                                                 const CompareOptions& opt,
                                                 unsigned workers = 1) {
  if (!(opt.omega >= 0.0 && opt.omega <= 1.0)) throw InputError("omega must lie in [0, 1]");
  if (!(opt.threshold > 0.0)) throw InputError("threshold must be > 0");
  return parallel_map<ComparisonRecord>(benchmarks.size(), workers, [&](std::size_t i) {
    return compare_benchmark(benchmarks[i], truth, model, opt);
  });
}

inline std::vector<ComparisonRecord> run_compare(const DeviceModel& d,
                                                 const std::vector<Benchmark>& benchmarks,
                                                 const CompareOptions& opt,
                                                 unsigned workers = 1) {
  return run_compare(d, d, benchmarks, opt, workers);
}

/// One record per omega for a single benchmark.
inline std::vector<ComparisonRecord> omega_sweep(const Benchmark& b, const DeviceModel& d,
                                                 const std::vector<double>& omegas,
                                                 double threshold) {
  std::vector<ComparisonRecord> out;
  for (double w : omegas) out.push_back(compare_benchmark(b, d, d, {w, threshold}));
  return out;
}

struct CompareSummary {
  double fidelity_par = 0.0;
  double fidelity_xtalk = 0.0;
  double depth_par = 0.0;
  double depth_xtalk = 0.0;
  double makespan_par_ns = 0.0;
  double makespan_xtalk_ns = 0.0;
};

inline CompareSummary summarize(const std::vector<ComparisonRecord>& records) {
  if (records.empty()) throw std::invalid_argument("no comparison records");
  CompareSummary s;
  for (const auto& r : records) {
    s.fidelity_par += r.fidelity_par;
    s.fidelity_xtalk += r.fidelity_xtalk;
    s.depth_par += static_cast<double>(r.depth_par);
    s.depth_xtalk += static_cast<double>(r.depth_xtalk);
    s.makespan_par_ns += static_cast<double>(r.makespan_par_ns);
    s.makespan_xtalk_ns += static_cast<double>(r.makespan_xtalk_ns);
  }
  const double n = static_cast<double>(records.size());
  for (double* v : {&s.fidelity_par, &s.fidelity_xtalk, &s.depth_par, &s.depth_xtalk,
                    &s.makespan_par_ns, &s.makespan_xtalk_ns}) {
    *v /= n;
  }
  return s;
}

enum class ReportFormat { kCsv, kJson };

inline nlohmann::json to_json(const ScheduleCost& c) {
  return {{"crosstalk", c.crosstalk_term}, {"decoherence", c.decoherence_term},
          {"omega", c.omega}, {"total", c.total}};
}

/// CSV: benchmark, fidelity_par, fidelity_xtalk, depth_par, depth_xtalk,
/// makespan_par_ns, makespan_xtalk_ns, omega, threshold. JSON adds the
/// metric, cost breakdowns, conflict counts and the means.
inline std::string emit_report(const std::vector<ComparisonRecord>& records, ReportFormat f) {
  if (records.empty()) throw std::invalid_argument("cannot emit an empty report");
  if (f == ReportFormat::kCsv) {
    std::string out =
        "benchmark,fidelity_par,fidelity_xtalk,depth_par,depth_xtalk,makespan_par_ns,"
        "makespan_xtalk_ns,omega,threshold\n";
    for (const auto& r : records) {
      out += r.benchmark + "," + format_double(r.fidelity_par) + "," +
             format_double(r.fidelity_xtalk) + "," + std::to_string(r.depth_par) + "," +
             std::to_string(r.depth_xtalk) + "," + std::to_string(r.makespan_par_ns) + "," +
             std::to_string(r.makespan_xtalk_ns) + "," + format_double(r.omega) + "," +
             format_double(r.threshold) + "\n";
    }
    return out;
  }
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : records) {
    rows.push_back({{"benchmark", r.benchmark},
                    {"metric", metric_name(r.metric)},
                    {"fidelity_par", r.fidelity_par},
                    {"fidelity_xtalk", r.fidelity_xtalk},
                    {"depth_par", r.depth_par},
                    {"depth_xtalk", r.depth_xtalk},
                    {"makespan_par_ns", r.makespan_par_ns},
                    {"makespan_xtalk_ns", r.makespan_xtalk_ns},
                    {"cost_par", to_json(r.cost_par)},
                    {"cost_xtalk", to_json(r.cost_xtalk)},
                    {"conflicts_par", r.conflicts_par},
                    {"conflicts_xtalk", r.conflicts_xtalk},
                    {"omega", r.omega},
                    {"threshold", r.threshold}});
  }
  const auto s = summarize(records);
  nlohmann::json mean = {{"fidelity_par", s.fidelity_par},
                         {"fidelity_xtalk", s.fidelity_xtalk},
                         {"depth_par", s.depth_par},
                         {"depth_xtalk", s.depth_xtalk},
                         {"makespan_par_ns", s.makespan_par_ns},
                         {"makespan_xtalk_ns", s.makespan_xtalk_ns}};
  return nlohmann::json{{"records", rows}, {"mean", mean}}.dump(2) + "\n";
}

}  // namespace xtalk
