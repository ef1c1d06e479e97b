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
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "xtalk/circuit.hpp"
#include "xtalk/clifford.hpp"
#include "xtalk/density_matrix.hpp"
#include "xtalk/device.hpp"
#include "xtalk/schedule.hpp"
#include "xtalk/simulate.hpp"
#include "xtalk/util.hpp"

namespace xtalk {

struct RBConfig {
  std::vector<int> lengths{1, 5, 10, 20, 50, 100, 150};
  int num_seeds = 5;
  std::uint64_t seed = 0;
  ShotMode mode = ShotMode::analytic();

  static constexpr int kMaxLength = 1500;

  void validate() const {
    if (lengths.empty()) throw std::invalid_argument("RB needs at least one length");
    for (std::size_t i = 0; i < lengths.size(); ++i) {
      if (lengths[i] < 1) throw std::invalid_argument("RB lengths must be >= 1");
      if (i && lengths[i] <= lengths[i - 1]) {
        throw std::invalid_argument("RB lengths must be strictly increasing");
      }
    }
    if (lengths.back() > kMaxLength) {
      throw std::invalid_argument("RB lengths must not exceed " + std::to_string(kMaxLength));
    }
    if (num_seeds < 1) throw std::invalid_argument("RB needs at least one seed");
  }
};

/// F(m) = A * alpha^m + B fitted by least squares, with RMS residual.
struct DecayFit {
  double A = 0.0;
  double B = 0.0;
  double alpha = 1.0;
  double residual = 0.0;
};

namespace rb_detail {

struct Points {
  std::vector<double> m, y;
};

// Best (A, B) in [-1, 1] x [0, 1] for fixed alpha, and its squared error.
inline std::pair<std::array<double, 2>, double> solve_linear(const Points& p, double alpha) {
  const std::size_t n = p.m.size();
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = std::pow(alpha, p.m[i]);
  auto sse = [&](double a, double b) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = a * x[i] + b - p.y[i];
      s += r * r;
    }
    return s;
  };
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += p.y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * p.y[i];
  }
  const double dn = static_cast<double>(n);
  auto clip = [](double v, double lo, double hi) { return std::min(hi, std::max(lo, v)); };
  std::vector<std::array<double, 2>> cands;
  const double det = dn * sxx - sx * sx;
  if (det > 1e-14 * std::max(1.0, dn * sxx)) {
    const double a = (dn * sxy - sx * sy) / det;
    const double b = (sy - a * sx) / dn;
    if (a >= -1 && a <= 1 && b >= 0 && b <= 1) return {{a, b}, sse(a, b)};
  } else {
    // x is constant: only A*x + B is identified; prefer A = 0.
    cands.push_back({0.0, clip(sy / dn, 0.0, 1.0)});
  }
  for (double a : {-1.0, 1.0}) cands.push_back({a, clip((sy - a * sx) / dn, 0.0, 1.0)});
  if (sxx > 0) {
    for (double b : {0.0, 1.0}) cands.push_back({clip((sxy - b * sx) / sxx, -1.0, 1.0), b});
  }
  std::array<double, 2> best = cands.front();
  double best_sse = sse(best[0], best[1]);
  for (const auto& c : cands) {
    const double s = sse(c[0], c[1]);
    if (s < best_sse) {
      best = c;
      best_sse = s;
    }
  }
  return {best, best_sse};
}

}  // namespace rb_detail

/// Fits F(m) = A * alpha^m + B with 0 < alpha <= 1, A in [-1, 1] and
/// B in [0, 1]. alpha is found by a grid scan followed by golden-section
/// refinement on [1e-6, 1]; A and B by bounded linear least squares.
inline DecayFit fit_decay(const std::map<int, double>& survival) {
  rb_detail::Points p;
  for (const auto& [m, y] : survival) {
    if (!(y >= 0.0 && y <= 1.0)) {
      throw std::invalid_argument("survival probabilities must lie in [0, 1]");
    }
    p.m.push_back(m);
    p.y.push_back(y);
  }
  if (p.m.size() < 3) {
    throw std::invalid_argument("decay fit needs at least 3 distinct lengths");
  }
  auto objective = [&](double alpha) { return rb_detail::solve_linear(p, alpha).second; };

  constexpr double kLo = 1e-6;
  std::vector<double> grid;
  for (int k = 0; k <= 400; ++k) {
    // 1 - alpha from 1e-8 to ~1, log-spaced
    grid.push_back(1.0 - std::pow(10.0, -8.0 + 8.0 * k / 400.0) * (1.0 - kLo));
  }
  grid.push_back(1.0);
  std::sort(grid.begin(), grid.end());
  std::size_t best = 0;
  double best_val = objective(grid[0]);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double v = objective(grid[i]);
    if (v < best_val) {
      best_val = v;
      best = i;
    }
  }
  double lo = grid[best == 0 ? 0 : best - 1];
  double hi = grid[std::min(best + 1, grid.size() - 1)];
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - phi * (hi - lo), d = lo + phi * (hi - lo);
  double fc = objective(c), fd = objective(d);
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    if (fc <= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - phi * (hi - lo);
      fc = objective(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + phi * (hi - lo);
      fd = objective(d);
    }
  }
  double alpha = fc <= fd ? c : d;
  double val = std::min(fc, fd);
  if (grid[best] != alpha && best_val < val) {
    alpha = grid[best];
    val = best_val;
  }
  // A flat curve fits every alpha equally well; report no decay.
  const double at_one = objective(1.0);
  if (at_one <= val * (1.0 + 1e-12) + 1e-30) {
    alpha = 1.0;
    val = at_one;
  }
  const auto [ab, sse] = rb_detail::solve_linear(p, alpha);
  return {ab[0], ab[1], alpha, std::sqrt(sse / static_cast<double>(p.m.size()))};
}

struct RBResult {
  int num_qubits = 1;
  std::map<int, double> survival;
  double fit_A = 0.0;
  double fit_B = 0.0;
  double fit_alpha = 1.0;
  double epc = 0.0;
  double fit_residual = 0.0;
};

/// (d - 1) / d * (1 - alpha), d = 2^n.
inline double error_per_clifford(double alpha, int num_qubits) {
  const double dim = std::ldexp(1.0, num_qubits);
  return (dim - 1.0) / dim * (1.0 - alpha);
}

inline RBResult make_rb_result(int num_qubits, std::map<int, double> survival) {
  RBResult r;
  r.num_qubits = num_qubits;
  r.survival = std::move(survival);
  const DecayFit f = fit_decay(r.survival);
  r.fit_A = f.A;
  r.fit_B = f.B;
  r.fit_alpha = f.alpha;
  r.fit_residual = f.residual;
  r.epc = error_per_clifford(f.alpha, num_qubits);
  return r;
}

/// m uniformly random Cliffords followed by the inverse of their product.
inline std::vector<CliffordTableau> rb_elements(int m, int n, std::mt19937_64& rng) {
  if (m < 1) throw std::invalid_argument("RB sequence length must be >= 1");
  std::vector<CliffordTableau> seq;
  seq.reserve(m + 1);
  CliffordTableau total = CliffordTableau::identity(n);
  for (int i = 0; i < m; ++i) {
    seq.push_back(random_clifford(n, rng));
    total = compose(total, seq.back());
  }
  seq.push_back(invert(total));
  return seq;
}

/// One RB register: physical qubits and the Clifford sequence played on them.
struct RbRegister {
  std::vector<Qubit> qubits;
  std::vector<CliffordTableau> elements;
};

/// Circuit that plays every register's sequence in lock step. Each
/// Clifford is emitted in its layered form and a barrier over all register
/// qubits closes every layer, so the k-th CX of one register starts together
/// with the k-th CX of the others. Register r's qubits are measured into
/// consecutive classical bits in register order.
inline Circuit rb_circuit(std::size_t num_qubits, const std::vector<RbRegister>& regs,
                          std::vector<std::size_t>* barrier_indices = nullptr) {
  if (regs.empty()) throw std::invalid_argument("RB circuit needs a register");
  std::vector<Qubit> all;
  std::size_t clbits = 0;
  for (const auto& r : regs) {
    if (r.elements.size() != regs.front().elements.size()) {
      throw std::invalid_argument("simultaneous RB registers need equal lengths");
    }
    if (r.qubits.size() != static_cast<std::size_t>(r.elements.front().num_qubits())) {
      throw std::invalid_argument("register width does not match its Cliffords");
    }
    all.insert(all.end(), r.qubits.begin(), r.qubits.end());
    clbits += r.qubits.size();
  }
  Circuit c(num_qubits, clbits);
  const std::size_t steps = regs.front().elements.size();
  for (std::size_t k = 0; k < steps; ++k) {
    std::vector<std::vector<std::vector<Gate>>> layers;
    std::size_t depth = 0;
    for (const auto& r : regs) {
      layers.push_back(tableau_to_layers(r.elements[k]));
      depth = std::max(depth, layers.back().size());
    }
    for (std::size_t l = 0; l < depth; ++l) {
      for (std::size_t ri = 0; ri < regs.size(); ++ri) {
        if (l >= layers[ri].size()) continue;
        for (const Gate& g : layers[ri][l]) {
          std::vector<Qubit> qs;
          for (Qubit q : g.qubits()) qs.push_back(regs[ri].qubits[q]);
          c.add(Gate(g.kind(), std::move(qs), g.angle()));
        }
      }
      if (barrier_indices) barrier_indices->push_back(c.size());
      c.add(Gate::barrier(all));
    }
  }
  Clbit cb = 0;
  for (const auto& r : regs)
    for (Qubit q : r.qubits) c.add(Gate::measure(q, cb++));
  return c;
}

struct RbCircuit {
  Circuit circuit;
  std::string expected_outcome;
};

/// Single-register RB circuit on qubits 0..n-1.
inline RbCircuit generate_rb_sequence(int m, int n, std::mt19937_64& rng) {
  if (n != 1 && n != 2) throw std::invalid_argument("RB supports 1 or 2 qubits");
  std::vector<Qubit> qubits(n);
  for (int q = 0; q < n; ++q) qubits[q] = q;
  RbRegister reg{qubits, rb_elements(m, n, rng)};
  return {rb_circuit(n, {reg}), std::string(n, '0')};
}

struct SrbCircuit {
  Circuit circuit;
  std::string expected_outcome;
  /// Indices of the alignment barriers; every CX sits between two of them.
  std::vector<std::size_t> alignment;
};

/// Two independent length-m RB sequences on disjoint edges, aligned layer
/// by layer. Edge a is measured into c[0], c[1] and edge b into c[2], c[3].
inline SrbCircuit generate_srb_pair(int m, const Edge& a, const Edge& b, std::mt19937_64& rng) {
  if (a.shares_qubit(b)) {
    throw std::invalid_argument("simultaneous RB edges " + a.label() + " and " + b.label() +
                                " share a qubit");
  }
  RbRegister ra{{a.a, a.b}, rb_elements(m, 2, rng)};
  RbRegister rb{{b.a, b.b}, rb_elements(m, 2, rng)};
  const auto n = static_cast<std::size_t>(std::max(a.b, b.b) + 1);
  SrbCircuit out;
  out.circuit = rb_circuit(n, {ra, rb}, &out.alignment);
  out.expected_outcome = "0000";
  return out;
}

namespace rb_detail {

// Sequence seed for one (target, length, seed index); isolated and
// simultaneous runs on the same target therefore share sequences.
inline std::mt19937_64 sequence_rng(std::uint64_t seed, const std::vector<Qubit>& target,
                                    int length, int index) {
  std::vector<std::uint32_t> words{static_cast<std::uint32_t>(seed),
                                   static_cast<std::uint32_t>(seed >> 32),
                                   static_cast<std::uint32_t>(length),
                                   static_cast<std::uint32_t>(index)};
  for (Qubit q : target) words.push_back(static_cast<std::uint32_t>(q));
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

// Probability that the classical bits [first, first + width) read all zero.
inline double zero_marginal(const OutcomeDistribution& dist, std::size_t first,
                            std::size_t width) {
  double p = 0.0;
  for (const auto& [bits, prob] : dist.probabilities) {
    bool zero = true;
    for (std::size_t k = first; k < first + width; ++k) {
      zero &= bits[bits.size() - 1 - k] == '0';
    }
    if (zero) p += prob;
  }
  return p;
}

inline ShotMode task_mode(const ShotMode& mode, std::size_t task) {
  if (!mode.sampled) return mode;
  return ShotMode::sample(mode.shots, mode.seed + 0x9e3779b97f4a7c15ULL * (task + 1));
}

// Survival of each register for one (length, seed index).
inline std::vector<double> run_once(const DeviceModel& d,
                                    const std::vector<std::vector<Qubit>>& targets,
                                    const RBConfig& cfg, int length, int index,
                                    std::size_t task) {
  std::vector<RbRegister> regs;
  for (const auto& t : targets) {
    auto rng = sequence_rng(cfg.seed, t, length, index);
    regs.push_back({t, rb_elements(length, static_cast<int>(t.size()), rng)});
  }
  const Circuit c = rb_circuit(d.num_qubits, regs);
  const auto dist = run_scheduled(par_sched(c, d), {&d, task_mode(cfg.mode, task)});
  std::vector<double> out;
  std::size_t first = 0;
  for (const auto& t : targets) {
    out.push_back(zero_marginal(dist, first, t.size()));
    first += t.size();
  }
  return out;
}

inline void check_target(const DeviceModel& d, const std::vector<Qubit>& t) {
  if (t.size() == 2) {
    if (!d.has_edge(Edge(t[0], t[1]))) {
      throw MismatchError("RB target " + Edge(t[0], t[1]).label() + " is not a device edge");
    }
  } else if (t.size() != 1) {
    throw std::invalid_argument("RB target must be a qubit or an edge");
  }
  for (Qubit q : t) {
    if (q < 0 || static_cast<std::size_t>(q) >= d.num_qubits) {
      throw MismatchError("RB target qubit out of range");
    }
  }
}

}  // namespace rb_detail

/// RB (one target) or simultaneous RB (several disjoint targets) on the
/// device; one result per target, survival averaged over seeds.
inline std::vector<RBResult> run_simultaneous_rb(const DeviceModel& d,
                                                 const std::vector<std::vector<Qubit>>& targets,
                                                 const RBConfig& cfg, unsigned workers = 1) {
  cfg.validate();
  for (std::size_t i = 0; i < targets.size(); ++i) {
    rb_detail::check_target(d, targets[i]);
    for (std::size_t j = 0; j < i; ++j)
      for (Qubit q : targets[i])
        if (std::find(targets[j].begin(), targets[j].end(), q) != targets[j].end()) {
          throw std::invalid_argument("simultaneous RB targets share a qubit");
        }
  }
  const std::size_t per_length = static_cast<std::size_t>(cfg.num_seeds);
  const std::size_t tasks = cfg.lengths.size() * per_length;
  const auto values = parallel_map<std::vector<double>>(
      tasks, workers, [&](std::size_t t) {
        return rb_detail::run_once(d, targets, cfg, cfg.lengths[t / per_length],
                                   static_cast<int>(t % per_length), t);
      });
  std::vector<RBResult> out;
  for (std::size_t r = 0; r < targets.size(); ++r) {
    std::map<int, double> survival;
    for (std::size_t li = 0; li < cfg.lengths.size(); ++li) {
      double sum = 0.0;
      for (std::size_t s = 0; s < per_length; ++s) sum += values[li * per_length + s][r];
      survival[cfg.lengths[li]] = std::clamp(sum / static_cast<double>(per_length), 0.0, 1.0);
    }
    out.push_back(make_rb_result(static_cast<int>(targets[r].size()), std::move(survival)));
  }
  return out;
}

inline RBResult run_rb(const DeviceModel& d, const std::vector<Qubit>& target,
                       const RBConfig& cfg, unsigned workers = 1) {
  return run_simultaneous_rb(d, {target}, cfg, workers).front();
}

/// Mean RB survival when `noise` acts on all n qubits after every Clifford,
/// the Cliffords themselves being ideal.
inline RBResult channel_rb(int n, const KrausChannel& noise, const RBConfig& cfg) {
  cfg.validate();
  if (noise.num_qubits() != n) throw std::invalid_argument("channel width must equal n");
  std::vector<Qubit> all(n);
  for (int q = 0; q < n; ++q) all[q] = q;
  std::map<int, double> survival;
  for (int m : cfg.lengths) {
    double sum = 0.0;
    for (int s = 0; s < cfg.num_seeds; ++s) {
      auto rng = rb_detail::sequence_rng(cfg.seed, all, m, s);
      DensityMatrix rho(n);
      for (const auto& element : rb_elements(m, n, rng)) {
        for (const Gate& g : tableau_to_gates(element)) apply_unitary(rho, g);
        rho.apply_channel(all, noise);
      }
      sum += std::max(0.0, rho.matrix()(0, 0).real());
    }
    survival[m] = std::clamp(sum / cfg.num_seeds, 0.0, 1.0);
  }
  return make_rb_result(n, std::move(survival));
}

struct CrosstalkEntry {
  Edge edge;
  Edge other;
  double independent = 0.0;
  double correlated = 0.0;
  /// correlated / independent; NaN when the independent error is zero.
  double ratio = 0.0;
};

struct CrosstalkReport {
  std::string device;
  RBConfig config;
  std::vector<Edge> edges;
  std::map<Edge, RBResult> isolated;
  /// Ordered by (edge, other); one per ordered pair of disjoint edges.
  std::vector<CrosstalkEntry> entries;

  const CrosstalkEntry* find(const Edge& e, const Edge& f) const {
    for (const auto& x : entries)
      if (x.edge == e && x.other == f) return &x;
    return nullptr;
  }
};

/// Ordered pairs of device edges that share no qubit.
inline std::vector<std::pair<Edge, Edge>> disjoint_edge_pairs(const DeviceModel& d) {
  std::vector<std::pair<Edge, Edge>> out;
  for (const Edge& e : d.edges)
    for (const Edge& f : d.edges)
      if (!e.shares_qubit(f)) out.emplace_back(e, f);
  return out;
}

/// Isolated RB on every edge and simultaneous RB on every unordered pair of
/// disjoint edges; r(e|f) = EPC(e while f) / EPC(e alone).
inline CrosstalkReport characterize_device(const DeviceModel& d, const RBConfig& cfg,
                                           unsigned workers = 1) {
  cfg.validate();
  d.validate();
  struct Job {
    std::vector<std::vector<Qubit>> targets;
    std::string label;
  };
  std::vector<Job> jobs;
  for (const Edge& e : d.edges) jobs.push_back({{{e.a, e.b}}, e.label()});
  for (const auto& [e, f] : disjoint_edge_pairs(d)) {
    if (f < e) continue;
    jobs.push_back({{{e.a, e.b}, {f.a, f.b}}, e.label() + "|" + f.label()});
  }
  const std::size_t per_job = cfg.lengths.size() * static_cast<std::size_t>(cfg.num_seeds);
  const auto values = parallel_map<std::vector<double>>(
      jobs.size() * per_job, workers, [&](std::size_t t) {
        const Job& job = jobs[t / per_job];
        const std::size_t k = t % per_job;
        const auto seeds = static_cast<std::size_t>(cfg.num_seeds);
        try {
          return rb_detail::run_once(d, job.targets, cfg, cfg.lengths[k / seeds],
                                     static_cast<int>(k % seeds), t);
        } catch (const std::exception& ex) {
          throw std::runtime_error("RB on " + job.label + ": " + ex.what());
        }
      });

  CrosstalkReport report;
  report.device = d.name;
  report.config = cfg;
  report.edges = d.edges;
  std::map<std::pair<Edge, Edge>, RBResult> correlated;
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    const Job& job = jobs[j];
    for (std::size_t r = 0; r < job.targets.size(); ++r) {
      std::map<int, double> survival;
      for (std::size_t li = 0; li < cfg.lengths.size(); ++li) {
        double sum = 0.0;
        for (int s = 0; s < cfg.num_seeds; ++s) {
          sum += values[j * per_job + li * cfg.num_seeds + s][r];
        }
        survival[cfg.lengths[li]] = std::clamp(sum / cfg.num_seeds, 0.0, 1.0);
      }
      RBResult res;
      try {
        res = make_rb_result(2, std::move(survival));
      } catch (const std::exception& ex) {
        throw std::runtime_error("RB fit on " + job.label + ": " + ex.what());
      }
      const Edge e(job.targets[r][0], job.targets[r][1]);
      if (job.targets.size() == 1) {
        report.isolated[e] = std::move(res);
      } else {
        const auto& o = job.targets[1 - r];
        correlated[{e, Edge(o[0], o[1])}] = std::move(res);
      }
    }
  }
  for (const auto& [e, f] : disjoint_edge_pairs(d)) {
    CrosstalkEntry x;
    x.edge = e;
    x.other = f;
    x.independent = report.isolated.at(e).epc;
    x.correlated = correlated.at({e, f}).epc;
    x.ratio = x.independent > 0.0 ? x.correlated / x.independent
                                  : std::numeric_limits<double>::quiet_NaN();
    report.entries.push_back(x);
  }
  return report;
}

/// Crosstalk map holding the measured ratios (undefined ratios left out).
inline CrosstalkMap measured_crosstalk(const CrosstalkReport& r) {
  CrosstalkMap m;
  for (const auto& x : r.entries)
    if (std::isfinite(x.ratio)) m.set(x.edge, x.other, x.ratio);
  return m;
}

inline nlohmann::json to_json(const RBResult& r) {
  nlohmann::json survival = nlohmann::json::object();
  for (const auto& [m, p] : r.survival) survival[std::to_string(m)] = p;
  return {{"num_qubits", r.num_qubits}, {"survival", survival},   {"fit_A", r.fit_A},
          {"fit_B", r.fit_B},           {"fit_alpha", r.fit_alpha}, {"epc", r.epc},
          {"fit_residual", r.fit_residual}};
}

inline nlohmann::json to_json(const CrosstalkReport& r) {
  nlohmann::json isolated = nlohmann::json::object();
  for (const auto& [e, res] : r.isolated) isolated[e.label()] = to_json(res);
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& x : r.entries) {
    entries.push_back({{"edge", x.edge.label()},
                       {"other", x.other.label()},
                       {"independent", x.independent},
                       {"correlated", x.correlated},
                       {"ratio", std::isfinite(x.ratio) ? nlohmann::json(x.ratio)
                                                        : nlohmann::json()}});
  }
  nlohmann::json edges = nlohmann::json::array();
  for (const Edge& e : r.edges) edges.push_back(e.label());
  return {{"device", r.device},
          {"config",
           {{"lengths", r.config.lengths},
            {"num_seeds", r.config.num_seeds},
            {"seed", r.config.seed},
            {"mode", r.config.mode.sampled ? "sampled" : "analytic"},
            {"shots", r.config.mode.sampled ? nlohmann::json(r.config.mode.shots)
                                            : nlohmann::json()}}},
          {"edges", edges},
          {"isolated", isolated},
          {"entries", entries}};
}

/// Ratio matrix: row e, column f holds r(e|f); cells for edges that share
/// a qubit (including the diagonal) are empty.
inline std::string to_csv_matrix(const CrosstalkReport& r) {
  std::string out = "edge";
  for (const Edge& f : r.edges) out += "," + f.label();
  out += "\n";
  for (const Edge& e : r.edges) {
    out += e.label();
    for (const Edge& f : r.edges) {
      out += ",";
      if (const auto* x = r.find(e, f); x && std::isfinite(x->ratio)) {
        out += format_double(x->ratio);
      }
    }
    out += "\n";
  }
  return out;
}

}  // namespace xtalk
