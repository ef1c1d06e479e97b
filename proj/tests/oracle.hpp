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

// Reference models used only by tests. They avoid the library's own
// matrix and tableau code so results can be compared against it.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "xtalk/circuit.hpp"

namespace oracle {

using cd = std::complex<double>;
using Dense = std::vector<std::vector<cd>>;

inline Dense identity(std::size_t dim) {
  Dense m(dim, std::vector<cd>(dim, 0.0));
  for (std::size_t i = 0; i < dim; ++i) m[i][i] = 1.0;
  return m;
}

inline Dense multiply(const Dense& a, const Dense& b) {
  const std::size_t n = a.size();
  Dense out(n, std::vector<cd>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      if (a[i][k] == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) out[i][j] += a[i][k] * b[k][j];
    }
  return out;
}

inline Dense adjoint(const Dense& a) {
  const std::size_t n = a.size();
  Dense out(n, std::vector<cd>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out[i][j] = std::conj(a[j][i]);
  return out;
}

inline std::array<cd, 4> single_matrix(const xtalk::Gate& g) {
  using xtalk::GateKind;
  const double r = 1.0 / std::sqrt(2.0);
  const cd i(0.0, 1.0);
  switch (g.kind()) {
    case GateKind::kI: return {1.0, 0.0, 0.0, 1.0};
    case GateKind::kX: return {0.0, 1.0, 1.0, 0.0};
    case GateKind::kY: return {0.0, -i, i, 0.0};
    case GateKind::kZ: return {1.0, 0.0, 0.0, -1.0};
    case GateKind::kH: return {r, r, r, -r};
    case GateKind::kS: return {1.0, 0.0, 0.0, i};
    case GateKind::kSdg: return {1.0, 0.0, 0.0, -i};
    case GateKind::kT: return {1.0, 0.0, 0.0, std::exp(i * (M_PI / 4))};
    case GateKind::kTdg: return {1.0, 0.0, 0.0, std::exp(-i * (M_PI / 4))};
    case GateKind::kSX: {
      // sqrt(X) = e^{i pi/4} RX(pi/2)
      const cd ph = std::exp(i * (M_PI / 4));
      return {ph * r, -i * ph * r, -i * ph * r, ph * r};
    }
    case GateKind::kRZ: {
      const double t = g.angle();
      return {std::exp(-i * (t / 2)), 0.0, 0.0, std::exp(i * (t / 2))};
    }
    default: throw std::logic_error("not a single-qubit gate");
  }
}

/// Full 2^n x 2^n unitary of one gate, qubit j = bit j of the index.
inline Dense gate_matrix(const xtalk::Gate& g, int n) {
  using xtalk::GateKind;
  const std::size_t dim = std::size_t{1} << n;
  Dense m(dim, std::vector<cd>(dim, 0.0));
  const auto& q = g.qubits();
  auto bit = [](std::size_t v, int b) { return (v >> b) & 1; };
  switch (g.kind()) {
    case GateKind::kCX:
    case GateKind::kCCX:
    case GateKind::kCSWAP:
    case GateKind::kSWAP:
      for (std::size_t s = 0; s < dim; ++s) {
        std::size_t t = s;
        if (g.kind() == GateKind::kCX && bit(s, q[0])) t ^= std::size_t{1} << q[1];
        if (g.kind() == GateKind::kCCX && bit(s, q[0]) && bit(s, q[1]))
          t ^= std::size_t{1} << q[2];
        auto swap_bits = [&](int a, int b) {
          if (bit(t, a) != bit(t, b)) t ^= (std::size_t{1} << a) | (std::size_t{1} << b);
        };
        if (g.kind() == GateKind::kSWAP) swap_bits(q[0], q[1]);
        if (g.kind() == GateKind::kCSWAP && bit(s, q[0])) swap_bits(q[1], q[2]);
        m[t][s] = 1.0;
      }
      return m;
    default: {
      const auto u = single_matrix(g);
      const int b = q[0];
      for (std::size_t s = 0; s < dim; ++s) {
        const std::size_t s0 = s & ~(std::size_t{1} << b);
        const std::size_t s1 = s0 | (std::size_t{1} << b);
        const int in = static_cast<int>(bit(s, b));
        m[s0][s] = u[0 * 2 + in];
        m[s1][s] = u[1 * 2 + in];
      }
      return m;
    }
  }
}

/// Unitary of the non-barrier, non-measure gates of a circuit.
inline Dense circuit_unitary(const xtalk::Circuit& c) {
  const int n = static_cast<int>(c.num_qubits());
  Dense u = identity(std::size_t{1} << n);
  for (const auto& g : c) {
    if (g.is_barrier() || g.is_measure()) continue;
    u = multiply(gate_matrix(g, n), u);
  }
  return u;
}

inline double max_abs_diff(const Dense& a, const Dense& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[i][j] - b[i][j]));
  return m;
}

/// min over global phases of the elementwise distance.
inline double phase_insensitive_diff(const Dense& a, const Dense& b) {
  cd overlap = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) overlap += std::conj(b[i][j]) * a[i][j];
  if (std::abs(overlap) < 1e-12) return max_abs_diff(a, b);
  const cd phase = overlap / std::abs(overlap);
  Dense bb = b;
  for (auto& row : bb)
    for (auto& v : row) v *= phase;
  return max_abs_diff(a, bb);
}

/// Pauli string as a dense matrix; letters[j] in "IXYZ" acts on qubit j.
inline Dense pauli_matrix(const std::vector<char>& letters) {
  const int n = static_cast<int>(letters.size());
  Dense m = identity(std::size_t{1} << n);
  for (int j = 0; j < n; ++j) {
    xtalk::GateKind k = letters[j] == 'X'   ? xtalk::GateKind::kX
                        : letters[j] == 'Y' ? xtalk::GateKind::kY
                        : letters[j] == 'Z' ? xtalk::GateKind::kZ
                                            : xtalk::GateKind::kI;
    m = multiply(gate_matrix(xtalk::Gate::single(k, j), n), m);
  }
  return m;
}

/// Random native circuit over the listed kinds; CX operands drawn from all pairs.
inline xtalk::Circuit random_circuit(int n, int num_gates, std::mt19937_64& rng,
                                     bool with_macros = false) {
  using xtalk::GateKind;
  std::vector<GateKind> kinds = {GateKind::kX, GateKind::kY, GateKind::kZ, GateKind::kH,
                                 GateKind::kS, GateKind::kSdg, GateKind::kT, GateKind::kTdg,
                                 GateKind::kSX, GateKind::kRZ, GateKind::kCX, GateKind::kI,
                                 GateKind::kBarrier};
  if (with_macros && n >= 2) kinds.push_back(GateKind::kSWAP);
  if (with_macros && n >= 3) {
    kinds.push_back(GateKind::kCCX);
    kinds.push_back(GateKind::kCSWAP);
  }
  xtalk::Circuit c(n, n);
  std::uniform_int_distribution<std::size_t> pick(0, kinds.size() - 1);
  std::uniform_real_distribution<double> angle(-M_PI, M_PI);
  for (int i = 0; i < num_gates; ++i) {
    GateKind k = kinds[pick(rng)];
    std::vector<int> qs(n);
    for (int j = 0; j < n; ++j) qs[j] = j;
    std::shuffle(qs.begin(), qs.end(), rng);
    std::size_t arity = xtalk::gate_arity(k);
    if (arity == 0) arity = 1 + rng() % n;
    if (arity > static_cast<std::size_t>(n)) continue;
    qs.resize(arity);
    if (k == GateKind::kRZ) {
      c.add(xtalk::Gate::rz(angle(rng), qs[0]));
    } else {
      c.add(xtalk::Gate(k, qs));
    }
  }
  return c;
}

}  // namespace oracle
