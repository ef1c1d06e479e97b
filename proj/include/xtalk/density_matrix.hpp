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

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "xtalk/circuit.hpp"

namespace xtalk {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

/// Unitary of a gate on its own operands; operand i is bit i of the local
/// basis index.
inline CMatrix gate_unitary(const Gate& g) {
  using namespace std::complex_literals;
  const double r = 1.0 / std::numbers::sqrt2;
  CMatrix m;
  auto one = [&](Complex a, Complex b, Complex c, Complex d) {
    m.resize(2, 2);
    m << a, b, c, d;
  };
  auto permutation = [&](int dim, auto&& f) {
    m = CMatrix::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) m(f(i), i) = 1.0;
  };
  switch (g.kind()) {
    case GateKind::kI: one(1, 0, 0, 1); break;
    case GateKind::kX: one(0, 1, 1, 0); break;
    case GateKind::kY: one(0, -1i, 1i, 0); break;
    case GateKind::kZ: one(1, 0, 0, -1); break;
    case GateKind::kH: one(r, r, r, -r); break;
    case GateKind::kS: one(1, 0, 0, 1i); break;
    case GateKind::kSdg: one(1, 0, 0, -1i); break;
    case GateKind::kT: one(1, 0, 0, std::polar(1.0, std::numbers::pi / 4)); break;
    case GateKind::kTdg:
      one(1, 0, 0, std::polar(1.0, -std::numbers::pi / 4));
      break;
    case GateKind::kSX:
      one(0.5 + 0.5i, 0.5 - 0.5i, 0.5 - 0.5i, 0.5 + 0.5i);
      break;
    case GateKind::kRZ:
      one(std::polar(1.0, -g.angle() / 2), 0, 0, std::polar(1.0, g.angle() / 2));
      break;
    case GateKind::kCX:
      permutation(4, [](int i) { return (i & 1) ? i ^ 2 : i; });
      break;
    case GateKind::kSWAP:
      permutation(4, [](int i) { return ((i & 1) << 1) | ((i >> 1) & 1); });
      break;
    case GateKind::kCCX:
      permutation(8, [](int i) { return (i & 3) == 3 ? i ^ 4 : i; });
      break;
    case GateKind::kCSWAP:
      permutation(8, [](int i) {
        if (!(i & 1)) return i;
        const int b = (i >> 1) & 1, c = (i >> 2) & 1;
        return 1 | (c << 1) | (b << 2);
      });
      break;
    case GateKind::kBarrier:
    case GateKind::kMeasure:
      throw std::invalid_argument("unsupported kind '" +
                                  std::string(gate_name(g.kind())) +
                                  "' has no unitary");
  }
  return m;
}

/// Completely positive trace-preserving map on k qubits, held as Kraus
/// operators together with its 4^k x 4^k superoperator.
class KrausChannel {
 public:
  explicit KrausChannel(std::vector<CMatrix> ops) : ops_(std::move(ops)) {
    if (ops_.empty()) throw std::invalid_argument("channel needs operators");
    const Eigen::Index dim = ops_.front().rows();
    if (dim != 2 && dim != 4 && dim != 8) {
      throw std::invalid_argument("channel acts on 1 to 3 qubits");
    }
    CMatrix sum = CMatrix::Zero(dim, dim);
    for (const auto& k : ops_) {
      if (k.rows() != dim || k.cols() != dim) {
        throw std::invalid_argument("Kraus operators differ in shape");
      }
      sum += k.adjoint() * k;
    }
    const double dev = (sum - CMatrix::Identity(dim, dim)).cwiseAbs().maxCoeff();
    if (dev > 1e-9) {
      throw std::invalid_argument("Kraus operators violate completeness (" +
                                  std::to_string(dev) + ")");
    }
    num_qubits_ = dim == 2 ? 1 : dim == 4 ? 2 : 3;
    // S[(i,j),(a,b)] = sum_k K[i,a] conj(K[j,b]), pair index = row*dim + col.
    superop_ = CMatrix::Zero(dim * dim, dim * dim);
    for (const auto& k : ops_) {
      for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j)
          for (Eigen::Index a = 0; a < dim; ++a)
            for (Eigen::Index b = 0; b < dim; ++b)
              superop_(i * dim + j, a * dim + b) += k(i, a) * std::conj(k(j, b));
    }
  }

  int num_qubits() const { return num_qubits_; }
  const std::vector<CMatrix>& operators() const { return ops_; }
  const CMatrix& superoperator() const { return superop_; }

  /// `first` then `second`, on the same targets.
  static KrausChannel sequence(const KrausChannel& first,
                               const KrausChannel& second) {
    std::vector<CMatrix> ops;
    for (const auto& b : second.ops_)
      for (const auto& a : first.ops_) ops.push_back(b * a);
    return KrausChannel(std::move(ops));
  }

 private:
  std::vector<CMatrix> ops_;
  CMatrix superop_;
  int num_qubits_ = 1;
};

namespace channel_detail {

inline CMatrix pauli(int which) {
  using namespace std::complex_literals;
  CMatrix m(2, 2);
  switch (which) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, -1i, 1i, 0; break;
    default: m << 1, 0, 0, -1; break;
  }
  return m;
}

// Pauli string on k qubits; digit j of `index` (base 4) acts on qubit j.
inline CMatrix pauli_string(int k, int index) {
  CMatrix m = CMatrix::Identity(1, 1);
  for (int j = 0; j < k; ++j) {
    const int digit = (index >> (2 * j)) & 3;
    // qubit j is bit j, so it is the rightmost Kronecker factor when j = 0
    m = Eigen::kroneckerProduct(pauli(digit), m).eval();
  }
  return m;
}

}  // namespace channel_detail

inline KrausChannel identity_channel(int k) {
  const int dim = 1 << k;
  return KrausChannel({CMatrix::Identity(dim, dim)});
}

/// rho -> (1 - p) rho + p I/d on k qubits, d = 2^k. p = 1 fully mixes.
inline KrausChannel depolarizing_channel(int k, double p) {
  if (k < 1 || k > 2) throw std::invalid_argument("depolarizing: k must be 1 or 2");
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("depolarizing: p = " + std::to_string(p) +
                                " outside [0, 1]");
  }
  const int n_paulis = 1 << (2 * k);
  const double d2 = n_paulis;
  std::vector<CMatrix> ops;
  ops.push_back(std::sqrt(1.0 - p * (d2 - 1.0) / d2) *
                channel_detail::pauli_string(k, 0));
  if (p > 0.0) {
    for (int i = 1; i < n_paulis; ++i) {
      ops.push_back(std::sqrt(p / d2) * channel_detail::pauli_string(k, i));
    }
  }
  return KrausChannel(std::move(ops));
}

/// Amplitude damping with gamma = 1 - exp(-dt/t1) followed by pure
/// dephasing at rate 1/t_phi = 1/t2 - 1/(2 t1). Infinite times disable
/// the corresponding process.
inline KrausChannel thermal_relaxation_channel(double t1, double t2, double dt) {
  if (!(t1 > 0.0) || !(t2 > 0.0) || !(t2 <= 2.0 * t1)) {
    throw std::invalid_argument("thermal relaxation needs 0 < t2 <= 2*t1");
  }
  if (!(dt >= 0.0)) throw std::invalid_argument("thermal relaxation: dt < 0");
  const double gamma = std::isinf(t1) ? 0.0 : -std::expm1(-dt / t1);
  const double rate_phi = (std::isinf(t2) ? 0.0 : 1.0 / t2) -
                          (std::isinf(t1) ? 0.0 : 0.5 / t1);
  // Clamp rounding when t2 == 2*t1.
  const double coherence = std::exp(-std::max(0.0, rate_phi) * dt);
  CMatrix k0(2, 2), k1(2, 2), p0(2, 2), p1(2, 2);
  k0 << 1, 0, 0, std::sqrt(1.0 - gamma);
  k1 << 0, std::sqrt(gamma), 0, 0;
  p0 = std::sqrt((1.0 + coherence) / 2.0) * CMatrix::Identity(2, 2);
  p1 = std::sqrt((1.0 - coherence) / 2.0) * channel_detail::pauli(3);
  std::vector<CMatrix> ops;
  for (const CMatrix& p : {p0, p1})
    for (const CMatrix& k : {k0, k1}) {
      CMatrix m = p * k;
      if (m.cwiseAbs().maxCoeff() > 0.0) ops.push_back(m);
    }
  return KrausChannel(std::move(ops));
}

struct Physicality {
  double trace_error = 0.0;
  double hermiticity_error = 0.0;
  double min_eigenvalue = 0.0;

  bool ok(double tol = 1e-9) const {
    return trace_error <= tol && hermiticity_error <= tol &&
           min_eigenvalue >= -tol;
  }
};

/// Dense 2^n x 2^n state. Qubit i is bit i of the basis index.
class DensityMatrix {
 public:
  explicit DensityMatrix(int num_qubits)
      : n_(num_qubits), rho_(CMatrix::Zero(dim_of(num_qubits), dim_of(num_qubits))) {
    rho_(0, 0) = 1.0;
  }
  DensityMatrix(int num_qubits, CMatrix rho) : n_(num_qubits), rho_(std::move(rho)) {
    if (rho_.rows() != dim_of(n_) || rho_.cols() != dim_of(n_)) {
      throw std::invalid_argument("density matrix has the wrong dimension");
    }
  }

  static DensityMatrix maximally_mixed(int num_qubits) {
    const auto d = dim_of(num_qubits);
    return DensityMatrix(num_qubits,
                         CMatrix::Identity(d, d) / static_cast<double>(d));
  }

  int num_qubits() const { return n_; }
  Eigen::Index dim() const { return rho_.rows(); }
  const CMatrix& matrix() const { return rho_; }

  /// rho -> U rho U^dagger on `targets` (targets[i] is bit i of U's index).
  void apply_matrix(std::span<const Qubit> targets, const CMatrix& u) {
    const auto offs = offsets(targets);
    const auto local = static_cast<Eigen::Index>(offs.size());
    if (u.rows() != local || u.cols() != local) {
      throw std::invalid_argument("operator arity does not match targets");
    }
    const auto bases = base_indices(targets);
    Eigen::VectorXcd v(local), w(local);
    const Eigen::Index d = dim();
    for (Eigen::Index col = 0; col < d; ++col) {
      for (Eigen::Index base : bases) {
        for (Eigen::Index l = 0; l < local; ++l) v(l) = rho_(base + offs[l], col);
        w.noalias() = u * v;
        for (Eigen::Index l = 0; l < local; ++l) rho_(base + offs[l], col) = w(l);
      }
    }
    const CMatrix uc = u.conjugate();
    for (Eigen::Index row = 0; row < d; ++row) {
      for (Eigen::Index base : bases) {
        for (Eigen::Index l = 0; l < local; ++l) v(l) = rho_(row, base + offs[l]);
        w.noalias() = uc * v;
        for (Eigen::Index l = 0; l < local; ++l) rho_(row, base + offs[l]) = w(l);
      }
    }
  }

  void apply_channel(std::span<const Qubit> targets, const KrausChannel& ch) {
    if (static_cast<int>(targets.size()) != ch.num_qubits()) {
      throw std::invalid_argument("channel arity " +
                                  std::to_string(ch.num_qubits()) +
                                  " does not match " +
                                  std::to_string(targets.size()) + " targets");
    }
    const auto offs = offsets(targets);
    const auto local = static_cast<Eigen::Index>(offs.size());
    const auto bases = base_indices(targets);
    const CMatrix& s = ch.superoperator();
    Eigen::VectorXcd v(local * local), w(local * local);
    for (Eigen::Index br : bases) {
      for (Eigen::Index bc : bases) {
        for (Eigen::Index i = 0; i < local; ++i)
          for (Eigen::Index j = 0; j < local; ++j)
            v(i * local + j) = rho_(br + offs[i], bc + offs[j]);
        w.noalias() = s * v;
        for (Eigen::Index i = 0; i < local; ++i)
          for (Eigen::Index j = 0; j < local; ++j)
            rho_(br + offs[i], bc + offs[j]) = w(i * local + j);
      }
    }
  }

  /// Basis-state probabilities (real part of the diagonal, clipped at 0).
  std::vector<double> probabilities() const {
    std::vector<double> p(static_cast<std::size_t>(dim()));
    for (Eigen::Index i = 0; i < dim(); ++i) {
      p[static_cast<std::size_t>(i)] = std::max(0.0, rho_(i, i).real());
    }
    return p;
  }

  Physicality physicality() const {
    Physicality out;
    out.trace_error = std::abs(rho_.trace() - Complex(1.0, 0.0));
    out.hermiticity_error = (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
    Eigen::SelfAdjointEigenSolver<CMatrix> es(rho_, Eigen::EigenvaluesOnly);
    out.min_eigenvalue = es.eigenvalues().minCoeff();
    return out;
  }

 private:
  static Eigen::Index dim_of(int n) {
    if (n < 0 || n > 12) throw std::invalid_argument("unsupported qubit count");
    return Eigen::Index{1} << n;
  }

  std::vector<Eigen::Index> offsets(std::span<const Qubit> targets) const {
    for (Qubit t : targets) {
      if (t < 0 || t >= n_) throw std::out_of_range("target qubit out of range");
    }
    std::vector<Eigen::Index> offs(std::size_t{1} << targets.size(), 0);
    for (std::size_t l = 0; l < offs.size(); ++l)
      for (std::size_t j = 0; j < targets.size(); ++j)
        if ((l >> j) & 1) offs[l] |= Eigen::Index{1} << targets[j];
    return offs;
  }

  std::vector<Eigen::Index> base_indices(std::span<const Qubit> targets) const {
    Eigen::Index mask = 0;
    for (Qubit t : targets) mask |= Eigen::Index{1} << t;
    std::vector<Eigen::Index> out;
    out.reserve(static_cast<std::size_t>(dim() >> targets.size()));
    for (Eigen::Index i = 0; i < dim(); ++i)
      if ((i & mask) == 0) out.push_back(i);
    return out;
  }

  int n_;
  CMatrix rho_;
};

/// Ideal action of a unitary gate.
inline void apply_unitary(DensityMatrix& rho, const Gate& g) {
  if (g.is_barrier() || g.is_measure()) {
    throw std::invalid_argument("unsupported kind '" +
                                std::string(gate_name(g.kind())) +
                                "' for apply_unitary");
  }
  rho.apply_matrix(g.qubits(), gate_unitary(g));
}

inline void apply_channel(DensityMatrix& rho, const KrausChannel& ch,
                          std::span<const Qubit> targets) {
  rho.apply_channel(targets, ch);
}

inline void apply_channel(DensityMatrix& rho, const KrausChannel& ch,
                          std::initializer_list<Qubit> targets) {
  rho.apply_channel(std::span<const Qubit>(targets.begin(), targets.size()), ch);
}

}  // namespace xtalk
