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
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace xtalk {

using Qubit = int;
using Clbit = int;

enum class GateKind {
  kI,
  kX,
  kY,
  kZ,
  kH,
  kS,
  kSdg,
  kT,
  kTdg,
  kSX,
  kRZ,
  kCX,
  // Macro kinds, lowered by decompose_to_native before scheduling.
  kCCX,
  kCSWAP,
  kSWAP,
  kBarrier,
  kMeasure,
};

inline std::string_view gate_name(GateKind k) {
  switch (k) {
    case GateKind::kI: return "id";
    case GateKind::kX: return "x";
    case GateKind::kY: return "y";
    case GateKind::kZ: return "z";
    case GateKind::kH: return "h";
    case GateKind::kS: return "s";
    case GateKind::kSdg: return "sdg";
    case GateKind::kT: return "t";
    case GateKind::kTdg: return "tdg";
    case GateKind::kSX: return "sx";
    case GateKind::kRZ: return "rz";
    case GateKind::kCX: return "cx";
    case GateKind::kCCX: return "ccx";
    case GateKind::kCSWAP: return "cswap";
    case GateKind::kSWAP: return "swap";
    case GateKind::kBarrier: return "barrier";
    case GateKind::kMeasure: return "measure";
  }
  return "?";
}

/// Maps a QASM gate identifier onto a unitary kind (barrier/measure excluded).
inline std::optional<GateKind> unitary_kind_from_name(std::string_view name) {
  static constexpr GateKind kUnitaries[] = {
      GateKind::kI,   GateKind::kX,    GateKind::kY,     GateKind::kZ,
      GateKind::kH,   GateKind::kS,    GateKind::kSdg,   GateKind::kT,
      GateKind::kTdg, GateKind::kSX,   GateKind::kRZ,    GateKind::kCX,
      GateKind::kCCX, GateKind::kCSWAP, GateKind::kSWAP};
  for (GateKind k : kUnitaries) {
    if (gate_name(k) == name) return k;
  }
  return std::nullopt;
}

inline bool is_macro(GateKind k) {
  return k == GateKind::kCCX || k == GateKind::kCSWAP || k == GateKind::kSWAP;
}

inline bool is_single_qubit_unitary(GateKind k) {
  switch (k) {
    case GateKind::kI:
    case GateKind::kX:
    case GateKind::kY:
    case GateKind::kZ:
    case GateKind::kH:
    case GateKind::kS:
    case GateKind::kSdg:
    case GateKind::kT:
    case GateKind::kTdg:
    case GateKind::kSX:
    case GateKind::kRZ:
      return true;
    default:
      return false;
  }
}

/// Fixed operand count, or 0 for variadic kinds (barrier).
inline std::size_t gate_arity(GateKind k) {
  if (is_single_qubit_unitary(k) || k == GateKind::kMeasure) return 1;
  switch (k) {
    case GateKind::kCX:
    case GateKind::kSWAP:
      return 2;
    case GateKind::kCCX:
    case GateKind::kCSWAP:
      return 3;
    default:
      return 0;
  }
}

/// One instruction. Operand order is significant (control first for CX).
class Gate {
 public:
  Gate(GateKind kind, std::vector<Qubit> qubits, double angle = 0.0,
       std::optional<Clbit> clbit = std::nullopt)
      : kind_(kind), qubits_(std::move(qubits)), angle_(angle), clbit_(clbit) {
    const std::size_t arity = gate_arity(kind_);
    if (arity == 0 ? qubits_.empty() : qubits_.size() != arity) {
      throw std::invalid_argument(std::string(gate_name(kind_)) +
                                  ": wrong number of operands");
    }
    for (std::size_t i = 0; i < qubits_.size(); ++i) {
      if (qubits_[i] < 0) {
        throw std::invalid_argument("negative qubit index");
      }
      for (std::size_t j = i + 1; j < qubits_.size(); ++j) {
        if (qubits_[i] == qubits_[j]) {
          throw std::invalid_argument(std::string(gate_name(kind_)) +
                                      ": repeated operand q[" +
                                      std::to_string(qubits_[i]) + "]");
        }
      }
    }
    if (!std::isfinite(angle_)) {
      throw std::invalid_argument("rz: angle must be finite");
    }
    if (kind_ != GateKind::kRZ && angle_ != 0.0) {
      throw std::invalid_argument(std::string(gate_name(kind_)) +
                                  " takes no angle");
    }
    if ((kind_ == GateKind::kMeasure) != clbit_.has_value()) {
      throw std::invalid_argument(
          "classical target is required for measure and only for measure");
    }
    if (clbit_ && *clbit_ < 0) {
      throw std::invalid_argument("negative classical bit index");
    }
  }

  static Gate single(GateKind k, Qubit q) { return Gate(k, {q}); }
  static Gate rz(double angle, Qubit q) {
    return Gate(GateKind::kRZ, {q}, angle);
  }
  static Gate cx(Qubit control, Qubit target) {
    return Gate(GateKind::kCX, {control, target});
  }
  static Gate barrier(std::vector<Qubit> qubits) {
    return Gate(GateKind::kBarrier, std::move(qubits));
  }
  static Gate measure(Qubit q, Clbit c) {
    return Gate(GateKind::kMeasure, {q}, 0.0, c);
  }

  GateKind kind() const { return kind_; }
  const std::vector<Qubit>& qubits() const { return qubits_; }
  double angle() const { return angle_; }
  std::optional<Clbit> clbit() const { return clbit_; }

  bool acts_on(Qubit q) const {
    return std::find(qubits_.begin(), qubits_.end(), q) != qubits_.end();
  }
  bool is_barrier() const { return kind_ == GateKind::kBarrier; }
  bool is_measure() const { return kind_ == GateKind::kMeasure; }
  bool is_cx() const { return kind_ == GateKind::kCX; }

  friend bool operator==(const Gate&, const Gate&) = default;

 private:
  GateKind kind_;
  std::vector<Qubit> qubits_;
  double angle_;
  std::optional<Clbit> clbit_;
};

/// Validated gate list over fixed quantum and classical registers.
///
/// Measurements are terminal: once a qubit is measured, only further
/// measurements or barriers may touch it.
class Circuit {
 public:
  Circuit() = default;
  Circuit(std::size_t num_qubits, std::size_t num_clbits)
      : num_qubits_(num_qubits),
        num_clbits_(num_clbits),
        measured_(num_qubits, false) {}
  Circuit(std::size_t num_qubits, std::size_t num_clbits,
          std::vector<Gate> gates)
      : Circuit(num_qubits, num_clbits) {
    for (auto& g : gates) add(std::move(g));
  }

  Circuit& add(Gate g) {
    for (Qubit q : g.qubits()) {
      if (static_cast<std::size_t>(q) >= num_qubits_) {
        throw std::out_of_range("qubit index " + std::to_string(q) +
                                " out of range for " +
                                std::to_string(num_qubits_) + " qubits");
      }
    }
    if (g.clbit() && static_cast<std::size_t>(*g.clbit()) >= num_clbits_) {
      throw std::out_of_range("classical bit index " +
                              std::to_string(*g.clbit()) + " out of range");
    }
    if (!g.is_barrier() && !g.is_measure()) {
      for (Qubit q : g.qubits()) {
        if (measured_[q]) {
          throw std::invalid_argument("gate " + std::string(gate_name(g.kind())) +
                                      " follows measurement of q[" +
                                      std::to_string(q) + "]");
        }
      }
    }
    if (g.is_measure()) measured_[g.qubits().front()] = true;
    gates_.push_back(std::move(g));
    return *this;
  }

  std::size_t num_qubits() const { return num_qubits_; }
  std::size_t num_clbits() const { return num_clbits_; }
  const std::vector<Gate>& gates() const { return gates_; }
  std::size_t size() const { return gates_.size(); }
  bool empty() const { return gates_.empty(); }
  const Gate& operator[](std::size_t i) const { return gates_[i]; }
  auto begin() const { return gates_.begin(); }
  auto end() const { return gates_.end(); }

  bool has_macros() const {
    return std::any_of(gates_.begin(), gates_.end(),
                       [](const Gate& g) { return is_macro(g.kind()); });
  }
  bool has_measurements() const {
    return std::any_of(gates_.begin(), gates_.end(),
                       [](const Gate& g) { return g.is_measure(); });
  }

  /// Qubits touched by at least one non-barrier instruction.
  std::vector<bool> active_qubits() const {
    std::vector<bool> active(num_qubits_, false);
    for (const auto& g : gates_) {
      if (g.is_barrier()) continue;
      for (Qubit q : g.qubits()) active[q] = true;
    }
    return active;
  }

  friend bool operator==(const Circuit&, const Circuit&) = default;

 private:
  std::size_t num_qubits_ = 0;
  std::size_t num_clbits_ = 0;
  std::vector<Gate> gates_;
  std::vector<bool> measured_;
};

}  // namespace xtalk
