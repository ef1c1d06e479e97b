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
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

#include "xtalk/circuit.hpp"

namespace xtalk {

namespace decompose_detail {

inline void ccx(std::vector<Gate>& out, Qubit a, Qubit b, Qubit c) {
  auto one = [&](GateKind k, Qubit q) { out.push_back(Gate::single(k, q)); };
  one(GateKind::kH, c);
  out.push_back(Gate::cx(b, c));
  one(GateKind::kTdg, c);
  out.push_back(Gate::cx(a, c));
  one(GateKind::kT, c);
  out.push_back(Gate::cx(b, c));
  one(GateKind::kTdg, c);
  out.push_back(Gate::cx(a, c));
  one(GateKind::kT, b);
  one(GateKind::kT, c);
  one(GateKind::kH, c);
  out.push_back(Gate::cx(a, b));
  one(GateKind::kT, a);
  one(GateKind::kTdg, b);
  out.push_back(Gate::cx(a, b));
}

}  // namespace decompose_detail

/// Lowers ccx/cswap/swap onto CX plus single-qubit gates.
///
/// `allowed` lists the macro kinds this call may expand; a macro outside it
/// is rejected.
inline Circuit decompose_to_native(
    const Circuit& c,
    std::initializer_list<GateKind> allowed = {GateKind::kCCX,
                                               GateKind::kCSWAP,
                                               GateKind::kSWAP}) {
  std::vector<GateKind> allow(allowed);
  for (GateKind k : allow) {
    if (!is_macro(k)) {
      throw std::invalid_argument("unknown macro kind '" +
                                  std::string(gate_name(k)) + "'");
    }
  }
  std::vector<Gate> out;
  out.reserve(c.size());
  for (const Gate& g : c) {
    if (!is_macro(g.kind())) {
      out.push_back(g);
      continue;
    }
    if (std::find(allow.begin(), allow.end(), g.kind()) == allow.end()) {
      throw std::invalid_argument("unknown macro kind '" +
                                  std::string(gate_name(g.kind())) + "'");
    }
    const auto& q = g.qubits();
    switch (g.kind()) {
      case GateKind::kSWAP:
        out.push_back(Gate::cx(q[0], q[1]));
        out.push_back(Gate::cx(q[1], q[0]));
        out.push_back(Gate::cx(q[0], q[1]));
        break;
      case GateKind::kCCX:
        decompose_detail::ccx(out, q[0], q[1], q[2]);
        break;
      case GateKind::kCSWAP:
        out.push_back(Gate::cx(q[2], q[1]));
        decompose_detail::ccx(out, q[0], q[1], q[2]);
        out.push_back(Gate::cx(q[2], q[1]));
        break;
      default:
        break;
    }
  }
  return Circuit(c.num_qubits(), c.num_clbits(), std::move(out));
}

}  // namespace xtalk
