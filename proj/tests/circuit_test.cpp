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

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <string>

#include "oracle.hpp"
#include "xtalk/dag.hpp"
#include "xtalk/decompose.hpp"
#include "xtalk/qasm.hpp"

namespace xtalk {
namespace {

constexpr const char* kInjectionProgram = R"(OPENQASM 2.0;
include "qelib1.inc";
qreg q[5];
creg c[3];
x q[0];
x q[1];
barrier q;
cswap q[0],q[1],q[2];
cx q[3],q[4];
barrier q;
measure q[0] -> c[0];
measure q[1] -> c[1];
measure q[2] -> c[2];
)";

TEST(Gate, RejectsWrongArity) {
  EXPECT_THROW(Gate(GateKind::kCX, {0}), std::invalid_argument);
  EXPECT_THROW(Gate(GateKind::kH, {0, 1}), std::invalid_argument);
  EXPECT_THROW(Gate(GateKind::kBarrier, {}), std::invalid_argument);
  EXPECT_NO_THROW(Gate(GateKind::kBarrier, {0, 1, 2}));
}

TEST(Gate, RejectsRepeatedOperand) {
  EXPECT_THROW(Gate::cx(1, 1), std::invalid_argument);
  EXPECT_THROW(Gate(GateKind::kCCX, {0, 1, 0}), std::invalid_argument);
}

TEST(Gate, AngleMustBeFinite) {
  EXPECT_THROW(Gate::rz(std::numeric_limits<double>::infinity(), 0), std::invalid_argument);
  EXPECT_THROW(Gate::rz(std::nan(""), 0), std::invalid_argument);
  EXPECT_NO_THROW(Gate::rz(1.5, 0));
}

TEST(Circuit, RejectsOutOfRangeOperands) {
  Circuit c(2, 1);
  EXPECT_THROW(c.add(Gate::cx(0, 2)), std::out_of_range);
  EXPECT_THROW(c.add(Gate::measure(0, 1)), std::out_of_range);
}

TEST(Circuit, MeasurementIsTerminal) {
  Circuit c(2, 2);
  c.add(Gate::measure(0, 0));
  EXPECT_NO_THROW(c.add(Gate::barrier({0, 1})));
  EXPECT_NO_THROW(c.add(Gate::measure(0, 1)));
  EXPECT_THROW(c.add(Gate::single(GateKind::kX, 0)), std::invalid_argument);
  EXPECT_NO_THROW(c.add(Gate::single(GateKind::kX, 1)));
}

TEST(Qasm, ParsesMinimalProgram) {
  Circuit c = parse_qasm("qreg q[2]; h q[0]; cx q[0],q[1];");
  EXPECT_EQ(c.num_qubits(), 2u);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[0], Gate::single(GateKind::kH, 0));
  EXPECT_EQ(c[1], Gate::cx(0, 1));
}

TEST(Qasm, RepeatedOperandIsSemanticError) {
  try {
    parse_qasm("qreg q[1]; cx q[0],q[0];");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.kind(), ParseError::Kind::kSemantic);
    EXPECT_EQ(e.line(), 1u);
    EXPECT_NE(std::string(e.what()).find("repeated operand"), std::string::npos);
  }
}

TEST(Qasm, SyntaxErrorCarriesPosition) {
  try {
    parse_qasm("OPENQASM 2.0;\nqreg q[2];\nh q[0]\ncx q[0],q[1];\n");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.kind(), ParseError::Kind::kSyntax);
    EXPECT_EQ(e.line(), 4u);
    EXPECT_EQ(e.column(), 1u);
  }
}

TEST(Qasm, UnsupportedConstructsAreNamed) {
  const char* programs[] = {
      "qreg q[1]; gate foo a { x a; }",
      "qreg q[1]; creg c[1]; if(c==1) x q[0];",
      "qreg q[1]; opaque bar a;",
      "qreg q[1]; u3(0,0,0) q[0];",
      "OPENQASM 3.0; qreg q[1];",
      "include \"other.inc\"; qreg q[1];",
  };
  const char* names[] = {"gate", "if", "opaque", "u3", "3.0", "other.inc"};
  for (std::size_t i = 0; i < std::size(programs); ++i) {
    try {
      parse_qasm(programs[i]);
      ADD_FAILURE() << programs[i];
    } catch (const ParseError& e) {
      EXPECT_EQ(e.kind(), ParseError::Kind::kUnsupported) << e.what();
      EXPECT_NE(std::string(e.what()).find(names[i]), std::string::npos) << e.what();
    }
  }
}

TEST(Qasm, SemanticErrors) {
  for (const char* p : {"qreg q[2]; x r[0];", "qreg q[2]; x q[2];",
                        "qreg q[2]; creg c[1]; measure q[0] -> c[3];",
                        "qreg q[2]; cx q[0];", "qreg q[2]; rz(1/0) q[0];"}) {
    try {
      parse_qasm(p);
      ADD_FAILURE() << p;
    } catch (const ParseError& e) {
      EXPECT_EQ(e.kind(), ParseError::Kind::kSemantic) << p << " -> " << e.what();
    }
  }
}

TEST(Qasm, AngleExpressions) {
  Circuit c = parse_qasm("qreg q[1]; rz(-pi/4) q[0]; rz(2*(pi+1)) q[0]; rz(0.5e1) q[0];");
  ASSERT_EQ(c.size(), 3u);
  EXPECT_DOUBLE_EQ(c[0].angle(), -M_PI / 4);
  EXPECT_DOUBLE_EQ(c[1].angle(), 2 * (M_PI + 1));
  EXPECT_DOUBLE_EQ(c[2].angle(), 5.0);
}

TEST(Qasm, MultipleRegistersFlattenInOrder) {
  Circuit c = parse_qasm("qreg a[2]; qreg b[3]; creg m[1]; creg n[2]; cx a[1],b[2]; "
                         "measure b[0] -> n[1];");
  EXPECT_EQ(c.num_qubits(), 5u);
  EXPECT_EQ(c.num_clbits(), 3u);
  EXPECT_EQ(c[0], Gate::cx(1, 4));
  EXPECT_EQ(c[1], Gate::measure(2, 2));
}

TEST(Qasm, InjectionProgramKeepsCxBetweenBarriers) {
  Circuit c = parse_qasm(kInjectionProgram);
  EXPECT_EQ(c.num_qubits(), 5u);
  auto cx34 = std::find(c.begin(), c.end(), Gate::cx(3, 4));
  ASSERT_NE(cx34, c.end());
  const auto pos = cx34 - c.begin();
  ASSERT_GT(pos, 0);
  ASSERT_LT(pos + 1, static_cast<long>(c.size()));
  EXPECT_TRUE(c[pos + 1].is_barrier());
  EXPECT_TRUE(std::any_of(c.begin(), cx34, [](const Gate& g) { return g.is_barrier(); }));
  EXPECT_EQ(c[pos - 1].kind(), GateKind::kCSWAP);
}

TEST(Qasm, EmitsReadableGates) {
  Circuit c(1, 0);
  c.add(Gate::single(GateKind::kX, 0));
  EXPECT_NE(emit_qasm(c).find("x q[0];"), std::string::npos);
}

TEST(Qasm, EmptyCircuitIsHeaderOnly) {
  const std::string text = emit_qasm(Circuit{});
  EXPECT_EQ(text, "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
  EXPECT_EQ(parse_qasm(text), Circuit{});
}

TEST(Qasm, RoundTripRandomCircuits) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 5);
    Circuit c = oracle::random_circuit(n, 30, rng, true);
    for (int q = 0; q < n; ++q) c.add(Gate::measure(q, n - 1 - q));
    const std::string text = emit_qasm(c);
    const Circuit back = parse_qasm(text);
    ASSERT_EQ(back, c) << text;
    EXPECT_EQ(emit_qasm(back), text);
  }
}

TEST(Decompose, SwapIsThreeCx) {
  Circuit c(3, 0);
  c.add(Gate(GateKind::kSWAP, {2, 0}));
  Circuit d = decompose_to_native(c);
  ASSERT_EQ(d.size(), 3u);
  EXPECT_EQ(d[0], Gate::cx(2, 0));
  EXPECT_EQ(d[1], Gate::cx(0, 2));
  EXPECT_EQ(d[2], Gate::cx(2, 0));
}

TEST(Decompose, CswapMatchesDenseUnitary) {
  Circuit c(3, 0);
  c.add(Gate(GateKind::kCSWAP, {0, 1, 2}));
  Circuit d = decompose_to_native(c);
  EXPECT_FALSE(d.has_macros());
  EXPECT_EQ(std::count_if(d.begin(), d.end(), [](const Gate& g) { return g.is_cx(); }), 8);
  EXPECT_LT(oracle::max_abs_diff(oracle::circuit_unitary(c), oracle::circuit_unitary(d)), 1e-9);
}

TEST(Decompose, CcxMatchesDenseUnitary) {
  Circuit c(3, 0);
  c.add(Gate(GateKind::kCCX, {2, 0, 1}));
  Circuit d = decompose_to_native(c);
  EXPECT_EQ(std::count_if(d.begin(), d.end(), [](const Gate& g) { return g.is_cx(); }), 6);
  EXPECT_LT(oracle::max_abs_diff(oracle::circuit_unitary(c), oracle::circuit_unitary(d)), 1e-9);
}

TEST(Decompose, NativeCircuitUnchanged) {
  std::mt19937_64 rng(3);
  Circuit c = oracle::random_circuit(4, 40, rng, false);
  EXPECT_EQ(decompose_to_native(c), c);
}

TEST(Decompose, RejectsUnknownMacroKinds) {
  Circuit c(3, 0);
  c.add(Gate(GateKind::kCCX, {0, 1, 2}));
  EXPECT_THROW(decompose_to_native(c, {GateKind::kH}), std::invalid_argument);
  EXPECT_THROW(decompose_to_native(c, {GateKind::kSWAP}), std::invalid_argument);
}

TEST(Decompose, PreservesUnitaryOnRandomCircuits) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 3);
    Circuit c = oracle::random_circuit(n, 25, rng, true);
    Circuit d = decompose_to_native(c);
    ASSERT_FALSE(d.has_macros());
    EXPECT_LT(oracle::max_abs_diff(oracle::circuit_unitary(c), oracle::circuit_unitary(d)), 1e-9);
  }
}

TEST(Dag, ChainEdges) {
  Circuit c(2, 0);
  c.add(Gate::single(GateKind::kH, 0));
  c.add(Gate::cx(0, 1));
  c.add(Gate::single(GateKind::kX, 1));
  const auto edges = build_dag(c).edges();
  EXPECT_EQ(edges, (std::vector<Precedence>{{0, 1}, {1, 2}}));
}

TEST(Dag, IndependentGatesHaveNoEdges) {
  Circuit c(2, 0);
  c.add(Gate::single(GateKind::kX, 0));
  c.add(Gate::single(GateKind::kX, 1));
  EXPECT_TRUE(build_dag(c).edges().empty());
}

TEST(Dag, BarrierOrdersEverythingAcrossIt) {
  Circuit c(3, 0);
  c.add(Gate::single(GateKind::kX, 0));
  c.add(Gate::single(GateKind::kX, 1));
  c.add(Gate::barrier({0, 1, 2}));
  c.add(Gate::single(GateKind::kX, 2));
  c.add(Gate::cx(0, 1));
  const CircuitDag dag = build_dag(c);
  for (std::size_t before : {0u, 1u})
    for (std::size_t after : {3u, 4u}) EXPECT_TRUE(dag.reaches(before, after));
  EXPECT_FALSE(dag.reaches(0, 1));
}

TEST(Dag, InjectedCxUnorderedWithinBarriers) {
  Circuit c = decompose_to_native(parse_qasm(kInjectionProgram));
  const CircuitDag dag = build_dag(c);
  std::size_t cx34 = 0, first = 0, second = 0;
  std::vector<std::size_t> barriers;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] == Gate::cx(3, 4)) cx34 = i;
    if (c[i].is_barrier()) barriers.push_back(i);
  }
  ASSERT_EQ(barriers.size(), 2u);
  first = barriers[0];
  second = barriers[1];
  EXPECT_TRUE(dag.reaches(first, cx34));
  EXPECT_TRUE(dag.reaches(cx34, second));
  for (std::size_t i = first + 1; i < second; ++i) {
    if (i == cx34) continue;
    EXPECT_FALSE(dag.reaches(i, cx34)) << i;
    EXPECT_FALSE(dag.reaches(cx34, i)) << i;
  }
}

// Random linear extension: repeatedly pick a uniformly random ready node.
std::vector<std::size_t> random_linearization(const CircuitDag& dag, std::mt19937_64& rng) {
  std::vector<std::size_t> indeg(dag.size());
  std::vector<std::size_t> ready, order;
  for (std::size_t v = 0; v < dag.size(); ++v) {
    indeg[v] = dag.preds[v].size();
    if (indeg[v] == 0) ready.push_back(v);
  }
  while (!ready.empty()) {
    const std::size_t pick = rng() % ready.size();
    const std::size_t v = ready[pick];
    ready.erase(ready.begin() + pick);
    order.push_back(v);
    for (std::size_t w : dag.succs[v])
      if (--indeg[w] == 0) ready.push_back(w);
  }
  return order;
}

TEST(Dag, LinearizationsPreservePerQubitOrder) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 5);
    Circuit c = oracle::random_circuit(n, 40, rng, true);
    const CircuitDag dag = build_dag(c);
    ASSERT_TRUE(dag.is_acyclic());
    for (auto order : {dag.topological_order(), random_linearization(dag, rng)}) {
      ASSERT_EQ(order.size(), c.size());
      for (int q = 0; q < n; ++q) {
        std::vector<std::size_t> projected, source;
        for (std::size_t v : order)
          if (c[v].acts_on(q)) projected.push_back(v);
        for (std::size_t v = 0; v < c.size(); ++v)
          if (c[v].acts_on(q)) source.push_back(v);
        EXPECT_EQ(projected, source);
      }
    }
  }
}

TEST(Dag, GateDepthSkipsBarriers) {
  Circuit c(2, 0);
  c.add(Gate::single(GateKind::kX, 0));
  c.add(Gate::barrier({0, 1}));
  c.add(Gate::single(GateKind::kX, 1));
  EXPECT_EQ(gate_depth(c, build_dag(c)), 2u);
}

}  // namespace
}  // namespace xtalk
