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

#include <map>
#include <random>
#include <set>
#include <unordered_set>

#include "oracle.hpp"
#include "xtalk/clifford.hpp"

namespace xtalk {
namespace {

oracle::Dense dense_pauli(const Pauli& p, int n) {
  std::vector<char> xs(n, 'I'), zs(n, 'I');
  for (int j = 0; j < n; ++j) {
    if ((p.x >> j) & 1) xs[j] = 'X';
    if ((p.z >> j) & 1) zs[j] = 'Z';
  }
  oracle::Dense m = oracle::multiply(oracle::pauli_matrix(xs), oracle::pauli_matrix(zs));
  const std::complex<double> phase = std::pow(std::complex<double>(0, 1), p.phase);
  for (auto& row : m)
    for (auto& v : row) v *= phase;
  return m;
}

oracle::Dense gates_unitary(const std::vector<Gate>& gates, int n) {
  Circuit c(n, 0);
  for (const Gate& g : gates) c.add(g);
  return oracle::circuit_unitary(c);
}

// U G U^dagger equals the tableau image of every generator G.
bool conjugates_like(const CliffordTableau& t, const oracle::Dense& u) {
  const int n = t.num_qubits();
  const auto ud = oracle::adjoint(u);
  for (int j = 0; j < n; ++j) {
    for (const Pauli& g : {Pauli::x_on(j), Pauli::z_on(j)}) {
      const auto lhs = oracle::multiply(oracle::multiply(u, dense_pauli(g, n)), ud);
      if (oracle::max_abs_diff(lhs, dense_pauli(t.apply(g), n)) > 1e-9) return false;
    }
  }
  return true;
}

// Omega-preservation checked directly on the binary matrix.
bool symplectic_form_preserved(const CliffordTableau& t) {
  const int n = t.num_qubits();
  const auto m = t.symplectic();
  for (int r = 0; r < 2 * n; ++r)
    for (int s = 0; s < 2 * n; ++s) {
      int form = 0;
      for (int k = 0; k < n; ++k) form ^= (m[r][k] & m[s][n + k]) ^ (m[r][n + k] & m[s][k]);
      const int expected = (r != s && (r - s == n || s - r == n)) ? 1 : 0;
      if (form != expected) return false;
    }
  return true;
}

// Closure of {H, S} (plus CX(0,1) for two qubits) under composition.
std::vector<CliffordTableau> brute_force_group(int n) {
  std::vector<CliffordTableau> gens;
  for (int q = 0; q < n; ++q) {
    gens.push_back(CliffordTableau::from_gate(Gate::single(GateKind::kH, q), n));
    gens.push_back(CliffordTableau::from_gate(Gate::single(GateKind::kS, q), n));
  }
  if (n == 2) gens.push_back(CliffordTableau::from_gate(Gate::cx(0, 1), n));
  std::vector<CliffordTableau> all{CliffordTableau::identity(n)};
  std::unordered_set<std::uint64_t> seen{all.front().key()};
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (const auto& g : gens) {
      CliffordTableau next = compose(all[i], g);
      if (seen.insert(next.key()).second) all.push_back(std::move(next));
    }
  }
  return all;
}

TEST(Tableau, GateTableauxMatchDenseConjugation) {
  for (GateKind k : {GateKind::kI, GateKind::kX, GateKind::kY, GateKind::kZ, GateKind::kH,
                     GateKind::kS, GateKind::kSdg, GateKind::kSX}) {
    for (int q = 0; q < 2; ++q) {
      const Gate g = Gate::single(k, q);
      EXPECT_TRUE(conjugates_like(CliffordTableau::from_gate(g, 2), gates_unitary({g}, 2)))
          << gate_name(k);
    }
  }
  for (const Gate& g : {Gate::cx(0, 1), Gate::cx(1, 0), Gate(GateKind::kSWAP, {0, 1})}) {
    EXPECT_TRUE(conjugates_like(CliffordTableau::from_gate(g, 2), gates_unitary({g}, 2)));
  }
  EXPECT_THROW(CliffordTableau::from_gate(Gate::single(GateKind::kT, 0), 1),
               std::invalid_argument);
}

TEST(Tableau, ComposeMatchesMatrixProduct) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = random_clifford(2, rng);
    const auto b = random_clifford(2, rng);
    const auto ua = gates_unitary(tableau_to_gates(a), 2);
    const auto ub = gates_unitary(tableau_to_gates(b), 2);
    EXPECT_TRUE(conjugates_like(compose(a, b), oracle::multiply(ub, ua)));
  }
}

TEST(Tableau, IdentityAndInverse) {
  std::mt19937_64 rng(32);
  const auto id2 = CliffordTableau::identity(2);
  EXPECT_EQ(invert(id2), id2);
  const auto x = CliffordTableau::from_gate(Gate::single(GateKind::kX, 0), 1);
  EXPECT_EQ(invert(x), x);
  const auto s = CliffordTableau::from_gate(Gate::single(GateKind::kS, 0), 1);
  EXPECT_EQ(invert(s), CliffordTableau::from_gate(Gate::single(GateKind::kSdg, 0), 1));
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 1 + trial % 2;
    const auto c = random_clifford(n, rng);
    const auto id = CliffordTableau::identity(n);
    EXPECT_EQ(compose(c, id), c);
    EXPECT_EQ(compose(id, c), c);
    EXPECT_EQ(compose(c, invert(c)), id);
    EXPECT_EQ(compose(invert(c), c), id);
  }
}

TEST(Tableau, Associativity) {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 300; ++trial) {
    const auto a = random_clifford(2, rng), b = random_clifford(2, rng),
               c = random_clifford(2, rng);
    EXPECT_EQ(compose(compose(a, b), c), compose(a, compose(b, c)));
  }
}

TEST(Tableau, ComposeStaysSymplectic) {
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 300; ++trial) {
    const auto c = compose(random_clifford(2, rng), random_clifford(2, rng));
    EXPECT_TRUE(symplectic_form_preserved(c));
    EXPECT_TRUE(c.is_valid());
  }
  EXPECT_THROW(compose(CliffordTableau(1), CliffordTableau(2)), std::invalid_argument);
}

TEST(Tableau, RejectsNonSymplecticImages) {
  std::vector<Pauli> images{Pauli::x_on(0), Pauli::x_on(0)};
  EXPECT_THROW(CliffordTableau::from_images(1, images), std::invalid_argument);
}

TEST(CliffordGroup, ClosureSizes) {
  EXPECT_EQ(brute_force_group(1).size(), 24u);
  EXPECT_EQ(brute_force_group(2).size(), 11520u);
}

TEST(CliffordGroup, SymplecticEnumerationIsBijective) {
  for (int n : {1, 2}) {
    const auto order = clifford_detail::symplectic_group_order(n);
    EXPECT_EQ(order, n == 1 ? 6u : 720u);
    std::set<std::vector<std::vector<std::uint8_t>>> seen;
    for (std::uint64_t i = 0; i < order; ++i) {
      const auto g = clifford_detail::symplectic_from_index(i, n);
      const auto t = clifford_detail::tableau_from_symplectic(g, 0, n);
      EXPECT_TRUE(symplectic_form_preserved(t));
      seen.insert(t.symplectic());
    }
    EXPECT_EQ(seen.size(), order);
  }
}

TEST(CliffordGroup, SamplesLandInGroup) {
  std::unordered_set<std::uint64_t> group;
  for (const auto& t : brute_force_group(2)) group.insert(t.key());
  std::mt19937_64 rng(35);
  std::unordered_set<std::uint64_t> hit;
  for (int i = 0; i < 20000; ++i) {
    const auto k = random_clifford(2, rng).key();
    EXPECT_TRUE(group.count(k));
    hit.insert(k);
  }
  EXPECT_GT(hit.size(), 9000u);
}

TEST(CliffordGroup, OneQubitHistogramWithinThreeSigma) {
  std::map<std::uint64_t, int> counts;
  for (const auto& t : brute_force_group(1)) counts[t.key()] = 0;
  std::mt19937_64 rng(36);
  for (int i = 0; i < 24000; ++i) ++counts.at(random_clifford(1, rng).key());
  const double sigma = std::sqrt(24000 * (1.0 / 24) * (23.0 / 24));
  for (const auto& [k, c] : counts) EXPECT_LT(std::abs(c - 1000.0), 3 * sigma) << c;
}

TEST(CliffordGroup, TwoQubitChiSquare) {
  std::unordered_map<std::uint64_t, int> counts;
  for (const auto& t : brute_force_group(2)) counts[t.key()] = 0;
  std::mt19937_64 rng(37);
  const int draws = 20 * 11520;
  for (int i = 0; i < draws; ++i) ++counts.at(random_clifford(2, rng).key());
  double chi2 = 0.0;
  for (const auto& [k, c] : counts) chi2 += (c - 20.0) * (c - 20.0) / 20.0;
  // 0.99 quantile of chi-square with 11519 degrees of freedom
  EXPECT_LT(chi2, 11873.0);
}

TEST(CliffordGroup, SeededDrawsRepeat) {
  std::mt19937_64 a(99), b(99);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(random_clifford(2, a), random_clifford(2, b));
}

TEST(Decomposition, TrivialCases) {
  EXPECT_TRUE(tableau_to_gates(CliffordTableau::identity(1)).empty());
  EXPECT_TRUE(tableau_to_gates(CliffordTableau::identity(2)).empty());
  const Gate h = Gate::single(GateKind::kH, 0);
  EXPECT_EQ(tableau_to_gates(CliffordTableau::from_gate(h, 1)), std::vector<Gate>{h});
  EXPECT_EQ(tableau_to_gates(CliffordTableau::from_gate(h, 2)), std::vector<Gate>{h});
}

TEST(Decomposition, EveryTwoQubitElement) {
  std::size_t longest = 0;
  for (const auto& t : brute_force_group(2)) {
    const auto gates = tableau_to_gates(t);
    longest = std::max(longest, gates.size());
    for (const Gate& g : gates) {
      const GateKind k = g.kind();
      EXPECT_TRUE(k == GateKind::kH || k == GateKind::kS || k == GateKind::kSdg ||
                  k == GateKind::kSX || k == GateKind::kX || k == GateKind::kZ ||
                  k == GateKind::kCX);
    }
    ASSERT_TRUE(conjugates_like(t, gates_unitary(gates, 2)));
  }
  EXPECT_LE(longest, 30u);
}

TEST(Decomposition, LayeredFormHasThreeAlignedCx) {
  for (const auto& t : brute_force_group(2)) {
    const auto layers = tableau_to_layers(t);
    ASSERT_EQ(layers.size(), 7u);
    std::vector<Gate> flat;
    for (std::size_t i = 0; i < layers.size(); ++i) {
      for (const Gate& g : layers[i]) {
        EXPECT_EQ(g.is_cx(), i % 2 == 1);
        flat.push_back(g);
      }
      if (i % 2 == 1) {
        EXPECT_EQ(layers[i], std::vector<Gate>{Gate::cx(0, 1)});
      }
    }
    ASSERT_TRUE(conjugates_like(t, gates_unitary(flat, 2)));
  }
  for (const auto& t : brute_force_group(1)) {
    const auto layers = tableau_to_layers(t);
    ASSERT_EQ(layers.size(), 1u);
    EXPECT_TRUE(conjugates_like(t, gates_unitary(layers[0], 1)));
  }
}

}  // namespace
}  // namespace xtalk
