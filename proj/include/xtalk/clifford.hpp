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
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <queue>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "xtalk/circuit.hpp"

namespace xtalk {

/// i^phase * X^x * Z^z, with bit j of x/z acting on qubit j.
struct Pauli {
  std::uint32_t x = 0;
  std::uint32_t z = 0;
  std::uint8_t phase = 0;

  static Pauli x_on(int q) { return {std::uint32_t{1} << q, 0, 0}; }
  static Pauli z_on(int q) { return {0, std::uint32_t{1} << q, 0}; }

  /// Hermitian Paulis have phase = #Y (mod 2); returns +1 -> 0, -1 -> 1.
  int sign_bit() const {
    const int canonical = std::popcount(x & z) & 3;
    return ((phase - canonical + 4) & 3) >> 1;
  }

  friend bool operator==(const Pauli&, const Pauli&) = default;
};

inline Pauli operator*(const Pauli& a, const Pauli& b) {
  // Z^{a.z} X^{b.x} = (-1)^{|a.z & b.x|} X^{b.x} Z^{a.z}
  const int swaps = std::popcount(a.z & b.x);
  return {a.x ^ b.x, a.z ^ b.z,
          static_cast<std::uint8_t>((a.phase + b.phase + 2 * swaps) & 3)};
}

/// Clifford operation on n qubits, stored as the conjugated images of the
/// generators X_0..X_{n-1}, Z_0..Z_{n-1}.
class CliffordTableau {
 public:
  CliffordTableau() : CliffordTableau(1) {}
  explicit CliffordTableau(int n) : n_(n) {
    if (n < 1 || n > 8) throw std::invalid_argument("tableau supports 1..8 qubits");
    images_.resize(2 * n);
    for (int j = 0; j < n; ++j) {
      images_[j] = Pauli::x_on(j);
      images_[n + j] = Pauli::z_on(j);
    }
  }

  static CliffordTableau identity(int n) { return CliffordTableau(n); }

  /// From explicit generator images; throws if they do not define a Clifford.
  static CliffordTableau from_images(int n, std::vector<Pauli> images) {
    CliffordTableau t(n);
    if (images.size() != static_cast<std::size_t>(2 * n)) {
      throw std::invalid_argument("need 2n generator images");
    }
    t.images_ = std::move(images);
    if (!t.is_valid()) throw std::invalid_argument("images do not form a Clifford");
    return t;
  }

  /// Tableau of a Clifford gate acting within an n-qubit register.
  static CliffordTableau from_gate(const Gate& g, int n) {
    CliffordTableau t(n);
    for (Qubit q : g.qubits()) {
      if (q >= n) throw std::out_of_range("gate outside tableau register");
    }
    const auto& qs = g.qubits();
    auto set1 = [&](Pauli x_img, Pauli z_img) {
      const int q = qs[0];
      t.images_[q] = shift(x_img, q);
      t.images_[n + q] = shift(z_img, q);
    };
    const Pauli X{1, 0, 0}, Z{0, 1, 0};
    const Pauli Y{1, 1, 1}, mY{1, 1, 3}, mX{1, 0, 2}, mZ{0, 1, 2};
    switch (g.kind()) {
      case GateKind::kI: break;
      case GateKind::kX: set1(X, mZ); break;
      case GateKind::kY: set1(mX, mZ); break;
      case GateKind::kZ: set1(mX, Z); break;
      case GateKind::kH: set1(Z, X); break;
      case GateKind::kS: set1(Y, Z); break;
      case GateKind::kSdg: set1(mY, Z); break;
      case GateKind::kSX: set1(X, mY); break;
      case GateKind::kCX: {
        const int c = qs[0], tq = qs[1];
        t.images_[c] = Pauli::x_on(c) * Pauli::x_on(tq);
        t.images_[n + tq] = Pauli::z_on(c) * Pauli::z_on(tq);
        break;
      }
      case GateKind::kSWAP: {
        const int a = qs[0], b = qs[1];
        std::swap(t.images_[a], t.images_[b]);
        std::swap(t.images_[n + a], t.images_[n + b]);
        break;
      }
      default:
        throw std::invalid_argument("'" + std::string(gate_name(g.kind())) +
                                    "' is not a supported Clifford gate");
    }
    return t;
  }

  int num_qubits() const { return n_; }
  const std::vector<Pauli>& images() const { return images_; }
  const Pauli& x_image(int j) const { return images_[j]; }
  const Pauli& z_image(int j) const { return images_[n_ + j]; }

  /// C P C^dagger.
  Pauli apply(const Pauli& p) const {
    Pauli out{0, 0, p.phase};
    for (int j = 0; j < n_; ++j)
      if ((p.x >> j) & 1) out = out * images_[j];
    for (int j = 0; j < n_; ++j)
      if ((p.z >> j) & 1) out = out * images_[n_ + j];
    return out;
  }

  /// 2n x 2n binary matrix; row r is the (x | z) vector of image r.
  std::vector<std::vector<std::uint8_t>> symplectic() const {
    std::vector<std::vector<std::uint8_t>> m(2 * n_, std::vector<std::uint8_t>(2 * n_));
    for (int r = 0; r < 2 * n_; ++r) {
      for (int j = 0; j < n_; ++j) {
        m[r][j] = (images_[r].x >> j) & 1;
        m[r][n_ + j] = (images_[r].z >> j) & 1;
      }
    }
    return m;
  }

  /// Sign bit of every image, same order as the rows of symplectic().
  std::vector<std::uint8_t> phases() const {
    std::vector<std::uint8_t> out;
    for (const Pauli& p : images_) out.push_back(static_cast<std::uint8_t>(p.sign_bit()));
    return out;
  }

  /// M Omega M^T = Omega over GF(2) and every image Hermitian.
  bool is_valid() const {
    for (const Pauli& p : images_) {
      if (((p.phase - std::popcount(p.x & p.z)) & 1) != 0) return false;
      if ((p.x | p.z) >> n_) return false;
    }
    for (int r = 0; r < 2 * n_; ++r) {
      for (int s = 0; s < 2 * n_; ++s) {
        const Pauli& a = images_[r];
        const Pauli& b = images_[s];
        const int form = (std::popcount(a.x & b.z) + std::popcount(a.z & b.x)) & 1;
        const int expected = (r % n_ == s % n_ && r != s) ? 1 : 0;
        if (form != expected) return false;
      }
    }
    return true;
  }

  /// Injective encoding for n <= 4.
  std::uint64_t key() const {
    std::uint64_t k = 0;
    for (const Pauli& p : images_) {
      k = (k << n_) | p.x;
      k = (k << n_) | p.z;
      k = (k << 1) | static_cast<std::uint64_t>(p.sign_bit());
    }
    return k;
  }

  friend bool operator==(const CliffordTableau& a, const CliffordTableau& b) {
    return a.n_ == b.n_ && a.images_ == b.images_;
  }

 private:
  static Pauli shift(Pauli p, int q) {
    return {p.x << q, p.z << q, p.phase};
  }

  int n_;
  std::vector<Pauli> images_;
};

/// `a` applied first, then `b`.
inline CliffordTableau compose(const CliffordTableau& a, const CliffordTableau& b) {
  if (a.num_qubits() != b.num_qubits()) {
    throw std::invalid_argument("compose: tableau sizes differ");
  }
  const int n = a.num_qubits();
  std::vector<Pauli> images;
  images.reserve(2 * n);
  for (const Pauli& p : a.images()) images.push_back(b.apply(p));
  return CliffordTableau::from_images(n, std::move(images));
}

/// compose(c, invert(c)) is the identity.
inline CliffordTableau invert(const CliffordTableau& c) {
  const int n = c.num_qubits();
  auto generator = [n](int s) { return s < n ? Pauli::x_on(s) : Pauli::z_on(s - n); };
  auto partner = [n](int s) { return s < n ? s + n : s - n; };
  // The coefficient of generator s in C^-1(g_r) is the symplectic form of
  // g_r with C(partner(s)).
  std::vector<Pauli> inv(2 * n);
  for (int r = 0; r < 2 * n; ++r) {
    const Pauli probe = generator(r);
    Pauli acc{0, 0, 0};
    for (int s = 0; s < 2 * n; ++s) {
      const Pauli& img = c.images()[partner(s)];
      if ((std::popcount(probe.x & img.z) + std::popcount(probe.z & img.x)) & 1) {
        acc = acc * generator(s);
      }
    }
    acc.phase = static_cast<std::uint8_t>(std::popcount(acc.x & acc.z) & 3);
    inv[r] = acc;
  }
  const CliffordTableau guess = CliffordTableau::from_images(n, std::move(inv));
  // guess . c only flips signs, and a Pauli frame is its own inverse.
  const CliffordTableau frame = compose(c, guess);
  return compose(guess, frame);
}

namespace clifford_detail {

// Rejection sampling keeps the draw independent of the library's
// distribution implementation.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  for (;;) {
    const std::uint64_t v = rng();
    if (v < limit) return v % bound;
  }
}

// Symplectic vectors below use the interleaved order (x0, z0, x1, z1, ...).
using Bits = std::vector<std::uint8_t>;

inline int inner(const Bits& v, const Bits& w) {
  int t = 0;
  for (std::size_t i = 0; i < v.size() / 2; ++i) {
    t += v[2 * i] * w[2 * i + 1] + w[2 * i] * v[2 * i + 1];
  }
  return t & 1;
}

inline Bits add(const Bits& a, const Bits& b) {
  Bits out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] ^ b[i];
  return out;
}

inline Bits transvection(const Bits& k, const Bits& v) {
  return inner(k, v) ? add(v, k) : v;
}

inline Bits int_to_bits(std::uint64_t i, std::size_t n) {
  Bits out(n);
  for (std::size_t j = 0; j < n; ++j) out[j] = (i >> j) & 1;
  return out;
}

// Two transvection vectors h1, h2 with y = Z_h1 Z_h2 x.
inline std::array<Bits, 2> find_transvection(const Bits& x, const Bits& y) {
  const std::size_t nn = x.size();
  std::array<Bits, 2> out{Bits(nn, 0), Bits(nn, 0)};
  if (x == y) return out;
  if (inner(x, y) == 1) {
    out[0] = add(x, y);
    return out;
  }
  Bits z(nn, 0);
  for (std::size_t i = 0; i < nn / 2; ++i) {
    const std::size_t ii = 2 * i;
    if ((x[ii] | x[ii + 1]) && (y[ii] | y[ii + 1])) {
      z[ii] = x[ii] ^ y[ii];
      z[ii + 1] = x[ii + 1] ^ y[ii + 1];
      if (!(z[ii] | z[ii + 1])) {
        z[ii + 1] = 1;
        if (x[ii] != x[ii + 1]) z[ii] = 1;
      }
      out[0] = add(x, z);
      out[1] = add(y, z);
      return out;
    }
  }
  for (std::size_t i = 0; i < nn / 2; ++i) {
    const std::size_t ii = 2 * i;
    if ((x[ii] | x[ii + 1]) && !(y[ii] | y[ii + 1])) {
      if (x[ii] == x[ii + 1]) {
        z[ii + 1] = 1;
      } else {
        z[ii + 1] = x[ii];
        z[ii] = x[ii + 1];
      }
      break;
    }
  }
  for (std::size_t i = 0; i < nn / 2; ++i) {
    const std::size_t ii = 2 * i;
    if (!(x[ii] | x[ii + 1]) && (y[ii] | y[ii + 1])) {
      if (y[ii] == y[ii + 1]) {
        z[ii + 1] = 1;
      } else {
        z[ii + 1] = y[ii];
        z[ii] = y[ii + 1];
      }
      break;
    }
  }
  out[0] = add(x, z);
  out[1] = add(y, z);
  return out;
}

/// |Sp(2n, 2)| = 2^(n^2) prod_{j=1..n} (4^j - 1).
inline std::uint64_t symplectic_group_order(int n) {
  std::uint64_t order = std::uint64_t{1} << (n * n);
  for (int j = 1; j <= n; ++j) order *= (std::uint64_t{1} << (2 * j)) - 1;
  return order;
}

/// The index-th element of Sp(2n, 2) in the canonical transvection
/// enumeration; rows are the images of the interleaved basis vectors.
inline std::vector<Bits> symplectic_from_index(std::uint64_t i, int n) {
  const std::size_t nn = 2 * static_cast<std::size_t>(n);
  const std::uint64_t s = (std::uint64_t{1} << nn) - 1;
  const std::uint64_t k = (i % s) + 1;
  i /= s;
  Bits f1 = int_to_bits(k, nn);
  Bits e1(nn, 0);
  e1[0] = 1;
  const auto t = find_transvection(e1, f1);
  const Bits bits = int_to_bits(i % (std::uint64_t{1} << (nn - 1)), nn - 1);
  Bits eprime = e1;
  for (std::size_t j = 2; j < nn; ++j) eprime[j] = bits[j - 1];
  Bits h0 = transvection(t[0], eprime);
  h0 = transvection(t[1], h0);
  if (bits[0] == 1) f1.assign(nn, 0);
  std::vector<Bits> g(nn, Bits(nn, 0));
  g[0][0] = 1;
  g[1][1] = 1;
  if (n > 1) {
    const auto sub = symplectic_from_index(i >> (nn - 1), n - 1);
    for (std::size_t r = 0; r < sub.size(); ++r)
      for (std::size_t c = 0; c < sub.size(); ++c) g[r + 2][c + 2] = sub[r][c];
  }
  for (std::size_t j = 0; j < nn; ++j) {
    g[j] = transvection(t[0], g[j]);
    g[j] = transvection(t[1], g[j]);
    g[j] = transvection(h0, g[j]);
    g[j] = transvection(f1, g[j]);
  }
  return g;
}

/// Tableau with the given symplectic part (interleaved rows) and signs.
inline CliffordTableau tableau_from_symplectic(const std::vector<Bits>& g,
                                               std::uint32_t sign_bits, int n) {
  std::vector<Pauli> images(2 * n);
  for (int j = 0; j < n; ++j) {
    for (int which = 0; which < 2; ++which) {
      const Bits& row = g[2 * j + which];
      Pauli p;
      for (int q = 0; q < n; ++q) {
        p.x |= static_cast<std::uint32_t>(row[2 * q]) << q;
        p.z |= static_cast<std::uint32_t>(row[2 * q + 1]) << q;
      }
      const int slot = which == 0 ? j : n + j;
      const int sign = (sign_bits >> slot) & 1;
      p.phase = static_cast<std::uint8_t>((std::popcount(p.x & p.z) + 2 * sign) & 3);
      images[slot] = p;
    }
  }
  return CliffordTableau::from_images(n, std::move(images));
}

}  // namespace clifford_detail

/// Uniformly random element of the n-qubit Clifford group (modulo global
/// phase): a uniform symplectic matrix with uniform signs.
inline CliffordTableau random_clifford(int n, std::mt19937_64& rng) {
  if (n < 1 || n > 4) throw std::invalid_argument("random_clifford: n must be 1..4");
  using namespace clifford_detail;
  const std::uint64_t index = uniform_below(rng, symplectic_group_order(n));
  const auto signs = static_cast<std::uint32_t>(uniform_below(rng, std::uint64_t{1} << (2 * n)));
  return tableau_from_symplectic(symplectic_from_index(index, n), signs, n);
}

namespace clifford_detail {

struct Word {
  std::vector<Gate> gates;
};

// Cheapest gate word for every element of the 1- or 2-qubit Clifford group
// over {H, S, Sdg, SX, X, Z, CX}. A CX costs more than any run of
// single-qubit gates between two CXs, so words use the fewest CXs first.
class DecompositionTable {
 public:
  explicit DecompositionTable(int n) : n_(n) {
    std::vector<Gate> gens;
    for (int q = 0; q < n; ++q) {
      for (GateKind k : {GateKind::kH, GateKind::kS, GateKind::kSdg,
                         GateKind::kSX, GateKind::kX, GateKind::kZ}) {
        gens.push_back(Gate::single(k, q));
      }
    }
    if (n == 2) {
      gens.push_back(Gate::cx(0, 1));
      gens.push_back(Gate::cx(1, 0));
    }
    std::vector<CliffordTableau> gen_tabs;
    for (const Gate& g : gens) gen_tabs.push_back(CliffordTableau::from_gate(g, n));

    struct Node {
      int cost;
      std::uint64_t key;
      bool operator>(const Node& o) const {
        return cost != o.cost ? cost > o.cost : key > o.key;
      }
    };
    std::priority_queue<Node, std::vector<Node>, std::greater<>> pq;
    const CliffordTableau id = CliffordTableau::identity(n);
    entries_[id.key()] = Entry{0, 0, -1, id};
    pq.push({0, id.key()});
    while (!pq.empty()) {
      const Node top = pq.top();
      pq.pop();
      Entry& cur = entries_.at(top.key);
      if (top.cost > cur.cost || cur.settled) continue;
      cur.settled = true;
      const CliffordTableau here = cur.tableau;
      for (std::size_t gi = 0; gi < gens.size(); ++gi) {
        const int step = gens[gi].is_cx() ? kCxCost : 1;
        CliffordTableau nxt = compose(here, gen_tabs[gi]);
        const std::uint64_t k = nxt.key();
        auto it = entries_.find(k);
        const int cost = top.cost + step;
        if (it == entries_.end() || (!it->second.settled && cost < it->second.cost)) {
          entries_[k] = Entry{cost, top.key, static_cast<int>(gi), std::move(nxt)};
          pq.push({cost, k});
        }
      }
    }
    gens_ = std::move(gens);
  }

  std::vector<Gate> word(const CliffordTableau& t) const {
    std::vector<Gate> rev;
    std::uint64_t k = t.key();
    for (;;) {
      auto it = entries_.find(k);
      if (it == entries_.end()) throw std::logic_error("tableau not in table");
      if (it->second.gen < 0) break;
      rev.push_back(gens_[it->second.gen]);
      k = it->second.parent;
    }
    return {rev.rbegin(), rev.rend()};
  }

  std::vector<CliffordTableau> elements() const {
    std::vector<std::pair<std::uint64_t, CliffordTableau>> all;
    for (const auto& [k, e] : entries_) all.emplace_back(k, e.tableau);
    std::sort(all.begin(), all.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<CliffordTableau> out;
    for (auto& [k, t] : all) out.push_back(std::move(t));
    return out;
  }

  std::size_t size() const { return entries_.size(); }

  static constexpr int kCxCost = 100;

 private:
  struct Entry {
    int cost = 0;
    std::uint64_t parent = 0;
    int gen = -1;
    CliffordTableau tableau;
    bool settled = false;
  };

  int n_;
  std::vector<Gate> gens_;
  std::unordered_map<std::uint64_t, Entry> entries_;
};

inline const DecompositionTable& decomposition_table(int n) {
  if (n == 1) {
    static const DecompositionTable one(1);
    return one;
  }
  if (n == 2) {
    static const DecompositionTable two(2);
    return two;
  }
  throw std::invalid_argument("gate decomposition supports 1 or 2 qubits");
}

inline CliffordTableau tensor(const CliffordTableau& a, const CliffordTableau& b) {
  std::vector<Pauli> images(4);
  images[0] = a.x_image(0);
  images[2] = a.z_image(0);
  const Pauli bx = b.x_image(0), bz = b.z_image(0);
  images[1] = {bx.x << 1, bx.z << 1, bx.phase};
  images[3] = {bz.x << 1, bz.z << 1, bz.phase};
  return CliffordTableau::from_images(2, std::move(images));
}

// Every two-qubit Clifford as L4 . M . L1 with M = CX L3 CX L2 CX (all CX
// with control 0) and L1..L4 tensor products of single-qubit Cliffords.
class LayeredTable {
 public:
  LayeredTable() {
    const auto singles = decomposition_table(1).elements();
    for (std::size_t a = 0; a < singles.size(); ++a)
      for (std::size_t b = 0; b < singles.size(); ++b) {
        locals_.push_back(tensor(singles[a], singles[b]));
        local_parts_.push_back({singles[a], singles[b]});
      }
    const CliffordTableau cx = CliffordTableau::from_gate(Gate::cx(0, 1), 2);
    constexpr std::size_t kGroupOrder = 11520;
    for (std::size_t l2 = 0; l2 < locals_.size() && entries_.size() < kGroupOrder; ++l2) {
      for (std::size_t l3 = 0; l3 < locals_.size() && entries_.size() < kGroupOrder; ++l3) {
        CliffordTableau m = compose(compose(compose(compose(cx, locals_[l2]), cx),
                                            locals_[l3]),
                                    cx);
        if (entries_.count(m.key())) continue;
        const int mi = static_cast<int>(middles_.size());
        middles_.push_back({l2, l3});
        std::vector<CliffordTableau> after_l1;
        after_l1.reserve(locals_.size());
        for (const auto& l1 : locals_) after_l1.push_back(compose(l1, m));
        for (std::size_t l1 = 0; l1 < locals_.size(); ++l1) {
          for (std::size_t l4 = 0; l4 < locals_.size(); ++l4) {
            const auto k = compose(after_l1[l1], locals_[l4]).key();
            entries_.try_emplace(k, Entry{l1, mi, l4});
          }
        }
      }
    }
    if (entries_.size() != kGroupOrder) {
      throw std::logic_error("layered decomposition does not cover the group");
    }
  }

  // Returns {L1, L2, L3, L4} as per-qubit single-qubit tableaux.
  std::array<std::array<CliffordTableau, 2>, 4> layers(const CliffordTableau& t) const {
    const Entry& e = entries_.at(t.key());
    const auto& mid = middles_[e.middle];
    return {local_parts_[e.l1], local_parts_[mid.first], local_parts_[mid.second],
            local_parts_[e.l4]};
  }

 private:
  struct Entry {
    std::size_t l1;
    int middle;
    std::size_t l4;
  };

  std::vector<CliffordTableau> locals_;
  std::vector<std::array<CliffordTableau, 2>> local_parts_;
  std::vector<std::pair<std::size_t, std::size_t>> middles_;
  std::unordered_map<std::uint64_t, Entry> entries_;
};

inline const LayeredTable& layered_table() {
  static const LayeredTable table;
  return table;
}

inline std::vector<Gate> on_qubit(const std::vector<Gate>& word, Qubit q) {
  std::vector<Gate> out;
  for (const Gate& g : word) out.push_back(Gate::single(g.kind(), q));
  return out;
}

}  // namespace clifford_detail

/// Shortest gate sequence over {H, S, Sdg, SX, X, Z, CX} implementing `c`
/// up to global phase, fewest CX first. Gates act on qubits 0..n-1.
inline std::vector<Gate> tableau_to_gates(const CliffordTableau& c) {
  return clifford_detail::decomposition_table(c.num_qubits()).word(c);
}

/// Two-qubit Clifford in the fixed shape
///   L1, CX(0,1), L2, CX(0,1), L3, CX(0,1), L4
/// with every L a layer of single-qubit gates. Returned as 7 layers; the CX
/// layers hold exactly one gate. One-qubit tableaux give a single layer.
inline std::vector<std::vector<Gate>> tableau_to_layers(const CliffordTableau& c) {
  using namespace clifford_detail;
  if (c.num_qubits() == 1) return {tableau_to_gates(c)};
  if (c.num_qubits() != 2) {
    throw std::invalid_argument("layered form supports 1 or 2 qubits");
  }
  const auto parts = layered_table().layers(c);
  std::vector<std::vector<Gate>> out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    std::vector<Gate> layer;
    for (Qubit q = 0; q < 2; ++q) {
      auto w = on_qubit(tableau_to_gates(parts[i][q]), q);
      layer.insert(layer.end(), w.begin(), w.end());
    }
    out.push_back(std::move(layer));
    if (i + 1 < parts.size()) out.push_back({Gate::cx(0, 1)});
  }
  return out;
}

}  // namespace xtalk
