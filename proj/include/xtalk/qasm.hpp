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

// OpenQASM 2.0 subset front end.
//
//   program  := "OPENQASM 2.0;" include? decl+ stmt*
//   include  := "include" "\"qelib1.inc\"" ";"
//   decl     := ("qreg" | "creg") id "[" int "]" ";"
//   stmt     := gatecall | "barrier" args ";" | "measure" arg "->" carg ";"
//   gatecall := gname params? args ";"
//   gname    := id | x | y | z | h | s | sdg | t | tdg | sx | rz | cx
//             | ccx | cswap | swap
//
// Comments run from "//" to end of line. Only rz takes a parameter, a
// constant expression over numbers, pi, + - * / and parentheses. barrier
// also accepts whole-register operands. Registers are flattened onto one
// index space in declaration order.

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "xtalk/circuit.hpp"
#include "xtalk/error.hpp"

namespace xtalk {

namespace qasm_detail {

enum class Tok { kIdent, kInt, kReal, kString, kSymbol, kArrow, kEnd };

struct Token {
  Tok type;
  std::string text;
  std::size_t line;
  std::size_t column;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      if (pos_ >= src_.size()) {
        out.push_back({Tok::kEnd, "", line_, col_});
        return out;
      }
      const std::size_t line = line_, col = col_;
      const char c = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t b = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                src_[pos_] == '_')) {
          advance();
        }
        out.push_back({Tok::kIdent, std::string(src_.substr(b, pos_ - b)),
                       line, col});
      } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        out.push_back(number(line, col));
      } else if (c == '"') {
        advance();
        std::size_t b = pos_;
        while (pos_ < src_.size() && src_[pos_] != '"' && src_[pos_] != '\n') {
          advance();
        }
        if (pos_ >= src_.size() || src_[pos_] != '"') {
          throw ParseError(ParseError::Kind::kSyntax, line, col,
                           "unterminated string");
        }
        std::string text(src_.substr(b, pos_ - b));
        advance();
        out.push_back({Tok::kString, std::move(text), line, col});
      } else if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
        advance();
        advance();
        out.push_back({Tok::kArrow, "->", line, col});
      } else if (std::string_view(";,[](){}+-*/^=<>").find(c) !=
                 std::string_view::npos) {
        advance();
        out.push_back({Tok::kSymbol, std::string(1, c), line, col});
      } else {
        throw ParseError(ParseError::Kind::kSyntax, line, col,
                         std::string("unexpected character '") + c + "'");
      }
    }
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        return;
      }
    }
  }

  Token number(std::size_t line, std::size_t col) {
    std::size_t b = pos_;
    bool real = false;
    auto digits = [&] {
      while (pos_ < src_.size() &&
             std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        advance();
      }
    };
    digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      real = true;
      advance();
      digits();
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      real = true;
      advance();
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) {
        advance();
      }
      digits();
    }
    std::string text(src_.substr(b, pos_ - b));
    if (text == ".") {
      throw ParseError(ParseError::Kind::kSyntax, line, col,
                       "malformed number");
    }
    return {real ? Tok::kReal : Tok::kInt, std::move(text), line, col};
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

struct Register {
  std::string name;
  std::size_t offset;
  std::size_t size;
};

struct PendingGate {
  GateKind kind;
  std::vector<Qubit> qubits;
  double angle = 0.0;
  std::optional<Clbit> clbit;
  std::size_t line;
  std::size_t column;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Circuit run() {
    header();
    while (peek().type != Tok::kEnd) statement();
    return build();
  }

 private:
  using Kind = ParseError::Kind;

  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(Kind kind, const Token& at, const std::string& msg) {
    throw ParseError(kind, at.line, at.column, msg);
  }

  bool is_symbol(const Token& t, char c) const {
    return t.type == Tok::kSymbol && t.text.size() == 1 && t.text[0] == c;
  }

  void expect_symbol(char c) {
    const Token& t = next();
    if (!is_symbol(t, c)) {
      fail(Kind::kSyntax, t,
           std::string("expected '") + c + "' but found " + describe(t));
    }
  }

  static std::string describe(const Token& t) {
    if (t.type == Tok::kEnd) return "end of input";
    return "'" + t.text + "'";
  }

  std::string expect_ident() {
    const Token& t = next();
    if (t.type != Tok::kIdent) {
      fail(Kind::kSyntax, t, "expected identifier but found " + describe(t));
    }
    return t.text;
  }

  std::size_t expect_int() {
    const Token& t = next();
    if (t.type != Tok::kInt) {
      fail(Kind::kSyntax, t, "expected integer but found " + describe(t));
    }
    std::size_t v = 0;
    auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc()) fail(Kind::kSyntax, t, "integer out of range");
    return v;
  }

  void header() {
    const Token& t = peek();
    if (t.type == Tok::kIdent && t.text == "OPENQASM") {
      next();
      const Token& v = next();
      if (v.type != Tok::kReal || v.text != "2.0") {
        if (v.type == Tok::kReal || v.type == Tok::kInt) {
          fail(Kind::kUnsupported, v, "OPENQASM version " + v.text);
        }
        fail(Kind::kSyntax, v, "expected version number");
      }
      expect_symbol(';');
    }
    if (peek().type == Tok::kIdent && peek().text == "include") {
      next();
      const Token& f = next();
      if (f.type != Tok::kString) {
        fail(Kind::kSyntax, f, "expected file name string");
      }
      if (f.text != "qelib1.inc") {
        fail(Kind::kUnsupported, f, "include \"" + f.text + "\"");
      }
      expect_symbol(';');
    }
  }

  void statement() {
    const Token& head = next();
    if (head.type != Tok::kIdent) {
      fail(Kind::kSyntax, head, "expected statement but found " + describe(head));
    }
    const std::string& word = head.text;
    if (word == "qreg" || word == "creg") {
      declaration(word == "qreg" ? qregs_ : cregs_, head);
    } else if (word == "barrier") {
      barrier(head);
    } else if (word == "measure") {
      measure(head);
    } else if (word == "gate" || word == "opaque" || word == "if" ||
               word == "reset" || word == "include" || word == "OPENQASM") {
      fail(Kind::kUnsupported, head, "'" + word + "' statement");
    } else if (auto kind = unitary_kind_from_name(word)) {
      gate_call(*kind, head);
    } else {
      fail(Kind::kUnsupported, head, "gate '" + word + "'");
    }
  }

  void declaration(std::vector<Register>& regs, const Token& head) {
    const Token& name_tok = peek();
    std::string name = expect_ident();
    if (find(qregs_, name) || find(cregs_, name)) {
      fail(Kind::kSemantic, name_tok, "register '" + name + "' redeclared");
    }
    expect_symbol('[');
    std::size_t size = expect_int();
    expect_symbol(']');
    expect_symbol(';');
    if (size == 0) fail(Kind::kSemantic, head, "register of size zero");
    std::size_t offset = regs.empty() ? 0 : regs.back().offset + regs.back().size;
    regs.push_back({std::move(name), offset, size});
  }

  static const Register* find(const std::vector<Register>& regs,
                              const std::string& name) {
    for (const auto& r : regs) {
      if (r.name == name) return &r;
    }
    return nullptr;
  }

  // Returns flattened indices; a bare register name expands to all of it.
  std::vector<int> argument(const std::vector<Register>& regs, bool allow_whole,
                            const char* what) {
    const Token& name_tok = peek();
    std::string name = expect_ident();
    const Register* reg = find(regs, name);
    if (!reg) {
      fail(Kind::kSemantic, name_tok,
           std::string("undeclared ") + what + " register '" + name + "'");
    }
    if (!is_symbol(peek(), '[')) {
      if (!allow_whole) {
        fail(Kind::kUnsupported, name_tok,
             "whole-register operand '" + name + "'");
      }
      std::vector<int> all(reg->size);
      for (std::size_t i = 0; i < reg->size; ++i) {
        all[i] = static_cast<int>(reg->offset + i);
      }
      return all;
    }
    next();
    const Token& idx_tok = peek();
    std::size_t idx = expect_int();
    expect_symbol(']');
    if (idx >= reg->size) {
      fail(Kind::kSemantic, idx_tok,
           "index " + std::to_string(idx) + " out of range for '" + name +
               "[" + std::to_string(reg->size) + "]'");
    }
    return {static_cast<int>(reg->offset + idx)};
  }

  std::vector<Qubit> argument_list(bool allow_whole) {
    std::vector<Qubit> out;
    for (;;) {
      auto part = argument(qregs_, allow_whole, "quantum");
      out.insert(out.end(), part.begin(), part.end());
      if (!is_symbol(peek(), ',')) break;
      next();
    }
    return out;
  }

  void barrier(const Token& head) {
    auto qubits = argument_list(true);
    expect_symbol(';');
    pending_.push_back({GateKind::kBarrier, std::move(qubits), 0.0,
                        std::nullopt, head.line, head.column});
  }

  void measure(const Token& head) {
    auto q = argument(qregs_, false, "quantum");
    const Token& arrow = next();
    if (arrow.type != Tok::kArrow) {
      fail(Kind::kSyntax, arrow, "expected '->' but found " + describe(arrow));
    }
    auto c = argument(cregs_, false, "classical");
    expect_symbol(';');
    pending_.push_back({GateKind::kMeasure, {q.front()}, 0.0, c.front(),
                        head.line, head.column});
  }

  void gate_call(GateKind kind, const Token& head) {
    double angle = 0.0;
    if (is_symbol(peek(), '(')) {
      if (kind != GateKind::kRZ) {
        fail(Kind::kSemantic, peek(), "'" + head.text + "' takes no parameters");
      }
      next();
      angle = expression();
      expect_symbol(')');
    } else if (kind == GateKind::kRZ) {
      fail(Kind::kSemantic, peek(), "rz requires an angle parameter");
    }
    auto qubits = argument_list(false);
    expect_symbol(';');
    if (qubits.size() != gate_arity(kind)) {
      fail(Kind::kSemantic, head,
           "'" + head.text + "' expects " + std::to_string(gate_arity(kind)) +
               " operand(s), got " + std::to_string(qubits.size()));
    }
    pending_.push_back({kind, std::move(qubits), angle, std::nullopt,
                        head.line, head.column});
  }

  double expression() {
    double v = term();
    while (is_symbol(peek(), '+') || is_symbol(peek(), '-')) {
      const bool plus = next().text == "+";
      const double rhs = term();
      v = plus ? v + rhs : v - rhs;
    }
    return v;
  }

  double term() {
    double v = unary();
    while (is_symbol(peek(), '*') || is_symbol(peek(), '/')) {
      const bool mul = next().text == "*";
      const Token& at = peek();
      const double rhs = unary();
      if (!mul && rhs == 0.0) fail(Kind::kSemantic, at, "division by zero");
      v = mul ? v * rhs : v / rhs;
    }
    return v;
  }

  double unary() {
    if (is_symbol(peek(), '-')) {
      next();
      return -unary();
    }
    if (is_symbol(peek(), '+')) {
      next();
      return unary();
    }
    return primary();
  }

  double primary() {
    const Token& t = next();
    if (t.type == Tok::kInt || t.type == Tok::kReal) {
      return std::strtod(t.text.c_str(), nullptr);
    }
    if (t.type == Tok::kIdent && t.text == "pi") return std::numbers::pi;
    if (is_symbol(t, '(')) {
      const double v = expression();
      expect_symbol(')');
      return v;
    }
    fail(Kind::kSyntax, t, "expected expression but found " + describe(t));
  }

  Circuit build() {
    if (qregs_.empty() && !pending_.empty()) {
      fail(Kind::kSemantic, toks_.front(), "no quantum register declared");
    }
    auto total = [](const std::vector<Register>& regs) -> std::size_t {
      return regs.empty() ? 0 : regs.back().offset + regs.back().size;
    };
    Circuit c(total(qregs_), total(cregs_));
    for (auto& p : pending_) {
      try {
        c.add(Gate(p.kind, std::move(p.qubits), p.angle, p.clbit));
      } catch (const std::logic_error& e) {
        throw ParseError(Kind::kSemantic, p.line, p.column, e.what());
      }
    }
    return c;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<Register> qregs_;
  std::vector<Register> cregs_;
  std::vector<PendingGate> pending_;
};

inline std::string format_angle(double v) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), end);
}

}  // namespace qasm_detail

/// Parses the QASM subset described at the top of this header.
/// Throws ParseError with the offending line and column.
inline Circuit parse_qasm(std::string_view text) {
  qasm_detail::Lexer lexer(text);
  qasm_detail::Parser parser(lexer.run());
  return parser.run();
}

/// Emits a program over one register pair "q"/"c" that parses back to `c`.
inline std::string emit_qasm(const Circuit& c) {
  std::string out = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n";
  if (c.num_qubits() > 0) {
    out += "qreg q[" + std::to_string(c.num_qubits()) + "];\n";
  }
  if (c.num_clbits() > 0) {
    out += "creg c[" + std::to_string(c.num_clbits()) + "];\n";
  }
  for (const Gate& g : c) {
    if (g.is_measure()) {
      out += "measure q[" + std::to_string(g.qubits().front()) + "] -> c[" +
             std::to_string(*g.clbit()) + "];\n";
      continue;
    }
    out += gate_name(g.kind());
    if (g.kind() == GateKind::kRZ) {
      out += "(" + qasm_detail::format_angle(g.angle()) + ")";
    }
    for (std::size_t i = 0; i < g.qubits().size(); ++i) {
      out += (i == 0 ? " q[" : ",q[") + std::to_string(g.qubits()[i]) + "]";
    }
    out += ";\n";
  }
  return out;
}

}  // namespace xtalk
