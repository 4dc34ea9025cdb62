// Copyright 2026 The zkfuzz Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cctype>
#include <charconv>
#include <sstream>

#include <fmt/format.h>

#include "zkfuzz/il.h"

namespace zkfuzz::il {

namespace {

std::string RenderLiteral(Word w) {
  if (w <= 0xFFFF) return std::to_string(w);
  return fmt::format("0x{:X}", w);
}

void Render(const Expr& e, std::string& out) {
  switch (e.kind()) {
    case ExprKind::kVar:
      out += e.name();
      return;
    case ExprKind::kIntLit:
      out += RenderLiteral(e.int_value());
      return;
    case ExprKind::kBoolLit:
      out += e.bool_value() ? "T" : "F";
      return;
    case ExprKind::kIntBin:
    case ExprKind::kBoolBin:
    case ExprKind::kCmp: {
      std::string_view sym = e.kind() == ExprKind::kIntBin ? Symbol(e.int_op())
                             : e.kind() == ExprKind::kBoolBin
                                 ? Symbol(e.bool_op())
                                 : Symbol(e.cmp_op());
      out += '(';
      Render(e.child(0), out);
      out += ' ';
      out += sym;
      out += ' ';
      Render(e.child(1), out);
      out += ')';
      return;
    }
    case ExprKind::kNot:
      out += "(!";
      Render(e.child(0), out);
      out += ')';
      return;
    case ExprKind::kIte:
    case ExprKind::kCall: {
      out += e.kind() == ExprKind::kIte ? std::string_view("ite")
                                        : Name(e.custom_fn());
      out += '(';
      for (std::size_t i = 0; i < e.children().size(); ++i) {
        if (i) out += ", ";
        Render(e.child(i), out);
      }
      out += ')';
      return;
    }
    case ExprKind::kMeta:
      out += '?';
      out += e.name();
      if (e.annotation()) {
        out += ':';
        out += Name(*e.annotation());
      }
      return;
    case ExprKind::kFresh:
      out += '$';
      out += e.name();
      out += ':';
      out += Name(*e.annotation());
      return;
  }
}

enum class Tok { kIdent, kNumber, kMeta, kFresh, kOp, kLParen, kRParen,
                 kComma, kColon, kEnd };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token Next() {
    while (pos_ < src_.size() && std::isspace(Peek())) ++pos_;
    std::size_t start = pos_;
    if (pos_ >= src_.size()) return {Tok::kEnd, "", start};
    char c = src_[pos_];
    auto ident_char = [](char ch) {
      return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_';
    };
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (pos_ < src_.size() && ident_char(src_[pos_])) ++pos_;
      return {Tok::kIdent, std::string(src_.substr(start, pos_ - start)),
              start};
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (pos_ < src_.size() &&
             std::isalnum(static_cast<unsigned char>(src_[pos_]))) {
        ++pos_;
      }
      return {Tok::kNumber, std::string(src_.substr(start, pos_ - start)),
              start};
    }
    if ((c == '?' || c == '$') && pos_ + 1 < src_.size() &&
        ident_char(src_[pos_ + 1])) {
      ++pos_;
      while (pos_ < src_.size() && ident_char(src_[pos_])) ++pos_;
      return {c == '?' ? Tok::kMeta : Tok::kFresh,
              std::string(src_.substr(start + 1, pos_ - start - 1)), start};
    }
    ++pos_;
    switch (c) {
      case '(':
        return {Tok::kLParen, "(", start};
      case ')':
        return {Tok::kRParen, ")", start};
      case ',':
        return {Tok::kComma, ",", start};
      case ':':
        return {Tok::kColon, ":", start};
      default:
        break;
    }
    static constexpr std::string_view kTwoChar[] = {"**", "&&", "||", "^^",
                                                    "==", "!=", "<=", ">="};
    if (pos_ < src_.size()) {
      std::string two{c, src_[pos_]};
      for (std::string_view op : kTwoChar) {
        if (op == two) {
          ++pos_;
          return {Tok::kOp, two, start};
        }
      }
    }
    if (std::string_view("+-*/%&|^<>!").find(c) != std::string_view::npos) {
      return {Tok::kOp, std::string(1, c), start};
    }
    throw ParseError(fmt::format("unexpected character '{}' at offset {}", c,
                                 start));
  }

 private:
  unsigned char Peek() const { return static_cast<unsigned char>(src_[pos_]); }
  std::string_view src_;
  std::size_t pos_ = 0;
};

struct BinaryInfo {
  int precedence;
  bool right_assoc;
};

std::optional<BinaryInfo> BinaryPrecedence(std::string_view op) {
  if (op == "||") return BinaryInfo{1, false};
  if (op == "^^") return BinaryInfo{2, false};
  if (op == "&&") return BinaryInfo{3, false};
  if (op == "|") return BinaryInfo{4, false};
  if (op == "^") return BinaryInfo{5, false};
  if (op == "&") return BinaryInfo{6, false};
  if (op == "==" || op == "!=") return BinaryInfo{7, false};
  if (op == "<" || op == "<=" || op == ">" || op == ">=") {
    return BinaryInfo{8, false};
  }
  if (op == "+" || op == "-") return BinaryInfo{9, false};
  if (op == "*" || op == "/" || op == "%") return BinaryInfo{10, false};
  if (op == "**") return BinaryInfo{11, true};
  return std::nullopt;
}

Expr MakeBinary(std::string_view op, Expr lhs, Expr rhs) {
  static constexpr std::pair<std::string_view, IntOp> kInt[] = {
      {"+", IntOp::kAdd}, {"-", IntOp::kSub}, {"*", IntOp::kMul},
      {"/", IntOp::kDiv}, {"%", IntOp::kRem}, {"**", IntOp::kPow},
      {"&", IntOp::kAnd}, {"|", IntOp::kOr},  {"^", IntOp::kXor}};
  static constexpr std::pair<std::string_view, BoolOp> kBool[] = {
      {"&&", BoolOp::kLAnd}, {"||", BoolOp::kLOr}, {"^^", BoolOp::kLXor}};
  static constexpr std::pair<std::string_view, CmpOp> kCmp[] = {
      {"==", CmpOp::kEq}, {"!=", CmpOp::kNeq}, {"<", CmpOp::kLt},
      {"<=", CmpOp::kLeq}, {">", CmpOp::kGt}, {">=", CmpOp::kGeq}};
  for (auto [s, o] : kInt) {
    if (s == op) return Expr::IntBin(o, std::move(lhs), std::move(rhs));
  }
  for (auto [s, o] : kBool) {
    if (s == op) return Expr::BoolBin(o, std::move(lhs), std::move(rhs));
  }
  for (auto [s, o] : kCmp) {
    if (s == op) return Expr::Cmp(o, std::move(lhs), std::move(rhs));
  }
  throw ParseError("unknown operator " + std::string(op));
}

class Parser {
 public:
  explicit Parser(std::string_view src) : lexer_(src) { Advance(); }

  Expr ParseAll() {
    Expr e = ParseBinary(0);
    if (cur_.kind != Tok::kEnd) Fail("trailing input");
    return e;
  }

 private:
  void Advance() { cur_ = lexer_.Next(); }

  [[noreturn]] void Fail(std::string_view what) const {
    throw ParseError(fmt::format("{} at offset {} near '{}'", what, cur_.pos,
                                 cur_.text));
  }

  void Expect(Tok kind, std::string_view what) {
    if (cur_.kind != kind) Fail(fmt::format("expected {}", what));
    Advance();
  }

  Expr ParseBinary(int min_prec) {
    Expr lhs = ParseUnary();
    while (cur_.kind == Tok::kOp) {
      auto info = BinaryPrecedence(cur_.text);
      if (!info || info->precedence < min_prec) break;
      std::string op = cur_.text;
      Advance();
      Expr rhs = ParseBinary(info->right_assoc ? info->precedence
                                               : info->precedence + 1);
      lhs = MakeBinary(op, std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  Expr ParseUnary() {
    if (cur_.kind == Tok::kOp && cur_.text == "!") {
      Advance();
      return Expr::Not(ParseUnary());
    }
    return ParsePrimary();
  }

  std::optional<TypeTag> ParseAnnotation(bool required) {
    if (cur_.kind != Tok::kColon) {
      if (required) Fail("expected type annotation");
      return std::nullopt;
    }
    Advance();
    if (cur_.kind != Tok::kIdent || (cur_.text != "int" && cur_.text != "bool"))
      Fail("expected 'int' or 'bool'");
    TypeTag t = cur_.text == "int" ? TypeTag::kInt : TypeTag::kBool;
    Advance();
    return t;
  }

  Expr ParsePrimary() {
    switch (cur_.kind) {
      case Tok::kNumber: {
        std::string text = cur_.text;
        std::uint64_t value = 0;
        int base = 10;
        std::string_view digits = text;
        if (digits.size() > 2 && digits[0] == '0' &&
            (digits[1] == 'x' || digits[1] == 'X')) {
          base = 16;
          digits.remove_prefix(2);
        }
        auto [ptr, ec] = std::from_chars(
            digits.data(), digits.data() + digits.size(), value, base);
        if (ec != std::errc() || ptr != digits.data() + digits.size() ||
            value > 0xFFFFFFFFull) {
          Fail("invalid integer literal");
        }
        Advance();
        return Expr::IntLit(static_cast<Word>(value));
      }
      case Tok::kIdent: {
        std::string name = cur_.text;
        Advance();
        if (name == "T") return Expr::BoolLit(true);
        if (name == "F") return Expr::BoolLit(false);
        if (cur_.kind != Tok::kLParen) return Expr::Var(std::move(name));
        Advance();
        std::vector<Expr> args;
        if (cur_.kind != Tok::kRParen) {
          args.push_back(ParseBinary(0));
          while (cur_.kind == Tok::kComma) {
            Advance();
            args.push_back(ParseBinary(0));
          }
        }
        Expect(Tok::kRParen, "')'");
        if (name == "ite") {
          if (args.size() != 3) Fail("ite takes three arguments");
          return Expr::Ite(args[0], args[1], args[2]);
        }
        auto fn = CustomFnFromName(name);
        if (!fn) throw ParseError("unknown function '" + name + "'");
        if (args.size() != 2) {
          throw ParseError("function '" + name + "' takes two arguments");
        }
        return Expr::Call(*fn, std::move(args));
      }
      case Tok::kMeta: {
        std::string name = cur_.text;
        Advance();
        return Expr::Meta(std::move(name), ParseAnnotation(false));
      }
      case Tok::kFresh: {
        std::string name = cur_.text;
        Advance();
        return Expr::Fresh(std::move(name), *ParseAnnotation(true));
      }
      case Tok::kLParen: {
        Advance();
        Expr inner = ParseBinary(0);
        Expect(Tok::kRParen, "')'");
        return inner;
      }
      default:
        Fail("expected expression");
    }
  }

  Lexer lexer_;
  Token cur_{Tok::kEnd, "", 0};
};

std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

// Splits "key : value" and checks the key.
std::string_view HeaderValue(std::string_view line, std::string_view key) {
  line = Trim(line);
  if (line.substr(0, key.size()) != key) {
    throw ParseError("expected '" + std::string(key) + "' line, got '" +
                     std::string(line) + "'");
  }
  std::string_view rest = Trim(line.substr(key.size()));
  if (rest.empty() || rest.front() != ':') {
    throw ParseError("expected ':' after '" + std::string(key) + "'");
  }
  return Trim(rest.substr(1));
}

}  // namespace

std::string RenderExpr(const Expr& expr) {
  std::string out;
  Render(expr, out);
  return out;
}

std::string RenderCircuit(const Circuit& circuit) {
  std::string out = "inputs : ";
  for (std::size_t i = 0; i < circuit.inputs.size(); ++i) {
    if (i) out += ", ";
    out += circuit.inputs[i].name;
    if (circuit.inputs[i].visibility == Visibility::kPrivate) out += "#priv";
  }
  out += "\noutputs: " + circuit.output_name + "\n";
  out += circuit.output_name + " = " + RenderExpr(circuit.output_expr) + "\n";
  return out;
}

Expr ParseExpr(std::string_view text) { return Parser(text).ParseAll(); }

Circuit ParseCircuit(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = Trim(text.substr(start, end - start));
    if (!line.empty() && line.substr(0, 2) != "//") lines.push_back(line);
    start = end + 1;
  }
  if (lines.size() != 3) {
    throw ParseError("circuit must have exactly three lines (inputs, "
                     "outputs, assignment), got " +
                     std::to_string(lines.size()));
  }
  Circuit c;
  std::string_view ins = HeaderValue(lines[0], "inputs");
  while (!ins.empty()) {
    std::size_t comma = ins.find(',');
    std::string_view item = Trim(ins.substr(0, comma));
    ins = comma == std::string_view::npos ? std::string_view()
                                          : ins.substr(comma + 1);
    Input in;
    std::size_t hash = item.find('#');
    in.name = std::string(Trim(item.substr(0, hash)));
    if (hash != std::string_view::npos) {
      std::string_view vis = Trim(item.substr(hash + 1));
      if (vis == "priv") {
        in.visibility = Visibility::kPrivate;
      } else if (vis != "pub") {
        throw ParseError("unknown visibility '" + std::string(vis) + "'");
      }
    }
    for (char ch : in.name) {
      if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_') {
        throw ParseError("invalid input name '" + in.name + "'");
      }
    }
    c.inputs.push_back(std::move(in));
  }
  c.output_name = std::string(HeaderValue(lines[1], "outputs"));
  std::string_view assign = lines[2];
  std::size_t eq = assign.find('=');
  if (eq == std::string_view::npos ||
      Trim(assign.substr(0, eq)) != c.output_name) {
    throw ParseError("expected '" + c.output_name + " = <expr>'");
  }
  c.output_expr = ParseExpr(assign.substr(eq + 1));
  try {
    ValidateCircuit(c);
  } catch (const TypeError& e) {
    throw ParseError(std::string("ill-typed circuit: ") + e.what());
  }
  return c;
}

}  // namespace zkfuzz::il
