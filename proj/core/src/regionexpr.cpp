#include <modloc/regionexpr.hpp>

#include <cstdlib>
#include <vector>

#include <modloc/numfmt.hpp>

namespace modloc {
namespace {

enum class Tok {
  kIdent,
  kNumber,
  kLParen,
  kRParen,
  kLBracket,
  kRBracket,
  kComma,
  kAmp,
  kPipe,
  kPrime,
  kPlus,
  kEnd,
};

struct Token {
  Tok kind;
  std::string text;
  double value = 0;
  int line = 1;
  int column = 1;
};

[[noreturn]] void fail_at(const std::string& detail, int line, int column) {
  throw ParseError("syntax error at line " + std::to_string(line) +
                       ", column " + std::to_string(column) + ": " + detail,
                   line, column);
}

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> out;
  int line = 1, column = 1;
  std::size_t i = 0;
  auto is_digit = [](char c) { return c >= '0' && c <= '9'; };
  auto is_alpha = [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  };
  while (i < text.size()) {
    const char c = text[i];
    if (c == '\n') {
      ++line;
      column = 1;
      ++i;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      ++column;
      ++i;
      continue;
    }
    Token t;
    t.line = line;
    t.column = column;
    const bool minus_number =
        c == '-' && i + 1 < text.size() &&
        (is_digit(text[i + 1]) || text[i + 1] == '.');
    if (is_digit(c) || c == '.' || minus_number) {
      const char* start = text.c_str() + i;
      char* end = nullptr;
      t.value = std::strtod(start, &end);
      if (end == start) fail_at("malformed number", line, column);
      const std::size_t len = static_cast<std::size_t>(end - start);
      t.kind = Tok::kNumber;
      t.text = text.substr(i, len);
      i += len;
      column += static_cast<int>(len);
      out.push_back(t);
      continue;
    }
    if (is_alpha(c)) {
      std::size_t j = i;
      while (j < text.size() && (is_alpha(text[j]) || is_digit(text[j]))) ++j;
      t.kind = Tok::kIdent;
      t.text = text.substr(i, j - i);
      column += static_cast<int>(j - i);
      i = j;
      out.push_back(t);
      continue;
    }
    switch (c) {
      case '(': t.kind = Tok::kLParen; break;
      case ')': t.kind = Tok::kRParen; break;
      case '[': t.kind = Tok::kLBracket; break;
      case ']': t.kind = Tok::kRBracket; break;
      case ',': t.kind = Tok::kComma; break;
      case '&': t.kind = Tok::kAmp; break;
      case '|': t.kind = Tok::kPipe; break;
      case '\'': t.kind = Tok::kPrime; break;
      case '+': t.kind = Tok::kPlus; break;
      default:
        fail_at(std::string("unexpected character '") + c + "'", line, column);
    }
    t.text = std::string(1, c);
    ++column;
    ++i;
    out.push_back(t);
  }
  // the end marker reports the last consumed token's position, so errors on
  // truncated input cite where the text ran out
  Token end_tok;
  end_tok.kind = Tok::kEnd;
  if (!out.empty()) {
    end_tok.line = out.back().line;
    end_tok.column = out.back().column;
  }
  out.push_back(end_tok);
  return out;
}

RegionExprPtr make(RegionExpr e) {
  return std::make_shared<const RegionExpr>(std::move(e));
}

class Parser {
 public:
  explicit Parser(std::vector<Token> ts) : ts_(std::move(ts)) {}

  RegionExprPtr parse() {
    RegionExprPtr e = parse_or();
    if (peek().kind != Tok::kEnd)
      fail_at("unexpected trailing input", peek().line, peek().column);
    return e;
  }

 private:
  const Token& peek() const { return ts_[i_]; }
  Token next() { return ts_[i_++]; }

  Token expect(Tok kind, const char* what) {
    if (peek().kind != kind) fail_at(std::string("expected ") + what,
                                     peek().line, peek().column);
    return next();
  }

  double expect_number() {
    return expect(Tok::kNumber, "a number").value;
  }

  RegionExprPtr parse_or() {
    RegionExprPtr e = parse_and();
    while (peek().kind == Tok::kPipe) {
      next();
      RegionExpr j;
      j.kind = RegionExpr::Kind::kJoin;
      j.lhs = e;
      j.rhs = parse_and();
      e = make(std::move(j));
    }
    return e;
  }

  RegionExprPtr parse_and() {
    RegionExprPtr e = parse_postfix();
    while (peek().kind == Tok::kAmp) {
      next();
      RegionExpr m;
      m.kind = RegionExpr::Kind::kMeet;
      m.lhs = e;
      m.rhs = parse_postfix();
      e = make(std::move(m));
    }
    return e;
  }

  RegionExprPtr parse_postfix() {
    RegionExprPtr e = parse_atom();
    for (;;) {
      if (peek().kind == Tok::kPrime) {
        next();
        RegionExpr c;
        c.kind = RegionExpr::Kind::kComplement;
        c.lhs = e;
        e = make(std::move(c));
      } else if (peek().kind == Tok::kPlus) {
        next();
        expect(Tok::kLParen, "'('");
        RegionExpr t;
        t.kind = RegionExpr::Kind::kTranslate;
        t.a = expect_number();
        expect(Tok::kComma, "','");
        t.b = expect_number();
        expect(Tok::kRParen, "')'");
        t.lhs = e;
        e = make(std::move(t));
      } else if (peek().kind == Tok::kIdent && peek().text == "boost") {
        next();
        expect(Tok::kLParen, "'('");
        RegionExpr bst;
        bst.kind = RegionExpr::Kind::kBoost;
        bst.a = expect_number();
        expect(Tok::kRParen, "')'");
        bst.lhs = e;
        e = make(std::move(bst));
      } else {
        break;
      }
    }
    return e;
  }

  RegionExprPtr parse_atom() {
    const Token& t = peek();
    if (t.kind == Tok::kLParen) {
      next();
      RegionExprPtr e = parse_or();
      expect(Tok::kRParen, "')'");
      return e;
    }
    if (t.kind == Tok::kIdent) {
      if (t.text == "W") {
        next();
        RegionExpr e;
        e.kind = RegionExpr::Kind::kWedge;
        return make(std::move(e));
      }
      if (t.text == "full" || t.text == "empty") {
        RegionExpr e;
        e.kind = t.text == "full" ? RegionExpr::Kind::kFull
                                  : RegionExpr::Kind::kEmpty;
        next();
        return make(std::move(e));
      }
      if (t.text == "c") {
        next();
        expect(Tok::kLParen, "'('");
        expect(Tok::kLBracket, "'['");
        RegionExpr e;
        e.kind = RegionExpr::Kind::kDoubleCone;
        const Token at = peek();
        e.a = expect_number();
        expect(Tok::kComma, "','");
        e.b = expect_number();
        if (!(e.a <= e.b))
          fail_at("interval [a,b] needs a <= b", at.line, at.column);
        expect(Tok::kRBracket, "']'");
        expect(Tok::kRParen, "')'");
        return make(std::move(e));
      }
      if (t.text == "point") {
        next();
        expect(Tok::kLParen, "'('");
        RegionExpr e;
        e.kind = RegionExpr::Kind::kPoint;
        e.a = expect_number();
        expect(Tok::kComma, "','");
        e.b = expect_number();
        expect(Tok::kRParen, "')'");
        return make(std::move(e));
      }
      throw ParseError("unbound literal '" + t.text + "' at line " +
                           std::to_string(t.line) + ", column " +
                           std::to_string(t.column),
                       t.line, t.column);
    }
    fail_at("expected a region literal", t.line, t.column);
  }

  std::vector<Token> ts_;
  std::size_t i_ = 0;
};

int precedence(RegionExpr::Kind k) {
  switch (k) {
    case RegionExpr::Kind::kJoin: return 0;
    case RegionExpr::Kind::kMeet: return 1;
    case RegionExpr::Kind::kTranslate:
    case RegionExpr::Kind::kBoost: return 2;
    case RegionExpr::Kind::kComplement: return 3;
    default: return 4;
  }
}

std::string print_child(const RegionExpr& child, int parent_prec,
                        bool parenthesize_equal) {
  std::string s = print_region(child);
  const int p = precedence(child.kind);
  if (p < parent_prec || (parenthesize_equal && p == parent_prec))
    return "(" + s + ")";
  return s;
}

}  // namespace

ParseError::ParseError(const std::string& message, int line, int column)
    : std::runtime_error(message), line_(line), column_(column) {}

RegionExprPtr parse_region(const std::string& text) {
  return Parser(tokenize(text)).parse();
}

std::string print_region(const RegionExpr& e) {
  using K = RegionExpr::Kind;
  switch (e.kind) {
    case K::kDoubleCone:
      return "c([" + format_double(e.a) + "," + format_double(e.b) + "])";
    case K::kWedge:
      return "W";
    case K::kPoint:
      return "point(" + format_double(e.a) + "," + format_double(e.b) + ")";
    case K::kFull:
      return "full";
    case K::kEmpty:
      return "empty";
    case K::kComplement:
      return print_child(*e.lhs, 3, false) + "'";
    case K::kTranslate:
      return print_child(*e.lhs, 2, false) + " + (" + format_double(e.a) +
             "," + format_double(e.b) + ")";
    case K::kBoost:
      return print_child(*e.lhs, 2, false) + " boost(" + format_double(e.a) +
             ")";
    case K::kMeet:
      return print_child(*e.lhs, 1, false) + " & " +
             print_child(*e.rhs, 1, true);
    case K::kJoin:
      return print_child(*e.lhs, 0, false) + " | " +
             print_child(*e.rhs, 0, true);
  }
  return {};
}

CausalRegion evaluate_region(const RegionExpr& e) {
  using K = RegionExpr::Kind;
  switch (e.kind) {
    case K::kDoubleCone:
      return spatial_completion({SpatialInterval{e.a, e.b}});
    case K::kWedge:
      return CausalRegion::box(-kInf, 0, 0, kInf);
    case K::kPoint:
      return CausalRegion::point(e.a, e.b);
    case K::kFull:
      return CausalRegion::full();
    case K::kEmpty:
      return CausalRegion::empty();
    case K::kComplement:
      return causal_complement(evaluate_region(*e.lhs));
    case K::kMeet:
      return region_meet(evaluate_region(*e.lhs), evaluate_region(*e.rhs));
    case K::kJoin:
      return region_join(evaluate_region(*e.lhs), evaluate_region(*e.rhs));
    case K::kTranslate: {
      PoincareElement1d g;
      g.a0 = e.a;
      g.a1 = e.b;
      return poincare_apply(g, evaluate_region(*e.lhs));
    }
    case K::kBoost: {
      PoincareElement1d g;
      g.rapidity = e.a;
      return poincare_apply(g, evaluate_region(*e.lhs));
    }
  }
  return CausalRegion::empty();
}

}  // namespace modloc
