#pragma once

#include <memory>
#include <stdexcept>
#include <string>

#include <modloc/causal1d.hpp>

namespace modloc {

// Surface syntax for causal regions. Literals: c([a,b]), W, point(x0,x1),
// full, empty. Operators, loosest to tightest: `|` (join), `&` (meet), then
// one postfix tier holding `'` (complement), `+ (x0,x1)` (translate) and
// `boost(t)`, applied in reading order. Parentheses group. print_region
// emits the canonical surface form; parse(print(e)) reproduces e node for
// node.
struct RegionExpr;
using RegionExprPtr = std::shared_ptr<const RegionExpr>;

struct RegionExpr {
  enum class Kind {
    kDoubleCone,   // c([a,b])       payload a, b
    kWedge,        // W
    kPoint,        // point(x0,x1)   payload a = x0, b = x1
    kFull,         // full
    kEmpty,        // empty
    kComplement,   // lhs'
    kMeet,         // lhs & rhs
    kJoin,         // lhs | rhs
    kTranslate,    // lhs + (x0,x1)  payload a = x0, b = x1
    kBoost,        // lhs boost(t)   payload a = t
  };
  Kind kind;
  double a = 0, b = 0;
  RegionExprPtr lhs, rhs;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, int line, int column);
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

RegionExprPtr parse_region(const std::string& text);
std::string print_region(const RegionExpr& e);
CausalRegion evaluate_region(const RegionExpr& e);

}  // namespace modloc
