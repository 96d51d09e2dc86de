#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>

#include "geoconn/manifold.hpp"

// Arithmetic expressions over coordinates x1..xn, used for metric components
// in model config files and scalar fields on the command line.
//
// Grammar (whitespace insensitive):
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?          right-associative
//   primary := number | 'pi' | 'e' | x<k> | func '(' expr ')' | '(' expr ')'
//   func    := sin cos tan sinh cosh tanh exp log sqrt abs
namespace geoconn::dsl {

enum class NodeKind { Number, Constant, Variable, Neg, Add, Sub, Mul, Div, Pow, Call };

enum class Func { Sin, Cos, Tan, Sinh, Cosh, Tanh, Exp, Log, Sqrt, Abs };

const char* to_string(Func f) noexcept;

struct Node {
  NodeKind kind = NodeKind::Number;
  double value = 0.0;      // Number, Constant
  std::string name;        // Constant
  int variable = 0;        // Variable, 1-based
  Func func = Func::Sin;   // Call
  std::shared_ptr<const Node> lhs;  // unary operand / call argument / left
  std::shared_ptr<const Node> rhs;
  std::size_t position = 0;  // byte offset in the source
};

using NodePtr = std::shared_ptr<const Node>;

// Immutable parsed expression; cheap to copy and safe to share.
class Expr {
 public:
  Expr() = default;
  explicit Expr(NodePtr root) : root_(std::move(root)) {}

  const Node& root() const { return *root_; }
  bool empty() const noexcept { return !root_; }

  // Throws EvalError on domain faults (log of x <= 0, sqrt of x < 0, division
  // by zero, negative base with non-integer exponent, non-finite results).
  double eval(const Vec& x) const;

  // Central difference in coordinate i (0-based) with step h.
  double partial(const Vec& x, int i, double step) const;

  // Fully parenthesized form that reparses to a structurally identical tree.
  std::string to_string() const;

  // Largest variable index referenced (1-based), 0 when constant.
  int max_variable() const;

  bool structurally_equal(const Expr& other) const;

 private:
  NodePtr root_;
};

// Throws ParseError carrying the byte offset of the offending token.
Expr parse(std::string_view src, int dim);

}  // namespace geoconn::dsl
