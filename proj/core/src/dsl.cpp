#include "geoconn/dsl.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <vector>

namespace geoconn::dsl {

const char* to_string(Func f) noexcept {
  switch (f) {
    case Func::Sin: return "sin";
    case Func::Cos: return "cos";
    case Func::Tan: return "tan";
    case Func::Sinh: return "sinh";
    case Func::Cosh: return "cosh";
    case Func::Tanh: return "tanh";
    case Func::Exp: return "exp";
    case Func::Log: return "log";
    case Func::Sqrt: return "sqrt";
    case Func::Abs: return "abs";
  }
  return "?";
}

namespace {

enum class Tok { Number, Ident, Op, End };

struct Token {
  Tok kind = Tok::End;
  std::size_t pos = 0;
  std::string_view text;
  double number = 0.0;
  char op = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    Token t;
    t.pos = pos_;
    if (pos_ >= src_.size()) return t;
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        ++pos_;
      t.kind = Tok::Ident;
      t.text = src_.substr(start, pos_ - start);
      return t;
    }
    switch (c) {
      case '+': case '-': case '*': case '/': case '^': case '(': case ')': case ',':
        t.kind = Tok::Op;
        t.op = c;
        ++pos_;
        return t;
      default:
        throw ParseError(pos_, std::string("unexpected character '") + c + "'");
    }
  }

 private:
  Token number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t mantissa = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) throw ParseError(start, "malformed number");
    // exponent only when digits follow, so "2e" stays a number then 'e'
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
      if (look < src_.size() && std::isdigit(static_cast<unsigned char>(src_[look]))) {
        pos_ = look;
        digits();
      }
    }
    Token t;
    t.kind = Tok::Number;
    t.pos = start;
    t.text = src_.substr(start, pos_ - start);
    const std::string buf(t.text);
    char* end = nullptr;
    t.number = std::strtod(buf.c_str(), &end);
    if (!std::isfinite(t.number)) throw ParseError(start, "number out of range");
    return t;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

bool lookup_func(std::string_view name, Func& out) {
  static constexpr std::pair<std::string_view, Func> table[] = {
      {"sin", Func::Sin},   {"cos", Func::Cos},   {"tan", Func::Tan},   {"sinh", Func::Sinh},
      {"cosh", Func::Cosh}, {"tanh", Func::Tanh}, {"exp", Func::Exp},   {"log", Func::Log},
      {"sqrt", Func::Sqrt}, {"abs", Func::Abs}};
  for (const auto& [n, f] : table) {
    if (n == name) {
      out = f;
      return true;
    }
  }
  return false;
}

NodePtr make_binary(NodeKind kind, NodePtr a, NodePtr b, std::size_t pos) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  n->position = pos;
  return n;
}

class Parser {
 public:
  Parser(std::string_view src, int dim) : src_(src), lexer_(src), dim_(dim) { advance(); }

  NodePtr parse_all() {
    NodePtr e = expr();
    if (tok_.kind != Tok::End) {
      if (tok_.kind == Tok::Op && tok_.op == ')') throw ParseError(tok_.pos, "unbalanced ')'");
      throw ParseError(tok_.pos, "unexpected token '" + std::string(token_text()) + "'");
    }
    return e;
  }

 private:
  void advance() { tok_ = lexer_.next(); }
  bool is_op(char c) const { return tok_.kind == Tok::Op && tok_.op == c; }
  std::string_view token_text() const {
    if (tok_.kind == Tok::Op) return src_.substr(tok_.pos, 1);
    return tok_.text;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    while (is_op('+') || is_op('-')) {
      const NodeKind k = is_op('+') ? NodeKind::Add : NodeKind::Sub;
      const std::size_t pos = tok_.pos;
      advance();
      lhs = make_binary(k, lhs, term(), pos);
    }
    return lhs;
  }

  NodePtr term() {
    NodePtr lhs = unary();
    while (is_op('*') || is_op('/')) {
      const NodeKind k = is_op('*') ? NodeKind::Mul : NodeKind::Div;
      const std::size_t pos = tok_.pos;
      advance();
      lhs = make_binary(k, lhs, unary(), pos);
    }
    return lhs;
  }

  NodePtr unary() {
    if (is_op('-')) {
      const std::size_t pos = tok_.pos;
      advance();
      auto n = std::make_shared<Node>();
      n->kind = NodeKind::Neg;
      n->lhs = unary();
      n->position = pos;
      return n;
    }
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (is_op('^')) {
      const std::size_t pos = tok_.pos;
      advance();
      return make_binary(NodeKind::Pow, base, unary(), pos);
    }
    return base;
  }

  NodePtr primary() {
    const Token t = tok_;
    switch (t.kind) {
      case Tok::End:
        throw ParseError(t.pos, "unexpected end of input");
      case Tok::Number: {
        advance();
        auto n = std::make_shared<Node>();
        n->kind = NodeKind::Number;
        n->value = t.number;
        n->position = t.pos;
        return n;
      }
      case Tok::Op: {
        if (t.op == '(') {
          advance();
          NodePtr inner = expr();
          if (!is_op(')')) throw ParseError(tok_.pos, "expected ')'");
          advance();
          return inner;
        }
        if (t.op == ')') throw ParseError(t.pos, "unbalanced ')'");
        throw ParseError(t.pos, std::string("unexpected '") + t.op + "'");
      }
      case Tok::Ident:
        return identifier(t);
    }
    throw ParseError(t.pos, "unexpected token");
  }

  NodePtr identifier(const Token& t) {
    advance();
    if (t.text == "pi" || t.text == "e") {
      auto n = std::make_shared<Node>();
      n->kind = NodeKind::Constant;
      n->name = std::string(t.text);
      n->value = t.text == "pi" ? std::numbers::pi : std::numbers::e;
      n->position = t.pos;
      return n;
    }
    if (t.text.size() > 1 && t.text[0] == 'x' &&
        t.text.find_first_not_of("0123456789", 1) == std::string_view::npos) {
      int index = 0;
      const auto [ptr, ec] = std::from_chars(t.text.data() + 1, t.text.data() + t.text.size(), index);
      if (ec != std::errc() || ptr != t.text.data() + t.text.size())
        throw ParseError(t.pos, "variable index exceeds dimension");
      if (index < 1) throw ParseError(t.pos, "variable index must be at least 1");
      if (index > dim_) throw ParseError(t.pos, "variable index exceeds dimension");
      auto n = std::make_shared<Node>();
      n->kind = NodeKind::Variable;
      n->variable = index;
      n->position = t.pos;
      return n;
    }
    Func f;
    if (!lookup_func(t.text, f))
      throw ParseError(t.pos, "unknown identifier '" + std::string(t.text) + "'");
    if (!is_op('(')) throw ParseError(tok_.pos, "expected '(' after " + std::string(t.text));
    advance();
    std::vector<NodePtr> args;
    if (!is_op(')')) {
      args.push_back(expr());
      while (is_op(',')) {
        advance();
        args.push_back(expr());
      }
    }
    if (!is_op(')')) throw ParseError(tok_.pos, "expected ')'");
    advance();
    if (args.size() != 1)
      throw ParseError(t.pos, "arity mismatch: " + std::string(t.text) + " takes 1 argument, got " +
                                  std::to_string(args.size()));
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Call;
    n->func = f;
    n->lhs = std::move(args.front());
    n->position = t.pos;
    return n;
  }

  std::string_view src_;
  Lexer lexer_;
  int dim_;
  Token tok_;
};

std::string describe(const Node& n) {
  std::string what;
  switch (n.kind) {
    case NodeKind::Call: what = to_string(n.func); break;
    case NodeKind::Pow: what = "'^'"; break;
    case NodeKind::Div: what = "'/'"; break;
    default: what = "expression"; break;
  }
  return what + " at offset " + std::to_string(n.position);
}

double integer_power(double base, long long k) {
  const bool invert = k < 0;
  unsigned long long e = static_cast<unsigned long long>(invert ? -k : k);
  double result = 1.0, b = base;
  while (e) {
    if (e & 1ULL) result *= b;
    b *= b;
    e >>= 1ULL;
  }
  return invert ? 1.0 / result : result;
}

double eval_node(const Node& n, const Vec& x) {
  auto fail = [&](const char* why) -> double { throw EvalError(describe(n), x, why); };
  double r = 0.0;
  switch (n.kind) {
    case NodeKind::Number:
    case NodeKind::Constant:
      return n.value;
    case NodeKind::Variable:
      if (n.variable > x.size()) fail("coordinate vector too short");
      return x[n.variable - 1];
    case NodeKind::Neg:
      return -eval_node(*n.lhs, x);
    case NodeKind::Add: r = eval_node(*n.lhs, x) + eval_node(*n.rhs, x); break;
    case NodeKind::Sub: r = eval_node(*n.lhs, x) - eval_node(*n.rhs, x); break;
    case NodeKind::Mul: r = eval_node(*n.lhs, x) * eval_node(*n.rhs, x); break;
    case NodeKind::Div: {
      const double a = eval_node(*n.lhs, x), b = eval_node(*n.rhs, x);
      if (b == 0.0) fail("division by zero");
      r = a / b;
      break;
    }
    case NodeKind::Pow: {
      const double a = eval_node(*n.lhs, x), y = eval_node(*n.rhs, x);
      if (y == std::trunc(y) && std::abs(y) <= 1e9) {
        if (a == 0.0 && y < 0) fail("division by zero");
        r = integer_power(a, static_cast<long long>(y));
      } else if (a > 0) {
        r = std::pow(a, y);
      } else if (a == 0.0 && y > 0) {
        r = 0.0;
      } else {
        fail("negative base with non-integer exponent");
      }
      break;
    }
    case NodeKind::Call: {
      const double a = eval_node(*n.lhs, x);
      switch (n.func) {
        case Func::Sin: r = std::sin(a); break;
        case Func::Cos: r = std::cos(a); break;
        case Func::Tan: r = std::tan(a); break;
        case Func::Sinh: r = std::sinh(a); break;
        case Func::Cosh: r = std::cosh(a); break;
        case Func::Tanh: r = std::tanh(a); break;
        case Func::Exp: r = std::exp(a); break;
        case Func::Log:
          if (!(a > 0)) fail("logarithm of a non-positive number");
          r = std::log(a);
          break;
        case Func::Sqrt:
          if (a < 0) fail("square root of a negative number");
          r = std::sqrt(a);
          break;
        case Func::Abs: r = std::abs(a); break;
      }
      break;
    }
  }
  if (!std::isfinite(r)) fail("non-finite result");
  return r;
}

void print_node(const Node& n, std::string& out) {
  switch (n.kind) {
    case NodeKind::Number: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", n.value);
      out += buf;
      return;
    }
    case NodeKind::Constant: out += n.name; return;
    case NodeKind::Variable: out += 'x' + std::to_string(n.variable); return;
    case NodeKind::Neg:
      out += "(-";
      print_node(*n.lhs, out);
      out += ')';
      return;
    case NodeKind::Call:
      out += to_string(n.func);
      out += '(';
      print_node(*n.lhs, out);
      out += ')';
      return;
    default: break;
  }
  char op = '+';
  switch (n.kind) {
    case NodeKind::Sub: op = '-'; break;
    case NodeKind::Mul: op = '*'; break;
    case NodeKind::Div: op = '/'; break;
    case NodeKind::Pow: op = '^'; break;
    default: break;
  }
  out += '(';
  print_node(*n.lhs, out);
  out += op;
  print_node(*n.rhs, out);
  out += ')';
}

int max_var(const Node& n) {
  int m = n.kind == NodeKind::Variable ? n.variable : 0;
  if (n.lhs) m = std::max(m, max_var(*n.lhs));
  if (n.rhs) m = std::max(m, max_var(*n.rhs));
  return m;
}

bool same(const Node& a, const Node& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case NodeKind::Number: return a.value == b.value;
    case NodeKind::Constant: return a.name == b.name;
    case NodeKind::Variable: return a.variable == b.variable;
    case NodeKind::Call: return a.func == b.func && same(*a.lhs, *b.lhs);
    case NodeKind::Neg: return same(*a.lhs, *b.lhs);
    default: return same(*a.lhs, *b.lhs) && same(*a.rhs, *b.rhs);
  }
}

}  // namespace

double Expr::eval(const Vec& x) const { return eval_node(*root_, x); }

double Expr::partial(const Vec& x, int i, double step) const {
  Vec xp = x, xm = x;
  xp[i] += step;
  xm[i] -= step;
  return (eval(xp) - eval(xm)) / (xp[i] - xm[i]);
}

std::string Expr::to_string() const {
  std::string out;
  print_node(*root_, out);
  return out;
}

int Expr::max_variable() const { return max_var(*root_); }

bool Expr::structurally_equal(const Expr& other) const { return same(*root_, *other.root_); }

Expr parse(std::string_view src, int dim) { return Expr(Parser(src, dim).parse_all()); }

}  // namespace geoconn::dsl
