#include "nsdyn/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace nsdyn::expr {
namespace {

using NodePtr = std::shared_ptr<const Node>;

struct FuncName {
  const char* name;
  Func func;
};

constexpr FuncName kFunctions[] = {
    {"sqrt", Func::Sqrt}, {"sin", Func::Sin}, {"cos", Func::Cos},
    {"tan", Func::Tan},   {"exp", Func::Exp}, {"ln", Func::Ln},
    {"abs", Func::Abs},
};

const char* func_name(Func f) {
  for (const auto& fn : kFunctions)
    if (fn.func == f) return fn.name;
  return "?";
}

NodePtr make_number(double v) {
  auto n = std::make_shared<Node>();
  n->op = Op::Number;
  n->value = v;
  return n;
}

NodePtr make_variable(std::string name) {
  auto n = std::make_shared<Node>();
  n->op = Op::Variable;
  n->name = std::move(name);
  return n;
}

NodePtr make_unary(Op op, NodePtr a) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(a);
  return n;
}

NodePtr make_call(Func f, NodePtr a) {
  auto n = std::make_shared<Node>();
  n->op = Op::Call;
  n->func = f;
  n->lhs = std::move(a);
  return n;
}

NodePtr make_binary(Op op, NodePtr a, NodePtr b) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse_all() {
    skip_ws();
    if (pos_ >= text_.size()) fail("expression");
    NodePtr e = parse_expr();
    skip_ws();
    if (pos_ < text_.size()) fail("operator or end of input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& expected) const {
    std::string found = pos_ < text_.size()
                            ? "'" + std::string(1, text_[pos_]) + "'"
                            : std::string("end of input");
    throw ParseError(pos_, expected,
                     "syntax error at offset " + std::to_string(pos_) +
                         ": expected " + expected + ", found " + found);
  }

  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    for (;;) {
      if (accept('+'))
        lhs = make_binary(Op::Add, lhs, parse_term());
      else if (accept('-'))
        lhs = make_binary(Op::Sub, lhs, parse_term());
      else
        return lhs;
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_unary();
    for (;;) {
      if (accept('*'))
        lhs = make_binary(Op::Mul, lhs, parse_unary());
      else if (accept('/'))
        lhs = make_binary(Op::Div, lhs, parse_unary());
      else
        return lhs;
    }
  }

  NodePtr parse_unary() {
    if (accept('-')) return make_unary(Op::Negate, parse_unary());
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_primary();
    if (accept('^')) return make_binary(Op::Pow, base, parse_exponent());
    return base;
  }

  NodePtr parse_exponent() {
    if (accept('-')) return make_unary(Op::Negate, parse_exponent());
    return parse_power();
  }

  NodePtr parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("operand");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = parse_expr();
      if (!accept(')')) fail("')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
      return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_identifier();
    fail("operand");
  }

  NodePtr parse_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t mantissa = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) {
      pos_ = start;
      fail("digit");
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-'))
        ++pos_;
      if (digits() == 0) fail("exponent digits");
    }
    const std::string literal(text_.substr(start, pos_ - start));
    const double v = std::strtod(literal.c_str(), nullptr);
    if (!std::isfinite(v)) {
      pos_ = start;
      fail("finite number");
    }
    return make_number(v);
  }

  NodePtr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '_'))
      ++pos_;
    std::string name(text_.substr(start, pos_ - start));
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '(') {
      const FuncName* found = nullptr;
      for (const auto& fn : kFunctions)
        if (name == fn.name) found = &fn;
      if (!found)
        throw Error(ErrorKind::UnknownFunction,
                    "unknown function '" + name + "' at offset " +
                        std::to_string(start));
      ++pos_;
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == ')') fail("function argument");
      NodePtr arg = parse_expr();
      if (!accept(')')) fail("')'");
      return make_call(found->func, arg);
    }
    return make_variable(std::move(name));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

[[noreturn]] void domain_error(const Node& n, const std::string& what) {
  throw Error(ErrorKind::MathDomain,
              what + " in '" + to_string(n) + "'");
}

double apply_binary(const Node& n, double a, double b) {
  switch (n.op) {
    case Op::Add: return a + b;
    case Op::Sub: return a - b;
    case Op::Mul: return a * b;
    case Op::Div:
      if (b == 0.0) domain_error(n, "division by zero");
      return a / b;
    case Op::Pow:
      if (a < 0.0 && std::floor(b) != b)
        domain_error(n, "negative base with non-integer exponent");
      if (a == 0.0 && b < 0.0) domain_error(n, "zero to a negative power");
      return std::pow(a, b);
    default: return 0.0;
  }
}

double apply_call(const Node& n, double a) {
  switch (n.func) {
    case Func::Sqrt:
      if (a < 0.0) domain_error(n, "square root of negative value");
      return std::sqrt(a);
    case Func::Sin: return std::sin(a);
    case Func::Cos: return std::cos(a);
    case Func::Tan: return std::tan(a);
    case Func::Exp: return std::exp(a);
    case Func::Ln:
      if (a <= 0.0) domain_error(n, "logarithm of non-positive value");
      return std::log(a);
    case Func::Abs: return std::fabs(a);
  }
  return 0.0;
}

double checked(const Node& n, double v) {
  if (!std::isfinite(v)) domain_error(n, "non-finite result");
  return v;
}

double eval_node(const Node& n, const Bindings& b) {
  switch (n.op) {
    case Op::Number: return n.value;
    case Op::Variable: {
      auto it = b.find(n.name);
      if (it == b.end())
        throw Error(ErrorKind::UnboundVariable,
                    "unbound variable '" + n.name + "'");
      return it->second;
    }
    case Op::Negate: return -eval_node(*n.lhs, b);
    case Op::Call: return checked(n, apply_call(n, eval_node(*n.lhs, b)));
    default: {
      const double a = eval_node(*n.lhs, b);
      const double c = eval_node(*n.rhs, b);
      return checked(n, apply_binary(n, a, c));
    }
  }
}

bool equal_nodes(const Node& a, const Node& b) {
  if (a.op != b.op) return false;
  switch (a.op) {
    case Op::Number: return a.value == b.value;
    case Op::Variable: return a.name == b.name;
    case Op::Negate: return equal_nodes(*a.lhs, *b.lhs);
    case Op::Call: return a.func == b.func && equal_nodes(*a.lhs, *b.lhs);
    default: return equal_nodes(*a.lhs, *b.lhs) && equal_nodes(*a.rhs, *b.rhs);
  }
}

void collect(const Node& n, std::set<std::string>& out) {
  if (n.op == Op::Variable) out.insert(n.name);
  if (n.lhs) collect(*n.lhs, out);
  if (n.rhs) collect(*n.rhs, out);
}

char op_char(Op op) {
  switch (op) {
    case Op::Add: return '+';
    case Op::Sub: return '-';
    case Op::Mul: return '*';
    case Op::Div: return '/';
    case Op::Pow: return '^';
    default: return '?';
  }
}

}  // namespace

bool Expr::is_variable(std::string_view name) const {
  return root_ && root_->op == Op::Variable && root_->name == name;
}

Expr parse(std::string_view text) { return Expr(Parser(text).parse_all()); }

std::string to_string(const Node& n) {
  switch (n.op) {
    case Op::Number: return format_number(n.value);
    case Op::Variable: return n.name;
    case Op::Negate: return "(-" + to_string(*n.lhs) + ")";
    case Op::Call:
      return std::string(func_name(n.func)) + "(" + to_string(*n.lhs) + ")";
    default:
      return "(" + to_string(*n.lhs) + " " + op_char(n.op) + " " +
             to_string(*n.rhs) + ")";
  }
}

std::string to_string(const Expr& e) {
  return e.empty() ? std::string() : to_string(e.root());
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.empty() || b.empty()) return a.empty() == b.empty();
  return equal_nodes(a.root(), b.root());
}

std::set<std::string> variables(const Expr& e) {
  std::set<std::string> out;
  if (!e.empty()) collect(e.root(), out);
  return out;
}

double eval(const Expr& e, const Bindings& b) { return eval_node(e.root(), b); }

double diff_fd(const Expr& e, std::string_view var, const Bindings& b,
               double scale) {
  if (!(scale > 0.0))
    throw Error(ErrorKind::InvalidArgument, "finite-difference scale must be > 0");
  auto it = b.find(var);
  if (it == b.end())
    throw Error(ErrorKind::UnboundVariable,
                "unbound variable '" + std::string(var) + "'");
  const double x = it->second;
  const double s = fd_step(x, scale);
  Bindings shifted = b;
  shifted[std::string(var)] = x + s;
  const double fp = eval(e, shifted);
  shifted[std::string(var)] = x - s;
  const double fm = eval(e, shifted);
  return (fp - fm) / (2.0 * s);
}

Compiled::Compiled(const Expr& e, const std::vector<std::string>& slots)
    : source_(e) {
  emit(e.root(), slots, 1);
}

void Compiled::emit(const Node& n, const std::vector<std::string>& slots,
                    std::size_t depth) {
  max_depth_ = std::max(max_depth_, depth);
  switch (n.op) {
    case Op::Number:
      code_.push_back({Op::Number, n.value, 0, Func::Sqrt, &n});
      return;
    case Op::Variable: {
      for (std::size_t i = 0; i < slots.size(); ++i) {
        if (slots[i] == n.name) {
          code_.push_back({Op::Variable, 0.0, i, Func::Sqrt, &n});
          return;
        }
      }
      throw Error(ErrorKind::UnboundVariable,
                  "unbound variable '" + n.name + "'");
    }
    case Op::Negate:
    case Op::Call:
      emit(*n.lhs, slots, depth);
      code_.push_back({n.op, 0.0, 0, n.func, &n});
      return;
    default:
      emit(*n.lhs, slots, depth);
      emit(*n.rhs, slots, depth + 1);
      code_.push_back({n.op, 0.0, 0, n.func, &n});
      return;
  }
}

double Compiled::operator()(std::span<const double> values) const {
  constexpr std::size_t kInline = 32;
  double inline_stack[kInline] = {};
  std::vector<double> heap;
  double* stack = inline_stack;
  if (max_depth_ > kInline) {
    heap.resize(max_depth_);
    stack = heap.data();
  }
  std::size_t top = 0;
  for (const Instr& in : code_) {
    switch (in.op) {
      case Op::Number: stack[top++] = in.value; break;
      case Op::Variable: stack[top++] = values[in.slot]; break;
      case Op::Negate: stack[top - 1] = -stack[top - 1]; break;
      case Op::Call:
        stack[top - 1] = checked(*in.node, apply_call(*in.node, stack[top - 1]));
        break;
      default: {
        const double b = stack[--top];
        stack[top - 1] = checked(*in.node, apply_binary(*in.node, stack[top - 1], b));
      }
    }
  }
  return stack[0];
}

}  // namespace nsdyn::expr
