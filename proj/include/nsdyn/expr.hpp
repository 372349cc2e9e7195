#pragma once

// Scalar arithmetic expressions: parsing, printing, evaluation and
// finite-difference derivatives.
//
// Grammar (lowest to highest precedence):
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' exponent)?      right-associative
//   exponent:= '-' exponent | power
//   primary := number | identifier | identifier '(' expr ')' | '(' expr ')'
//
// So "-x^2" is -(x^2) and "2^3^2" is 2^(3^2).

#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nsdyn/common.hpp"

namespace nsdyn::expr {

enum class Op { Number, Variable, Negate, Add, Sub, Mul, Div, Pow, Call };
enum class Func { Sqrt, Sin, Cos, Tan, Exp, Ln, Abs };

struct Node {
  Op op = Op::Number;
  double value = 0.0;   // Number
  std::string name;     // Variable
  Func func = Func::Sqrt;
  std::shared_ptr<const Node> lhs;  // operand for unary ops and calls
  std::shared_ptr<const Node> rhs;
};

/// Immutable expression tree. Copies share structure.
class Expr {
 public:
  Expr() = default;
  explicit Expr(std::shared_ptr<const Node> root) : root_(std::move(root)) {}

  const Node& root() const { return *root_; }
  bool empty() const { return !root_; }

  /// True when the tree is exactly the single variable `name`.
  bool is_variable(std::string_view name) const;

 private:
  std::shared_ptr<const Node> root_;
};

using Bindings = std::map<std::string, double, std::less<>>;

Expr parse(std::string_view text);
std::string to_string(const Expr& e);
std::string to_string(const Node& n);
bool structurally_equal(const Expr& a, const Expr& b);
std::set<std::string> variables(const Expr& e);

double eval(const Expr& e, const Bindings& b);

/// Central difference (f(x+s) - f(x-s)) / 2s with s = scale * max(1, |x|).
double diff_fd(const Expr& e, std::string_view var, const Bindings& b,
               double scale = 1e-6);

/// Expression compiled against a fixed list of variable slots, evaluated on a
/// span of values in slot order. Same semantics and errors as eval().
class Compiled {
 public:
  Compiled() = default;
  Compiled(const Expr& e, const std::vector<std::string>& slots);

  double operator()(std::span<const double> values) const;
  const Expr& source() const { return source_; }

 private:
  struct Instr {
    Op op;
    double value;
    std::size_t slot;
    Func func;
    const Node* node;
  };
  void emit(const Node& n, const std::vector<std::string>& slots,
            std::size_t depth);

  Expr source_;
  std::vector<Instr> code_;
  std::size_t max_depth_ = 0;
};

}  // namespace nsdyn::expr
