#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace nsdyn {

using Vec = std::vector<double>;
using VectorFn = std::function<Vec(std::span<const double>)>;
using ScalarFn = std::function<double(std::span<const double>)>;

enum class ErrorKind {
  Syntax,
  UnknownFunction,
  UnboundVariable,
  MathDomain,
  NotOnSigma,
  DegenerateGradient,
  NotSliding,
  DegenerateDenominator,
  InvalidArgument,
  NoConvergence,
  SingularJacobian,
  StepUnderflow,
  MaxSteps,
  NonHyperbolic,
  AssumptionViolated,
  NoReturn,
  Config,
};

const char* to_string(ErrorKind kind);

/// Domain error raised by every module. The kind lets callers branch without
/// parsing the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Syntax error with a byte offset into the parsed text.
class ParseError : public Error {
 public:
  ParseError(std::size_t offset, std::string expected, const std::string& what)
      : Error(ErrorKind::Syntax, what),
        offset_(offset),
        expected_(std::move(expected)) {}
  std::size_t offset() const noexcept { return offset_; }
  const std::string& expected() const noexcept { return expected_; }

 private:
  std::size_t offset_;
  std::string expected_;
};

// Small dense vector helpers used across modules.
double norm2(std::span<const double> v);
double norm_inf(std::span<const double> v);
double dot(std::span<const double> a, std::span<const double> b);
Vec axpy(double a, std::span<const double> x, std::span<const double> y);  // a*x + y
Vec sub(std::span<const double> a, std::span<const double> b);
double dist2(std::span<const double> a, std::span<const double> b);

/// Central-difference step used throughout: scale * max(1, |x|).
inline double fd_step(double x, double scale = 1e-6) {
  const double ax = x < 0 ? -x : x;
  return scale * (ax > 1.0 ? ax : 1.0);
}

/// Jacobian of f at x by central differences (row i = d f_i).
std::vector<Vec> jacobian_fd(const VectorFn& f, std::span<const double> x,
                             double scale = 1e-6);

struct ScalarRoot {
  double x = 0.0;
  double slope = 0.0;   // central difference at the root
  bool touch = false;   // even-multiplicity root found without a sign change
};

/// All roots of f on [a, b]: sign changes over n_sub equal subintervals are
/// bisected to xtol and Newton-polished; exact node zeros are kept, and local
/// minima of |f| that refine to |f| <= 1e-10 are reported as touching roots.
std::vector<ScalarRoot> scan_roots(const std::function<double(double)>& f,
                                   double a, double b, int n_sub = 400,
                                   double xtol = 1e-12);

}  // namespace nsdyn
