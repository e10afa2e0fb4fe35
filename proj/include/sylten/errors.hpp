#pragma once

#include <stdexcept>
#include <string>

namespace sylten {

/// Mismatched tensor/matrix dimensions. The message names the offending
/// mode or operand.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Invalid solver or benchmark configuration (zero denominators,
/// missing reference solution, bad parameter values).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A Krylov recurrence pivot vanished and the iteration cannot continue.
enum class BreakdownKind {
  None,
  DegenerateSeed,    // the operator annihilates the residual direction
  LanczosPivot,      // <W_bar, L(V_bar)> vanished (may be a lucky breakdown)
  TridiagonalPivot,  // near-zero pivot in the LU of the projected matrix
  InnerProductZero,  // a BiCOR coefficient denominator vanished
  RhoZero,           // CORS rho vanished; restart from a different X0
};

const char* to_string(BreakdownKind kind);

class BreakdownError : public std::runtime_error {
 public:
  BreakdownError(BreakdownKind kind, int step, const std::string& what)
      : std::runtime_error(what), kind_(kind), step_(step) {}

  BreakdownKind kind() const { return kind_; }
  int step() const { return step_; }

 private:
  BreakdownKind kind_;
  int step_;
};

/// A fitted preconditioner factor is numerically singular.
class SingularPreconditionerError : public std::runtime_error {
 public:
  SingularPreconditionerError(int factor_index, const std::string& what)
      : std::runtime_error(what), factor_index_(factor_index) {}

  int factor_index() const { return factor_index_; }

 private:
  int factor_index_;
};

/// Refusal to materialize a dense matrix above the configured size guard.
class SizeGuardError : public std::length_error {
 public:
  using std::length_error::length_error;
};

}  // namespace sylten
