#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qcurve {

enum class ErrorKind {
  OutOfRange,
  NotPrime,
  DeltaIsSquare,
  DivisionByZero,
  NotInvertible,
  ContextMismatch,
  SingularCurve,
  NotOnCurve,
  OracleGuard,
  InvalidKernel,
  NonRationalTwist,
  DegenerateParameter,
  WrongResidueClass,
  DeltaMismatch,
  TraceInconsistent,
  SignUndetermined,
  Supersingular,
  GroupStructureMismatch,
  NotReduced,
  DependentVectors,
  InvalidPoint,
  EdwardsPole,
  NoMatchingTwist,
  NotSubfieldCurve,
};

inline std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::OutOfRange: return "out_of_range";
    case ErrorKind::NotPrime: return "not_prime";
    case ErrorKind::DeltaIsSquare: return "delta_is_square";
    case ErrorKind::DivisionByZero: return "division_by_zero";
    case ErrorKind::NotInvertible: return "not_invertible";
    case ErrorKind::ContextMismatch: return "context_mismatch";
    case ErrorKind::SingularCurve: return "singular_curve";
    case ErrorKind::NotOnCurve: return "not_on_curve";
    case ErrorKind::OracleGuard: return "oracle_guard";
    case ErrorKind::InvalidKernel: return "invalid_kernel";
    case ErrorKind::NonRationalTwist: return "non_rational_twist";
    case ErrorKind::DegenerateParameter: return "degenerate_parameter";
    case ErrorKind::WrongResidueClass: return "wrong_residue_class";
    case ErrorKind::DeltaMismatch: return "delta_mismatch";
    case ErrorKind::TraceInconsistent: return "trace_inconsistent";
    case ErrorKind::SignUndetermined: return "sign_undetermined";
    case ErrorKind::Supersingular: return "supersingular";
    case ErrorKind::GroupStructureMismatch: return "group_structure_mismatch";
    case ErrorKind::NotReduced: return "not_reduced";
    case ErrorKind::DependentVectors: return "dependent_vectors";
    case ErrorKind::InvalidPoint: return "invalid_point";
    case ErrorKind::EdwardsPole: return "edwards_pole";
    case ErrorKind::NoMatchingTwist: return "no_matching_twist";
    case ErrorKind::NotSubfieldCurve: return "not_subfield_curve";
  }
  return "unknown";
}

/// Failure of a mathematical precondition. Carries a machine-readable kind.
class DomainError : public std::runtime_error {
 public:
  DomainError(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Malformed user input (bad literal, unknown option value).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qcurve
