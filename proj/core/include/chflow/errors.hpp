#pragma once

#include <stdexcept>
#include <string>

namespace chflow {

enum class ErrorKind {
  Config,
  CornerIncompatibility,
  DegenerateFlow,
  DiffeoFailure,
  InversionFailure,
  InnerDivergence,
  OuterDivergence,
  PressureDomain,
  SingularSystem,
};

// Typed failure carrying the error class the CLI maps to an exit code.
class SolverError : public std::runtime_error {
 public:
  SolverError(ErrorKind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

  static const char* name(ErrorKind k) {
    switch (k) {
      case ErrorKind::Config: return "Config";
      case ErrorKind::CornerIncompatibility: return "CornerIncompatibility";
      case ErrorKind::DegenerateFlow: return "DegenerateFlow";
      case ErrorKind::DiffeoFailure: return "DiffeoFailure";
      case ErrorKind::InversionFailure: return "InversionFailure";
      case ErrorKind::InnerDivergence: return "InnerDivergence";
      case ErrorKind::OuterDivergence: return "OuterDivergence";
      case ErrorKind::PressureDomain: return "PressureDomain";
      case ErrorKind::SingularSystem: return "SingularSystem";
    }
    return "Unknown";
  }

  // Exit-code map used by the CLI. InversionFailure implies an upstream
  // diffeomorphism failure and shares its code.
  static int exit_code(ErrorKind k) {
    switch (k) {
      case ErrorKind::Config: return 2;
      case ErrorKind::CornerIncompatibility: return 2;
      case ErrorKind::DegenerateFlow: return 10;
      case ErrorKind::DiffeoFailure: return 11;
      case ErrorKind::InversionFailure: return 11;
      case ErrorKind::InnerDivergence: return 12;
      case ErrorKind::OuterDivergence: return 13;
      case ErrorKind::PressureDomain: return 14;
      case ErrorKind::SingularSystem: return 15;
    }
    return 1;
  }

 private:
  ErrorKind kind_;
};

}  // namespace chflow
