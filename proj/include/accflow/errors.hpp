#pragma once

#include <stdexcept>
#include <string>

namespace acc {

/// Broad failure class; the CLI maps it onto its exit status.
enum class ErrorClass { validation = 1, numerical = 2, io = 3 };

class Error : public std::runtime_error {
public:
  Error(ErrorClass cls, const std::string& what) : std::runtime_error(what), cls_(cls) {}
  ErrorClass error_class() const noexcept { return cls_; }

private:
  ErrorClass cls_;
};

class ValidationError : public Error {
public:
  explicit ValidationError(const std::string& what) : Error(ErrorClass::validation, what) {}
};

class ParseError : public Error {
public:
  ParseError(const std::string& what, int line = 0)
      : Error(ErrorClass::validation, what), line_(line) {}
  int line() const noexcept { return line_; }

private:
  int line_;
};

class IoError : public Error {
public:
  explicit IoError(const std::string& what) : Error(ErrorClass::io, what) {}
};

class NumericalError : public Error {
public:
  explicit NumericalError(const std::string& what) : Error(ErrorClass::numerical, what) {}
};

// Specific numerical failures. Each one names the condition that triggered it.
#define ACC_NUMERICAL_ERROR(Name)                                                \
  class Name : public NumericalError {                                           \
  public:                                                                        \
    explicit Name(const std::string& what) : NumericalError(#Name ": " + what) {} \
  }

ACC_NUMERICAL_ERROR(OriginUndefined);
ACC_NUMERICAL_ERROR(GridMismatch);
ACC_NUMERICAL_ERROR(ConvergenceFailure);
ACC_NUMERICAL_ERROR(ZeroFunction);
ACC_NUMERICAL_ERROR(ResonantEigenvalue);
ACC_NUMERICAL_ERROR(LambdaNotZero);
ACC_NUMERICAL_ERROR(NearEigenvalue);
ACC_NUMERICAL_ERROR(ContractionViolated);
ACC_NUMERICAL_ERROR(MaxIterExceeded);
ACC_NUMERICAL_ERROR(TooFewSamples);
ACC_NUMERICAL_ERROR(SingularMode);
ACC_NUMERICAL_ERROR(DegenerateNormalization);
ACC_NUMERICAL_ERROR(ToleranceBreached);

#undef ACC_NUMERICAL_ERROR

/// Raised when a time step exceeds the Courant limit; carries a usable step.
class CflViolation : public NumericalError {
public:
  CflViolation(const std::string& what, double suggested_dt)
      : NumericalError("CflViolation: " + what), suggested_dt_(suggested_dt) {}
  double suggested_dt() const noexcept { return suggested_dt_; }

private:
  double suggested_dt_;
};

}  // namespace acc
