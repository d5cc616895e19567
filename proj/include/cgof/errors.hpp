#pragma once

#include <stdexcept>
#include <string>

namespace cgof {

enum class ErrorCode {
  // validation-class errors (CLI exit 2)
  NegativeProbability,
  DegenerateSum,
  BadFoldCount,
  EmptySubset,
  EmptyInput,
  SingleClassInput,
  NonPositiveLambda,
  TooFewEvaluations,
  OutOfRange,
  RowCountMismatch,
  BadHeader,
  BadArgument,
  // numeric-class errors (CLI exit 3)
  ClassifierFailure,
  NumericalFailure,
  UnboundedBasis,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

  bool is_numeric() const {
    switch (code_) {
      case ErrorCode::ClassifierFailure:
      case ErrorCode::NumericalFailure:
      case ErrorCode::UnboundedBasis:
        return true;
      default:
        return false;
    }
  }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace cgof
