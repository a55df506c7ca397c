// Copyright 2026 The pqseries Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PQS_ERROR_HPP
#define PQS_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace pqs
{

enum class ErrorCode
{
  DimensionMismatch,
  EvalAtPole,
  NegativeOrderRecenter,
  SyntaxError,
  UnknownSymbol,
  DivisionByZero,
  InsufficientTruncation,
  DegenerateLeadingEigenvalues,
  NotConverged,
  ResidualTooLarge,
  StepFailure,
  ModelNotTheorem2,
  DegeneratePsi0,
  GridTooCoarse,
  UnsupportedLambdaEvaluation,
  UnknownEntry,
  SchemaError,
  IoError,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above; the
// CLI maps them to exit codes.
class Error : public std::runtime_error
{
public:
  Error(ErrorCode code, const std::string &message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), detail_(message)
  {
  }

  ErrorCode code() const noexcept { return code_; }

  // Message without the code prefix.
  const std::string &detail() const noexcept { return detail_; }

private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace pqs

#endif  // PQS_ERROR_HPP
