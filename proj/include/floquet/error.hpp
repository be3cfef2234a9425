// Copyright 2026 The floquet1d Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FLOQUET_ERROR_HPP
#define FLOQUET_ERROR_HPP

#include <stdexcept>
#include <string>

namespace floquet
{

enum class ErrorKind
{
  InvalidModulation,
  PositivityViolation,
  NeedsMoreCoefficients,
  DimensionMismatch,
  InvalidDegree,
  Domain,
  Numeric,
  NearResonance,
  UnsupportedVariant,
  SizeLimit,
  NotFound,
  InvalidArgument,
  ConfigMismatch,
};

const char *ToString(ErrorKind kind);

// All library failures are reported through this exception. The optional
// value carries the offending quantity (condition number, dimension, ...).
class Error : public std::runtime_error
{
public:
  Error(ErrorKind kind, const std::string &what, double value = 0.0)
    : std::runtime_error(std::string(ToString(kind)) + ": " + what), kind_(kind),
      value_(value)
  {
  }

  ErrorKind kind() const noexcept { return kind_; }
  double value() const noexcept { return value_; }

private:
  ErrorKind kind_;
  double value_;
};

}  // namespace floquet

#endif  // FLOQUET_ERROR_HPP
