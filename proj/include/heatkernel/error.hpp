// SPDX-FileCopyrightText: Copyright (c) 2026 The heatkernel Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace heatkernel {

enum class ErrorCode {
  // input / construction
  DuplicatePoint,
  UnknownPoint,
  NonpositiveMeasure,
  InvalidConductance,
  AsymmetricConductance,
  ZeroDegreePoint,
  DimensionMismatch,
  ParseError,
  ConfigError,
  CenterNotFound,
  InvalidArgument,
  // time kernels
  SpaceMismatch,
  HorizonExceeded,
  DegenerateInnerProduct,
  // parametrices
  DisconnectedSpace,
  ProfileUnnormalizable,
  BadTruncation,
  NotPositiveDefinite,
  NotReproducing,
  // oracle
  NotSelfAdjoint,
  // engine
  NoConvergenceBudget,
  InvalidParametrix,
  // derived quantities
  Disconnected,
  TailUncontrolled,
  NonpositiveShift,
  NotStochasticallyComplete,
  NonpositiveEntry,
  NonpositiveTime,
  // reporting
  CertificateViolation,
};

std::string_view to_string(ErrorCode code) noexcept;

/// True for errors caused by malformed input rather than by a failed
/// mathematical condition or certificate.
bool is_input_error(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace heatkernel
