// SPDX-FileCopyrightText: Copyright (c) 2026 The heatkernel Authors
// SPDX-License-Identifier: Apache-2.0

#include "heatkernel/error.hpp"

namespace heatkernel {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DuplicatePoint: return "DuplicatePoint";
    case ErrorCode::UnknownPoint: return "UnknownPoint";
    case ErrorCode::NonpositiveMeasure: return "NonpositiveMeasure";
    case ErrorCode::InvalidConductance: return "InvalidConductance";
    case ErrorCode::AsymmetricConductance: return "AsymmetricConductance";
    case ErrorCode::ZeroDegreePoint: return "ZeroDegreePoint";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::CenterNotFound: return "CenterNotFound";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::SpaceMismatch: return "SpaceMismatch";
    case ErrorCode::HorizonExceeded: return "HorizonExceeded";
    case ErrorCode::DegenerateInnerProduct: return "DegenerateInnerProduct";
    case ErrorCode::DisconnectedSpace: return "DisconnectedSpace";
    case ErrorCode::ProfileUnnormalizable: return "ProfileUnnormalizable";
    case ErrorCode::BadTruncation: return "BadTruncation";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::NotReproducing: return "NotReproducing";
    case ErrorCode::NotSelfAdjoint: return "NotSelfAdjoint";
    case ErrorCode::NoConvergenceBudget: return "NoConvergenceBudget";
    case ErrorCode::InvalidParametrix: return "InvalidParametrix";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::TailUncontrolled: return "TailUncontrolled";
    case ErrorCode::NonpositiveShift: return "NonpositiveShift";
    case ErrorCode::NotStochasticallyComplete: return "NotStochasticallyComplete";
    case ErrorCode::NonpositiveEntry: return "NonpositiveEntry";
    case ErrorCode::NonpositiveTime: return "NonpositiveTime";
    case ErrorCode::CertificateViolation: return "CertificateViolation";
  }
  return "Unknown";
}

bool is_input_error(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DuplicatePoint:
    case ErrorCode::UnknownPoint:
    case ErrorCode::NonpositiveMeasure:
    case ErrorCode::InvalidConductance:
    case ErrorCode::AsymmetricConductance:
    case ErrorCode::ZeroDegreePoint:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::ParseError:
    case ErrorCode::ConfigError:
    case ErrorCode::CenterNotFound:
    case ErrorCode::InvalidArgument:
    case ErrorCode::SpaceMismatch:
    case ErrorCode::HorizonExceeded:
    case ErrorCode::BadTruncation:
    case ErrorCode::NotPositiveDefinite:
    case ErrorCode::NotReproducing:
    case ErrorCode::NonpositiveShift:
    case ErrorCode::NonpositiveTime:
      return true;
    default:
      return false;
  }
}

}  // namespace heatkernel
