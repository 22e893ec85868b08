// SPDX-FileCopyrightText: Copyright (c) 2026 The heatkernel Authors
// SPDX-License-Identifier: Apache-2.0

// Heat kernel assembly K = H + H * F with F = sum_l (-1)^l (L_x H)^{*l}.
//
// The series is summed on a short window [0, tau] where the Neumann tail is
// small after a few terms; K on [0, T] and beyond follows from the
// semigroup law K(r + j tau) = K(r) (M K(tau))^j.

#pragma once

#include "heatkernel/parametrix.hpp"
#include "heatkernel/time_kernel.hpp"

#include <memory>
#include <optional>

namespace heatkernel {

struct NeumannConfig {
  double tol = 1e-8;
  int max_terms = 64;
  QuadratureConfig quad;
  /// Window length tau is chosen so that tau * max(norm1, ||Delta||_inf) <= theta.
  double window_theta = 1.0;
  /// Build even when validation fails.
  bool allow_unvalidated = false;
  double validation_tol = 1e-8;
};

struct NeumannSum {
  Matrix value;
  int terms = 0;
  double bound = 0.0;
};

/// Property report on a built kernel; filled by `diagnostics`.
struct HeatDiagnostics {
  double semigroup_defect = 0.0;
  double min_value = 0.0;
  double max_mass = 0.0;
  double min_mass = 0.0;
  double symmetry_defect = 0.0;
  double mass_drift = 0.0;
  bool l2_monotone = true;
  double heat_residual = 0.0;
};

/// Smallest L >= 1 with neumann_tail_bound(...) < tol. Errors: NoConvergenceBudget.
int neumann_terms(const Envelope& envelope, double t, double tol, int max_terms, double* bound = nullptr);

/// Partial Neumann sum at t with the order-0 envelope of f sampled on [0, t].
/// Errors: NoConvergenceBudget, HorizonExceeded.
NeumannSum neumann_series(const TimeKernel& f, double t, double tol, int max_terms = 64,
                          const QuadratureConfig& config = {});

namespace detail {
struct SemigroupEvaluator;
}

class HeatKernelResult {
 public:
  TimeKernel K;  ///< on [0, horizon]
  int terms_used = 0;
  double truncation_bound = 0.0;      ///< certified Neumann tail on the window
  double propagated_bound = 0.0;      ///< tail effect on K carried through the semigroup steps
  double quadrature_allowance = 0.0;  ///< target_tol per fold
  ParametrixFamily parametrix_family = ParametrixFamily::Dirac;
  LaplacianKind kind = LaplacianKind::Combinatorial;
  Matrix laplacian;
  std::vector<std::string> ids;
  Matrix conductance;
  double window = 0.0;
  int doublings = 0;
  Envelope envelope;
  ParametrixReport validation;
  std::optional<HeatDiagnostics> diagnostics;

  double horizon() const { return K.horizon(); }
  const Pairing& pairing() const { return K.pairing(); }
  Eigen::Index size() const { return K.size(); }

  /// K(t) for any t >= 0, extending past the horizon through the semigroup.
  Matrix evaluate(double t) const;
  /// dK/dt for any t >= 0.
  Matrix derivative(double t) const;
  /// The window kernel as Chebyshev samples on [0, window].
  const TimeKernel& window_kernel() const;

 private:
  friend HeatKernelResult build_heat_kernel(const Parametrix&, double, const NeumannConfig&);
  std::shared_ptr<detail::SemigroupEvaluator> evaluator_;
};

/// Errors: InvalidParametrix, NoConvergenceBudget, InvalidArgument.
HeatKernelResult build_heat_kernel(const Parametrix& parametrix, double horizon, const NeumannConfig& config = {});

/// max over the sampling grid of |dK/dt + Delta K|. Closed forms with an
/// infinite horizon are sampled on [0, 1].
double heat_residual(const TimeKernel& k, const Matrix& laplacian, int grid_degree = 32);

/// Uses `previous` as an imported parametrix on `space` (same points and
/// edge support, new weights or measure) and rebuilds.
/// Errors: SpaceMismatch, InvalidParametrix, NoConvergenceBudget.
HeatKernelResult cross_parametrix_build(const HeatKernelResult& previous, const MeasureSpace& space,
                                        const NeumannConfig& config = {});

}  // namespace heatkernel
