// SPDX-FileCopyrightText: Copyright (c) 2026 The heatkernel Authors
// SPDX-License-Identifier: Apache-2.0

// Space-time kernels F(x, y; t) on a finite point set and the generalized
// time convolution
//
//   (F1 * F2)(x, y; t) = int_0^t sum_z F1(x, z; t - s) F2(z, y; s) mu_z ds,
//
// where the z-sum is taken in a pairing: a diagonal measure mu for the L^p
// spaces, or a dense metric M (<f, g> = f^T M g) for a Hilbert space.

#pragma once

#include "heatkernel/chebyshev.hpp"
#include "heatkernel/measure_space.hpp"

#include <functional>
#include <memory>
#include <mutex>
#include <variant>
#include <vector>

namespace heatkernel {

/// The z-integration used by the convolution.
class Pairing {
 public:
  Pairing() = default;
  static Pairing diagonal(Vector weights);
  static Pairing dense(Matrix metric);

  bool is_diagonal() const noexcept { return diagonal_; }
  Eigen::Index size() const noexcept { return diagonal_ ? weights_.size() : metric_.rows(); }

  /// Diagonal weights; throws InvalidArgument for a dense pairing.
  const Vector& weights() const;
  Matrix metric() const;

  /// a * M
  Matrix apply_right(const Matrix& a) const;
  /// M * a
  Matrix apply_left(const Matrix& a) const;
  /// M^{-1}: the kernel delta_{x=y} / mu_y reproducing point evaluation.
  Matrix identity_kernel() const;
  /// f^T M g
  double inner(const Vector& f, const Vector& g) const;

  bool operator==(const Pairing& other) const;

 private:
  bool diagonal_ = true;
  Vector weights_;
  Matrix metric_;
};

struct QuadratureConfig {
  int nodes_per_panel = 16;  ///< Gauss-Legendre order per panel for the s-integral
  int cheb_degree = 32;      ///< time sampling resolution m
  int refine_factor = 2;
  double target_tol = 1e-10;

  void validate() const;
  /// Both resolutions multiplied by refine_factor.
  QuadratureConfig refined() const;
};

class TimeKernel {
 public:
  using Evaluator = std::function<Matrix(double)>;

  struct ClosedForm {
    Evaluator value;
    Evaluator derivative;  ///< optional analytic d/dt
  };
  struct ChebSampled {
    std::shared_ptr<const ChebyshevGrid> grid;
    std::shared_ptr<const std::vector<Matrix>> values;
    std::shared_ptr<const std::vector<Matrix>> derivatives;
  };

  TimeKernel() = default;

  /// horizon may be +infinity for closed forms. The evaluator must handle
  /// t = 0 itself (no extrapolation is done here).
  static TimeKernel closed_form(double horizon, Pairing pairing, Eigen::Index n, Evaluator value,
                                Evaluator derivative = {});
  static TimeKernel constant(const Matrix& value, double horizon, Pairing pairing);
  static TimeKernel zero(Eigen::Index n, double horizon, Pairing pairing);
  /// Samples at the nodes of `grid`; the horizon is grid->length().
  static TimeKernel sampled(std::shared_ptr<const ChebyshevGrid> grid, std::vector<Matrix> values,
                            Pairing pairing);
  /// Samples `source` on `grid`.
  static TimeKernel sample(const TimeKernel& source, std::shared_ptr<const ChebyshevGrid> grid);
  /// a * k1 + b * k2 as a closed form over the common horizon.
  static TimeKernel linear_combination(double a, const TimeKernel& k1, double b, const TimeKernel& k2);

  double horizon() const noexcept { return horizon_; }
  const Pairing& pairing() const noexcept { return pairing_; }
  Eigen::Index size() const noexcept { return n_; }
  bool is_sampled() const noexcept { return std::holds_alternative<ChebSampled>(form_); }
  bool has_derivative() const;
  const ChebSampled* samples() const { return std::get_if<ChebSampled>(&form_); }

  /// Throws HorizonExceeded outside [0, horizon].
  Matrix at(double t) const;
  /// d/dt: analytic for closed forms that supply it, spectral
  /// differentiation for sampled kernels.
  Matrix derivative_at(double t) const;

  /// Same kernel with a shorter horizon.
  TimeKernel restricted(double horizon) const;

 private:
  void check_time(double t) const;

  double horizon_ = 0.0;
  Pairing pairing_;
  Eigen::Index n_ = 0;
  std::variant<ClosedForm, ChebSampled> form_;
};

enum class ConvolutionOrder {
  Standard,  ///< F1(t - s) F2(s)
  Swapped,   ///< F1(s) F2(t - s), equal by Fubini
};

/// (F1 * F2)(t) by composite Gauss-Legendre with panels [0, t/2], [t/2, t].
/// Errors: SpaceMismatch, HorizonExceeded.
Matrix convolve(const TimeKernel& f1, const TimeKernel& f2, double t, const QuadratureConfig& config = {},
                ConvolutionOrder order = ConvolutionOrder::Standard);

/// Cache of l-fold self-convolutions of f, each fold l >= 2 stored as a
/// Chebyshev-sampled kernel on a common grid. Insertion is exclusive.
class FoldCache {
 public:
  FoldCache(TimeKernel f, std::shared_ptr<const ChebyshevGrid> grid, QuadratureConfig config);

  const TimeKernel& base() const noexcept { return f_; }
  const std::shared_ptr<const ChebyshevGrid>& grid() const noexcept { return grid_; }

  /// The l-fold as a kernel (l = 1 returns f itself).
  TimeKernel fold(int ell);
  /// (f)^{*l}(t); for l >= 2 the outermost convolution is evaluated at t
  /// directly rather than interpolated.
  Matrix evaluate(int ell, double t);

 private:
  TimeKernel f_;
  std::shared_ptr<const ChebyshevGrid> grid_;
  QuadratureConfig config_;
  std::mutex mutex_;
  std::vector<TimeKernel> folds_;  // folds_[i] holds fold i + 2
};

/// (f)^{*l}(t). Errors as convolve, InvalidArgument for l < 1.
Matrix ell_fold(const TimeKernel& f, int ell, double t, const QuadratureConfig& config = {});

/// C * norm1^{l-1} * t^{k+l-1} / (k+l-1)!
double bound_ell_fold(double c, double norm1, int k, int ell, double t);

/// sum_{l > terms} bound_ell_fold(c, norm1, k, l, t), summed until the
/// remaining geometric majorant is negligible.
double neumann_tail_bound(double c, double norm1, int k, int terms, double t);

enum class InnerProduct { L2Lambda, L2Nu, Energy };

/// int_0^t <F1(x, .; t - s), F2(., y; s)>_H ds, ignoring the kernels' own
/// pairings. For Energy, every row of F1 and column of F2 sampled by the
/// quadrature must have lambda-mean zero.
/// Errors: SpaceMismatch, HorizonExceeded, DegenerateInnerProduct.
Matrix convolve_hilbert(const TimeKernel& f1, const TimeKernel& f2, double t, InnerProduct inner,
                        const MeasureSpace& space, const QuadratureConfig& config = {});

/// Pairing realizing one of the Hilbert inner products on `space`.
Pairing inner_product_pairing(const MeasureSpace& space, InnerProduct inner);

/// max_x sum_w |(f M)(x, w)|: the L^1(mu) row norm used by the series bounds.
double row_l1_norm(const Matrix& f, const Pairing& pairing);

/// max |a_ij|
double sup_norm(const Matrix& a);

}  // namespace heatkernel
