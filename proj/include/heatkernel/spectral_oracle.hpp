// SPDX-FileCopyrightText: Copyright (c) 2026 The heatkernel Authors
// SPDX-License-Identifier: Apache-2.0

// Reference heat kernels from a dense symmetric eigendecomposition, plus an
// independent scaling-and-squaring matrix exponential.

#pragma once

#include "heatkernel/measure_space.hpp"
#include "heatkernel/time_kernel.hpp"

namespace heatkernel {

/// Eigenpairs of an operator self-adjoint in L^2(measure). Columns of
/// `eigenvectors` are measure-orthonormal; eigenvalues ascend.
struct SpectralData {
  Vector eigenvalues;
  Matrix eigenvectors;
  Vector measure;

  Eigen::Index size() const noexcept { return eigenvalues.size(); }
};

struct SymmetricEigen {
  Vector values;   ///< ascending
  Matrix vectors;  ///< orthonormal columns
  int sweeps = 0;
};

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm is below
/// `tol` times the matrix norm.
SymmetricEigen jacobi_eigh(const Matrix& symmetric, double tol = 1e-14);

/// Decomposes `op` in L^2(mu) via D^{1/2} A D^{-1/2}.
/// Errors: NotSelfAdjoint, DimensionMismatch.
SpectralData eigh_weighted(const OperatorMatrix& op, const Vector& mu);

/// Spectral data of the chosen Laplacian in its self-adjoint measure.
SpectralData laplacian_spectrum(const MeasureSpace& space, LaplacianKind kind);

/// sum_n exp(-lambda_n t) phi_n(x) phi_n(y): the heat kernel paired with
/// the spectral measure. Errors: InvalidArgument for t < 0.
Matrix spectral_heat(const SpectralData& spec, double t);

/// The same semigroup expressed as a kernel for an arbitrary pairing M:
/// exp(-t A) M^{-1}.
Matrix spectral_heat(const SpectralData& spec, double t, const Pairing& pairing);

/// exp(-t A) to relative accuracy `tol`.
Matrix expm_series(const Matrix& a, double t, double tol = 1e-16);

/// Closed-form oracle kernel exp(-t A) M^{-1} with analytic derivative.
TimeKernel oracle_kernel(const SpectralData& spec, const Pairing& pairing, double horizon);

/// Smallest eigenvalue above `zero_tol` (relative to the largest), or 0 if none.
double spectral_gap(const SpectralData& spec, double zero_tol = 1e-10);

/// Number of eigenvalues at or below the zero threshold used by spectral_gap.
int zero_mode_count(const SpectralData& spec, double zero_tol = 1e-10);

}  // namespace heatkernel
