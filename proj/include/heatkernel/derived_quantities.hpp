// SPDX-FileCopyrightText: Copyright (c) 2026 The heatkernel Authors
// SPDX-License-Identifier: Apache-2.0

// Quantities obtained from a heat kernel: regularized Green's function,
// resolvent, resistance metric, entropy, subordinated Poisson kernel and
// property diagnostics.
//
// Static kernels (Green, resolvent, Poisson) are expressed in the spectral
// measure m of the decomposition, i.e. as kernels of operators acting by
// (A g)(x) = sum_y A(x, y) g(y) m_y.

#pragma once

#include "heatkernel/neumann_engine.hpp"
#include "heatkernel/spectral_oracle.hpp"

#include <vector>

namespace heatkernel {

enum class GreenMethod { Spectral, Quadrature };

struct GreenResult {
  Matrix G_star;
  GreenMethod method = GreenMethod::Spectral;
  double tail_bound = 0.0;  ///< quadrature only: neglected time tail past the cutoff
  double cutoff = 0.0;      ///< quadrature only: T_cut
};

/// sum over nonzero modes of phi phi^T / lambda. Errors: Disconnected.
GreenResult green_spectral(const MeasureSpace& space, const SpectralData& spec);

/// int_0^{T_cut} (K(t) - zero-mode projector) dt with T_cut = log(10 / tol) / gap.
/// Errors: Disconnected, TailUncontrolled.
GreenResult green_quadrature(const MeasureSpace& space, const SpectralData& spec, const HeatKernelResult& k,
                             double tol = 1e-8);

/// Quadrature when `k` is given, spectral otherwise.
GreenResult green_regularized(const MeasureSpace& space, const SpectralData& spec,
                              const HeatKernelResult* k = nullptr, double tol = 1e-8);

/// Kernel of (A + s)^{-1}. Errors: NonpositiveShift.
Matrix resolvent(const SpectralData& spec, double s);

/// R(x, y) = G*(x, x) + G*(y, y) - G*(x, y) - G*(y, x) for the combinatorial
/// Laplacian with counting measure. Errors: Disconnected.
Matrix resistance(const MeasureSpace& space);
Matrix resistance_from_green(const Matrix& g_star);

/// E(x, t) = sum_y K(x, y; t) log K(x, y; t) mu_y with mu the kernel's
/// pairing. Errors: NotStochasticallyComplete, NonpositiveEntry,
/// InvalidArgument.
double entropy(const HeatKernelResult& k, std::size_t x, double t);
/// The same sum for one time slice K(t).
double entropy(const Matrix& kt, const Pairing& pairing, std::size_t x);

struct PoissonResult {
  Matrix spectral;
  Matrix subordination;
  double deviation = 0.0;  ///< max entrywise difference
  int samples = 0;
};

/// exp(-w sqrt(A)) two ways. Without `k` the subordination integral uses
/// the spectral heat kernel. Errors: NonpositiveTime.
PoissonResult poisson_kernel(const SpectralData& spec, const HeatKernelResult* k, double w);

/// Property report on `k` over the time grid (values outside [0, horizon]
/// are dropped). `laplacian` may be empty to skip the heat residual.
HeatDiagnostics diagnostics(const TimeKernel& k, const Matrix& laplacian, std::vector<double> t_grid);
HeatDiagnostics diagnostics(const HeatKernelResult& k, const std::vector<double>& t_grid);

/// K(t) M D_m^{-1}: the same semigroup as a kernel in the measure m.
Matrix rebase_kernel(const Matrix& k, const Pairing& pairing, const Vector& m);

}  // namespace heatkernel
