// SPDX-FileCopyrightText: Copyright (c) 2026 The heatkernel Authors
// SPDX-License-Identifier: Apache-2.0

// Parametrix families: small-time approximations H to the heat kernel with
// a Dirac limit H(0) M = I and an order-k bound on their heat image
// L_x H = dH/dt + Delta_x H.

#pragma once

#include "heatkernel/measure_space.hpp"
#include "heatkernel/spectral_oracle.hpp"
#include "heatkernel/time_kernel.hpp"

#include <optional>
#include <string>
#include <vector>

namespace heatkernel {

enum class ParametrixFamily { Dirac, Profile, Spectral, Rkhs, Imported };

enum class ProfileShape { Epanechnikov, Exponential };

/// |L_x H(x, y; t)| <= C t^k on [0, t_max], plus row norms used by the
/// series bound.
struct Envelope {
  double c = 0.0;
  int k = 0;
  double t_max = 0.0;
  double norm1 = 0.0;  ///< sup_t max_x sum_w |(L_x H(t) M)(x, w)|
  Vector h;            ///< h(x) = sup_t ||L_x H(x, .; t)||_{2} / t^k
};

struct Parametrix {
  TimeKernel H;
  int order_k = 0;
  TimeKernel heat_image;
  ParametrixFamily family = ParametrixFamily::Dirac;
  Envelope envelope;
  Matrix laplacian;  ///< Delta used in L_x
  LaplacianKind kind = LaplacianKind::Combinatorial;
  std::vector<std::string> ids;
  Matrix conductance;
};

struct ParametrixReport {
  std::vector<double> t_grid;           ///< decreasing
  std::vector<double> dirac_residuals;  ///< max |H(t) M - I| per grid point
  double dirac_residual = 0.0;          ///< max |H(0) M - I|, the limit value
  double dirac_decay_rate = 0.0;        ///< log-log slope of the residuals
  bool dirac_monotone = false;
  bool dirac_ok = false;
  double fitted_order = 0.0;  ///< slope of log ||L_x H||_max on [1e-3, 1e-1] / max(1, ||Delta||_inf)
  bool l1_inf_ok = false;     ///< (1, inf) flavor, diagonal pairings only
  bool l2_ok = false;         ///< (2, 2) flavor, diagonal pairings only
  bool hilbert_ok = false;
  bool passed = false;
  std::string reason;
};

/// H = M^{-1}, constant in t, with M the default measure of `kind`.
Parametrix dirac_parametrix(const MeasureSpace& space, LaplacianKind kind = LaplacianKind::Combinatorial);

/// H(x, y; t) = F(d(x, y) / t) / sum_z F(d(x, z) / t) mu_z.
/// `distances` overrides the weighted shortest-path metric.
/// Errors: DisconnectedSpace, ProfileUnnormalizable, DimensionMismatch.
Parametrix profile_parametrix(const MeasureSpace& space, ProfileShape shape, int k_declared,
                              LaplacianKind kind = LaplacianKind::Combinatorial,
                              const std::optional<Matrix>& distances = std::nullopt);

/// First `modes` eigenmodes of the heat semigroup. Errors: BadTruncation.
Parametrix spectral_parametrix(const MeasureSpace& space, int modes,
                               LaplacianKind kind = LaplacianKind::Combinatorial);

/// H = exp(-t) G paired with G^{-1}.
/// Errors: NotPositiveDefinite, NotReproducing, DimensionMismatch.
Parametrix rkhs_parametrix(const MeasureSpace& space, const Matrix& gram,
                           LaplacianKind kind = LaplacianKind::Combinatorial);

/// Wraps an arbitrary kernel with Dirac limit in `source_pairing`, rescaled
/// to the default measure of (space, kind). The derivative must be available.
Parametrix imported_parametrix(const MeasureSpace& space, const TimeKernel& source, LaplacianKind kind,
                               int order_k = 0);

/// Samples the heat image on [0, t_max] (Chebyshev and uniform points).
Envelope compute_envelope(const TimeKernel& heat_image, int k, double t_max, int samples = 32);

/// Numerical check of the parametrix conditions; never throws on failure.
ParametrixReport validate(const Parametrix& p, double tolerance = 1e-8);

/// Least-squares slope of log(y) against log(x); +inf when every y is zero.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

std::string to_string(ParametrixFamily family);
std::string to_string(ProfileShape shape);

}  // namespace heatkernel
