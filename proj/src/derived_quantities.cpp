// SPDX-FileCopyrightText: Copyright (c) 2026 The heatkernel Authors
// SPDX-License-Identifier: Apache-2.0

#include "heatkernel/derived_quantities.hpp"

#include "heatkernel/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace heatkernel {

namespace {

void require_connected(const MeasureSpace& space, const SpectralData& spec) {
  if (!is_connected(space) || zero_mode_count(spec) != 1) {
    throw Error(ErrorCode::Disconnected, "zero eigenvalue is not simple; the space is disconnected");
  }
}

Matrix zero_projector(const SpectralData& spec) {
  const int zeros = zero_mode_count(spec);
  const Matrix phi = spec.eigenvectors.leftCols(zeros);
  return phi * phi.transpose();
}

}  // namespace

Matrix rebase_kernel(const Matrix& k, const Pairing& pairing, const Vector& m) {
  return pairing.apply_right(k) * m.cwiseInverse().asDiagonal();
}

GreenResult green_spectral(const MeasureSpace& space, const SpectralData& spec) {
  require_connected(space, spec);
  const Eigen::Index n = spec.size();
  GreenResult out;
  out.G_star = Matrix::Zero(n, n);
  for (Eigen::Index i = zero_mode_count(spec); i < n; ++i) {
    out.G_star += spec.eigenvectors.col(i) * spec.eigenvectors.col(i).transpose() / spec.eigenvalues(i);
  }
  out.method = GreenMethod::Spectral;
  return out;
}

GreenResult green_quadrature(const MeasureSpace& space, const SpectralData& spec, const HeatKernelResult& k,
                             double tol) {
  require_connected(space, spec);
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "Green tolerance must be positive");
  const double gap = spectral_gap(spec);
  if (gap < 1e-8) {
    throw Error(ErrorCode::TailUncontrolled, "spectral gap " + std::to_string(gap) + " below 1e-8");
  }
  const double eps = tol / 10.0;
  const double cutoff = std::log(1.0 / eps) / gap;
  const Matrix p0 = zero_projector(spec);
  const Eigen::Index n = spec.size();

  auto integrand = [&](double t) { return Matrix(rebase_kernel(k.evaluate(t), k.pairing(), spec.measure) - p0); };

  // Geometric panels [0, a], [a, 2a], [2a, 4a], ... resolve both the fast
  // initial decay and the slow tail.
  double a = cutoff;
  if (k.window > 0.0) a = std::min(a, k.window);
  Matrix acc = Matrix::Zero(n, n);
  double left = 0.0;
  double right = a;
  while (left < cutoff) {
    right = std::min(right, cutoff);
    const QuadratureRule rule = gauss_legendre(16, left, right);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) acc += rule.weights[i] * integrand(rule.nodes[i]);
    left = right;
    right = 2.0 * right;
  }

  double tail = 0.0;
  for (Eigen::Index x = 0; x < n; ++x)
    for (Eigen::Index y = 0; y < n; ++y) {
      double s = 0.0;
      for (Eigen::Index i = zero_mode_count(spec); i < n; ++i) {
        const double lam = spec.eigenvalues(i);
        s += std::abs(spec.eigenvectors(x, i) * spec.eigenvectors(y, i)) * std::exp(-lam * cutoff) / lam;
      }
      tail = std::max(tail, s);
    }

  GreenResult out;
  out.G_star = 0.5 * (acc + acc.transpose());
  out.method = GreenMethod::Quadrature;
  out.tail_bound = tail;
  out.cutoff = cutoff;
  return out;
}

GreenResult green_regularized(const MeasureSpace& space, const SpectralData& spec, const HeatKernelResult* k,
                              double tol) {
  return k ? green_quadrature(space, spec, *k, tol) : green_spectral(space, spec);
}

Matrix resolvent(const SpectralData& spec, double s) {
  if (!(s > 0.0)) throw Error(ErrorCode::NonpositiveShift, "resolvent shift must be positive");
  const Vector inv = (spec.eigenvalues.array() + s).inverse().matrix();
  return spec.eigenvectors * inv.asDiagonal() * spec.eigenvectors.transpose();
}

Matrix resistance_from_green(const Matrix& g) {
  const Eigen::Index n = g.rows();
  Matrix r(n, n);
  for (Eigen::Index x = 0; x < n; ++x)
    for (Eigen::Index y = 0; y < n; ++y) r(x, y) = g(x, x) + g(y, y) - g(x, y) - g(y, x);
  return r;
}

Matrix resistance(const MeasureSpace& space) {
  const SpectralData spec = laplacian_spectrum(space, LaplacianKind::Combinatorial);
  return resistance_from_green(green_spectral(space, spec).G_star);
}

double entropy(const Matrix& kt, const Pairing& pairing, std::size_t x) {
  if (!pairing.is_diagonal()) throw Error(ErrorCode::InvalidArgument, "entropy needs a diagonal pairing");
  if (x >= static_cast<std::size_t>(kt.rows())) throw Error(ErrorCode::InvalidArgument, "entropy point out of range");
  const Vector& mu = pairing.weights();
  const auto row = kt.row(static_cast<Eigen::Index>(x));
  const double mass = row.dot(mu);
  if (std::abs(mass - 1.0) > 1e-8) {
    throw Error(ErrorCode::NotStochasticallyComplete, "heat mass " + std::to_string(mass) + " differs from 1");
  }
  double e = 0.0;
  for (Eigen::Index y = 0; y < row.size(); ++y) {
    const double v = row(y);
    if (!(v > 1e-300)) {
      throw Error(ErrorCode::NonpositiveEntry, "kernel entry " + std::to_string(v) + " is not positive");
    }
    e += v * std::log(v) * mu(y);
  }
  return e;
}

double entropy(const HeatKernelResult& k, std::size_t x, double t) {
  if (!(t >= 0.0)) throw Error(ErrorCode::NonpositiveTime, "entropy time must be >= 0");
  return entropy(k.evaluate(t), k.pairing(), x);
}

PoissonResult poisson_kernel(const SpectralData& spec, const HeatKernelResult* k, double w) {
  if (!(w > 0.0)) throw Error(ErrorCode::NonpositiveTime, "Poisson parameter w must be positive");
  PoissonResult out;
  const Vector root = spec.eigenvalues.cwiseMax(0.0).cwiseSqrt();
  const Vector decay = (-w * root.array()).exp().matrix();
  out.spectral = spec.eigenvectors * decay.asDiagonal() * spec.eigenvectors.transpose();

  // The zero modes integrate to themselves against the subordination density.
  const Matrix p0 = zero_projector(spec);
  const double gap = spectral_gap(spec);
  out.subordination = p0;
  if (gap > 0.0) {
    auto heat = [&](double t) {
      if (k) return Matrix(rebase_kernel(k->evaluate(t), k->pairing(), spec.measure));
      return spectral_heat(spec, t);
    };
    const double u_lo = std::log(w * w / 200.0);
    const double u_hi = std::log(50.0 / gap);
    const int steps = std::max(2, static_cast<int>(std::ceil((u_hi - u_lo) / 0.02)));
    const double h = (u_hi - u_lo) / steps;
    const double scale = w / std::sqrt(4.0 * std::numbers::pi);
    for (int i = 0; i <= steps; ++i) {
      const double u = u_lo + i * h;
      const double t = std::exp(u);
      // density * dt/du = scale * exp(-w^2/4t) t^{-3/2} * t
      double weight = h * scale * std::exp(-w * w / (4.0 * t)) / std::sqrt(t);
      if (i == 0 || i == steps) weight *= 0.5;
      out.subordination += weight * (heat(t) - p0);
    }
    out.samples = steps + 1;
  }
  out.deviation = sup_norm(out.spectral - out.subordination);
  return out;
}

HeatDiagnostics diagnostics(const TimeKernel& k, const Matrix& laplacian, std::vector<double> t_grid) {
  const double horizon = k.horizon();
  t_grid.erase(std::remove_if(t_grid.begin(), t_grid.end(),
                              [horizon](double t) { return !(t >= 0.0) || t > horizon; }),
               t_grid.end());
  std::sort(t_grid.begin(), t_grid.end());
  t_grid.erase(std::unique(t_grid.begin(), t_grid.end()), t_grid.end());

  const Pairing& pairing = k.pairing();
  const Eigen::Index n = k.size();
  std::vector<Matrix> values;
  values.reserve(t_grid.size());
  for (double t : t_grid) values.push_back(k.at(t));

  HeatDiagnostics d;
  d.min_value = values.empty() ? 0.0 : values.front().minCoeff();
  d.max_mass = -std::numeric_limits<double>::infinity();
  d.min_mass = std::numeric_limits<double>::infinity();
  const Vector ones = Vector::Ones(n);
  const Vector initial_mass = (pairing.apply_left(k.at(0.0))).transpose() * ones;
  std::vector<double> previous_l2;

  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    const Matrix& kt = values[i];
    d.min_value = std::min(d.min_value, kt.minCoeff());
    const Vector row_mass = pairing.apply_right(kt) * ones;
    d.max_mass = std::max(d.max_mass, row_mass.maxCoeff());
    d.min_mass = std::min(d.min_mass, row_mass.minCoeff());
    d.symmetry_defect = std::max(d.symmetry_defect, sup_norm(kt - kt.transpose()));
    const Vector column_mass = pairing.apply_left(kt).transpose() * ones;
    d.mass_drift = std::max(d.mass_drift, (column_mass - initial_mass).cwiseAbs().maxCoeff());

    std::vector<double> l2(static_cast<std::size_t>(n));
    for (Eigen::Index y = 0; y < n; ++y) {
      const Vector u = kt.col(y);
      l2[static_cast<std::size_t>(y)] = pairing.inner(u, u);
    }
    if (!previous_l2.empty()) {
      for (std::size_t y = 0; y < l2.size(); ++y)
        if (l2[y] > previous_l2[y] * (1.0 + 1e-12) + 1e-300) d.l2_monotone = false;
    }
    previous_l2 = std::move(l2);

    for (std::size_t j = i; j < t_grid.size(); ++j) {
      const double sum = t_grid[i] + t_grid[j];
      if (sum > horizon) break;
      const Matrix composed = kt * pairing.apply_left(values[j]);
      d.semigroup_defect = std::max(d.semigroup_defect, sup_norm(k.at(sum) - composed));
    }
    if (laplacian.size() != 0 && k.has_derivative()) {
      d.heat_residual = std::max(d.heat_residual, sup_norm(k.derivative_at(t_grid[i]) + laplacian * kt));
    }
  }
  if (t_grid.empty()) d.max_mass = d.min_mass = 0.0;
  return d;
}

HeatDiagnostics diagnostics(const HeatKernelResult& k, const std::vector<double>& t_grid) {
  return diagnostics(k.K, k.laplacian, t_grid);
}

}  // namespace heatkernel
