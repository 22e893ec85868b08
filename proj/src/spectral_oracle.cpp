// SPDX-FileCopyrightText: Copyright (c) 2026 The heatkernel Authors
// SPDX-License-Identifier: Apache-2.0

#include "heatkernel/spectral_oracle.hpp"

#include "heatkernel/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace heatkernel {

SymmetricEigen jacobi_eigh(const Matrix& symmetric, double tol) {
  if (symmetric.rows() != symmetric.cols()) throw Error(ErrorCode::DimensionMismatch, "matrix must be square");
  const Eigen::Index n = symmetric.rows();
  Matrix a = symmetric;
  Matrix v = Matrix::Identity(n, n);
  const double scale = a.norm();
  int sweeps = 0;

  auto off_norm = [&] {
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  while (scale > 0.0 && off_norm() > tol * scale && sweeps < 100) {
    ++sweeps;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) { return a(i, i) < a(j, j); });
  SymmetricEigen out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = a(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(k)]);
    out.vectors.col(k) = v.col(order[static_cast<std::size_t>(k)]);
  }
  out.sweeps = sweeps;
  return out;
}

SpectralData eigh_weighted(const OperatorMatrix& op, const Vector& mu) {
  const Matrix& a = op.entries;
  if (a.rows() != a.cols() || a.rows() != mu.size()) {
    throw Error(ErrorCode::DimensionMismatch, "operator and measure sizes differ");
  }
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    if (!(mu(i) > 0.0)) throw Error(ErrorCode::NonpositiveMeasure, "spectral measure must be positive");
  }
  const Vector root = mu.cwiseSqrt();
  const Matrix s = root.asDiagonal() * a * root.cwiseInverse().asDiagonal();
  const double defect = (s - s.transpose()).cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, s.cwiseAbs().maxCoeff());
  if (defect > 1e-10 * scale) {
    throw Error(ErrorCode::NotSelfAdjoint,
                "operator is not self-adjoint in the given measure (defect " + std::to_string(defect) + ")");
  }
  const SymmetricEigen eig = jacobi_eigh(0.5 * (s + s.transpose()));
  SpectralData out;
  out.eigenvalues = eig.values;
  out.eigenvectors = root.cwiseInverse().asDiagonal() * eig.vectors;
  out.measure = mu;
  return out;
}

SpectralData laplacian_spectrum(const MeasureSpace& space, LaplacianKind kind) {
  return eigh_weighted(laplacian_operator(space, kind), self_adjoint_measure(space, kind));
}

Matrix spectral_heat(const SpectralData& spec, double t) {
  if (!(t >= 0.0)) throw Error(ErrorCode::InvalidArgument, "spectral_heat needs t >= 0");
  const Vector decay = (-t * spec.eigenvalues.array()).exp().matrix();
  return spec.eigenvectors * decay.asDiagonal() * spec.eigenvectors.transpose();
}

Matrix spectral_heat(const SpectralData& spec, double t, const Pairing& pairing) {
  const Matrix semigroup = spectral_heat(spec, t) * spec.measure.asDiagonal();
  if (pairing.is_diagonal()) return semigroup * pairing.weights().cwiseInverse().asDiagonal();
  return semigroup * pairing.identity_kernel();
}

Matrix expm_series(const Matrix& a, double t, double tol) {
  if (!(t >= 0.0)) throw Error(ErrorCode::InvalidArgument, "expm_series needs t >= 0");
  const Eigen::Index n = a.rows();
  Matrix x = -t * a;
  const double norm = x.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  x /= std::ldexp(1.0, squarings);

  Matrix sum = Matrix::Identity(n, n);
  Matrix term = Matrix::Identity(n, n);
  for (int k = 1; k < 64; ++k) {
    term = term * x / static_cast<double>(k);
    sum += term;
    if (term.cwiseAbs().maxCoeff() <= tol * sum.cwiseAbs().maxCoeff()) break;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

TimeKernel oracle_kernel(const SpectralData& spec, const Pairing& pairing, double horizon) {
  const Matrix right = [&] {
    Matrix m = spec.measure.asDiagonal();
    return Matrix(m * pairing.identity_kernel());
  }();
  const Matrix phi = spec.eigenvectors;
  const Vector lambda = spec.eigenvalues;
  return TimeKernel::closed_form(
      horizon, pairing, phi.rows(),
      [phi, lambda, right](double t) {
        const Vector decay = (-t * lambda.array()).exp().matrix();
        return Matrix(phi * decay.asDiagonal() * phi.transpose() * right);
      },
      [phi, lambda, right](double t) {
        const Vector decay = (-lambda.array() * (-t * lambda.array()).exp()).matrix();
        return Matrix(phi * decay.asDiagonal() * phi.transpose() * right);
      });
}

namespace {

double zero_threshold(const SpectralData& spec, double zero_tol) {
  const double top = spec.size() == 0 ? 1.0 : std::max(1.0, std::abs(spec.eigenvalues.maxCoeff()));
  return zero_tol * top;
}

}  // namespace

double spectral_gap(const SpectralData& spec, double zero_tol) {
  const double threshold = zero_threshold(spec, zero_tol);
  for (Eigen::Index i = 0; i < spec.size(); ++i)
    if (spec.eigenvalues(i) > threshold) return spec.eigenvalues(i);
  return 0.0;
}

int zero_mode_count(const SpectralData& spec, double zero_tol) {
  const double threshold = zero_threshold(spec, zero_tol);
  int count = 0;
  for (Eigen::Index i = 0; i < spec.size(); ++i)
    if (spec.eigenvalues(i) <= threshold) ++count;
  return count;
}

}  // namespace heatkernel
