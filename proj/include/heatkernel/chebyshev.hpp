// SPDX-FileCopyrightText: Copyright (c) 2026 The heatkernel Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <vector>

namespace heatkernel {

/// Chebyshev-Lobatto nodes on [0, length] with barycentric interpolation
/// and the spectral differentiation matrix.
class ChebyshevGrid {
 public:
  /// degree m gives m + 1 nodes, node 0 at t = 0 and node m at t = length.
  ChebyshevGrid(int degree, double length);

  int degree() const noexcept { return degree_; }
  double length() const noexcept { return length_; }
  const std::vector<double>& nodes() const noexcept { return nodes_; }

  /// Interpolation weights for evaluating at t: value = sum_j weights[j] * sample[j].
  std::vector<double> interpolation_weights(double t) const;

  /// D(i, j) such that p'(t_i) = sum_j D(i, j) p(t_j).
  const Eigen::MatrixXd& differentiation() const noexcept { return diff_; }

 private:
  int degree_;
  double length_;
  std::vector<double> nodes_;
  std::vector<double> bary_;
  Eigen::MatrixXd diff_;
};

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule with `order` points on [-1, 1].
const QuadratureRule& gauss_legendre(int order);

/// Gauss-Legendre mapped to [a, b].
QuadratureRule gauss_legendre(int order, double a, double b);

}  // namespace heatkernel
