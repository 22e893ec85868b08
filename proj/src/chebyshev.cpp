// SPDX-FileCopyrightText: Copyright (c) 2026 The heatkernel Authors
// SPDX-License-Identifier: Apache-2.0

#include "heatkernel/chebyshev.hpp"

#include "heatkernel/error.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace heatkernel {

ChebyshevGrid::ChebyshevGrid(int degree, double length) : degree_(degree), length_(length) {
  if (degree < 1) throw Error(ErrorCode::InvalidArgument, "Chebyshev degree must be >= 1");
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw Error(ErrorCode::InvalidArgument, "Chebyshev interval length must be positive");
  }
  const int m = degree;
  nodes_.resize(static_cast<std::size_t>(m) + 1);
  bary_.resize(nodes_.size());
  for (int j = 0; j <= m; ++j) {
    const double x = std::cos(std::numbers::pi * j / m);
    nodes_[static_cast<std::size_t>(j)] = 0.5 * length * (1.0 - x);
    double w = (j % 2 == 0) ? 1.0 : -1.0;
    if (j == 0 || j == m) w *= 0.5;
    bary_[static_cast<std::size_t>(j)] = w;
  }
  nodes_.front() = 0.0;
  nodes_.back() = length;

  diff_ = Eigen::MatrixXd::Zero(m + 1, m + 1);
  for (int i = 0; i <= m; ++i) {
    double diag = 0.0;
    for (int j = 0; j <= m; ++j) {
      if (i == j) continue;
      const auto ui = static_cast<std::size_t>(i);
      const auto uj = static_cast<std::size_t>(j);
      const double d = (bary_[uj] / bary_[ui]) / (nodes_[ui] - nodes_[uj]);
      diff_(i, j) = d;
      diag -= d;
    }
    diff_(i, i) = diag;
  }
}

std::vector<double> ChebyshevGrid::interpolation_weights(double t) const {
  std::vector<double> out(nodes_.size(), 0.0);
  for (std::size_t j = 0; j < nodes_.size(); ++j) {
    if (t == nodes_[j]) {
      out[j] = 1.0;
      return out;
    }
  }
  double total = 0.0;
  for (std::size_t j = 0; j < nodes_.size(); ++j) {
    out[j] = bary_[j] / (t - nodes_[j]);
    total += out[j];
  }
  for (double& v : out) v /= total;
  return out;
}

namespace {

QuadratureRule compute_gauss_legendre(int n) {
  QuadratureRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute the derivative at the converged root
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    rule.nodes[static_cast<std::size_t>(i)] = x;
    rule.weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

}  // namespace

const QuadratureRule& gauss_legendre(int order) {
  if (order < 1) throw Error(ErrorCode::InvalidArgument, "Gauss-Legendre order must be >= 1");
  static std::mutex mutex;
  static std::map<int, QuadratureRule> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, compute_gauss_legendre(order)).first;
  return it->second;
}

QuadratureRule gauss_legendre(int order, double a, double b) {
  const QuadratureRule& ref = gauss_legendre(order);
  QuadratureRule out;
  out.nodes.resize(ref.nodes.size());
  out.weights.resize(ref.weights.size());
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  for (std::size_t i = 0; i < ref.nodes.size(); ++i) {
    out.nodes[i] = mid + half * ref.nodes[i];
    out.weights[i] = half * ref.weights[i];
  }
  return out;
}

}  // namespace heatkernel
