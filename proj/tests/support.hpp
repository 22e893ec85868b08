// SPDX-FileCopyrightText: Copyright (c) 2026 The heatkernel Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "heatkernel/measure_space.hpp"
#include "oracles.hpp"

#include <random>

namespace testing_support {

using heatkernel::Matrix;
using heatkernel::MeasureSpace;
using heatkernel::Vector;

inline Matrix to_matrix(const oracle::Dense& d) {
  const auto n = static_cast<Eigen::Index>(d.size());
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return m;
}

inline oracle::Dense to_dense(const Matrix& m) {
  oracle::Dense d = oracle::zeros(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m(i, j);
  return d;
}

inline MeasureSpace from_graph(const oracle::RandomGraph& g) {
  return heatkernel::build_space(g.ids, Vector::Ones(static_cast<Eigen::Index>(g.ids.size())), to_matrix(g.weights));
}

inline MeasureSpace from_graph(const oracle::RandomGraph& g, const Vector& lambda) {
  return heatkernel::build_space(g.ids, lambda, to_matrix(g.weights));
}

inline MeasureSpace two_point(double weight = 1.0, Vector lambda = Vector::Ones(2)) {
  return heatkernel::build_space({"a", "b"}, lambda, std::vector<heatkernel::WeightedEdge>{{"a", "b", weight}});
}

inline MeasureSpace complete3(Vector lambda = Vector::Ones(3)) {
  return heatkernel::build_space({"a", "b", "c"}, lambda,
                                 std::vector<heatkernel::WeightedEdge>{{"a", "b", 1}, {"b", "c", 1}, {"a", "c", 1}});
}

inline MeasureSpace path3() {
  return heatkernel::build_space({"a", "b", "c"}, Vector::Ones(3),
                                 std::vector<heatkernel::WeightedEdge>{{"a", "b", 1}, {"b", "c", 1}});
}

inline Vector random_vector(Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = u(rng);
  return v;
}

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace testing_support
