// SPDX-FileCopyrightText: Copyright (c) 2026 The heatkernel Authors
// SPDX-License-Identifier: Apache-2.0

#include "heatkernel/measure_space.hpp"

#include "heatkernel/error.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <utility>

namespace heatkernel {

PointSpace::PointSpace(std::vector<std::string> ids, Vector lambda)
    : ids_(std::move(ids)), lambda_(std::move(lambda)) {
  if (static_cast<std::size_t>(lambda_.size()) != ids_.size()) {
    throw Error(ErrorCode::DimensionMismatch, "point list and measure have different lengths");
  }
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (!index_.emplace(ids_[i], i).second) {
      throw Error(ErrorCode::DuplicatePoint, "point '" + ids_[i] + "' listed twice");
    }
    const double m = lambda_(static_cast<Eigen::Index>(i));
    if (!(m > 0.0) || !std::isfinite(m)) {
      throw Error(ErrorCode::NonpositiveMeasure,
                  "lambda({" + ids_[i] + "}) must be positive and finite");
    }
  }
}

std::size_t PointSpace::index_of(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw Error(ErrorCode::UnknownPoint, "no point '" + id + "'");
  return it->second;
}

Conductance::Conductance(Matrix weights) : weights_(std::move(weights)) {}

namespace {

MeasureSpace finish(PointSpace points, Matrix weights) {
  const Eigen::Index n = weights.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double w = weights(i, j);
      if (!std::isfinite(w) || w < 0.0) {
        throw Error(ErrorCode::InvalidConductance,
                    "Assumption E violated: weight(" + points.id(i) + "," + points.id(j) +
                        ") must be finite and nonnegative");
      }
      if (w != weights(j, i)) {
        throw Error(ErrorCode::AsymmetricConductance,
                    "weight(" + points.id(i) + "," + points.id(j) + ") != weight(" +
                        points.id(j) + "," + points.id(i) + ")");
      }
    }
  }
  DegreeVector degree{weights.rowwise().sum()};
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(degree.c(i) > 0.0) || !std::isfinite(degree.c(i))) {
      throw Error(ErrorCode::ZeroDegreePoint,
                  "Assumption C violated at vertex " + points.id(i));
    }
  }
  return MeasureSpace{std::move(points), Conductance(std::move(weights)), std::move(degree)};
}

}  // namespace

MeasureSpace build_space(const std::vector<std::string>& ids, const Vector& lambda,
                         const std::vector<WeightedEdge>& edges) {
  PointSpace points(ids, lambda);
  const auto n = static_cast<Eigen::Index>(points.size());
  std::map<std::pair<std::size_t, std::size_t>, double> directed;
  for (const auto& e : edges) {
    if (!std::isfinite(e.weight) || e.weight < 0.0) {
      throw Error(ErrorCode::InvalidConductance,
                  "Assumption E violated: weight(" + e.u + "," + e.v + ") must be finite and nonnegative");
    }
    directed[{points.index_of(e.u), points.index_of(e.v)}] += e.weight;
  }
  Matrix weights = Matrix::Zero(n, n);
  for (const auto& [key, w] : directed) {
    const auto [i, j] = key;
    auto reverse = directed.find({j, i});
    if (i != j && reverse != directed.end() && reverse->second != w) {
      throw Error(ErrorCode::AsymmetricConductance,
                  "weight(" + points.id(i) + "," + points.id(j) + ") != weight(" + points.id(j) +
                      "," + points.id(i) + ")");
    }
    weights(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = w;
    weights(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = w;
  }
  return finish(std::move(points), std::move(weights));
}

MeasureSpace build_space(const std::vector<std::string>& ids, const Vector& lambda,
                         const Matrix& weights) {
  PointSpace points(ids, lambda);
  if (weights.rows() != static_cast<Eigen::Index>(points.size()) || weights.cols() != weights.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "weight matrix shape does not match the point set");
  }
  return finish(std::move(points), weights);
}

namespace {

void require_size(const MeasureSpace& space, const Vector& f) {
  if (static_cast<std::size_t>(f.size()) != space.size()) {
    throw Error(ErrorCode::DimensionMismatch, "function has " + std::to_string(f.size()) +
                                                  " values, space has " + std::to_string(space.size()));
  }
}

}  // namespace

Vector laplacian_apply(const MeasureSpace& space, const Vector& f) {
  require_size(space, f);
  const Matrix& w = space.conductance.matrix();
  Vector out(f.size());
  for (Eigen::Index x = 0; x < f.size(); ++x) {
    double acc = 0.0;
    for (Eigen::Index y = 0; y < f.size(); ++y) acc += w(x, y) * (f(x) - f(y));
    out(x) = acc;
  }
  return out;
}

Vector markov_apply(const MeasureSpace& space, const Vector& f) {
  require_size(space, f);
  Vector out = space.conductance.matrix() * f;
  return out.cwiseQuotient(space.degree.c);
}

Vector nu_measure(const MeasureSpace& space) {
  return space.degree.c.cwiseProduct(space.points.lambda());
}

double energy_inner(const MeasureSpace& space, const Vector& f, const Vector& g) {
  require_size(space, f);
  require_size(space, g);
  const Matrix& w = space.conductance.matrix();
  double acc = 0.0;
  for (Eigen::Index x = 0; x < f.size(); ++x)
    for (Eigen::Index y = 0; y < f.size(); ++y) acc += w(x, y) * (f(x) - f(y)) * (g(x) - g(y));
  return 0.5 * acc;
}

OperatorMatrix transfer_operator(const MeasureSpace& space) {
  return {space.conductance.matrix(), OperatorKind::Transfer};
}

OperatorMatrix markov_operator(const MeasureSpace& space) {
  Matrix p = space.degree.c.cwiseInverse().asDiagonal() * space.conductance.matrix();
  return {std::move(p), OperatorKind::Markov};
}

OperatorMatrix laplacian_operator(const MeasureSpace& space) {
  Matrix l = -space.conductance.matrix();
  l.diagonal() += space.degree.c;
  return {std::move(l), OperatorKind::Laplacian};
}

OperatorMatrix normalized_laplacian_operator(const MeasureSpace& space) {
  const auto n = static_cast<Eigen::Index>(space.size());
  Matrix l = Matrix::Identity(n, n) - markov_operator(space).entries;
  return {std::move(l), OperatorKind::NormalizedLaplacian};
}

OperatorMatrix laplacian_operator(const MeasureSpace& space, LaplacianKind kind) {
  return kind == LaplacianKind::Combinatorial ? laplacian_operator(space)
                                              : normalized_laplacian_operator(space);
}

Matrix energy_matrix(const MeasureSpace& space) { return laplacian_operator(space).entries; }

Vector default_measure(const MeasureSpace& space, LaplacianKind kind) {
  return kind == LaplacianKind::Combinatorial ? Vector(space.points.lambda()) : nu_measure(space);
}

Vector self_adjoint_measure(const MeasureSpace& space, LaplacianKind kind) {
  return kind == LaplacianKind::Combinatorial
             ? Vector(Vector::Ones(static_cast<Eigen::Index>(space.size())))
             : Vector(space.degree.c);
}

bool is_connected(const MeasureSpace& space) {
  const auto n = static_cast<Eigen::Index>(space.size());
  if (n == 0) return true;
  const Matrix& w = space.conductance.matrix();
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  std::queue<Eigen::Index> frontier;
  frontier.push(0);
  seen[0] = true;
  Eigen::Index count = 1;
  while (!frontier.empty()) {
    const Eigen::Index x = frontier.front();
    frontier.pop();
    for (Eigen::Index y = 0; y < n; ++y) {
      if (y != x && w(x, y) > 0.0 && !seen[static_cast<std::size_t>(y)]) {
        seen[static_cast<std::size_t>(y)] = true;
        ++count;
        frontier.push(y);
      }
    }
  }
  return count == n;
}

Matrix graph_distances(const MeasureSpace& space) {
  const auto n = static_cast<Eigen::Index>(space.size());
  const double inf = std::numeric_limits<double>::infinity();
  const Matrix& w = space.conductance.matrix();
  Matrix d = Matrix::Constant(n, n, inf);
  for (Eigen::Index x = 0; x < n; ++x) {
    d(x, x) = 0.0;
    for (Eigen::Index y = 0; y < n; ++y)
      if (y != x && w(x, y) > 0.0) d(x, y) = 1.0 / w(x, y);
  }
  // Floyd-Warshall; dense n is small by design.
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        if (d(i, k) + d(k, j) < d(i, j)) d(i, j) = d(i, k) + d(k, j);
  return d;
}

MeasureSpace with_measure(const MeasureSpace& space, const Vector& lambda) {
  return build_space(space.points.ids(), lambda, space.conductance.matrix());
}

std::string_view to_string(LaplacianKind kind) noexcept {
  return kind == LaplacianKind::Combinatorial ? "combinatorial" : "normalized";
}

}  // namespace heatkernel
