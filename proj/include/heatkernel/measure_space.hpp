// SPDX-FileCopyrightText: Copyright (c) 2026 The heatkernel Authors
// SPDX-License-Identifier: Apache-2.0

// Finite measure spaces (X, lambda) with a symmetric conductance and the
// operators they induce: transfer R, Markov P, Laplacian and normalized
// Laplacian.

#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace heatkernel {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Ordered point identifiers with a strictly positive base measure.
class PointSpace {
 public:
  PointSpace() = default;
  PointSpace(std::vector<std::string> ids, Vector lambda);

  std::size_t size() const noexcept { return ids_.size(); }
  const std::vector<std::string>& ids() const noexcept { return ids_; }
  const std::string& id(std::size_t i) const { return ids_.at(i); }
  const Vector& lambda() const noexcept { return lambda_; }

  /// Index of `id`, throws UnknownPoint.
  std::size_t index_of(const std::string& id) const;
  bool contains(const std::string& id) const { return index_.count(id) != 0; }

 private:
  std::vector<std::string> ids_;
  Vector lambda_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Symmetric nonnegative pair weights rho({x} x {y}), self-pairs included.
class Conductance {
 public:
  Conductance() = default;
  explicit Conductance(Matrix weights);

  double weight(std::size_t x, std::size_t y) const { return weights_(x, y); }
  const Matrix& matrix() const noexcept { return weights_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(weights_.rows()); }

 private:
  Matrix weights_;
};

/// c(x) = sum_y weight(x, y).
struct DegreeVector {
  Vector c;
};

struct WeightedEdge {
  std::string u;
  std::string v;
  double weight = 0.0;
};

/// The triple produced by build_space.
struct MeasureSpace {
  PointSpace points;
  Conductance conductance;
  DegreeVector degree;

  std::size_t size() const noexcept { return points.size(); }
};

enum class OperatorKind { Transfer, Markov, Laplacian, NormalizedLaplacian };

struct OperatorMatrix {
  Matrix entries;
  OperatorKind kind = OperatorKind::Laplacian;
};

enum class LaplacianKind { Combinatorial, Normalized };

/// Builds and validates a measure space.
///
/// Each edge sets the weight of an ordered pair; an unordered pair may be
/// listed once or in both orientations with equal weights. Repeated entries
/// for the same orientation accumulate. Self-loops count toward c(x) but are
/// invisible to the Laplacian.
///
/// Errors: DuplicatePoint, UnknownPoint, NonpositiveMeasure,
/// InvalidConductance, AsymmetricConductance, ZeroDegreePoint.
MeasureSpace build_space(const std::vector<std::string>& points, const Vector& lambda,
                         const std::vector<WeightedEdge>& edges);

/// Same checks, starting from a dense weight matrix.
MeasureSpace build_space(const std::vector<std::string>& points, const Vector& lambda,
                         const Matrix& weights);

/// (Delta f)(x) = sum_y w(x,y) (f(x) - f(y)).
Vector laplacian_apply(const MeasureSpace& space, const Vector& f);

/// (P f)(x) = (1/c(x)) sum_y w(x,y) f(y).
Vector markov_apply(const MeasureSpace& space, const Vector& f);

/// nu({x}) = c(x) lambda({x}).
Vector nu_measure(const MeasureSpace& space);

/// (1/2) sum_x sum_y w(x,y) (f(x)-f(y)) (g(x)-g(y)).
double energy_inner(const MeasureSpace& space, const Vector& f, const Vector& g);

OperatorMatrix transfer_operator(const MeasureSpace& space);
OperatorMatrix markov_operator(const MeasureSpace& space);
OperatorMatrix laplacian_operator(const MeasureSpace& space);
OperatorMatrix normalized_laplacian_operator(const MeasureSpace& space);
OperatorMatrix laplacian_operator(const MeasureSpace& space, LaplacianKind kind);

/// Gram matrix of the energy pairing, <f,g>_E = f^T E g.
Matrix energy_matrix(const MeasureSpace& space);

/// Convolution measure used by default: lambda for Delta, nu for the
/// normalized Laplacian.
Vector default_measure(const MeasureSpace& space, LaplacianKind kind);

/// Measure in which the chosen Laplacian matrix is self-adjoint for every
/// lambda: counting for Delta, c for the normalized Laplacian.
Vector self_adjoint_measure(const MeasureSpace& space, LaplacianKind kind);

bool is_connected(const MeasureSpace& space);

/// Weighted shortest-path distances with edge length 1/w. Unreachable pairs
/// are +infinity.
Matrix graph_distances(const MeasureSpace& space);

/// Copy of `space` with a different base measure (same ids and weights).
MeasureSpace with_measure(const MeasureSpace& space, const Vector& lambda);

std::string_view to_string(LaplacianKind kind) noexcept;

}  // namespace heatkernel
