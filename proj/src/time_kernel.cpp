// SPDX-FileCopyrightText: Copyright (c) 2026 The heatkernel Authors
// SPDX-License-Identifier: Apache-2.0

#include "heatkernel/time_kernel.hpp"

#include "heatkernel/error.hpp"

#include <cmath>
#include <limits>
#include <utility>

namespace heatkernel {

// ---- Pairing ----------------------------------------------------------------

Pairing Pairing::diagonal(Vector weights) {
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    if (!(weights(i) > 0.0) || !std::isfinite(weights(i))) {
      throw Error(ErrorCode::NonpositiveMeasure, "convolution measure weights must be positive");
    }
  }
  Pairing p;
  p.diagonal_ = true;
  p.weights_ = std::move(weights);
  return p;
}

Pairing Pairing::dense(Matrix metric) {
  if (metric.rows() != metric.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "pairing metric must be square");
  }
  Pairing p;
  p.diagonal_ = false;
  p.metric_ = std::move(metric);
  return p;
}

const Vector& Pairing::weights() const {
  if (!diagonal_) throw Error(ErrorCode::InvalidArgument, "dense pairing has no diagonal weights");
  return weights_;
}

Matrix Pairing::metric() const {
  if (diagonal_) return weights_.asDiagonal();
  return metric_;
}

Matrix Pairing::apply_right(const Matrix& a) const {
  if (diagonal_) return a * weights_.asDiagonal();
  return a * metric_;
}

Matrix Pairing::apply_left(const Matrix& a) const {
  if (diagonal_) return weights_.asDiagonal() * a;
  return metric_ * a;
}

Matrix Pairing::identity_kernel() const {
  if (diagonal_) return weights_.cwiseInverse().asDiagonal();
  return metric_.inverse();
}

double Pairing::inner(const Vector& f, const Vector& g) const {
  if (diagonal_) return (f.cwiseProduct(weights_)).dot(g);
  return f.dot(metric_ * g);
}

bool Pairing::operator==(const Pairing& other) const {
  if (size() != other.size()) return false;
  if (diagonal_ && other.diagonal_) return weights_ == other.weights_;
  return metric() == other.metric();
}

// ---- QuadratureConfig -------------------------------------------------------

void QuadratureConfig::validate() const {
  if (nodes_per_panel < 4) throw Error(ErrorCode::ConfigError, "quad.nodes_per_panel must be >= 4");
  if (cheb_degree < 8) throw Error(ErrorCode::ConfigError, "quad.cheb_degree must be >= 8");
  if (refine_factor != 2) throw Error(ErrorCode::ConfigError, "refine_factor is fixed at 2");
  if (!(target_tol > 0.0)) throw Error(ErrorCode::ConfigError, "quad target_tol must be positive");
}

QuadratureConfig QuadratureConfig::refined() const {
  QuadratureConfig out = *this;
  out.nodes_per_panel *= refine_factor;
  out.cheb_degree *= refine_factor;
  return out;
}

// ---- TimeKernel -------------------------------------------------------------

TimeKernel TimeKernel::closed_form(double horizon, Pairing pairing, Eigen::Index n, Evaluator value,
                                   Evaluator derivative) {
  if (!(horizon > 0.0)) throw Error(ErrorCode::InvalidArgument, "kernel horizon must be positive");
  if (pairing.size() != n) throw Error(ErrorCode::DimensionMismatch, "pairing size differs from kernel size");
  TimeKernel k;
  k.horizon_ = horizon;
  k.pairing_ = std::move(pairing);
  k.n_ = n;
  k.form_ = ClosedForm{std::move(value), std::move(derivative)};
  return k;
}

TimeKernel TimeKernel::constant(const Matrix& value, double horizon, Pairing pairing) {
  const Eigen::Index n = value.rows();
  return closed_form(
      horizon, std::move(pairing), n, [value](double) { return value; },
      [n](double) { return Matrix(Matrix::Zero(n, n)); });
}

TimeKernel TimeKernel::zero(Eigen::Index n, double horizon, Pairing pairing) {
  return constant(Matrix::Zero(n, n), horizon, std::move(pairing));
}

TimeKernel TimeKernel::sampled(std::shared_ptr<const ChebyshevGrid> grid, std::vector<Matrix> values,
                               Pairing pairing) {
  if (values.size() != grid->nodes().size()) {
    throw Error(ErrorCode::DimensionMismatch, "one sample per Chebyshev node required");
  }
  const Eigen::Index n = values.front().rows();
  for (const Matrix& v : values) {
    if (!v.allFinite()) throw Error(ErrorCode::InvalidArgument, "sampled kernel values must be finite");
  }
  const Eigen::MatrixXd& d = grid->differentiation();
  std::vector<Matrix> derivs(values.size(), Matrix::Zero(n, n));
  for (std::size_t i = 0; i < values.size(); ++i)
    for (std::size_t j = 0; j < values.size(); ++j)
      derivs[i] += d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * values[j];

  TimeKernel k;
  k.horizon_ = grid->length();
  k.n_ = n;
  if (pairing.size() != n) throw Error(ErrorCode::DimensionMismatch, "pairing size differs from kernel size");
  k.pairing_ = std::move(pairing);
  k.form_ = ChebSampled{std::move(grid), std::make_shared<const std::vector<Matrix>>(std::move(values)),
                        std::make_shared<const std::vector<Matrix>>(std::move(derivs))};
  return k;
}

TimeKernel TimeKernel::sample(const TimeKernel& source, std::shared_ptr<const ChebyshevGrid> grid) {
  std::vector<Matrix> values;
  values.reserve(grid->nodes().size());
  for (double t : grid->nodes()) values.push_back(source.at(t));
  return sampled(std::move(grid), std::move(values), source.pairing());
}

TimeKernel TimeKernel::linear_combination(double a, const TimeKernel& k1, double b, const TimeKernel& k2) {
  if (k1.size() != k2.size() || !(k1.pairing() == k2.pairing())) {
    throw Error(ErrorCode::SpaceMismatch, "linear combination of kernels on different spaces");
  }
  Evaluator deriv;
  if (k1.has_derivative() && k2.has_derivative()) {
    deriv = [a, k1, b, k2](double t) { return Matrix(a * k1.derivative_at(t) + b * k2.derivative_at(t)); };
  }
  return closed_form(
      std::min(k1.horizon(), k2.horizon()), k1.pairing(), k1.size(),
      [a, k1, b, k2](double t) { return Matrix(a * k1.at(t) + b * k2.at(t)); }, std::move(deriv));
}

bool TimeKernel::has_derivative() const {
  if (const auto* c = std::get_if<ClosedForm>(&form_)) return static_cast<bool>(c->derivative);
  return true;
}

void TimeKernel::check_time(double t) const {
  const double slack = std::isfinite(horizon_) ? 1e-12 * horizon_ : 0.0;
  if (!(t >= 0.0) || t > horizon_ + slack) {
    throw Error(ErrorCode::HorizonExceeded,
                "t = " + std::to_string(t) + " outside [0, " + std::to_string(horizon_) + "]");
  }
}

namespace {

Matrix interpolate(const ChebyshevGrid& grid, const std::vector<Matrix>& values, double t) {
  const std::vector<double> w = grid.interpolation_weights(std::min(t, grid.length()));
  Matrix out = Matrix::Zero(values.front().rows(), values.front().cols());
  for (std::size_t j = 0; j < w.size(); ++j)
    if (w[j] != 0.0) out += w[j] * values[j];
  return out;
}

}  // namespace

Matrix TimeKernel::at(double t) const {
  check_time(t);
  if (const auto* c = std::get_if<ClosedForm>(&form_)) return c->value(t);
  const auto& s = std::get<ChebSampled>(form_);
  return interpolate(*s.grid, *s.values, t);
}

Matrix TimeKernel::derivative_at(double t) const {
  check_time(t);
  if (const auto* c = std::get_if<ClosedForm>(&form_)) {
    if (!c->derivative) throw Error(ErrorCode::InvalidArgument, "closed-form kernel has no time derivative");
    return c->derivative(t);
  }
  const auto& s = std::get<ChebSampled>(form_);
  return interpolate(*s.grid, *s.derivatives, t);
}

TimeKernel TimeKernel::restricted(double horizon) const {
  if (!(horizon > 0.0) || horizon > horizon_) {
    throw Error(ErrorCode::HorizonExceeded, "restricted horizon must lie in (0, horizon]");
  }
  TimeKernel out = *this;
  out.horizon_ = horizon;
  return out;
}

// ---- convolution ------------------------------------------------------------

namespace {

void require_compatible(const TimeKernel& f1, const TimeKernel& f2) {
  if (f1.size() != f2.size() || !(f1.pairing() == f2.pairing())) {
    throw Error(ErrorCode::SpaceMismatch, "convolved kernels live on different spaces or measures");
  }
}

void require_time(const TimeKernel& f1, const TimeKernel& f2, double t) {
  const double horizon = std::min(f1.horizon(), f2.horizon());
  const double slack = std::isfinite(horizon) ? 1e-12 * horizon : 0.0;
  if (!(t >= 0.0) || t > horizon + slack) {
    throw Error(ErrorCode::HorizonExceeded,
                "convolution time " + std::to_string(t) + " outside [0, " + std::to_string(horizon) + "]");
  }
}

template <typename Pair>
Matrix integrate_panels(double t, int order, Eigen::Index n, const Pair& integrand) {
  Matrix acc = Matrix::Zero(n, n);
  if (t == 0.0) return acc;
  const double mid = 0.5 * t;
  for (const auto& [a, b] : {std::pair{0.0, mid}, std::pair{mid, t}}) {
    const QuadratureRule rule = gauss_legendre(order, a, b);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) acc += rule.weights[i] * integrand(rule.nodes[i]);
  }
  return acc;
}

}  // namespace

Matrix convolve(const TimeKernel& f1, const TimeKernel& f2, double t, const QuadratureConfig& config,
                ConvolutionOrder order) {
  require_compatible(f1, f2);
  require_time(f1, f2, t);
  const Pairing& pairing = f1.pairing();
  if (order == ConvolutionOrder::Standard) {
    return integrate_panels(t, config.nodes_per_panel, f1.size(), [&](double s) {
      return Matrix(pairing.apply_right(f1.at(std::max(t - s, 0.0))) * f2.at(s));
    });
  }
  return integrate_panels(t, config.nodes_per_panel, f1.size(), [&](double s) {
    return Matrix(pairing.apply_right(f1.at(s)) * f2.at(std::max(t - s, 0.0)));
  });
}

FoldCache::FoldCache(TimeKernel f, std::shared_ptr<const ChebyshevGrid> grid, QuadratureConfig config)
    : f_(std::move(f)), grid_(std::move(grid)), config_(config) {
  if (grid_->length() > f_.horizon() * (1.0 + 1e-12)) {
    throw Error(ErrorCode::HorizonExceeded, "fold grid extends beyond the kernel horizon");
  }
}

TimeKernel FoldCache::fold(int ell) {
  if (ell < 1) throw Error(ErrorCode::InvalidArgument, "fold index must be >= 1");
  if (ell == 1) return f_;
  std::lock_guard<std::mutex> lock(mutex_);
  while (static_cast<int>(folds_.size()) < ell - 1) {
    const TimeKernel previous = folds_.empty() ? f_ : folds_.back();
    std::vector<Matrix> values;
    values.reserve(grid_->nodes().size());
    for (double t : grid_->nodes()) values.push_back(convolve(f_, previous, t, config_));
    folds_.push_back(TimeKernel::sampled(grid_, std::move(values), f_.pairing()));
  }
  return folds_[static_cast<std::size_t>(ell - 2)];
}

Matrix FoldCache::evaluate(int ell, double t) {
  if (ell < 1) throw Error(ErrorCode::InvalidArgument, "fold index must be >= 1");
  if (ell == 1) return f_.at(t);
  const TimeKernel previous = fold(ell - 1);
  return convolve(f_, previous, t, config_);
}

Matrix ell_fold(const TimeKernel& f, int ell, double t, const QuadratureConfig& config) {
  if (ell < 1) throw Error(ErrorCode::InvalidArgument, "fold index must be >= 1");
  if (ell == 1) return f.at(t);
  const double length = std::isfinite(f.horizon()) ? f.horizon() : std::max(t, 1e-300);
  if (t > length * (1.0 + 1e-12)) {
    throw Error(ErrorCode::HorizonExceeded, "fold time beyond the kernel horizon");
  }
  if (t == 0.0) return Matrix::Zero(f.size(), f.size());
  FoldCache cache(f, std::make_shared<const ChebyshevGrid>(config.cheb_degree, length), config);
  return cache.evaluate(ell, t);
}

double bound_ell_fold(double c, double norm1, int k, int ell, double t) {
  if (ell < 1 || k < 0) throw Error(ErrorCode::InvalidArgument, "bound needs ell >= 1 and k >= 0");
  if (c == 0.0) return 0.0;
  const int power = k + ell - 1;
  if (norm1 == 0.0 && ell > 1) return 0.0;
  if (t == 0.0 && power > 0) return 0.0;
  double log_value = std::log(c) - std::lgamma(static_cast<double>(power) + 1.0);
  if (ell > 1) log_value += (ell - 1) * std::log(norm1);
  if (power > 0) log_value += power * std::log(t);
  return std::exp(log_value);
}

double neumann_tail_bound(double c, double norm1, int k, int terms, double t) {
  if (terms < 0) throw Error(ErrorCode::InvalidArgument, "term count must be >= 0");
  double term = bound_ell_fold(c, norm1, k, terms + 1, t);
  if (term == 0.0) return 0.0;
  double total = 0.0;
  const double x = norm1 * t;
  for (int ell = terms + 1; ell < terms + 100000; ++ell) {
    total += term;
    // term_{l+1} / term_l = norm1 t / (k + l)
    const double ratio = x / static_cast<double>(k + ell);
    if (ratio < 0.5) {
      const double rest = term * ratio / (1.0 - ratio);
      if (rest <= 1e-17 * total || rest == 0.0) return total + rest;
    }
    term *= ratio;
  }
  return total;
}

// ---- Hilbert convolution ----------------------------------------------------

Pairing inner_product_pairing(const MeasureSpace& space, InnerProduct inner) {
  switch (inner) {
    case InnerProduct::L2Lambda: return Pairing::diagonal(space.points.lambda());
    case InnerProduct::L2Nu: return Pairing::diagonal(nu_measure(space));
    case InnerProduct::Energy: return Pairing::dense(energy_matrix(space));
  }
  throw Error(ErrorCode::InvalidArgument, "unknown inner product");
}

namespace {

void require_mean_zero(const Matrix& rows_as_functions, const Vector& lambda, const char* what) {
  const double mass = lambda.sum();
  for (Eigen::Index r = 0; r < rows_as_functions.rows(); ++r) {
    const auto f = rows_as_functions.row(r);
    const double scale = std::max(1.0, f.cwiseAbs().maxCoeff());
    const double mean = f.dot(lambda) / mass;
    if (std::abs(mean) > 1e-9 * scale) {
      throw Error(ErrorCode::DegenerateInnerProduct,
                  std::string("energy pairing needs lambda-mean-zero ") + what +
                      "; constant component " + std::to_string(mean));
    }
  }
}

}  // namespace

Matrix convolve_hilbert(const TimeKernel& f1, const TimeKernel& f2, double t, InnerProduct inner,
                        const MeasureSpace& space, const QuadratureConfig& config) {
  const auto n = static_cast<Eigen::Index>(space.size());
  if (f1.size() != n || f2.size() != n) throw Error(ErrorCode::SpaceMismatch, "kernel size differs from space");
  require_time(f1, f2, t);
  const Pairing pairing = inner_product_pairing(space, inner);
  const bool energy = inner == InnerProduct::Energy;
  const Vector& lambda = space.points.lambda();
  return integrate_panels(t, config.nodes_per_panel, n, [&](double s) {
    const Matrix a = f1.at(std::max(t - s, 0.0));
    const Matrix b = f2.at(s);
    if (energy) {
      require_mean_zero(a, lambda, "rows of F1");
      require_mean_zero(b.transpose(), lambda, "columns of F2");
    }
    return Matrix(pairing.apply_right(a) * b);
  });
}

double row_l1_norm(const Matrix& f, const Pairing& pairing) {
  if (f.size() == 0) return 0.0;
  return pairing.apply_right(f).cwiseAbs().rowwise().sum().maxCoeff();
}

double sup_norm(const Matrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

}  // namespace heatkernel
