// SPDX-FileCopyrightText: Copyright (c) 2026 The heatkernel Authors
// SPDX-License-Identifier: Apache-2.0

#include "heatkernel/neumann_engine.hpp"

#include "heatkernel/error.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

namespace heatkernel {

int neumann_terms(const Envelope& envelope, double t, double tol, int max_terms, double* bound) {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "Neumann tolerance must be positive");
  for (int terms = 1; terms <= max_terms; ++terms) {
    const double tail = neumann_tail_bound(envelope.c, envelope.norm1, envelope.k, terms, t);
    if (tail < tol) {
      if (bound) *bound = tail;
      return terms;
    }
  }
  throw Error(ErrorCode::NoConvergenceBudget,
              "Neumann tail still above " + std::to_string(tol) + " after " + std::to_string(max_terms) + " terms");
}

namespace {

bool vanishes(const Envelope& env) { return env.c == 0.0 && env.norm1 == 0.0; }

/// Samples of sum_{l=1}^{terms} (-1)^l f^{*l} at the grid nodes.
std::vector<Matrix> series_samples(FoldCache& cache, int terms) {
  const auto& nodes = cache.grid()->nodes();
  const Eigen::Index n = cache.base().size();
  std::vector<Matrix> out(nodes.size(), Matrix::Zero(n, n));
  for (std::size_t j = 0; j < nodes.size(); ++j) out[j] -= cache.base().at(nodes[j]);
  for (int ell = 2; ell <= terms; ++ell) {
    const TimeKernel fold = cache.fold(ell);
    const auto& values = *fold.samples()->values;
    const double sign = (ell % 2 == 0) ? 1.0 : -1.0;
    for (std::size_t j = 0; j < nodes.size(); ++j) out[j] += sign * values[j];
  }
  return out;
}

}  // namespace

NeumannSum neumann_series(const TimeKernel& f, double t, double tol, int max_terms, const QuadratureConfig& config) {
  config.validate();
  NeumannSum out;
  out.value = Matrix::Zero(f.size(), f.size());
  if (t == 0.0) {
    out.terms = 1;
    return out;
  }
  const Envelope env = compute_envelope(f, 0, t);
  out.terms = neumann_terms(env, t, tol, max_terms, &out.bound);
  if (vanishes(env)) return out;
  FoldCache cache(f, std::make_shared<const ChebyshevGrid>(config.cheb_degree, t), config);
  out.value = -f.at(t);
  for (int ell = 2; ell <= out.terms; ++ell) out.value += ((ell % 2 == 0) ? 1.0 : -1.0) * cache.evaluate(ell, t);
  return out;
}

namespace detail {

struct SemigroupEvaluator {
  TimeKernel window;
  double tau = 0.0;
  Matrix step;  // M K(tau)

  std::mutex mutex;
  std::vector<Matrix> powers;  // step^(2^i)

  Matrix step_power(long long j) {
    const Eigen::Index n = step.rows();
    Matrix out = Matrix::Identity(n, n);
    std::lock_guard<std::mutex> lock(mutex);
    if (powers.empty()) powers.push_back(step);
    for (std::size_t bit = 0; j > 0; ++bit, j >>= 1) {
      while (powers.size() <= bit) powers.push_back(powers.back() * powers.back());
      if (j & 1) out = out * powers[bit];
    }
    return out;
  }

  // t = j tau + r with 0 <= r < tau; nodes inside the window stay exact.
  std::pair<long long, double> split(double t) const {
    if (t <= tau * (1.0 + 1e-12)) return {0, std::min(t, tau)};
    auto j = static_cast<long long>(std::floor(t / tau));
    double r = t - static_cast<double>(j) * tau;
    if (r < 0.0) {
      --j;
      r += tau;
    }
    return {j, std::min(r, tau)};
  }

  Matrix value(double t) {
    if (!(t >= 0.0)) throw Error(ErrorCode::InvalidArgument, "heat kernel time must be >= 0");
    const auto [j, r] = split(t);
    if (j == 0) return window.at(r);
    return window.at(r) * step_power(j);
  }

  Matrix derivative(double t) {
    if (!(t >= 0.0)) throw Error(ErrorCode::InvalidArgument, "heat kernel time must be >= 0");
    const auto [j, r] = split(t);
    if (j == 0) return window.derivative_at(r);
    return window.derivative_at(r) * step_power(j);
  }
};

}  // namespace detail

Matrix HeatKernelResult::evaluate(double t) const {
  if (!evaluator_) throw Error(ErrorCode::InvalidArgument, "heat kernel result is empty");
  return evaluator_->value(t);
}

Matrix HeatKernelResult::derivative(double t) const {
  if (!evaluator_) throw Error(ErrorCode::InvalidArgument, "heat kernel result is empty");
  return evaluator_->derivative(t);
}

const TimeKernel& HeatKernelResult::window_kernel() const {
  if (!evaluator_) throw Error(ErrorCode::InvalidArgument, "heat kernel result is empty");
  return evaluator_->window;
}

HeatKernelResult build_heat_kernel(const Parametrix& parametrix, double horizon, const NeumannConfig& config) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw Error(ErrorCode::InvalidArgument, "time horizon must be positive and finite");
  }
  if (!(config.tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "neumann.tol must be positive");
  if (config.max_terms < 1) throw Error(ErrorCode::InvalidArgument, "neumann.max_terms must be >= 1");
  config.quad.validate();

  const ParametrixReport report = validate(parametrix, config.validation_tol);
  if (!report.passed && !config.allow_unvalidated) {
    throw Error(ErrorCode::InvalidParametrix, to_string(parametrix.family) + " parametrix rejected: " + report.reason);
  }

  const TimeKernel& h = parametrix.H;
  const TimeKernel& f = parametrix.heat_image;
  const Pairing& pairing = h.pairing();
  const Eigen::Index n = h.size();
  const double span = std::min({horizon, h.horizon(), f.horizon()});

  // Window: halve until tau * max(norm1, ||Delta||_inf) <= theta.
  const double lap_norm =
      parametrix.laplacian.size() == 0 ? 0.0 : parametrix.laplacian.cwiseAbs().rowwise().sum().maxCoeff();
  const Envelope coarse = compute_envelope(f, parametrix.order_k, span);
  double tau = span;
  int doublings = 0;
  while (tau * std::max(coarse.norm1, lap_norm) > config.window_theta && doublings < 60) {
    tau *= 0.5;
    ++doublings;
  }
  if (span < horizon) {
    throw Error(ErrorCode::HorizonExceeded, "parametrix is only defined up to t = " + std::to_string(span));
  }
  const Envelope env = compute_envelope(f, parametrix.order_k, tau);
  double tail = 0.0;
  const int terms = neumann_terms(env, tau, config.tol, config.max_terms, &tail);

  auto grid = std::make_shared<const ChebyshevGrid>(config.quad.cheb_degree, tau);
  // Imported kernels are expensive to evaluate; their smooth H and f are
  // resampled on the window grid once.
  const bool resample = parametrix.family == ParametrixFamily::Imported;
  const TimeKernel h_window = resample ? TimeKernel::sample(h, grid) : h;
  const TimeKernel f_window = resample ? TimeKernel::sample(f, grid) : f;

  std::vector<Matrix> k_values;
  k_values.reserve(grid->nodes().size());
  if (vanishes(env)) {
    for (double t : grid->nodes()) k_values.push_back(h_window.at(t));
  } else {
    FoldCache cache(f_window, grid, config.quad);
    const TimeKernel series = TimeKernel::sampled(grid, series_samples(cache, terms), pairing);
    for (double t : grid->nodes()) k_values.push_back(h_window.at(t) + convolve(h_window, series, t, config.quad));
  }

  double h_norm = 0.0;
  for (double t : grid->nodes()) h_norm = std::max(h_norm, row_l1_norm(h_window.at(t), pairing));

  auto evaluator = std::make_shared<detail::SemigroupEvaluator>();
  evaluator->window = TimeKernel::sampled(grid, std::move(k_values), pairing);
  evaluator->tau = tau;
  evaluator->step = pairing.apply_left(evaluator->window.at(tau));

  HeatKernelResult result;
  result.K = TimeKernel::closed_form(
      horizon, pairing, n, [evaluator](double t) { return evaluator->value(t); },
      [evaluator](double t) { return evaluator->derivative(t); });
  result.terms_used = terms;
  result.truncation_bound = tail;
  result.propagated_bound = std::ldexp(1.0, doublings) * tau * h_norm * tail;
  result.quadrature_allowance = terms * config.quad.target_tol;
  result.parametrix_family = parametrix.family;
  result.kind = parametrix.kind;
  result.laplacian = parametrix.laplacian;
  result.ids = parametrix.ids;
  result.conductance = parametrix.conductance;
  result.window = tau;
  result.doublings = doublings;
  result.envelope = env;
  result.validation = report;
  result.evaluator_ = std::move(evaluator);
  return result;
}

double heat_residual(const TimeKernel& k, const Matrix& laplacian, int grid_degree) {
  std::vector<double> times;
  if (const auto* s = k.samples()) {
    times = s->grid->nodes();
  } else {
    times = ChebyshevGrid(grid_degree, std::isfinite(k.horizon()) ? k.horizon() : 1.0).nodes();
  }
  double worst = 0.0;
  for (double t : times) worst = std::max(worst, sup_norm(k.derivative_at(t) + laplacian * k.at(t)));
  return worst;
}

HeatKernelResult cross_parametrix_build(const HeatKernelResult& previous, const MeasureSpace& space,
                                        const NeumannConfig& config) {
  if (previous.ids != space.points.ids()) {
    throw Error(ErrorCode::SpaceMismatch, "cross build needs the same ordered point set");
  }
  const Matrix& old_w = previous.conductance;
  const Matrix& new_w = space.conductance.matrix();
  for (Eigen::Index i = 0; i < new_w.rows(); ++i)
    for (Eigen::Index j = 0; j < new_w.cols(); ++j)
      if (i != j && ((old_w(i, j) > 0.0) != (new_w(i, j) > 0.0))) {
        throw Error(ErrorCode::SpaceMismatch, "cross build needs the same conductance support");
      }
  const Parametrix imported = imported_parametrix(space, previous.K, previous.kind);
  return build_heat_kernel(imported, previous.horizon(), config);
}

}  // namespace heatkernel
