// SPDX-FileCopyrightText: Copyright (c) 2026 The heatkernel Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "heatkernel/error.hpp"
#include "heatkernel/neumann_engine.hpp"
#include "heatkernel/spectral_oracle.hpp"
#include "support.hpp"

#include <cmath>

using namespace heatkernel;
using namespace testing_support;

namespace {

Matrix to_matrix(const oracle::ExactMatrix& m) {
  const auto n = static_cast<Eigen::Index>(m.size());
  Matrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      out(i, j) = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].to_double();
  return out;
}

MeasureSpace from_int_weights(const std::vector<std::vector<int>>& w) {
  const auto n = static_cast<Eigen::Index>(w.size());
  std::vector<std::string> ids;
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    ids.push_back("p" + std::to_string(i));
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = w[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  return build_space(ids, Vector::Ones(n), m);
}

Matrix oracle_heat(const MeasureSpace& s, LaplacianKind kind, double t, const Pairing& pairing) {
  return spectral_heat(laplacian_spectrum(s, kind), t, pairing);
}

const std::vector<std::vector<std::vector<int>>>& small_integer_graphs() {
  static const std::vector<std::vector<std::vector<int>>> graphs = {
      {{0, 1}, {1, 0}},
      {{0, 1, 1}, {1, 0, 1}, {1, 1, 0}},
      {{0, 2, 0}, {2, 0, 1}, {0, 1, 0}},
      {{0, 1, 0, 3}, {1, 0, 2, 0}, {0, 2, 0, 1}, {3, 0, 1, 0}},
  };
  return graphs;
}

}  // namespace

TEST_CASE("neumann_series of the zero kernel") {
  const TimeKernel z = TimeKernel::zero(3, 1.0, Pairing::diagonal(Vector::Ones(3)));
  const NeumannSum s = neumann_series(z, 0.7, 1e-8);
  CHECK(s.terms == 1);
  CHECK(max_abs(s.value) == 0.0);
  CHECK(s.bound == 0.0);
}

TEST_CASE("single point with a self-loop gives K = 1") {
  const MeasureSpace s = build_space({"p"}, Vector::Ones(1), std::vector<WeightedEdge>{{"p", "p", 1}});
  const HeatKernelResult r = build_heat_kernel(dirac_parametrix(s), 2.0);
  for (double t : {0.0, 0.5, 2.0, 7.0}) CHECK(r.evaluate(t)(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("Dirac folds agree with exact rational arithmetic") {
  // (Delta)^{*l}(t) = t^{l-1}/(l-1)! Delta^l under counting measure.
  for (const auto& w : small_integer_graphs()) {
    const MeasureSpace s = from_int_weights(w);
    const oracle::ExactMatrix lap = oracle::exact_laplacian(w);
    const Parametrix p = dirac_parametrix(s);
    for (int ell = 1; ell <= 6; ++ell) {
      for (auto [tn, td] : {std::pair<int, int>{1, 2}, {3, 4}, {1, 1}}) {
        const Matrix exact = to_matrix(oracle::exact_dirac_fold(lap, ell, tn, td));
        const Matrix computed = ell_fold(p.heat_image.restricted(1.0), ell, static_cast<double>(tn) / td);
        CHECK(max_abs(computed - exact) < 1e-12 * std::max(1.0, max_abs(exact)));
      }
    }
  }
}

TEST_CASE("Dirac partial sums are Taylor polynomials of the exponential") {
  for (const auto& w : small_integer_graphs()) {
    const MeasureSpace s = from_int_weights(w);
    const oracle::ExactMatrix lap = oracle::exact_laplacian(w);
    const Parametrix p = dirac_parametrix(s);
    const TimeKernel f = p.heat_image.restricted(1.0);
    const TimeKernel h = p.H.restricted(1.0);
    FoldCache cache(f, std::make_shared<ChebyshevGrid>(32, 1.0), QuadratureConfig{});
    const double t = 0.5;
    Matrix partial = h.at(t);
    for (int terms = 1; terms <= 6; ++terms) {
      const double sign = terms % 2 == 0 ? 1.0 : -1.0;
      partial += sign * convolve(h, cache.fold(terms), t);
      const Matrix exact = to_matrix(oracle::exact_taylor(lap, terms, 1, 2));
      CHECK(max_abs(partial - exact) < 1e-12 * std::max(1.0, max_abs(exact)));
    }
  }
}

TEST_CASE("neumann_series reproduces -Delta exp(-t Delta) for the Dirac image") {
  const MeasureSpace s = complete3();
  const Parametrix p = dirac_parametrix(s);
  const double t = 0.25;
  const NeumannSum sum = neumann_series(p.heat_image.restricted(1.0), t, 1e-10);
  const Matrix lap = laplacian_operator(s).entries;
  const Matrix expected = -lap * expm_series(lap, t);
  CHECK(max_abs(sum.value - expected) < 1e-9);
  CHECK(sum.bound < 1e-10);
  CHECK(sum.terms > 1);
  // The certificate counts whole terms: one fewer would not meet tol.
  CHECK(neumann_tail_bound(p.envelope.c, p.envelope.norm1, 0, sum.terms - 1, t) >= 1e-10);
}

TEST_CASE("neumann_terms budget") {
  Envelope e;
  e.c = 1.0;
  e.norm1 = 50.0;
  e.t_max = 1.0;
  CHECK_THROWS_AS(neumann_terms(e, 1.0, 1e-12, 8), Error);
  try {
    neumann_terms(e, 1.0, 1e-12, 8);
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::NoConvergenceBudget);
  }
  double bound = 0.0;
  const int l = neumann_terms(e, 0.01, 1e-8, 64, &bound);
  CHECK(bound < 1e-8);
  CHECK(l >= 1);
}

TEST_CASE("two-point build at t = 1") {
  const HeatKernelResult r = build_heat_kernel(dirac_parametrix(two_point()), 1.0);
  const Matrix k = r.K.at(1.0);
  CHECK(k(0, 0) == doctest::Approx((1 + std::exp(-2.0)) / 2).epsilon(1e-8));
  CHECK(k(0, 1) == doctest::Approx((1 - std::exp(-2.0)) / 2).epsilon(1e-8));
  CHECK(std::abs(k(0, 0) - 0.56766764) < 1e-8);
  CHECK(std::abs(k(0, 1) - 0.43233236) < 1e-8);
  CHECK(r.truncation_bound <= 1e-8);
  CHECK(max_abs(r.K.at(0.0) - Matrix::Identity(2, 2)) < 1e-14);
}

TEST_CASE("Dirac limit of built kernels") {
  const MeasureSpace s = from_graph(oracle::random_connected_graph(6, 4), Vector{{1.0, 2.0, 0.5, 1.0, 3.0, 1.0}});
  for (LaplacianKind kind : {LaplacianKind::Combinatorial, LaplacianKind::Normalized}) {
    const HeatKernelResult r = build_heat_kernel(dirac_parametrix(s, kind), 1.0);
    CHECK(max_abs(r.K.at(0.0) - r.pairing().identity_kernel()) < 1e-12);
  }
}

TEST_CASE("K3 at t = 0.5 against the oracle") {
  const MeasureSpace s = complete3();
  const HeatKernelResult r = build_heat_kernel(dirac_parametrix(s), 1.0);
  CHECK(max_abs(r.K.at(0.5) - oracle_heat(s, LaplacianKind::Combinatorial, 0.5, r.pairing())) < 1e-8);
}

TEST_CASE("oracle equivalence on random graphs") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const std::size_t n = 3 + seed % 10;
    const auto g = oracle::random_connected_graph(n, seed);
    const Vector lambda = (random_vector(static_cast<Eigen::Index>(n), seed + 100).array() + 1.5).matrix();
    const MeasureSpace s = from_graph(g, lambda);
    for (LaplacianKind kind : {LaplacianKind::Combinatorial, LaplacianKind::Normalized}) {
      const HeatKernelResult r = build_heat_kernel(dirac_parametrix(s, kind), 5.0);
      for (double t : {0.05, 0.5, 1.0, 5.0}) {
        const Matrix ref = oracle_heat(s, kind, t, r.pairing());
        CHECK(max_abs(r.K.at(t) - ref) < 1e-8);
      }
    }
  }
}

TEST_CASE("other parametrix families build the same kernel") {
  const auto g = oracle::random_connected_graph(6, 21, 0.4, 0.5, 2.0);
  const MeasureSpace s = from_graph(g);
  const Pairing lam = Pairing::diagonal(Vector::Ones(6));
  const std::vector<Parametrix> ps = {
      profile_parametrix(s, ProfileShape::Exponential, 0),
      spectral_parametrix(s, 6),
      rkhs_parametrix(s, Matrix::Identity(6, 6)),
  };
  for (const Parametrix& p : ps) {
    const HeatKernelResult r = build_heat_kernel(p, 2.0);
    for (double t : {0.1, 1.0, 2.0})
      CHECK(max_abs(r.K.at(t) - oracle_heat(s, LaplacianKind::Combinatorial, t, lam)) < 1e-8);
  }
}

TEST_CASE("remainder order K - H") {
  const auto g = oracle::random_connected_graph(5, 13, 0.4, 0.5, 2.0);
  const MeasureSpace s = from_graph(g);
  const std::vector<Parametrix> ps = {
      dirac_parametrix(s),
      profile_parametrix(s, ProfileShape::Exponential, 0),
      rkhs_parametrix(s, Matrix::Identity(5, 5)),
  };
  for (const Parametrix& p : ps) {
    REQUIRE(validate(p).passed);
    const HeatKernelResult r = build_heat_kernel(p, 1.0);
    std::vector<double> times, diffs;
    for (int i = 0; i < 20; ++i) {
      const double t = std::pow(10.0, -3.0 + 2.0 * i / 19.0);
      times.push_back(t);
      diffs.push_back(sup_norm(r.K.at(t) - p.H.at(t)));
    }
    CHECK(loglog_slope(times, diffs) >= p.order_k + 0.9);
  }
}

TEST_CASE("heat_residual examples") {
  const MeasureSpace s = two_point();
  const Matrix lap = laplacian_operator(s).entries;
  const SpectralData spec = laplacian_spectrum(s, LaplacianKind::Combinatorial);
  CHECK(heat_residual(oracle_kernel(spec, Pairing::diagonal(Vector::Ones(2)), 1.0), lap) < 1e-10);
  CHECK(heat_residual(dirac_parametrix(s).H, lap) == doctest::Approx(1.0));
  const HeatKernelResult r = build_heat_kernel(dirac_parametrix(s), 1.0);
  CHECK(heat_residual(r.K, lap) < 1e-6);
}

TEST_CASE("L(H * f) identity") {
  // L_x (H * f) = f + (L_x H) * f for a parametrix with H(0) M = I.
  const auto g = oracle::random_connected_graph(4, 31, 0.5, 0.5, 2.0);
  const MeasureSpace s = from_graph(g, Vector{{1.0, 2.0, 1.5, 0.5}});
  const Matrix gram = Vector{{1.0, 0.5, 2.0 / 3.0, 2.0}}.asDiagonal();
  // The exponential profile has an exp(-d/t) layer at t = 0 that the
  // default 16-node panels resolve only to about 1e-8, so it runs refined.
  const std::vector<std::pair<Parametrix, QuadratureConfig>> cases = {
      {dirac_parametrix(s), QuadratureConfig{}},
      {rkhs_parametrix(s, gram), QuadratureConfig{}},
      {profile_parametrix(s, ProfileShape::Exponential, 0), QuadratureConfig{}.refined()},
  };
  for (const auto& [p, config] : cases) {
    const Matrix lap = p.laplacian;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const Matrix a = to_matrix(oracle::random_connected_graph(4, seed + 50).weights) / 5.0;
      const Matrix b = Matrix(random_vector(4, seed).asDiagonal());
      const TimeKernel f = TimeKernel::closed_form(1.0, p.H.pairing(), 4, [a, b](double t) -> Matrix {
        return a * std::cos(2.0 * t) + b * std::exp(-t);
      });
      const TimeKernel h = p.H.restricted(1.0);
      const TimeKernel img = p.heat_image.restricted(1.0);
      const double t = 0.6;
      const double step = 1e-3;
      auto conv = [&](double u) { return convolve(h, f, u, config); };
      // Fourth-order central difference in t.
      const Matrix dt =
          (-conv(t + 2 * step) + 8.0 * conv(t + step) - 8.0 * conv(t - step) + conv(t - 2 * step)) / (12.0 * step);
      const Matrix lhs = dt + lap * conv(t);
      const Matrix rhs = f.at(t) + convolve(img, f, t, config);
      CHECK(max_abs(lhs - rhs) < 10 * config.target_tol);
    }
  }
}

TEST_CASE("semigroup extension beyond the horizon") {
  const MeasureSpace s = complete3(Vector{{1.0, 2.0, 0.5}});
  const HeatKernelResult r = build_heat_kernel(dirac_parametrix(s), 1.0);
  for (double t : {1.5, 3.0}) CHECK(max_abs(r.evaluate(t) - oracle_heat(s, LaplacianKind::Combinatorial, t, r.pairing())) < 1e-8);
  CHECK_THROWS_AS(r.K.at(1.5), Error);
  const Matrix lap = laplacian_operator(s).entries;
  CHECK(max_abs(r.derivative(0.7) + lap * r.evaluate(0.7)) < 1e-6);
  CHECK(r.window <= 1.0);
  CHECK(r.window * std::max(r.envelope.norm1, lap.cwiseAbs().rowwise().sum().maxCoeff()) <= 1.0 + 1e-12);
}

TEST_CASE("build errors") {
  try {
    build_heat_kernel(spectral_parametrix(two_point(), 1), 1.0);
    FAIL("expected InvalidParametrix");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidParametrix);
  }
  NeumannConfig tight;
  tight.tol = 1e-14;
  tight.max_terms = 2;
  try {
    build_heat_kernel(dirac_parametrix(complete3()), 1.0, tight);
    FAIL("expected NoConvergenceBudget");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoConvergenceBudget);
  }
}

TEST_CASE("cross parametrix builds") {
  SUBCASE("same space is idempotent") {
    const MeasureSpace s = complete3();
    const HeatKernelResult prev = build_heat_kernel(dirac_parametrix(s), 1.0);
    const HeatKernelResult next = cross_parametrix_build(prev, s);
    for (double t : {0.1, 0.5, 1.0}) CHECK(max_abs(next.K.at(t) - prev.K.at(t)) < 1e-8);
  }
  SUBCASE("two-point edge weight 1 to 2") {
    const HeatKernelResult prev = build_heat_kernel(dirac_parametrix(two_point()), 1.0);
    const HeatKernelResult next = cross_parametrix_build(prev, two_point(2.0));
    const Matrix lap2{{2.0, -2.0}, {-2.0, 2.0}};
    for (double t : {0.1, 0.5, 1.0}) CHECK(max_abs(next.K.at(t) - expm_series(lap2, t)) < 1e-8);
  }
  SUBCASE("K3 with perturbed measure") {
    const HeatKernelResult prev = build_heat_kernel(dirac_parametrix(complete3()), 1.0);
    const MeasureSpace s2 = complete3(Vector{{1.0, 1.0, 2.0}});
    const HeatKernelResult next = cross_parametrix_build(prev, s2);
    for (double t : {0.1, 0.5, 1.0})
      CHECK(max_abs(next.K.at(t) - oracle_heat(s2, LaplacianKind::Combinatorial, t, next.pairing())) < 1e-8);
  }
  SUBCASE("different support is rejected") {
    const HeatKernelResult prev = build_heat_kernel(dirac_parametrix(complete3()), 1.0);
    try {
      cross_parametrix_build(prev, path3());
      FAIL("expected SpaceMismatch");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::SpaceMismatch);
    }
  }
}
