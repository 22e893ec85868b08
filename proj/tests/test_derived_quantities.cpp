// SPDX-FileCopyrightText: Copyright (c) 2026 The heatkernel Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "heatkernel/derived_quantities.hpp"
#include "heatkernel/error.hpp"
#include "support.hpp"

#include <cmath>

using namespace heatkernel;
using namespace testing_support;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

SpectralData combinatorial(const MeasureSpace& s) { return laplacian_spectrum(s, LaplacianKind::Combinatorial); }

MeasureSpace single_loop() {
  return build_space({"p"}, Vector::Ones(1), std::vector<WeightedEdge>{{"p", "p", 1}});
}

MeasureSpace two_components() {
  return build_space({"a", "b", "c", "d"}, Vector::Ones(4), std::vector<WeightedEdge>{{"a", "b", 1}, {"c", "d", 1}});
}

}  // namespace

TEST_CASE("Green's function on two points") {
  const MeasureSpace s = two_point();
  const GreenResult g = green_spectral(s, combinatorial(s));
  CHECK(g.G_star(0, 0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(g.G_star(0, 1) == doctest::Approx(-0.25).epsilon(1e-15));
  CHECK(g.method == GreenMethod::Spectral);
}

TEST_CASE("Green's function inverts the Laplacian on mean-zero functions") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto g = oracle::random_connected_graph(3 + seed % 8, seed);
    const MeasureSpace s = from_graph(g);
    const GreenResult gr = green_spectral(s, combinatorial(s));
    const Eigen::Index n = gr.G_star.rows();
    const Vector f = random_vector(n, seed + 40);
    const Vector lhs = laplacian_apply(s, gr.G_star * f);
    const Vector rhs = (f.array() - f.mean()).matrix();
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(max_abs(gr.G_star - gr.G_star.transpose()) < 1e-10);
    CHECK(gr.G_star.colwise().sum().cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("Green's function on a path matches the brute-force pseudoinverse") {
  const MeasureSpace s = path3();
  const GreenResult g = green_spectral(s, combinatorial(s));
  const Matrix ref = to_matrix(oracle::laplacian_pseudoinverse(to_dense(s.conductance.matrix())));
  CHECK(max_abs(g.G_star - ref) < 1e-13);
}

TEST_CASE("Green two-method agreement on random graphs") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const auto g = oracle::random_connected_graph(3 + seed % 8, seed, 0.4, 0.5, 5.0);
    const MeasureSpace s = from_graph(g);
    const SpectralData spec = combinatorial(s);
    const HeatKernelResult k = build_heat_kernel(dirac_parametrix(s), 1.0);
    const GreenResult q = green_quadrature(s, spec, k, 1e-8);
    const GreenResult sp = green_spectral(s, spec);
    CHECK(q.method == GreenMethod::Quadrature);
    CHECK(q.cutoff > 0.0);
    CHECK(max_abs(q.G_star - sp.G_star) <= q.tail_bound + 1e-8);
    CHECK(green_regularized(s, spec, &k).method == GreenMethod::Quadrature);
    CHECK(green_regularized(s, spec).method == GreenMethod::Spectral);
  }
}

TEST_CASE("Green errors") {
  const MeasureSpace s = two_components();
  CHECK(code_of([&] { green_spectral(s, combinatorial(s)); }) == ErrorCode::Disconnected);
  CHECK(code_of([&] { resistance(s); }) == ErrorCode::Disconnected);

  // A bottleneck of weight 2e-9 leaves a gap below the threshold.
  const MeasureSpace weak = build_space({"a", "b", "c", "d"}, Vector::Ones(4),
                                        std::vector<WeightedEdge>{{"a", "b", 1}, {"b", "c", 2e-9}, {"c", "d", 1}});
  const SpectralData spec = combinatorial(weak);
  const HeatKernelResult k = build_heat_kernel(dirac_parametrix(weak), 1.0);
  CHECK(code_of([&] { green_quadrature(weak, spec, k); }) == ErrorCode::TailUncontrolled);
}

TEST_CASE("resolvent examples") {
  const SpectralData two = combinatorial(two_point());
  CHECK(resolvent(two, 1.0)(0, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(max_abs(1e6 * resolvent(two, 1e6) - Matrix::Identity(2, 2)) < 1e-5);
  CHECK(resolvent(combinatorial(single_loop()), 1.0)(0, 0) == doctest::Approx(1.0));
  CHECK(code_of([&] { resolvent(two, 0.0); }) == ErrorCode::NonpositiveShift);
  CHECK(code_of([&] { resolvent(two, -1.0); }) == ErrorCode::NonpositiveShift);
}

TEST_CASE("resolvent identity") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const auto g = oracle::random_connected_graph(3 + seed, seed);
    const MeasureSpace s = from_graph(g, (random_vector(static_cast<Eigen::Index>(3 + seed), seed).array() + 1.5).matrix());
    for (LaplacianKind kind : {LaplacianKind::Combinatorial, LaplacianKind::Normalized}) {
      const SpectralData spec = laplacian_spectrum(s, kind);
      const Matrix a = laplacian_operator(s, kind).entries;
      const Eigen::Index n = a.rows();
      for (double shift : {0.1, 1.0, 10.0}) {
        const Matrix r = resolvent(spec, shift);
        // (A + s) R = identity kernel in the measure m, i.e. D_m^{-1}.
        const Matrix lhs = (a + shift * Matrix::Identity(n, n)) * r;
        CHECK(max_abs(lhs - Matrix(spec.measure.cwiseInverse().asDiagonal())) < 1e-10);
      }
    }
  }
}

TEST_CASE("resistance examples") {
  CHECK(resistance(two_point())(0, 1) == doctest::Approx(1.0).epsilon(1e-14));
  const Matrix r = resistance(path3());
  CHECK(r(0, 2) == doctest::Approx(2.0).epsilon(1e-14));
  for (Eigen::Index i = 0; i < 3; ++i) CHECK(r(i, i) == 0.0);
}

TEST_CASE("resistance is a metric and matches effective resistance") {
  int violations = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const std::size_t n = 2 + seed % 9;
    const auto g = oracle::random_connected_graph(n, seed);
    const Matrix r = resistance(from_graph(g));
    CHECK(max_abs(r - r.transpose()) < 1e-12);
    for (std::size_t x = 0; x < n; ++x) {
      CHECK(r(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(x)) == 0.0);
      for (std::size_t y = 0; y < n; ++y) {
        const double ref = oracle::effective_resistance(g.weights, x, y);
        CHECK(std::abs(r(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) - ref) < 1e-9);
        for (std::size_t z = 0; z < n; ++z) {
          const auto X = static_cast<Eigen::Index>(x);
          const auto Y = static_cast<Eigen::Index>(y);
          const auto Z = static_cast<Eigen::Index>(z);
          if (r(X, Z) > r(X, Y) + r(Y, Z) + 1e-12) ++violations;
        }
      }
    }
  }
  CHECK(violations == 0);
}

TEST_CASE("entropy examples") {
  const HeatKernelResult k = build_heat_kernel(dirac_parametrix(two_point(), LaplacianKind::Normalized), 1.0);
  const double p = (1 + std::exp(-2.0)) / 2;
  const double q = (1 - std::exp(-2.0)) / 2;
  CHECK(entropy(k, 0, 1.0) == doctest::Approx(p * std::log(p) + q * std::log(q)).epsilon(1e-8));
  CHECK(entropy(k, 0, 1.0) == doctest::Approx(-0.6839).epsilon(1e-4));
  CHECK(entropy(k, 0, 20.0) == doctest::Approx(std::log(0.5)).epsilon(1e-12));
  // Concentration as t decreases: |E| shrinks along the grid.
  double previous = std::abs(entropy(k, 0, 1e-1));
  for (double t : {1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
    const double e = std::abs(entropy(k, 0, t));
    CHECK(e < previous);
    previous = e;
  }
  CHECK(previous < 1e-4);
}

TEST_CASE("entropy errors") {
  // Heat kernels of finite graphs always conserve mass, so a leaking slice is
  // supplied directly.
  const Pairing counting = Pairing::diagonal(Vector::Ones(2));
  CHECK(code_of([&] { entropy(Matrix{{0.5, 0.4}, {0.4, 0.5}}, counting, 0); }) ==
        ErrorCode::NotStochasticallyComplete);
  CHECK(entropy(Matrix{{0.5, 0.5}, {0.5, 0.5}}, counting, 1) == doctest::Approx(std::log(0.5)));
  CHECK(code_of([&] { entropy(Matrix::Identity(2, 2), Pairing::dense(Matrix::Identity(2, 2)), 0); }) ==
        ErrorCode::InvalidArgument);
  const HeatKernelResult k = build_heat_kernel(dirac_parametrix(two_point(), LaplacianKind::Normalized), 1.0);
  CHECK(code_of([&] { entropy(k, 0, 0.0); }) == ErrorCode::NonpositiveEntry);
  CHECK(code_of([&] { entropy(k, 5, 1.0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("Poisson kernel examples") {
  const SpectralData two = combinatorial(two_point());
  const PoissonResult p = poisson_kernel(two, nullptr, 1.0);
  CHECK(p.spectral(0, 0) == doctest::Approx((1 + std::exp(-std::sqrt(2.0))) / 2).epsilon(1e-15));
  CHECK(std::abs(p.spectral(0, 0) - 0.621559) < 1e-6);
  CHECK(p.deviation < 1e-6);
  CHECK(max_abs(poisson_kernel(two, nullptr, 1e-4).spectral - Matrix::Identity(2, 2)) < 1e-2);
  CHECK(max_abs(poisson_kernel(two, nullptr, 1e-4).subordination - Matrix::Identity(2, 2)) < 1e-2);
  const SpectralData one = combinatorial(single_loop());
  for (double w : {0.1, 1.0, 5.0}) {
    const PoissonResult r = poisson_kernel(one, nullptr, w);
    CHECK(r.spectral(0, 0) == doctest::Approx(1.0));
    CHECK(r.subordination(0, 0) == doctest::Approx(1.0).epsilon(1e-6));
  }
  CHECK(code_of([&] { poisson_kernel(two, nullptr, 0.0); }) == ErrorCode::NonpositiveTime);
}

TEST_CASE("subordination agrees with the spectral Poisson kernel") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto g = oracle::random_connected_graph(3 + seed, seed, 0.5, 1.0, 3.0);
    const MeasureSpace s = from_graph(g);
    const SpectralData spec = combinatorial(s);
    REQUIRE(spectral_gap(spec) >= 0.1);
    const HeatKernelResult k = build_heat_kernel(dirac_parametrix(s), 1.0);
    for (double w : {0.1, 0.5, 1.0, 2.0, 5.0}) {
      CHECK(poisson_kernel(spec, nullptr, w).deviation < 1e-6);
      CHECK(poisson_kernel(spec, &k, w).deviation < 1e-6);
    }
  }
}

TEST_CASE("diagnostics of the oracle kernel on K3") {
  const MeasureSpace s = complete3();
  const SpectralData spec = combinatorial(s);
  const TimeKernel k = oracle_kernel(spec, Pairing::diagonal(Vector::Ones(3)), 2.0);
  const std::vector<double> grid = {0.0, 0.25, 0.5, 1.0, 1.5, 2.0};
  const HeatDiagnostics d = diagnostics(k, laplacian_operator(s).entries, grid);
  CHECK(d.semigroup_defect < 1e-10);
  CHECK(d.symmetry_defect < 1e-10);
  CHECK(d.mass_drift < 1e-10);
  CHECK(d.heat_residual < 1e-10);
  CHECK(d.min_value >= 0.0);
  CHECK(d.max_mass <= 1.0 + 1e-12);
  CHECK(d.l2_monotone);
}

TEST_CASE("diagnostics of built kernels") {
  const auto g = oracle::random_connected_graph(7, 5);
  const MeasureSpace s = from_graph(g);
  std::vector<double> grid;
  for (int i = 0; i <= 16; ++i) grid.push_back(i / 16.0);

  const HeatKernelResult k = build_heat_kernel(dirac_parametrix(s), 1.0);
  const HeatDiagnostics d = diagnostics(k, grid);
  CHECK(d.semigroup_defect < 1e-6);
  CHECK(d.min_value >= -1e-8);
  CHECK(d.max_mass <= 1.0 + 1e-8);

  const HeatKernelResult kn = build_heat_kernel(dirac_parametrix(s, LaplacianKind::Normalized), 1.0);
  const HeatDiagnostics dn = diagnostics(kn, grid);
  CHECK(std::abs(dn.max_mass - 1.0) < 1e-8);
  CHECK(std::abs(dn.min_mass - 1.0) < 1e-8);
  CHECK(dn.mass_drift < 1e-8);
  CHECK(dn.l2_monotone);
  CHECK(dn.semigroup_defect < 1e-6);
}

TEST_CASE("rebase_kernel changes only the reference measure") {
  const MeasureSpace s = complete3(Vector{{1.0, 2.0, 0.5}});
  const SpectralData spec = combinatorial(s);
  const Pairing lam = Pairing::diagonal(s.points.lambda());
  const Matrix k = spectral_heat(spec, 0.4, lam);
  CHECK(max_abs(rebase_kernel(k, lam, spec.measure) - spectral_heat(spec, 0.4)) < 1e-14);
}
