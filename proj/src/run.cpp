// SPDX-FileCopyrightText: Copyright (c) 2026 The heatkernel Authors
// SPDX-License-Identifier: Apache-2.0

#include "heatkernel/cli_io.hpp"
#include "heatkernel/derived_quantities.hpp"
#include "heatkernel/error.hpp"
#include "heatkernel/neumann_engine.hpp"
#include "heatkernel/parametrix.hpp"
#include "heatkernel/spectral_oracle.hpp"

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>

namespace heatkernel {

namespace {

using nlohmann::json;

MeasureSpace load_space(const RunConfig& c) {
  if (c.ball_center.empty()) return load_graph(c.edges_file, c.measure_file);
  std::ifstream edges(c.edges_file);
  if (!edges) throw Error(ErrorCode::ParseError, "cannot open '" + c.edges_file + "'");
  if (c.measure_file.empty()) return ball_truncate(edges, c.ball_center, c.ball_radius);
  std::ifstream measure(c.measure_file);
  if (!measure) throw Error(ErrorCode::ParseError, "cannot open '" + c.measure_file + "'");
  return ball_truncate(edges, c.ball_center, c.ball_radius, &measure);
}

NeumannConfig neumann_config(const RunConfig& c) {
  NeumannConfig n;
  n.tol = c.tol;
  n.max_terms = c.max_terms;
  n.quad.cheb_degree = c.cheb_degree;
  n.quad.nodes_per_panel = c.nodes_per_panel;
  return n;
}

Parametrix make_parametrix(const RunConfig& c, const MeasureSpace& space) {
  const std::string& kind = c.parametrix_kind;
  if (kind == "dirac") return dirac_parametrix(space, c.laplacian);
  if (kind == "profile-epanechnikov" || kind == "profile-exponential") {
    std::optional<Matrix> distances;
    if (!c.distances_file.empty()) distances = read_static_matrix(c.distances_file, space.points.ids());
    const ProfileShape shape = kind == "profile-epanechnikov" ? ProfileShape::Epanechnikov : ProfileShape::Exponential;
    return profile_parametrix(space, shape, c.parametrix_order, c.laplacian, distances);
  }
  if (kind == "spectral") return spectral_parametrix(space, c.spectral_modes, c.laplacian);
  if (kind == "rkhs") return rkhs_parametrix(space, read_static_matrix(c.gram_file, space.points.ids()), c.laplacian);
  throw Error(ErrorCode::ConfigError, "parametrix kind '" + kind + "' has no direct builder");
}

HeatKernelResult build(const RunConfig& c, const MeasureSpace& space) {
  const NeumannConfig config = neumann_config(c);
  if (c.parametrix_kind != "imported") return build_heat_kernel(make_parametrix(c, space), c.horizon, config);
  const MeasureSpace source = load_graph(c.imported_edges, c.imported_measure);
  if (source.points.ids() != space.points.ids()) {
    throw Error(ErrorCode::SpaceMismatch, "imported.edges must list the same points in the same order");
  }
  const HeatKernelResult previous = build_heat_kernel(dirac_parametrix(source, c.laplacian), c.horizon, config);
  return cross_parametrix_build(previous, space, config);
}

std::vector<double> output_times(const RunConfig& c, bool positive_only = false) {
  if (c.t) return {*c.t};
  std::vector<double> times;
  for (int i = positive_only ? 1 : 0; i <= 8; ++i) times.push_back(c.horizon * i / 8.0);
  return times;
}

std::vector<double> diagnostic_grid(double horizon) {
  std::vector<double> grid;
  for (int i = 0; i <= 16; ++i) grid.push_back(horizon * i / 16.0);
  return grid;
}

std::pair<Eigen::Index, Eigen::Index> plot_pair(const RunConfig& c, const MeasureSpace& space) {
  if (!c.pair) return {0, 0};
  return {static_cast<Eigen::Index>(space.points.index_of(c.pair->first)),
          static_cast<Eigen::Index>(space.points.index_of(c.pair->second))};
}

void write_plot(const std::filesystem::path& dir, const std::function<Matrix(double)>& kernel, double horizon,
                std::pair<Eigen::Index, Eigen::Index> pair) {
  std::ofstream out(dir / "plot.tsv");
  out << "t\tK\n";
  for (int i = 0; i <= 100; ++i) {
    const double t = horizon * i / 100.0;
    out << format_number(t) << '\t' << format_number(kernel(t)(pair.first, pair.second)) << '\n';
  }
}

void write_matrices(const std::filesystem::path& dir, const MatrixCsv& csv) {
  std::ofstream out(dir / "matrices.csv");
  write_matrix_csv(out, csv);
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

bool uniform(const Vector& v) { return v.size() == 0 || (v.array() == v(0)).all(); }

/// Collects certificate checks; any failure makes the run exit with 2.
struct Gates {
  std::vector<std::string> failures;
  void check(const std::string& name, double value, double limit) {
    if (!(value <= limit)) failures.push_back(name + " = " + format_number(value) + " exceeds " + format_number(limit));
  }
  void require(const std::string& name, bool ok) {
    if (!ok) failures.push_back(name + " failed");
  }
};

void record_build(json& report, const HeatKernelResult& k) {
  report["terms_used"] = k.terms_used;
  report["truncation_bound"] = k.truncation_bound;
  report["propagated_bound"] = k.propagated_bound;
  report["quadrature_allowance"] = k.quadrature_allowance;
  report["window"] = k.window;
  report["window_doublings"] = k.doublings;
  report["parametrix"] = to_string(k.parametrix_family);
  report["parametrix_passed"] = k.validation.passed;
}

double dirac_limit(const HeatKernelResult& k) {
  const Eigen::Index n = k.size();
  return sup_norm(k.pairing().apply_right(k.evaluate(0.0)) - Matrix::Identity(n, n));
}

void record_diagnostics(json& defects, const HeatDiagnostics& d) {
  defects["semigroup"] = d.semigroup_defect;
  defects["min_value"] = d.min_value;
  defects["max_mass"] = d.max_mass;
  defects["min_mass"] = d.min_mass;
  defects["symmetry"] = d.symmetry_defect;
  defects["mass_drift"] = d.mass_drift;
  defects["l2_monotone"] = d.l2_monotone;
  defects["heat_residual"] = d.heat_residual;
}

/// Builds K and applies the engine certificate gates.
HeatKernelResult certified_build(const RunConfig& c, const MeasureSpace& space, json& report, Gates& gates,
                                 HeatDiagnostics* diag_out = nullptr) {
  HeatKernelResult k = build(c, space);
  record_build(report, k);
  const HeatDiagnostics diag = diagnostics(k, diagnostic_grid(c.horizon));
  const double residual = heat_residual(k.K, k.laplacian, c.cheb_degree);
  const double dirac = dirac_limit(k);
  json& defects = report["defects"];
  record_diagnostics(defects, diag);
  defects["heat_residual"] = residual;
  defects["dirac_limit"] = dirac;
  gates.check("truncation_bound", k.truncation_bound, c.tol);
  gates.check("heat_residual", residual, 1e-6);
  gates.check("dirac_limit", dirac, 1e-8);
  gates.check("semigroup_defect", diag.semigroup_defect, 1e-6);
  if (diag_out) *diag_out = diag;
  return k;
}

void run_command(const RunConfig& c, const MeasureSpace& space, json& report, Gates& gates,
                 const std::filesystem::path& dir, std::ostream& log) {
  const auto& ids = space.points.ids();
  const auto pair = plot_pair(c, space);
  const std::string& cmd = c.command;

  if (cmd == "validate-parametrix") {
    if (c.parametrix_kind == "imported") throw Error(ErrorCode::ConfigError, "validate imported kernels via build");
    const Parametrix p = make_parametrix(c, space);
    const ParametrixReport r = validate(p, 1e-8);
    report["parametrix"] = to_string(p.family);
    report["validation"] = {{"dirac_residual", r.dirac_residual},
                            {"dirac_residuals", r.dirac_residuals},
                            {"dirac_decay_rate", number_or_null(r.dirac_decay_rate)},
                            {"fitted_order", number_or_null(r.fitted_order)},
                            {"declared_order", p.order_k},
                            {"flavor_l1_inf", r.l1_inf_ok},
                            {"flavor_l2", r.l2_ok},
                            {"flavor_hilbert", r.hilbert_ok},
                            {"passed", r.passed},
                            {"reason", r.reason}};
    report["envelope"] = {{"C", p.envelope.c}, {"k", p.envelope.k}, {"norm1", p.envelope.norm1}};
    report["defects"]["dirac_limit"] = r.dirac_residual;
    gates.require("parametrix validation (" + r.reason + ")", r.passed);
    std::vector<Matrix> values;
    const auto times = output_times(c);
    for (double t : times) values.push_back(p.H.at(t));
    write_matrices(dir, kernel_csv(ids, times, values));
    write_plot(dir, [&](double t) { return p.H.at(t); }, c.horizon, pair);
    return;
  }

  if (cmd == "resistance") {
    const Matrix r = resistance(space);
    int violations = 0;
    json counterexamples = json::array();
    const Eigen::Index n = r.rows();
    for (Eigen::Index x = 0; x < n; ++x)
      for (Eigen::Index y = 0; y < n; ++y)
        for (Eigen::Index z = 0; z < n; ++z)
          if (r(x, z) > r(x, y) + r(y, z) + 1e-12 * std::max(1.0, r(x, z))) {
            ++violations;
            if (counterexamples.size() < 10) counterexamples.push_back({ids[x], ids[y], ids[z]});
          }
    report["triangle_violations"] = violations;
    report["triangle_counterexamples"] = counterexamples;
    gates.require("triangle inequality", violations == 0);
    write_matrices(dir, static_matrix_csv(ids, r));
    return;
  }

  if (cmd == "green") {
    const SpectralData spec = laplacian_spectrum(space, c.laplacian);
    const GreenResult g = green_spectral(space, spec);
    const HeatKernelResult k = certified_build(c, space, report, gates);
    const GreenResult q = green_quadrature(space, spec, k, c.tol);
    const double dev = sup_norm(g.G_star - q.G_star);
    report["green"] = {{"method", "spectral"},
                       {"quadrature_deviation", dev},
                       {"tail_bound", q.tail_bound},
                       {"cutoff", q.cutoff}};
    gates.check("green spectral vs quadrature", dev, q.tail_bound + std::max(c.tol, 1e-8));
    write_matrices(dir, static_matrix_csv(ids, g.G_star));
    write_plot(dir, [&](double t) { return k.evaluate(t); }, c.horizon, pair);
    return;
  }

  HeatDiagnostics diag;
  const HeatKernelResult k = certified_build(c, space, report, gates, &diag);
  write_plot(dir, [&](double t) { return k.evaluate(t); }, c.horizon, pair);

  if (cmd == "build") {
    std::vector<Matrix> values;
    const auto times = output_times(c);
    for (double t : times) values.push_back(k.evaluate(t));
    write_matrices(dir, kernel_csv(ids, times, values));
  } else if (cmd == "oracle-compare") {
    const SpectralData spec = laplacian_spectrum(space, c.laplacian);
    const Matrix inverse = k.pairing().identity_kernel();
    double dev = 0.0;
    double cross = 0.0;
    std::vector<double> times = output_times(c);
    for (double t : diagnostic_grid(c.horizon)) times.push_back(t);
    for (double t : times) {
      const Matrix oracle = spectral_heat(spec, t, k.pairing());
      dev = std::max(dev, sup_norm(k.evaluate(t) - oracle));
      cross = std::max(cross, sup_norm(expm_series(k.laplacian, t) * inverse - oracle));
    }
    report["max_oracle_dev"] = dev;
    report["oracle_cross_dev"] = cross;
    gates.check("max_oracle_dev", dev, c.tol);
    std::vector<Matrix> values;
    const auto out_times = output_times(c);
    for (double t : out_times) values.push_back(k.evaluate(t));
    write_matrices(dir, kernel_csv(ids, out_times, values));
  } else if (cmd == "entropy") {
    json entries = json::array();
    const auto times = output_times(c, true);
    for (double t : times)
      for (std::size_t x = 0; x < ids.size(); ++x)
        entries.push_back({{"x", ids[x]}, {"t", t}, {"E", entropy(k, x, t)}});
    report["entropy"] = entries;
    report["entropy_convention"] = "E(x,t) = sum_y K log K mu_y (negative Shannon entropy)";
    std::vector<Matrix> values;
    for (double t : times) values.push_back(k.evaluate(t));
    write_matrices(dir, kernel_csv(ids, times, values));
  } else if (cmd == "poisson") {
    const SpectralData spec = laplacian_spectrum(space, c.laplacian);
    const PoissonResult p = poisson_kernel(spec, &k, c.poisson_w);
    report["poisson"] = {{"w", c.poisson_w}, {"deviation", p.deviation}, {"samples", p.samples}};
    gates.check("poisson subordination deviation", p.deviation, c.poisson_tol);
    write_matrices(dir, static_matrix_csv(ids, p.spectral));
  } else if (cmd == "diagnostics") {
    gates.check("min_value", -diag.min_value, 1e-9);
    if (c.laplacian == LaplacianKind::Combinatorial) {
      gates.check("max_mass - 1", diag.max_mass - 1.0, 1e-9);
    } else {
      gates.check("|mass - 1|", std::max(diag.max_mass - 1.0, 1.0 - diag.min_mass), 1e-8);
    }
    if (uniform(space.points.lambda())) {
      gates.check("symmetry_defect", diag.symmetry_defect, 1e-8);
      gates.check("mass_drift", diag.mass_drift, 1e-8);
    }
    gates.require("l2_monotone", diag.l2_monotone);
    std::vector<Matrix> values;
    const auto grid = diagnostic_grid(c.horizon);
    for (double t : grid) values.push_back(k.evaluate(t));
    write_matrices(dir, kernel_csv(ids, grid, values));
  }
  log << "built with " << k.terms_used << " terms, window " << format_number(k.window) << '\n';
}

}  // namespace

int run(const RunConfig& c, std::ostream& log) {
  json report = {{"command", c.command},
                 {"n_points", nullptr},
                 {"terms_used", nullptr},
                 {"truncation_bound", nullptr},
                 {"max_oracle_dev", nullptr},
                 {"defects", json::object()},
                 {"exit_reason", "ok"}};
  int code = 0;
  const std::filesystem::path dir(c.outputs_dir.empty() ? "." : c.outputs_dir);
  bool dir_ready = false;
  try {
    std::filesystem::create_directories(dir);
    dir_ready = true;
    validate_config(c);
    report["laplacian"] = std::string(to_string(c.laplacian));
    report["tol"] = c.tol;
    report["horizon"] = c.horizon;
    const MeasureSpace space = load_space(c);
    report["n_points"] = space.size();
    if (!c.ball_center.empty()) {
      report["ball"] = {{"center", c.ball_center},
                        {"radius", c.ball_radius},
                        {"boundary", "reflecting (induced subgraph); error across the boundary is not certified"}};
    }
    Gates gates;
    run_command(c, space, report, gates, dir, log);
    if (!gates.failures.empty()) {
      std::string reason = "CertificateViolation:";
      for (const auto& f : gates.failures) reason += " " + f + ";";
      report["exit_reason"] = reason;
      code = 2;
    }
  } catch (const Error& e) {
    code = is_input_error(e.code()) ? 1 : 2;
    report["exit_reason"] = e.what();
  } catch (const std::exception& e) {
    code = 1;
    report["exit_reason"] = std::string("InputError: ") + e.what();
  }
  if (dir_ready) {
    std::ofstream out(dir / "report.json");
    out << report.dump(2) << '\n';
  }
  log << report["exit_reason"].get<std::string>() << '\n';
  return code;
}

}  // namespace heatkernel
