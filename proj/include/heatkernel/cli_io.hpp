// SPDX-FileCopyrightText: Copyright (c) 2026 The heatkernel Authors
// SPDX-License-Identifier: Apache-2.0

// File formats, run configuration and the command driver.
//
//   edges:    "u v w" per line, '#' starts a comment
//   measure:  "u m" per line
//   matrices: CSV with header "x,y,t,value" (kernels) or "x,y,value"
//   config:   flat "key = value" lines

#pragma once

#include "heatkernel/measure_space.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace heatkernel {

struct RunConfig {
  std::string command;

  std::string parametrix_kind = "dirac";  ///< dirac, profile-epanechnikov, profile-exponential, spectral, rkhs, imported
  int parametrix_order = 0;
  int spectral_modes = 0;  ///< parametrix.N, 0 = all modes
  std::string gram_file;
  std::string distances_file;
  std::string imported_edges;  ///< source space of an imported parametrix
  std::string imported_measure;

  double horizon = 1.0;
  int cheb_degree = 32;
  int nodes_per_panel = 16;
  double tol = 1e-8;
  int max_terms = 64;
  LaplacianKind laplacian = LaplacianKind::Combinatorial;
  std::string outputs_dir = ".";

  std::string edges_file;
  std::string measure_file;
  std::optional<double> t;
  std::optional<std::pair<std::string, std::string>> pair;
  double poisson_w = 1.0;
  double poisson_tol = 1e-6;
  std::string ball_center;
  int ball_radius = 0;
};

/// Applies one key=value setting. Errors: ConfigError.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);

/// Reads "key = value" lines ('#' comments, blank lines ignored) on top of
/// `base`. Errors: ConfigError naming the line.
RunConfig parse_config(std::istream& in, RunConfig base = {});
RunConfig load_config_file(const std::string& path, RunConfig base = {});

/// Range and kind-specific checks. Errors: ConfigError.
void validate_config(const RunConfig& config);

/// Parses an edge list; lines keep their file order. Errors: ParseError.
std::vector<WeightedEdge> read_edges(std::istream& in);

/// Parses a measure file into (id, mass) pairs. Errors: ParseError.
std::vector<std::pair<std::string, double>> read_measure(std::istream& in);

/// Points in order of first appearance; repeated lines for the same
/// unordered pair (in either orientation) are summed. Without a measure
/// every point has mass 1. Errors: ParseError, UnknownPoint,
/// NonpositiveMeasure, ZeroDegreePoint.
MeasureSpace load_graph(std::istream& edges, std::istream* measure = nullptr);
MeasureSpace load_graph(const std::string& edge_file, const std::string& measure_file = "");

/// Induced subgraph on the points within `radius` hops of `center`; edges
/// leaving the ball are dropped. Errors: CenterNotFound, InvalidArgument.
MeasureSpace ball_truncate(std::istream& edges, const std::string& center, int radius,
                           std::istream* measure = nullptr);

/// "%.17g"
std::string format_number(double value);

struct MatrixRecord {
  std::string x;
  std::string y;
  std::optional<double> t;
  double value = 0.0;
};

struct MatrixCsv {
  bool timed = false;
  std::vector<MatrixRecord> rows;
};

MatrixCsv read_matrix_csv(std::istream& in);
void write_matrix_csv(std::ostream& out, const MatrixCsv& csv);

/// Rows "x,y,value" for every pair.
MatrixCsv static_matrix_csv(const std::vector<std::string>& ids, const Matrix& m);
/// Rows "x,y,t,value" for every pair and time.
MatrixCsv kernel_csv(const std::vector<std::string>& ids, const std::vector<double>& times,
                     const std::vector<Matrix>& values);

/// Dense matrix from an "x,y,value" CSV indexed by `ids`; missing entries
/// are zero. Errors: ParseError, UnknownPoint.
Matrix read_static_matrix(const std::string& path, const std::vector<std::string>& ids);

/// Executes config.command, writing report.json, matrices.csv and plot.tsv
/// to config.outputs_dir. Returns 0 on success, 1 on input errors and 2 on
/// certificate or mathematical violations.
int run(const RunConfig& config, std::ostream& log);

}  // namespace heatkernel
