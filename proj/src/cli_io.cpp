// SPDX-FileCopyrightText: Copyright (c) 2026 The heatkernel Authors
// SPDX-License-Identifier: Apache-2.0

#include "heatkernel/cli_io.hpp"

#include "heatkernel/error.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <queue>
#include <set>
#include <sstream>
#include <unordered_map>

namespace heatkernel {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string strip_comment(const std::string& line) {
  const auto hash = line.find('#');
  return trim(hash == std::string::npos ? line : line.substr(0, hash));
}

std::optional<double> parse_double(const std::string& text) {
  const std::string s = trim(text);
  if (s.empty()) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) return std::nullopt;
  return v;
}

std::optional<int> parse_int(const std::string& text) {
  const std::string s = trim(text);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
  return in;
}

double require_double(const std::string& key, const std::string& value) {
  const auto v = parse_double(value);
  if (!v) throw Error(ErrorCode::ConfigError, key + " expects a number, got '" + value + "'");
  return *v;
}

int require_int(const std::string& key, const std::string& value) {
  const auto v = parse_int(value);
  if (!v) throw Error(ErrorCode::ConfigError, key + " expects an integer, got '" + value + "'");
  return *v;
}

}  // namespace

void apply_setting(RunConfig& c, const std::string& key, const std::string& raw) {
  const std::string value = trim(raw);
  if (key == "parametrix.kind") {
    c.parametrix_kind = value;
  } else if (key == "parametrix.order") {
    c.parametrix_order = require_int(key, value);
  } else if (key == "parametrix.N") {
    c.spectral_modes = require_int(key, value);
  } else if (key == "parametrix.gram") {
    c.gram_file = value;
  } else if (key == "parametrix.distances") {
    c.distances_file = value;
  } else if (key == "imported.edges") {
    c.imported_edges = value;
  } else if (key == "imported.measure") {
    c.imported_measure = value;
  } else if (key == "time.horizon") {
    c.horizon = require_double(key, value);
  } else if (key == "quad.cheb_degree") {
    c.cheb_degree = require_int(key, value);
  } else if (key == "quad.nodes_per_panel") {
    c.nodes_per_panel = require_int(key, value);
  } else if (key == "neumann.tol") {
    c.tol = require_double(key, value);
  } else if (key == "neumann.max_terms") {
    c.max_terms = require_int(key, value);
  } else if (key == "laplacian") {
    if (value == "combinatorial") {
      c.laplacian = LaplacianKind::Combinatorial;
    } else if (value == "normalized") {
      c.laplacian = LaplacianKind::Normalized;
    } else {
      throw Error(ErrorCode::ConfigError, "laplacian must be 'combinatorial' or 'normalized'");
    }
  } else if (key == "outputs.dir") {
    c.outputs_dir = value;
  } else if (key == "edges") {
    c.edges_file = value;
  } else if (key == "measure") {
    c.measure_file = value;
  } else if (key == "t") {
    c.t = require_double(key, value);
  } else if (key == "pair") {
    const auto comma = value.find(',');
    if (comma == std::string::npos) throw Error(ErrorCode::ConfigError, "pair expects 'x,y'");
    c.pair = std::make_pair(trim(value.substr(0, comma)), trim(value.substr(comma + 1)));
  } else if (key == "poisson.w") {
    c.poisson_w = require_double(key, value);
  } else if (key == "poisson.tol") {
    c.poisson_tol = require_double(key, value);
  } else if (key == "ball.center") {
    c.ball_center = value;
  } else if (key == "ball.radius") {
    c.ball_radius = require_int(key, value);
  } else {
    throw Error(ErrorCode::ConfigError, "unknown key '" + key + "'");
  }
}

RunConfig parse_config(std::istream& in, RunConfig base) {
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string body = strip_comment(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::ConfigError, "line " + std::to_string(number) + ": expected key = value");
    }
    try {
      apply_setting(base, trim(body.substr(0, eq)), body.substr(eq + 1));
    } catch (const Error& e) {
      throw Error(ErrorCode::ConfigError, "line " + std::to_string(number) + ": " + e.what());
    }
  }
  return base;
}

RunConfig load_config_file(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot open config '" + path + "'");
  return parse_config(in, std::move(base));
}

void validate_config(const RunConfig& c) {
  static const std::set<std::string> commands = {"build",   "validate-parametrix", "oracle-compare", "green",
                                                 "resistance", "entropy",         "poisson",        "diagnostics"};
  static const std::set<std::string> kinds = {"dirac",    "profile-epanechnikov", "profile-exponential",
                                              "spectral", "rkhs",                 "imported"};
  if (!commands.count(c.command)) throw Error(ErrorCode::ConfigError, "unknown command '" + c.command + "'");
  if (!kinds.count(c.parametrix_kind)) {
    throw Error(ErrorCode::ConfigError, "unknown parametrix.kind '" + c.parametrix_kind + "'");
  }
  if (c.parametrix_order < 0) throw Error(ErrorCode::ConfigError, "parametrix.order must be >= 0");
  if (!(c.horizon > 0.0) || !std::isfinite(c.horizon)) throw Error(ErrorCode::ConfigError, "time.horizon must be positive");
  if (c.cheb_degree < 8) throw Error(ErrorCode::ConfigError, "quad.cheb_degree must be >= 8");
  if (c.nodes_per_panel < 4) throw Error(ErrorCode::ConfigError, "quad.nodes_per_panel must be >= 4");
  if (!(c.tol > 0.0)) throw Error(ErrorCode::ConfigError, "neumann.tol must be positive");
  if (c.max_terms < 1) throw Error(ErrorCode::ConfigError, "neumann.max_terms must be positive");
  if (!(c.poisson_w > 0.0)) throw Error(ErrorCode::ConfigError, "poisson.w must be positive");
  if (!(c.poisson_tol > 0.0)) throw Error(ErrorCode::ConfigError, "poisson.tol must be positive");
  if (c.t && !(*c.t >= 0.0)) throw Error(ErrorCode::ConfigError, "t must be >= 0");
  if (c.edges_file.empty()) throw Error(ErrorCode::ConfigError, "an edge file is required (--edges)");
  if (c.parametrix_kind == "spectral" && c.spectral_modes <= 0) {
    throw Error(ErrorCode::ConfigError, "parametrix.kind = spectral needs parametrix.N");
  }
  if (c.parametrix_kind == "rkhs" && c.gram_file.empty()) {
    throw Error(ErrorCode::ConfigError, "parametrix.kind = rkhs needs parametrix.gram");
  }
  if (c.parametrix_kind == "imported" && c.imported_edges.empty()) {
    throw Error(ErrorCode::ConfigError, "parametrix.kind = imported needs imported.edges");
  }
  if (!c.ball_center.empty() && c.ball_radius < 1) throw Error(ErrorCode::ConfigError, "ball.radius must be >= 1");
}

std::vector<WeightedEdge> read_edges(std::istream& in) {
  std::vector<WeightedEdge> edges;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string body = strip_comment(line);
    if (body.empty()) continue;
    std::istringstream fields(body);
    std::string u, v, w, extra;
    if (!(fields >> u >> v >> w) || (fields >> extra)) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(number) + ": expected 'u v w'");
    }
    const auto weight = parse_double(w);
    if (!weight || !std::isfinite(*weight) || !(*weight > 0.0)) {
      throw Error(ErrorCode::ParseError,
                  "line " + std::to_string(number) + ": weight '" + w + "' must be a positive decimal");
    }
    edges.push_back({u, v, *weight});
  }
  return edges;
}

std::vector<std::pair<std::string, double>> read_measure(std::istream& in) {
  std::vector<std::pair<std::string, double>> out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string body = strip_comment(line);
    if (body.empty()) continue;
    std::istringstream fields(body);
    std::string u, m, extra;
    if (!(fields >> u >> m) || (fields >> extra)) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(number) + ": expected 'u m'");
    }
    const auto mass = parse_double(m);
    if (!mass) throw Error(ErrorCode::ParseError, "line " + std::to_string(number) + ": bad measure '" + m + "'");
    if (!(*mass > 0.0) || !std::isfinite(*mass)) {
      throw Error(ErrorCode::NonpositiveMeasure,
                  "line " + std::to_string(number) + ": lambda({" + u + "}) must be positive");
    }
    out.emplace_back(u, *mass);
  }
  return out;
}

namespace {

MeasureSpace assemble(const std::vector<WeightedEdge>& edges,
                      const std::optional<std::vector<std::pair<std::string, double>>>& measure,
                      const std::set<std::string>* keep = nullptr) {
  std::vector<std::string> ids;
  std::unordered_map<std::string, std::size_t> index;
  auto add = [&](const std::string& id) {
    if (keep && !keep->count(id)) return;
    if (index.emplace(id, ids.size()).second) ids.push_back(id);
  };
  for (const auto& e : edges) {
    add(e.u);
    add(e.v);
  }
  std::map<std::string, double> masses;
  if (measure) {
    for (const auto& [id, m] : *measure) {
      if (!masses.emplace(id, m).second) throw Error(ErrorCode::DuplicatePoint, "measure lists '" + id + "' twice");
      add(id);
    }
  }
  Vector lambda = Vector::Ones(static_cast<Eigen::Index>(ids.size()));
  if (measure) {
    for (std::size_t i = 0; i < ids.size(); ++i) {
      auto it = masses.find(ids[i]);
      if (it == masses.end()) throw Error(ErrorCode::UnknownPoint, "no measure given for point '" + ids[i] + "'");
      lambda(static_cast<Eigen::Index>(i)) = it->second;
    }
  }
  // Sum every listed line into its unordered pair.
  const auto n = static_cast<Eigen::Index>(ids.size());
  Matrix w = Matrix::Zero(n, n);
  for (const auto& e : edges) {
    auto iu = index.find(e.u);
    auto iv = index.find(e.v);
    if (iu == index.end() || iv == index.end()) continue;
    const auto a = static_cast<Eigen::Index>(iu->second);
    const auto b = static_cast<Eigen::Index>(iv->second);
    w(a, b) += e.weight;
    if (a != b) w(b, a) += e.weight;
  }
  return build_space(ids, lambda, w);
}

}  // namespace

MeasureSpace load_graph(std::istream& edges, std::istream* measure) {
  const auto list = read_edges(edges);
  std::optional<std::vector<std::pair<std::string, double>>> masses;
  if (measure) masses = read_measure(*measure);
  return assemble(list, masses);
}

MeasureSpace load_graph(const std::string& edge_file, const std::string& measure_file) {
  std::ifstream edges = open_input(edge_file);
  if (measure_file.empty()) return load_graph(edges, nullptr);
  std::ifstream measure = open_input(measure_file);
  return load_graph(edges, &measure);
}

MeasureSpace ball_truncate(std::istream& edge_stream, const std::string& center, int radius, std::istream* measure) {
  if (radius < 1) throw Error(ErrorCode::InvalidArgument, "ball radius must be >= 1");
  const auto edges = read_edges(edge_stream);
  std::unordered_map<std::string, std::vector<std::string>> adjacency;
  for (const auto& e : edges) {
    adjacency[e.u].push_back(e.v);
    adjacency[e.v].push_back(e.u);
  }
  if (!adjacency.count(center)) throw Error(ErrorCode::CenterNotFound, "center '" + center + "' not in the edge list");

  std::set<std::string> keep{center};
  std::queue<std::pair<std::string, int>> frontier;
  frontier.push({center, 0});
  while (!frontier.empty()) {
    const auto [id, hops] = frontier.front();
    frontier.pop();
    if (hops == radius) continue;
    for (const auto& next : adjacency[id]) {
      if (keep.insert(next).second) frontier.push({next, hops + 1});
    }
  }
  std::optional<std::vector<std::pair<std::string, double>>> masses;
  if (measure) {
    masses.emplace();
    for (auto& entry : read_measure(*measure))
      if (keep.count(entry.first)) masses->push_back(entry);
  }
  return assemble(edges, masses, &keep);
}

std::string format_number(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

MatrixCsv read_matrix_csv(std::istream& in) {
  MatrixCsv csv;
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::ParseError, "empty matrix file");
  const std::string header = trim(line);
  if (header == "x,y,t,value") {
    csv.timed = true;
  } else if (header != "x,y,value") {
    throw Error(ErrorCode::ParseError, "line 1: unknown matrix header '" + header + "'");
  }
  int number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (trim(line).empty()) continue;
    std::vector<std::string> cells;
    std::stringstream fields(trim(line));
    std::string cell;
    while (std::getline(fields, cell, ',')) cells.push_back(cell);
    const std::size_t expected = csv.timed ? 4 : 3;
    if (cells.size() != expected) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(number) + ": expected " +
                                             std::to_string(expected) + " fields");
    }
    MatrixRecord r;
    r.x = cells[0];
    r.y = cells[1];
    if (csv.timed) {
      const auto t = parse_double(cells[2]);
      if (!t) throw Error(ErrorCode::ParseError, "line " + std::to_string(number) + ": bad time");
      r.t = *t;
    }
    const auto v = parse_double(cells.back());
    if (!v) throw Error(ErrorCode::ParseError, "line " + std::to_string(number) + ": bad value");
    r.value = *v;
    csv.rows.push_back(std::move(r));
  }
  return csv;
}

void write_matrix_csv(std::ostream& out, const MatrixCsv& csv) {
  out << (csv.timed ? "x,y,t,value\n" : "x,y,value\n");
  for (const auto& r : csv.rows) {
    out << r.x << ',' << r.y << ',';
    if (csv.timed) out << format_number(r.t.value_or(0.0)) << ',';
    out << format_number(r.value) << '\n';
  }
}

MatrixCsv static_matrix_csv(const std::vector<std::string>& ids, const Matrix& m) {
  MatrixCsv csv;
  for (std::size_t i = 0; i < ids.size(); ++i)
    for (std::size_t j = 0; j < ids.size(); ++j)
      csv.rows.push_back({ids[i], ids[j], std::nullopt,
                          m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))});
  return csv;
}

MatrixCsv kernel_csv(const std::vector<std::string>& ids, const std::vector<double>& times,
                     const std::vector<Matrix>& values) {
  MatrixCsv csv;
  csv.timed = true;
  for (std::size_t k = 0; k < times.size(); ++k)
    for (std::size_t i = 0; i < ids.size(); ++i)
      for (std::size_t j = 0; j < ids.size(); ++j)
        csv.rows.push_back({ids[i], ids[j], times[k],
                            values[k](static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))});
  return csv;
}

Matrix read_static_matrix(const std::string& path, const std::vector<std::string>& ids) {
  std::ifstream in = open_input(path);
  const MatrixCsv csv = read_matrix_csv(in);
  if (csv.timed) throw Error(ErrorCode::ParseError, "'" + path + "' must use the x,y,value layout");
  std::unordered_map<std::string, Eigen::Index> index;
  for (std::size_t i = 0; i < ids.size(); ++i) index[ids[i]] = static_cast<Eigen::Index>(i);
  const auto n = static_cast<Eigen::Index>(ids.size());
  Matrix m = Matrix::Zero(n, n);
  for (const auto& r : csv.rows) {
    auto ix = index.find(r.x);
    auto iy = index.find(r.y);
    if (ix == index.end() || iy == index.end()) {
      throw Error(ErrorCode::UnknownPoint, "'" + path + "' names unknown point " + r.x + " or " + r.y);
    }
    m(ix->second, iy->second) = r.value;
  }
  return m;
}

}  // namespace heatkernel
