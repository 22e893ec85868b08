// SPDX-FileCopyrightText: Copyright (c) 2026 The heatkernel Authors
// SPDX-License-Identifier: Apache-2.0

#include "heatkernel/cli_io.hpp"
#include "heatkernel/error.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Heat kernels on weighted graphs by the parametrix method"};
  std::string command;
  std::string edges, measure, config_file, out, pair;
  std::optional<double> t, tol;

  app.add_option("command", command,
                 "build | validate-parametrix | oracle-compare | green | resistance | entropy | poisson | diagnostics")
      ->required();
  app.add_option("--edges", edges, "edge list 'u v w'");
  app.add_option("--measure", measure, "vertex measure 'u m'");
  app.add_option("--config", config_file, "key=value configuration file");
  app.add_option("--out", out, "output directory");
  app.add_option("--t", t, "evaluation time");
  app.add_option("--pair", pair, "point pair 'x,y' for plot.tsv");
  app.add_option("--tol", tol, "Neumann truncation tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  heatkernel::RunConfig config;
  try {
    if (!config_file.empty()) config = heatkernel::load_config_file(config_file);
    config.command = command;
    if (!edges.empty()) config.edges_file = edges;
    if (!measure.empty()) config.measure_file = measure;
    if (!out.empty()) config.outputs_dir = out;
    if (t) config.t = *t;
    if (tol) config.tol = *tol;
    if (!pair.empty()) heatkernel::apply_setting(config, "pair", pair);
  } catch (const heatkernel::Error& e) {
    std::cerr << e.what() << '\n';
    return 1;
  }
  return heatkernel::run(config, std::cerr);
}
