// Copyright 2026 The qadapt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// qadapt: command-line front end.
//
// Exit codes: 0 ok, 1 verification failure, 2 bad parameters, 3 I/O error,
// 4 infeasible (no filter gives an entangled output).

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "qadapt/io.hpp"
#include "qadapt/scan.hpp"
#include "qadapt/verify.hpp"

namespace {

using namespace qadapt;

enum ExitCode { kOk = 0, kVerifyFailed = 1, kBadParams = 2, kIoError = 3, kInfeasible = 4 };

struct IoFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Infeasible : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json load_json(const std::string& path) {
  std::ifstream in;
  std::istream* src = &std::cin;
  if (path != "-") {
    in.open(path);
    if (!in) throw IoFailure("cannot read " + path);
    src = &in;
  }
  try {
    return json::parse(*src);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

std::ofstream open_output(const std::string& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode);
  if (!out) throw IoFailure("cannot write " + path);
  return out;
}

void emit(const json& j, const std::string& path) {
  const std::string text = rounded(j).dump(2) + "\n";
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  auto out = open_output(path);
  out << text;
  if (!out) throw IoFailure("cannot write " + path);
}

bool given(const CLI::App* cmd, const std::string& flag) { return cmd->count(flag) > 0; }

// Config values apply only where the matching flag was not given.
template <class T>
void take(const json& j, const char* key, T& out, const CLI::App* cmd, const std::string& flag) {
  if (!j.contains(key) || given(cmd, flag)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw std::invalid_argument(std::string("config: bad value for '") + key + "'");
  }
}

void parse_grid(const std::string& grid, int& gamma_steps, int& p_steps) {
  int g = 0, p = 0;
  char x = 0, extra = 0;
  if (std::sscanf(grid.c_str(), "%d%c%d%c", &g, &x, &p, &extra) != 3 || (x != 'x' && x != 'X')) {
    throw std::invalid_argument("grid must look like 50x50");
  }
  gamma_steps = g;
  p_steps = p;
}

BellKind bell_from(const std::string& name) {
  const auto k = parse_bell_kind(name);
  if (!k) throw std::invalid_argument("unknown Bell state '" + name + "'");
  return *k;
}

// ---- asym ----

struct AsymArgs {
  double p1 = 1.0;
  double p2 = 1.0;
  std::string adapter = "none";
  std::string filter;
  bool as_json = false;
};

int cmd_asym(const AsymArgs& a) {
  std::optional<LocalFilter> adapter;
  if (a.adapter == "swap") {
    adapter = LocalFilter::bit_flip();
  } else if (a.adapter == "filter") {
    if (a.filter.empty()) throw std::invalid_argument("--adapter filter needs --filter");
    try {
      adapter = filter_from_json(json::parse(a.filter));
    } catch (const json::parse_error& e) {
      throw std::invalid_argument(std::string("--filter: ") + e.what());
    }
  } else if (a.adapter != "none") {
    throw std::invalid_argument("adapter must be none, swap or filter");
  }
  const auto res = run_pipeline(replacement_pipeline(a.p1, a.p2, adapter));
  json j = {{"p1", a.p1}, {"p2", a.p2}, {"adapter", a.adapter}};
  j["state"] = matrix_to_json(res.outcome.state.matrix());
  j["success_rate"] = res.outcome.success_rate;
  j["entangled"] = res.report.entangled;
  j["concurrence"] = res.report.concurrence;
  j["min_pt_eigenvalue"] = res.report.min_pt_eigenvalue;
  j["threshold_p2"] = eq13_threshold(a.p1);
  if (a.adapter == "none") j["analytic_concurrence"] = eq14_concurrence(a.p1, a.p2);
  if (a.adapter == "swap") j["analytic_concurrence"] = eq15_concurrence(a.p1, a.p2);
  if (a.as_json) {
    emit(j, "");
    return kOk;
  }
  std::cout << "state:\n";
  const CMat4& m = res.outcome.state.matrix();
  for (std::size_t i = 0; i < 4; ++i) {
    std::cout << " ";
    for (std::size_t k = 0; k < 4; ++k) {
      // display only: round-off below 1e-14 prints as 0
      const double re = std::abs(m(i, k).real()) < 1e-14 ? 0.0 : m(i, k).real();
      const double im = std::abs(m(i, k).imag()) < 1e-14 ? 0.0 : m(i, k).imag();
      std::cout << ' ' << format_number(re);
      if (im != 0.0) std::cout << (im < 0 ? "" : "+") << format_number(im) << 'i';
    }
    std::cout << '\n';
  }
  std::cout << "entangled: " << (res.report.entangled ? "yes" : "no") << '\n'
            << "concurrence: " << format_number(res.report.concurrence) << '\n'
            << "min_pt_eigenvalue: " << format_number(res.report.min_pt_eigenvalue) << '\n'
            << "success_rate: " << format_number(res.outcome.success_rate) << '\n'
            << "threshold_p2: " << format_number(eq13_threshold(a.p1)) << '\n';
  if (j.contains("analytic_concurrence")) {
    const double c = j["analytic_concurrence"].get<double>();
    std::cout << "analytic_concurrence: " << format_number(c) << '\n'
              << "difference: " << format_number(res.report.concurrence - c) << '\n';
  }
  return kOk;
}

// ---- scan ----

struct ScanArgs {
  std::string config;
  std::string grid;
  ScanOptions opt;
  std::string out_dir = ".";
  std::string prefix = "scan";
};

int cmd_scan(ScanArgs a, const CLI::App* cmd) {
  if (!a.config.empty()) {
    const json j = load_json(a.config);
    detail::require_keys(j,
                         {"grid", "gamma_steps", "p_steps", "gamma_min", "gamma_max", "p_min", "p_max", "r_steps",
                          "seed", "out_dir", "prefix", "ga"},
                         "scan config");
    if (j.contains("grid") && !given(cmd, "--grid")) parse_grid(j.at("grid").get<std::string>(), a.opt.gamma_steps, a.opt.p_steps);
    if (!given(cmd, "--grid")) {
      take(j, "gamma_steps", a.opt.gamma_steps, cmd, "--grid");
      take(j, "p_steps", a.opt.p_steps, cmd, "--grid");
    }
    take(j, "gamma_min", a.opt.gamma_min, cmd, "--gamma-min");
    take(j, "gamma_max", a.opt.gamma_max, cmd, "--gamma-max");
    take(j, "p_min", a.opt.p_min, cmd, "--p-min");
    take(j, "p_max", a.opt.p_max, cmd, "--p-max");
    take(j, "r_steps", a.opt.r_steps, cmd, "--r-steps");
    take(j, "seed", a.opt.seed, cmd, "--seed");
    take(j, "out_dir", a.out_dir, cmd, "--out-dir");
    take(j, "prefix", a.prefix, cmd, "--prefix");
    if (j.contains("ga")) a.opt.ga = ga_from_json(j.at("ga"), a.opt.ga);
  }
  if (given(cmd, "--grid")) parse_grid(a.grid, a.opt.gamma_steps, a.opt.p_steps);
  if (a.opt.r_steps < 2) throw std::invalid_argument("r-steps must be at least 2");

  std::error_code ec;
  std::filesystem::create_directories(a.out_dir, ec);
  if (ec) throw IoFailure("cannot create " + a.out_dir + ": " + ec.message());
  const std::string base = a.out_dir + "/" + a.prefix;
  auto csv = open_output(base + ".csv");
  auto pgm = open_output(base + ".pgm", std::ios::out | std::ios::binary);
  auto svg = open_output(base + ".svg");

  const auto scan = scan_grid(a.opt);
  write_csv(csv, scan);
  write_pgm(pgm, scan);
  write_svg(svg, scan);
  if (!csv || !pgm || !svg) throw IoFailure("cannot write scan outputs under " + a.out_dir);

  std::cout << "grid: " << scan.gammas.size() << " gamma x " << scan.ps.size() << " p\n";
  for (auto c : kClassifications) std::cout << to_string(c) << ": " << scan.summary.count(c) << '\n';
  std::cout << "wrote " << base << ".csv, " << base << ".pgm, " << base << ".svg\n";
  return kOk;
}

// ---- optimize ----

struct OptimizeArgs {
  std::string config;
  double gamma = 0.5;
  double p = 0.5;
  std::string input = "PhiMinus";
  std::string method = "auto";
  std::string space = "diagonal";
  std::string objective = "concurrence";
  double min_success = 0.0;
  std::uint64_t seed = 1;
  bool independent = false;
  int r_steps = 200;
  int population = GaConfig{}.population;
  int generations = GaConfig{}.generations;
  std::string output;
};

int cmd_optimize(OptimizeArgs a, const CLI::App* cmd) {
  GaConfig ga;
  if (!a.config.empty()) {
    const json j = load_json(a.config);
    detail::require_keys(j,
                         {"gamma", "p", "input", "method", "space", "objective", "min_success", "seed",
                          "identical_filters", "r_steps", "output", "ga"},
                         "optimize config");
    take(j, "gamma", a.gamma, cmd, "--gamma");
    take(j, "p", a.p, cmd, "--p");
    take(j, "input", a.input, cmd, "--input");
    take(j, "method", a.method, cmd, "--method");
    take(j, "space", a.space, cmd, "--space");
    take(j, "objective", a.objective, cmd, "--objective");
    take(j, "min_success", a.min_success, cmd, "--min-success");
    take(j, "seed", a.seed, cmd, "--seed");
    take(j, "r_steps", a.r_steps, cmd, "--r-steps");
    take(j, "output", a.output, cmd, "--output");
    if (j.contains("identical_filters") && !given(cmd, "--independent-filters")) {
      a.independent = !j.at("identical_filters").get<bool>();
    }
    if (j.contains("ga")) ga = ga_from_json(j.at("ga"), ga);
  }
  if (given(cmd, "--population")) ga.population = a.population;
  if (given(cmd, "--generations")) ga.generations = a.generations;

  OptimizationProblem problem = damping_problem(bell_from(a.input), a.p, a.gamma);
  problem.min_success = a.min_success;
  problem.seed = a.seed;
  problem.identical_filters = !a.independent;
  problem.ga = ga;
  if (a.space == "diagonal") {
    problem.space = SearchSpace::DiagonalOnly;
  } else if (a.space == "full") {
    problem.space = SearchSpace::FullFilter;
  } else {
    throw std::invalid_argument("space must be diagonal or full");
  }
  if (a.objective == "concurrence") {
    problem.objective = Objective::Concurrence;
  } else if (a.objective == "min_pt_eigenvalue") {
    problem.objective = Objective::MinPTEigenvalue;
  } else {
    throw std::invalid_argument("objective must be concurrence or min_pt_eigenvalue");
  }
  std::string method = a.method;
  if (method == "auto") {
    method = problem.space == SearchSpace::DiagonalOnly && problem.identical_filters ? "grid" : "genetic";
  }
  if (method != "grid" && method != "genetic") throw std::invalid_argument("method must be auto, grid or genetic");

  const auto unfiltered = run_pipeline(problem.pipeline);
  OptimizationResult result;
  try {
    result = method == "grid" ? grid_search_diag(problem, a.r_steps) : genetic_optimize(problem);
  } catch (const NoFeasiblePoint& e) {
    throw Infeasible(e.what());
  }
  json j = optimization_result_to_json(problem, result);
  j["gamma"] = a.gamma;
  j["p"] = a.p;
  j["input"] = std::string(to_string(problem.pipeline.input));
  j["unfiltered_concurrence"] = unfiltered.report.concurrence;
  j["unfiltered_min_pt_eigenvalue"] = unfiltered.report.min_pt_eigenvalue;
  j["entangling"] = result.objective > 0.0;
  emit(j, a.output);
  if (!(result.objective > 0.0)) {
    std::cerr << "qadapt optimize: no filter gives an entangled output\n";
    return kInfeasible;
  }
  return kOk;
}

// ---- verify ----

int cmd_verify(const VerifyOptions& opt) {
  const auto report = run_verification(opt);
  for (const auto& s : report.suites) {
    std::printf("%-40s %6ld checks %6ld failures  worst %-10s %s\n", s.name.c_str(), s.checks, s.failures,
                format_number(s.worst).c_str(), s.passed() ? "PASS" : "FAIL");
  }
  std::printf("verify: %s\n", report.passed() ? "PASS" : "FAIL");
  return report.passed() ? kOk : kVerifyFailed;
}

// ---- pipeline ----

int cmd_pipeline(const std::string& spec_path, const std::string& output) {
  const auto spec = pipeline_from_json(load_json(spec_path));
  json j = pipeline_result_to_json(run_pipeline(spec));
  j["spec"] = pipeline_to_json(spec);
  emit(j, output);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement preservation through adapted quantum channels"};
  app.require_subcommand(1);

  AsymArgs asym;
  auto* asym_cmd = app.add_subcommand("asym", "Replacement-channel chain with an optional adapter");
  asym_cmd->add_option("--p1", asym.p1, "First channel parameter")->required();
  asym_cmd->add_option("--p2", asym.p2, "Second channel parameter")->required();
  asym_cmd->add_option("--adapter", asym.adapter, "none, swap or filter")->capture_default_str();
  asym_cmd->add_option("--filter", asym.filter, "Adapter filter as JSON {r, u, v}");
  asym_cmd->add_flag("--json", asym.as_json, "Print JSON");

  ScanArgs scan;
  auto* scan_cmd = app.add_subcommand("scan", "Classify a (gamma, p) grid and write CSV, PGM and SVG");
  scan_cmd->add_option("--config", scan.config, "JSON config file");
  scan_cmd->add_option("--grid", scan.grid, "Grid size as <gamma steps>x<p steps>");
  scan_cmd->add_option("--gamma-min", scan.opt.gamma_min)->capture_default_str();
  scan_cmd->add_option("--gamma-max", scan.opt.gamma_max)->capture_default_str();
  scan_cmd->add_option("--p-min", scan.opt.p_min)->capture_default_str();
  scan_cmd->add_option("--p-max", scan.opt.p_max)->capture_default_str();
  scan_cmd->add_option("--r-steps", scan.opt.r_steps, "Filter grid resolution")->capture_default_str();
  scan_cmd->add_option("--seed", scan.opt.seed, "Seed for the genetic fallback")->capture_default_str();
  scan_cmd->add_option("--out-dir", scan.out_dir)->capture_default_str();
  scan_cmd->add_option("--prefix", scan.prefix, "Output file stem")->capture_default_str();

  OptimizeArgs opt;
  auto* opt_cmd = app.add_subcommand("optimize", "Search for the best filter at one (gamma, p)");
  opt_cmd->add_option("--config", opt.config, "JSON config file");
  opt_cmd->add_option("--gamma", opt.gamma, "Damping strength")->capture_default_str();
  opt_cmd->add_option("--p", opt.p, "Depolarizing parameter")->capture_default_str();
  opt_cmd->add_option("--input", opt.input, "Input Bell state")->capture_default_str();
  opt_cmd->add_option("--method", opt.method, "auto, grid or genetic")->capture_default_str();
  opt_cmd->add_option("--space", opt.space, "diagonal or full")->capture_default_str();
  opt_cmd->add_option("--objective", opt.objective, "concurrence or min_pt_eigenvalue")->capture_default_str();
  opt_cmd->add_option("--min-success", opt.min_success, "Minimum success rate")->capture_default_str();
  opt_cmd->add_option("--seed", opt.seed)->capture_default_str();
  opt_cmd->add_flag("--independent-filters", opt.independent, "Optimize the two filters separately");
  opt_cmd->add_option("--r-steps", opt.r_steps, "Grid resolution")->capture_default_str();
  opt_cmd->add_option("--population", opt.population)->capture_default_str();
  opt_cmd->add_option("--generations", opt.generations)->capture_default_str();
  opt_cmd->add_option("--output", opt.output, "Result JSON path (default stdout)");

  VerifyOptions verify;
  auto* verify_cmd = app.add_subcommand("verify", "Run the self-check suites");
  verify_cmd->add_option("--seed", verify.seed)->capture_default_str();
  verify_cmd->add_option("--samples", verify.samples, "Random samples per suite")->capture_default_str();
  verify_cmd->add_option("--tolerance-scale", verify.tolerance_scale, "Scale every tolerance (testing)")
      ->capture_default_str();

  std::string spec_path;
  std::string pipeline_output;
  auto* pipe_cmd = app.add_subcommand("pipeline", "Run a pipeline spec given as JSON");
  pipe_cmd->add_option("spec", spec_path, "Spec file, or - for stdin")->required();
  pipe_cmd->add_option("--output", pipeline_output, "Result JSON path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kBadParams;
  }

  try {
    if (*asym_cmd) return cmd_asym(asym);
    if (*scan_cmd) return cmd_scan(scan, scan_cmd);
    if (*opt_cmd) return cmd_optimize(opt, opt_cmd);
    if (*verify_cmd) return cmd_verify(verify);
    if (*pipe_cmd) return cmd_pipeline(spec_path, pipeline_output);
  } catch (const IoFailure& e) {
    std::cerr << "qadapt: " << e.what() << '\n';
    return kIoError;
  } catch (const Infeasible& e) {
    std::cerr << "qadapt: " << e.what() << '\n';
    return kInfeasible;
  } catch (const std::invalid_argument& e) {
    std::cerr << "qadapt: " << e.what() << '\n';
    return kBadParams;
  } catch (const json::exception& e) {
    std::cerr << "qadapt: " << e.what() << '\n';
    return kBadParams;
  } catch (const qadapt::Error& e) {
    std::cerr << "qadapt: " << e.what() << '\n';
    return kBadParams;
  }
  return kBadParams;
}
