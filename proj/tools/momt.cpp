// Copyright 2026 The momt Authors
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

// momt: distances, geodesics and diagnostics for Lindblad transport problems.
//
// Exit codes:
//   0  success
//   1  usage, parse, validation or I/O error
//   2  endpoints not connectable (difference touches ker(grad))
//   3  solver did not converge (best iterate still reported)
//   4  verify: at least one property failed

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "momt/io.hpp"
#include "momt/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitNotConverged = 3;
constexpr int kExitPropertyFailed = 4;

struct Output {
  bool json = false;
  bool quiet = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw momt::Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw momt::Error("cannot write '" + path + "'");
  out << text;
  if (!out) throw momt::Error("write to '" + path + "' failed");
}

int solve_exit(const momt::GeodesicResult& r) { return r.converged ? kExitOk : kExitNotConverged; }

void print_warnings(const momt::GeodesicResult& r) {
  for (const auto& w : r.warnings) std::cerr << "warning [" << w.code << "]: " << w.message << "\n";
}

int cmd_distance(const std::string& file, const std::string& out_path, const Output& o) {
  const auto spec = momt::io::parse_problem(read_file(file));
  const auto result = momt::optimize_geodesic(spec.lindblad, *spec.rho0, *spec.rho1, momt::io::solver_config(spec.config));
  const auto report = momt::io::run_report(spec, result);
  if (!out_path.empty()) write_file(out_path, report.dump(2) + "\n");
  if (o.json) {
    std::cout << report.dump(2) << "\n";
  } else if (!o.quiet) {
    std::printf("distance     %.12g\n", result.distance);
    std::printf("primal_cost  %.12g\n", result.primal_cost);
    std::printf("dual_value   %.12g\n", result.dual_value);
    std::printf("gap          %.3e (relative %.3e)\n", result.gap, report["rel_gap"].get<double>());
    std::printf("hamiltonian  mean %.6g, rel_std %.3e\n", report["hamiltonian"]["mean"].get<double>(),
                report["hamiltonian"]["rel_std"].get<double>());
    std::printf("iterations   %d (%s)\n", result.iterations, result.converged ? "converged" : "not converged");
  }
  if (!o.quiet) print_warnings(result);
  return solve_exit(result);
}

int cmd_geodesic(const std::string& file, const std::string& out_path, const Output& o) {
  const auto spec = momt::io::parse_problem(read_file(file));
  const auto result = momt::optimize_geodesic(spec.lindblad, *spec.rho0, *spec.rho1, momt::io::solver_config(spec.config));
  const auto trace = momt::io::trace_to_json(momt::io::make_trace(result));
  write_file(out_path, trace.dump(2) + "\n");
  if (o.json) {
    std::cout << trace.dump(2) << "\n";
  } else if (!o.quiet) {
    std::printf("wrote %d nodes to %s (distance %.12g)\n", result.path.intervals() + 1, out_path.c_str(),
                result.distance);
  }
  if (!o.quiet) print_warnings(result);
  return solve_exit(result);
}

int cmd_operator_info(const std::string& file, const Output& o) {
  const auto spec = momt::io::parse_problem(read_file(file), false);
  const auto info = momt::io::operator_info(spec);
  if (o.json) {
    std::cout << info.dump(2) << "\n";
    return kExitOk;
  }
  if (!o.quiet) {
    std::printf("n            %d\n", info["n"].get<int>());
    std::printf("operators    %d\n", info["count"].get<int>());
    std::printf("kernel_dim   %d\n", info["kernel_dim"].get<int>());
    std::printf("poincare     %.12g at I/n%s\n", info["poincare_constant_mixed"]["value"].get<double>(),
                info["poincare_constant_mixed"]["degenerate"].get<bool>() ? " (degenerate)" : "");
    for (const auto& w : info["weighted"])
      std::printf("lambda_min   %.12g at %s\n", w["restricted_min_eig"].get<double>(),
                  w["weight"].get<std::string>().c_str());
    if (info.contains("feasibility_gap"))
      std::printf("feasibility  %.3e\n", info["feasibility_gap"].get<double>());
    for (const auto& w : info["warnings"])
      std::cerr << "warning [" << w["code"].get<std::string>() << "]: " << w["message"].get<std::string>() << "\n";
  }
  return kExitOk;
}

int cmd_verify(const std::string& file, const std::string& suite, const Output& o) {
  const auto spec = momt::io::parse_problem(read_file(file), false);
  momt::verify::Options opt;
  opt.seed = spec.config.seed;
  opt.rho0 = spec.rho0;
  opt.rho1 = spec.rho1;
  opt.solver = momt::io::solver_config(spec.config);
  const auto results = momt::verify::run_suite(spec.lindblad, suite, opt);
  if (o.json) {
    momt::io::json arr = momt::io::json::array();
    for (const auto& r : results)
      arr.push_back({{"suite", r.suite},
                     {"name", r.name},
                     {"status", momt::verify::status_name(r.status)},
                     {"worst", r.worst},
                     {"tolerance", r.tolerance},
                     {"cases", r.cases},
                     {"detail", r.detail}});
    std::cout << momt::io::json{{"seed", opt.seed}, {"suite", suite}, {"results", arr}}.dump(2) << "\n";
  } else {
    for (const auto& r : results) {
      if (o.quiet && r.status != momt::verify::Status::Fail) continue;
      std::printf("[%s] %-13s %s: %s\n", momt::verify::status_name(r.status), r.suite.c_str(), r.name.c_str(),
                  r.detail.c_str());
    }
  }
  return momt::verify::all_passed(results) ? kExitOk : kExitPropertyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transport distances between density matrices under a Lindblad operator set"};
  app.set_version_flag("--version", momt::io::tool_version());
  app.require_subcommand(1);
  Output o;
  app.add_flag("--json", o.json, "Print machine-readable JSON on stdout");
  app.add_flag("-q,--quiet", o.quiet, "Suppress human-readable output");

  std::string file, out_path, suite = "all";

  auto* distance = app.add_subcommand("distance", "Compute the transport distance between rho0 and rho1");
  distance->add_option("file", file, "Problem file")->required()->check(CLI::ExistingFile);
  distance->add_option("--out", out_path, "Write the run report here");

  auto* geodesic = app.add_subcommand("geodesic", "Export the geodesic as a plot-ready trace");
  geodesic->add_option("file", file, "Problem file")->required()->check(CLI::ExistingFile);
  geodesic->add_option("--out", out_path, "Trace output file")->required();

  auto* info = app.add_subcommand("operator-info", "Kernel and spectral diagnostics of the operator set");
  info->add_option("file", file, "Problem file (endpoints optional)")->required()->check(CLI::ExistingFile);

  auto* verify = app.add_subcommand("verify", "Run the seeded property suites");
  verify->add_option("file", file, "Problem file (endpoints optional)")->required()->check(CLI::ExistingFile);
  verify->add_option("--suite", suite, "Suite to run")
      ->check(CLI::IsMember({"calculus", "duality", "conservation", "all"}));

  for (auto* sub : {distance, geodesic, info, verify}) {
    sub->add_flag("--json", o.json, "Print machine-readable JSON on stdout");
    sub->add_flag("-q,--quiet", o.quiet, "Suppress human-readable output");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*distance) return cmd_distance(file, out_path, o);
    if (*geodesic) return cmd_geodesic(file, out_path, o);
    if (*info) return cmd_operator_info(file, o);
    if (*verify) return cmd_verify(file, suite, o);
  } catch (const momt::InfeasibleError& e) {
    std::cerr << "error [infeasible]: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const momt::io::ParseError& e) {
    std::cerr << "error [" << e.code() << "]: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
