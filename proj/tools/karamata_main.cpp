// Command line driver: parses the expression DSL and runs the checks,
// witnesses, the smoothing pipeline and the exploratory diagnostics.
//
// Exit codes: 0 pass, 2 failed verdict, 1 any error.

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "karamata/dsl.hpp"
#include "karamata/errors.hpp"
#include "karamata/expr.hpp"
#include "karamata/report.hpp"
#include "karamata/smooth.hpp"
#include "karamata/verify.hpp"

namespace {

using namespace karamata;

GridSpec parse_grid(const std::string& text) {
  double t_min = 0.0, t_max = 0.0;
  int ppd = 0;
  char c1 = 0, c2 = 0;
  std::istringstream is(text);
  if (!(is >> t_min >> c1 >> t_max >> c2 >> ppd) || c1 != ':' || c2 != ':' ||
      !is.eof()) {
    throw PreconditionFailed("grid must be MIN:MAX:POINTS_PER_DECADE, e.g. "
                             "1e-8:1e8:16");
  }
  if (!(t_min > 0.0) || !(t_max > t_min) || ppd <= 0) {
    throw PreconditionFailed("grid endpoints must satisfy 0 < MIN < MAX with "
                             "a positive point count");
  }
  GridSpec g;
  g.u_min = std::log(t_min);
  g.u_max = std::log(t_max);
  g.points_per_decade = ppd;
  return g;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::istringstream is(text);
  std::string item;
  while (std::getline(is, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stod(item));
  }
  if (out.empty()) throw PreconditionFailed("expected a comma-separated list");
  return out;
}

void emit(const RunReport& report, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << to_json_string(report) << '\n';
  } else {
    write_json(report, out_path);
  }
}

RunReport base_report(const std::string& expr_text, const CheckConfig& cfg,
                      const GridSpec& grid) {
  RunReport r;
  r.expr = expr_text;
  r.config = cfg;
  r.grid = grid;
  r.created = timestamp_now();
  return r;
}

struct CommonArgs {
  std::string expr;
  std::string grid = "1e-8:1e8:16";
  std::string out;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical toolkit for slowly varying functions"};
  app.require_subcommand(1);

  CheckConfig cfg;
  if (const char* tol = std::getenv("KARAMATA_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(tol, &end);
    if (end != tol && v > 0.0) cfg.rel_tol = v;
  }

  CommonArgs check_args;
  std::string check_eps = "0.25,0.5,1,2";
  double check_ceiling = 1e6;
  auto* check = app.add_subcommand("check", "verify the s.v. property");
  check->add_option("--expr", check_args.expr, "expression")->required();
  check->add_option("--eps", check_eps, "comma-separated eps list");
  check->add_option("--grid", check_args.grid, "t grid MIN:MAX:PPD");
  check->add_option("--ceiling", check_ceiling, "verdict ceiling");
  check->add_option("--out", check_args.out, "report file (stdout if absent)");

  CommonArgs scaling_args;
  std::string scaling_factors = "0.1,0.5,2,10";
  double scaling_eps = 1.0;
  auto* scaling =
      app.add_subcommand("scaling", "minimal scaling-inequality constant");
  scaling->add_option("--expr", scaling_args.expr, "expression")->required();
  scaling->add_option("--factors", scaling_factors, "scale factors");
  scaling->add_option("--eps", scaling_eps, "eps exponent");
  scaling->add_option("--grid", scaling_args.grid, "t grid MIN:MAX:PPD");
  scaling->add_option("--out", scaling_args.out, "report file");

  CommonArgs witness_args;
  double witness_eps = 1.0;
  std::string witness_sign = "+";
  std::string witness_sample = "1e-8:1e8:16";
  auto* witness =
      app.add_subcommand("witness", "emit a monotone witness sample table");
  witness->add_option("--expr", witness_args.expr, "expression")->required();
  witness->add_option("--eps", witness_eps, "eps exponent");
  witness->add_option("--sign", witness_sign, "+ (non-decreasing) or - "
                                              "(non-increasing)");
  witness->add_option("--sample", witness_sample, "sample grid MIN:MAX:PPD");
  witness->add_option("--grid", witness_args.grid,
                      "certificate grid MIN:MAX:PPD");
  witness->add_option("--out", witness_args.out, "CSV file")->required();

  CommonArgs smooth_args;
  int smooth_deriv = 2;
  std::string smooth_sample = "1e-8:1e8:16";
  std::string smooth_report;
  auto* smooth_cmd =
      app.add_subcommand("smooth", "construct the smooth equivalent");
  smooth_cmd->add_option("--expr", smooth_args.expr, "expression")->required();
  smooth_cmd->add_option("--deriv", smooth_deriv, "derivative columns");
  smooth_cmd->add_option("--sample", smooth_sample, "sample grid MIN:MAX:PPD");
  smooth_cmd->add_option("--grid", smooth_args.grid,
                         "equivalence grid MIN:MAX:PPD");
  smooth_cmd->add_option("--out", smooth_args.out, "CSV file")->required();
  smooth_cmd->add_option("--report", smooth_report, "JSON report file");

  CommonArgs limits_args;
  double limits_alpha = 1.0;
  auto* limits =
      app.add_subcommand("limits", "trend of t^alpha b(t) at both ends");
  limits->add_option("--expr", limits_args.expr, "expression")->required();
  limits->add_option("--alpha", limits_alpha, "exponent alpha")->required();
  limits->add_option("--out", limits_args.out, "report file");

  CommonArgs conj_args;
  auto* conjecture = app.add_subcommand(
      "conjecture", "exploratory derivative-ratio diagnostic");
  conjecture->add_option("--expr", conj_args.expr, "expression")->required();
  conjecture->add_option("--grid", conj_args.grid, "t grid MIN:MAX:PPD");
  conjecture->add_option("--out", conj_args.out, "report file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (check->parsed()) {
      cfg.ceiling = check_ceiling;
      const GridSpec grid = parse_grid(check_args.grid);
      const Expr e = dsl::parse(check_args.expr, cfg);
      const auto checks = check_sv(e, parse_list(check_eps), grid, cfg);
      RunReport report = base_report(check_args.expr, cfg, grid);
      bool all_pass = true;
      for (const SvCheck& c : checks) {
        std::ostringstream name;
        name << "check_sv eps=" << c.eps;
        report.results.push_back({name.str(), c.report});
        all_pass = all_pass && c.report.pass;
      }
      emit(report, check_args.out);
      return all_pass ? 0 : 2;
    }

    if (scaling->parsed()) {
      const GridSpec grid = parse_grid(scaling_args.grid);
      const Expr e = dsl::parse(scaling_args.expr, cfg);
      const ScalingReport rep =
          check_scaling(e, parse_list(scaling_factors), scaling_eps, grid, cfg);
      RunReport report = base_report(scaling_args.expr, cfg, grid);
      report.results.push_back({"check_scaling", rep});
      emit(report, scaling_args.out);
      return 0;
    }

    if (witness->parsed()) {
      if (witness_sign != "+" && witness_sign != "-") {
        throw PreconditionFailed("--sign must be + or -");
      }
      const GridSpec grid = parse_grid(witness_args.grid);
      const Expr e = dsl::parse(witness_args.expr, cfg);
      const Witness w = monotone_witness(
          e, witness_eps,
          witness_sign == "+" ? WitnessSign::kNonDecreasing
                              : WitnessSign::kNonIncreasing,
          grid, cfg);
      write_samples_csv(w.expr, parse_grid(witness_sample), witness_args.out);
      return w.certificate.pass ? 0 : 2;
    }

    if (smooth_cmd->parsed()) {
      cfg.max_deriv_order = std::max(smooth_deriv, 4);
      const GridSpec grid = parse_grid(smooth_args.grid);
      const Expr e = dsl::parse(smooth_args.expr, cfg);
      const SmoothResult res = smooth_equivalent(e, grid, cfg);
      write_samples_csv(res.c, parse_grid(smooth_sample), smooth_deriv,
                        smooth_args.out);
      if (!smooth_report.empty()) {
        RunReport report = base_report(smooth_args.expr, cfg, grid);
        report.results.push_back({"smooth_equivalence", res.equivalence});
        write_json(report, smooth_report);
      }
      return res.equivalence.pass ? 0 : 2;
    }

    if (limits->parsed()) {
      const GridSpec grid = parse_grid(limits_args.grid);
      const Expr e = dsl::parse(limits_args.expr, cfg);
      const TrendReport rep = limit_diagnostics(e, limits_alpha, cfg);
      RunReport report = base_report(limits_args.expr, cfg, grid);
      report.results.push_back({"limit_diagnostics", rep});
      emit(report, limits_args.out);
      return 0;
    }

    if (conjecture->parsed()) {
      const GridSpec grid = parse_grid(conj_args.grid);
      const Expr e = dsl::parse(conj_args.expr, cfg);
      const SmoothResult res = smooth_equivalent(e, grid, cfg);
      const DerivativeRatioReport diag =
          derivative_ratio_diagnostic(res.c, grid, cfg);
      RunReport report = base_report(conj_args.expr, cfg, grid);
      report.results.push_back({"smooth_equivalence", res.equivalence});
      report.results.push_back({"derivative_ratio (EXPLORATORY)", diag});
      emit(report, conj_args.out);
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
