#include "karamata/report.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "karamata/errors.hpp"

namespace karamata {

namespace {

using nlohmann::json;

// Numbers serialize as numbers; non-finite values become explicit tags so
// the JSON never carries bare infinities.
json enc(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return json{{"divergent", "nan"}};
  return json{{"divergent", x > 0 ? "+inf" : "-inf"}};
}

double dec(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_object() && j.contains("divergent")) {
    const std::string tag = j.at("divergent").get<std::string>();
    if (tag == "nan") return std::nan("");
    if (tag == "+inf") return std::numeric_limits<double>::infinity();
    if (tag == "-inf") return -std::numeric_limits<double>::infinity();
  }
  throw SchemaMismatch("expected a number or a divergent tag");
}

json grid_to_json(const GridSpec& g) {
  return {{"u_min", enc(g.u_min)},
          {"u_max", enc(g.u_max)},
          {"points_per_decade", g.points_per_decade}};
}

GridSpec grid_from_json(const json& j) {
  GridSpec g;
  g.u_min = dec(j.at("u_min"));
  g.u_max = dec(j.at("u_max"));
  g.points_per_decade = j.at("points_per_decade").get<int>();
  return g;
}

json config_to_json(const CheckConfig& c) {
  return {{"rel_tol", enc(c.rel_tol)},
          {"abs_tol", enc(c.abs_tol)},
          {"limit_tol", enc(c.limit_tol)},
          {"tail_block_width", enc(c.tail_block_width)},
          {"max_subdivisions", c.max_subdivisions},
          {"ceiling", enc(c.ceiling)},
          {"eps_list", c.eps_list},
          {"max_deriv_order", c.max_deriv_order}};
}

CheckConfig config_from_json(const json& j) {
  CheckConfig c;
  c.rel_tol = dec(j.at("rel_tol"));
  c.abs_tol = dec(j.at("abs_tol"));
  c.limit_tol = dec(j.at("limit_tol"));
  c.tail_block_width = dec(j.at("tail_block_width"));
  c.max_subdivisions = j.at("max_subdivisions").get<int>();
  c.ceiling = dec(j.at("ceiling"));
  c.eps_list = j.at("eps_list").get<std::vector<double>>();
  c.max_deriv_order = j.at("max_deriv_order").get<int>();
  return c;
}

json equivalence_to_json(const EquivalenceReport& r) {
  json samples = json::array();
  for (const RatioSample& s : r.samples) {
    samples.push_back({{"u", enc(s.u)}, {"ratio", enc(s.ratio)},
                       {"family", s.family}});
  }
  return {{"grid", grid_to_json(r.grid)},
          {"eps", enc(r.eps)},
          {"ceiling", enc(r.ceiling)},
          {"samples", samples},
          {"c_low", enc(r.c_low)},
          {"c_high", enc(r.c_high)},
          {"pass", r.pass},
          {"reason", r.reason},
          {"provenance", r.provenance}};
}

EquivalenceReport equivalence_from_json(const json& j) {
  EquivalenceReport r;
  r.grid = grid_from_json(j.at("grid"));
  r.eps = dec(j.at("eps"));
  r.ceiling = dec(j.at("ceiling"));
  for (const json& s : j.at("samples")) {
    r.samples.push_back(
        {dec(s.at("u")), dec(s.at("ratio")), s.at("family").get<std::string>()});
  }
  r.c_low = dec(j.at("c_low"));
  r.c_high = dec(j.at("c_high"));
  r.pass = j.at("pass").get<bool>();
  r.reason = j.at("reason").get<std::string>();
  r.provenance = j.at("provenance").get<std::string>();
  return r;
}

json scaling_to_json(const ScalingReport& r) {
  return {{"grid", grid_to_json(r.grid)},
          {"eps", enc(r.eps)},
          {"factors", r.factors},
          {"c_eps", enc(r.c_eps)},
          {"worst_u", enc(r.worst_u)},
          {"worst_factor", enc(r.worst_factor)}};
}

ScalingReport scaling_from_json(const json& j) {
  ScalingReport r;
  r.grid = grid_from_json(j.at("grid"));
  r.eps = dec(j.at("eps"));
  r.factors = j.at("factors").get<std::vector<double>>();
  r.c_eps = dec(j.at("c_eps"));
  r.worst_u = dec(j.at("worst_u"));
  r.worst_factor = dec(j.at("worst_factor"));
  return r;
}

const char* trend_name(Trend t) {
  switch (t) {
    case Trend::kToZero:
      return "to_zero";
    case Trend::kToInfinity:
      return "to_infinity";
    case Trend::kFinitePositive:
      return "finite_positive";
    default:
      return "undetermined";
  }
}

Trend trend_from_name(const std::string& s) {
  if (s == "to_zero") return Trend::kToZero;
  if (s == "to_infinity") return Trend::kToInfinity;
  if (s == "finite_positive") return Trend::kFinitePositive;
  if (s == "undetermined") return Trend::kUndetermined;
  throw SchemaMismatch("unknown trend: " + s);
}

json trend_to_json(const TrendReport& r) {
  return {{"alpha", enc(r.alpha)},
          {"at_zero", trend_name(r.at_zero)},
          {"at_infinity", trend_name(r.at_infinity)},
          {"integral_zero_converges", r.integral_zero_converges},
          {"integral_inf_converges", r.integral_inf_converges}};
}

TrendReport trend_from_json(const json& j) {
  TrendReport r;
  r.alpha = dec(j.at("alpha"));
  r.at_zero = trend_from_name(j.at("at_zero").get<std::string>());
  r.at_infinity = trend_from_name(j.at("at_infinity").get<std::string>());
  r.integral_zero_converges = j.at("integral_zero_converges").get<bool>();
  r.integral_inf_converges = j.at("integral_inf_converges").get<bool>();
  return r;
}

const char* form_name(TildeForm f) {
  switch (f) {
    case TildeForm::kTilde:
      return "tilde";
    case TildeForm::kHat:
      return "hat";
    case TildeForm::kTildeSup:
      return "tilde_sup";
    default:
      return "hat_sup";
  }
}

TildeForm form_from_name(const std::string& s) {
  if (s == "tilde") return TildeForm::kTilde;
  if (s == "hat") return TildeForm::kHat;
  if (s == "tilde_sup") return TildeForm::kTildeSup;
  if (s == "hat_sup") return TildeForm::kHatSup;
  throw SchemaMismatch("unknown construction form: " + s);
}

json growth_to_json(const GrowthReport& r) {
  json samples = json::array();
  for (const GrowthSample& s : r.samples) {
    samples.push_back({{"u", enc(s.u)},
                       {"constructed", enc(s.constructed)},
                       {"ratio", enc(s.ratio)}});
  }
  return {{"form", form_name(r.form)},
          {"samples", samples},
          {"running_max_increased_last_decade",
           r.running_max_increased_last_decade},
          {"note", r.note}};
}

GrowthReport growth_from_json(const json& j) {
  GrowthReport r;
  r.form = form_from_name(j.at("form").get<std::string>());
  for (const json& s : j.at("samples")) {
    r.samples.push_back(
        {dec(s.at("u")), dec(s.at("constructed")), dec(s.at("ratio"))});
  }
  r.running_max_increased_last_decade =
      j.at("running_max_increased_last_decade").get<bool>();
  r.note = j.at("note").get<std::string>();
  return r;
}

json derivative_ratio_to_json(const DerivativeRatioReport& r) {
  json samples = json::array();
  for (const DerivativeRatioSample& s : r.samples) {
    samples.push_back({{"u", enc(s.u)}, {"b0", enc(s.b0)}});
  }
  json checks = json::array();
  for (const SvCheck& c : r.sv_checks) {
    checks.push_back(
        {{"eps", enc(c.eps)}, {"report", equivalence_to_json(c.report)}});
  }
  return {{"label", r.label},
          {"samples", samples},
          {"sign_changes", r.sign_changes},
          {"degenerate_zero", r.degenerate_zero},
          {"negated", r.negated},
          {"sv_checks", checks}};
}

DerivativeRatioReport derivative_ratio_from_json(const json& j) {
  DerivativeRatioReport r;
  r.label = j.at("label").get<std::string>();
  for (const json& s : j.at("samples")) {
    r.samples.push_back({dec(s.at("u")), dec(s.at("b0"))});
  }
  r.sign_changes = j.at("sign_changes").get<int>();
  r.degenerate_zero = j.at("degenerate_zero").get<bool>();
  r.negated = j.at("negated").get<bool>();
  for (const json& c : j.at("sv_checks")) {
    r.sv_checks.push_back(
        {dec(c.at("eps")), equivalence_from_json(c.at("report"))});
  }
  return r;
}

json result_to_json(const NamedResult& r) {
  json data;
  std::string type;
  if (const auto* eq = std::get_if<EquivalenceReport>(&r.payload)) {
    type = "equivalence";
    data = equivalence_to_json(*eq);
  } else if (const auto* sc = std::get_if<ScalingReport>(&r.payload)) {
    type = "scaling";
    data = scaling_to_json(*sc);
  } else if (const auto* tr = std::get_if<TrendReport>(&r.payload)) {
    type = "trend";
    data = trend_to_json(*tr);
  } else if (const auto* gr = std::get_if<GrowthReport>(&r.payload)) {
    type = "growth";
    data = growth_to_json(*gr);
  } else {
    type = "derivative_ratio";
    data = derivative_ratio_to_json(std::get<DerivativeRatioReport>(r.payload));
  }
  return {{"name", r.name}, {"type", type}, {"data", data}};
}

NamedResult result_from_json(const json& j) {
  NamedResult r;
  r.name = j.at("name").get<std::string>();
  const std::string type = j.at("type").get<std::string>();
  const json& data = j.at("data");
  if (type == "equivalence") {
    r.payload = equivalence_from_json(data);
  } else if (type == "scaling") {
    r.payload = scaling_from_json(data);
  } else if (type == "trend") {
    r.payload = trend_from_json(data);
  } else if (type == "growth") {
    r.payload = growth_from_json(data);
  } else if (type == "derivative_ratio") {
    r.payload = derivative_ratio_from_json(data);
  } else {
    throw SchemaMismatch("unknown result type: " + type);
  }
  return r;
}

}  // namespace

std::string timestamp_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string to_json_string(const RunReport& r) {
  json results = json::array();
  for (const NamedResult& nr : r.results) results.push_back(result_to_json(nr));
  const json j = {{"schema", r.schema},   {"version", r.version},
                  {"expr", r.expr},       {"config", config_to_json(r.config)},
                  {"grid", grid_to_json(r.grid)},
                  {"created", r.created}, {"results", results}};
  return j.dump(2);
}

RunReport from_json_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw SchemaMismatch(std::string("not a valid report: ") + e.what());
  }
  try {
    RunReport r;
    r.schema = j.at("schema").get<int>();
    if (r.schema != kReportSchema) {
      std::ostringstream os;
      os << "report schema " << r.schema << ", this build reads "
         << kReportSchema;
      throw SchemaMismatch(os.str());
    }
    r.version = j.at("version").get<std::string>();
    r.expr = j.at("expr").get<std::string>();
    r.config = config_from_json(j.at("config"));
    r.grid = grid_from_json(j.at("grid"));
    r.created = j.at("created").get<std::string>();
    for (const json& nr : j.at("results")) {
      r.results.push_back(result_from_json(nr));
    }
    return r;
  } catch (const json::exception& e) {
    throw SchemaMismatch(std::string("malformed report: ") + e.what());
  }
}

void write_json(const RunReport& r, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << to_json_string(r) << '\n';
  if (!out) throw IoError("write failed: " + path);
}

RunReport read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_string(buf.str());
}

namespace {

void write_csv_row(std::ofstream& out, const std::vector<double>& cells) {
  char buf[32];
  for (size_t i = 0; i < cells.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", cells[i]);
    out << (i ? "," : "") << buf;
  }
  out << '\n';
}

}  // namespace

void write_samples_csv(const SmoothEvaluator& c, const GridSpec& grid,
                       int deriv_orders, const std::string& path) {
  if (deriv_orders < 0 || deriv_orders > c.max_order()) {
    throw PreconditionFailed(
        "write_samples_csv: derivative orders above the evaluator's limit");
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "t,u,value";
  for (int n = 1; n <= deriv_orders; ++n) out << ",d" << n;
  out << '\n';
  for (double u : grid.points()) {
    const double t = std::exp(u);
    std::vector<double> cells{t, u, c.value_log(u)};
    for (int n = 1; n <= deriv_orders; ++n) {
      cells.push_back(c.derivative(n, t));
    }
    write_csv_row(out, cells);
  }
  if (!out) throw IoError("write failed: " + path);
}

void write_samples_csv(const Expr& e, const GridSpec& grid,
                       const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "t,u,value\n";
  for (double u : grid.points()) {
    write_csv_row(out, {std::exp(u), u, e.eval_log(u)});
  }
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace karamata
