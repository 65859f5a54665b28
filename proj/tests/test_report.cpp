#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "karamata/dsl.hpp"
#include "karamata/errors.hpp"
#include "karamata/report.hpp"
#include "karamata/smooth.hpp"
#include "karamata/verify.hpp"

using namespace karamata;

namespace {

const CheckConfig cfg;

std::string temp_path(const std::string& stem) {
  return std::string("/tmp/karamata_test_") + stem;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("empty report round-trips") {
  RunReport r;
  r.expr = "one";
  r.created = timestamp_now();
  const std::string path = temp_path("empty.json");
  write_json(r, path);
  CHECK(read_json(path) == r);
}

TEST_CASE("report with an equivalence result round-trips bit-identically") {
  EquivalenceReport eq;
  eq.eps = 1.0;
  eq.samples = {{0.0, 1.0, "lower"}, {1.5, 0.3333333333333333, "upper"}};
  eq.c_low = 1.0;
  eq.c_high = 1.0;
  eq.pass = true;
  eq.provenance = "test";

  RunReport r;
  r.expr = "logp";
  r.created = "2026-08-08T00:00:00Z";
  r.results.push_back({"check_sv eps=1", eq});

  const std::string path = temp_path("eq.json");
  write_json(r, path);
  const RunReport back = read_json(path);
  CHECK(back == r);
  const auto& eq2 = std::get<EquivalenceReport>(back.results[0].payload);
  CHECK(eq2.samples[1].ratio == 0.3333333333333333);  // bit-identical
}

TEST_CASE("every result payload kind survives the round trip") {
  RunReport r;
  r.expr = "loglogp";
  r.created = timestamp_now();

  ScalingReport sc;
  sc.eps = 0.1;
  sc.factors = {0.1, 10.0};
  sc.c_eps = 3.25;
  sc.worst_u = 0.0;
  sc.worst_factor = 10.0;
  r.results.push_back({"scaling", sc});

  TrendReport tr;
  tr.alpha = 1.0;
  tr.at_zero = Trend::kToZero;
  tr.at_infinity = Trend::kToInfinity;
  tr.integral_zero_converges = true;
  r.results.push_back({"trend", tr});

  GrowthReport gr;
  gr.form = TildeForm::kHatSup;
  gr.samples = {{0.0, 2.0, 1.5}};
  gr.running_max_increased_last_decade = true;
  gr.note = "diagnostic";
  r.results.push_back({"growth", gr});

  DerivativeRatioReport dr;
  dr.samples = {{0.0, -0.25}};
  dr.sign_changes = 1;
  r.results.push_back({"conjecture", dr});

  const std::string path = temp_path("all.json");
  write_json(r, path);
  CHECK(read_json(path) == r);
}

TEST_CASE("divergent values serialize as tags, not JSON infinities") {
  EquivalenceReport eq;
  eq.c_low = std::numeric_limits<double>::infinity();
  eq.c_high = 0.0;
  eq.reason = "NotSlowlyVarying";

  RunReport r;
  r.expr = "wdec(one,2)";
  r.created = timestamp_now();
  r.results.push_back({"failed check", eq});

  const std::string text = to_json_string(r);
  CHECK(text.find("divergent") != std::string::npos);
  CHECK(text.find("inf,") == std::string::npos);  // no bare infinity token
  const RunReport back = from_json_string(text);
  CHECK(back == r);
}

TEST_CASE("malformed input raises SchemaMismatch, not a crash") {
  CHECK_THROWS_AS(from_json_string("this is not json"), SchemaMismatch);
  CHECK_THROWS_AS(from_json_string("{\"schema\": 999}"), SchemaMismatch);
  CHECK_THROWS_AS(from_json_string("{\"schema\": 1}"), SchemaMismatch);

  // Unknown result type inside an otherwise valid envelope.
  RunReport probe;
  probe.expr = "one";
  probe.created = "2026-08-08T00:00:00Z";
  std::string text = to_json_string(probe);
  text.insert(text.rfind(']'),
              "{\"name\":\"x\",\"type\":\"mystery\",\"data\":{}}");
  CHECK_THROWS_AS(from_json_string(text), SchemaMismatch);

  const std::string path = temp_path("garbage.json");
  {
    std::ofstream out(path);
    out << "{]";
  }
  CHECK_THROWS_AS(read_json(path), SchemaMismatch);
  CHECK_THROWS_AS(read_json("/nonexistent/dir/report.json"), IoError);
  RunReport r;
  CHECK_THROWS_AS(write_json(r, "/nonexistent/dir/report.json"), IoError);
}

TEST_CASE("expression CSV matches in-process evaluation") {
  GridSpec g;
  g.u_min = -std::log(10.0);
  g.u_max = std::log(10.0);
  g.points_per_decade = 1;  // three rows: u_min, 0, u_max
  const std::string path = temp_path("expr.csv");
  write_samples_csv(Expr::one(), g, path);
  const std::string text = slurp(path);
  CHECK(text.rfind("t,u,value\n", 0) == 0);

  // Three grid points, value column all exactly 1.
  std::istringstream lines(text);
  std::string line;
  std::getline(lines, line);
  int rows = 0;
  while (std::getline(lines, line)) {
    CHECK(line.substr(line.rfind(',') + 1) == "1");
    ++rows;
  }
  CHECK(rows == 3);

  // logp at t = e has value 2.
  GridSpec ge;
  ge.u_min = 1.0;
  ge.u_max = 2.0;
  ge.points_per_decade = 1;
  write_samples_csv(Expr::logp(), ge, path);
  const std::string text2 = slurp(path);
  CHECK(text2.find(",1,2\n") != std::string::npos);
}

TEST_CASE("smooth CSV values reproduce the evaluator bit-exactly") {
  GridSpec g;
  g.u_min = -2.0;
  g.u_max = 2.0;
  g.points_per_decade = 2;
  const SmoothResult res = smooth_equivalent(Expr::logp(), g, cfg);
  const std::string path = temp_path("smooth.csv");
  write_samples_csv(res.c, g, 2, path);

  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,u,value,d1,d2");
  std::string line;
  size_t idx = 0;
  const auto pts = g.points();
  while (std::getline(in, line)) {
    REQUIRE(idx < pts.size());
    double t, u, value, d1, d2;
    REQUIRE(std::sscanf(line.c_str(), "%lg,%lg,%lg,%lg,%lg", &t, &u, &value,
                        &d1, &d2) == 5);
    CHECK(value == res.c.value_log(pts[idx]));
    CHECK(d1 == res.c.derivative(1, std::exp(pts[idx])));
    ++idx;
  }
  CHECK(idx == pts.size());

  CHECK_THROWS_AS(write_samples_csv(res.c, g, 99, path), PreconditionFailed);
}
