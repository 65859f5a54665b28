#pragma once

#include <string>
#include <variant>
#include <vector>

#include "karamata/config.hpp"
#include "karamata/expr.hpp"
#include "karamata/smooth.hpp"
#include "karamata/verify.hpp"

namespace karamata {

inline constexpr int kReportSchema = 1;
inline constexpr const char* kToolVersion = "0.1.0";

using ResultPayload =
    std::variant<EquivalenceReport, ScalingReport, TrendReport, GrowthReport,
                 DerivativeRatioReport>;

struct NamedResult {
  std::string name;
  ResultPayload payload;

  bool operator==(const NamedResult&) const = default;
};

/// Everything one tool invocation produced, serializable to JSON. Numeric
/// fields are finite or carried as explicit divergent tags, never as raw
/// JSON infinities.
struct RunReport {
  int schema = kReportSchema;
  std::string version = kToolVersion;
  std::string expr;  // DSL text of the checked expression
  CheckConfig config;
  GridSpec grid;
  std::string created;  // ISO 8601, UTC
  std::vector<NamedResult> results;

  bool operator==(const RunReport&) const = default;
};

/// Current time as an ISO 8601 UTC stamp.
std::string timestamp_now();

std::string to_json_string(const RunReport& r);
RunReport from_json_string(const std::string& text);

void write_json(const RunReport& r, const std::string& path);
RunReport read_json(const std::string& path);

/// Sample table: t, u = ln t, value and derivative columns, 17 significant
/// digits, header row included.
void write_samples_csv(const SmoothEvaluator& c, const GridSpec& grid,
                       int deriv_orders, const std::string& path);

/// Value-only variant for plain expressions (e.g. monotone witnesses).
void write_samples_csv(const Expr& e, const GridSpec& grid,
                       const std::string& path);

}  // namespace karamata
