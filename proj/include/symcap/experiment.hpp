#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "symcap/error.hpp"

namespace symcap {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.3.0";

/// Records that cannot be combined (schema version, malformed cells).
class SchemaError : public Error {
 public:
  using Error::Error;
};

enum class Method { plane_search, lowner, ellipsoid, inradius, pipeline };

std::string to_string(Method m);
Method method_from_string(const std::string& s);  // ConfigError("methods", ...) on unknown names

struct Budgets {
  long mc_samples = 200'000;
  long search_trials = 500;
  int position_budget = 400;
  int grid_m = 720;
};

struct OutputSpec {
  std::string path;  // empty: do not write
  std::string format = "json";  // json | csv
};

struct ExperimentConfig {
  std::vector<nlohmann::json> bodies;  // body descriptions, "dim" optional
  std::vector<int> dims;
  std::vector<Method> methods;
  std::vector<std::uint64_t> seeds{1};
  Budgets budgets;
  OutputSpec output;

  /// Validates kinds, methods and dimensions; errors name the field.
  static ExperimentConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  /// FNV-1a of the canonical serialization, hex.
  std::string hash() const;
};

struct CellResult {
  std::string family;
  int dim = 0;
  std::uint64_t seed = 0;
  std::string method;
  std::string status = "ok";  // ok | error
  std::optional<std::string> error;
  std::optional<double> bound;
  std::string bound_kind;
  std::optional<double> gamma;
  std::optional<double> volume;
  std::optional<double> volume_std_error;
  bool volume_exact = false;
  double wall_time = 0.0;
  nlohmann::json detail;  // full certificate or pipeline report
};

struct RunRecord {
  int schema_version = kSchemaVersion;
  std::string config_hash;
  std::string timestamp;
  std::string tool_version = kToolVersion;
  nlohmann::json config;
  std::vector<CellResult> cells;

  bool partial_failure() const;
  nlohmann::json to_json() const;
  static RunRecord from_json(const nlohmann::json& j);  // SchemaError on mismatch
};

/// Expands every body over its dimensions and runs every method for every
/// seed. Cells run in parallel; each cell's failure is recorded in the cell.
/// Writes the record to config.output.path when set.
RunRecord run(const ExperimentConfig& config);

/// Fixed-width text table: family, n, seed, method, bound, gamma, status.
std::string summary_table(const RunRecord& record);

/// One row per cell: family,dim,n,seed,method,status,bound_kind,bound,gamma,volume,wall_time.
std::string cells_csv(const RunRecord& record);

struct ReportRow {
  std::string family;
  std::string method;
  int n = 0;
  double gamma = 0.0;
  double two_n = 0.0;
  double log_sq = 0.0;
  bool flagged = false;  // gamma > 2n
};

struct ReportDocument {
  std::vector<ReportRow> rows;
  int flagged = 0;
  std::string text;  // per-family gamma-vs-n tables
  std::string csv;   // family,method,n,gamma,2n,log^2(n),flag
};

/// Collects every cell carrying gamma. Throws SchemaError on an empty input,
/// mixed schema versions, or cells with invalid dimensions.
ReportDocument report(const std::vector<RunRecord>& records);

/// Pipeline over one body family for each dimension; CSV columns
/// n,bound,volume,gamma,two_n_baseline.
std::string sweep_csv(const RunRecord& record);

}  // namespace symcap
