#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <hypercross/errors.hpp>
#include <hypercross/operators.hpp>
#include <hypercross/spaces.hpp>
#include <hypercross/testbed.hpp>

namespace hypercross::cli {

inline constexpr std::int64_t kSchemaVersion = 1;

/// Raised for invalid configuration; the message starts with the offending field.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& field, const std::string& what) : Error(field + ": " + what), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct OperatorConfig {
  std::string name;  // named operator, empty when kernel/averager are given explicitly
  std::string kernel = "dlvp";
  double rho = 0.5;
  double support = 0.75;
  int sigma = 2;
  std::vector<double> a;
  std::string averager = "delta";
  int averager_sigma = 2;
  double averager_scale = 1.0;
  std::vector<double> shifts;
  std::vector<double> weights;
  std::string mode = "sampling";
  std::string path = "sampled";
};

struct FunctionConfig {
  std::string kind = "korobov";
  double a = 2.0;
  std::int64_t bandwidth = 1024;
  int n = 4;
  std::optional<int> xi;
  std::vector<int> levels;
  int terms = 12;
  int max_freq = 40;
  std::vector<int> k;
  double alpha = 1.0;
};

struct RatesConfig {
  int n_min = 2;
  int n_max = 8;
  std::vector<double> q{2.0};
  std::optional<double> p;
  std::optional<double> theta;
  std::optional<double> r;
  int drop = 2;
  std::optional<double> rate_tolerance;
  bool timing = true;
};

struct ConditionsConfig {
  int jmax = 12;
  int umax = 20;
  double delta = 4.0;
  std::vector<double> s{2.0};
  std::vector<double> q{1.0, 2.0, kInf};
};

struct LpCheckConfig {
  NormSpec spec{NormFamily::B, 2.0, 2.0, 1.5};
  int jmax = 12;
  int corpus_levels = 6;
  bool include_function = true;
  bool include_constant = true;
  std::optional<double> max_spread;
};

struct SharpnessConfig {
  int n_min = 3;
  int n_max = 12;
  std::optional<int> xi;
  double alpha = 1.0;
  double tol = 1e-10;
};

struct GridInfoConfig {
  int n_max = 6;
  int brute_force_max = 5;
};

struct ExperimentConfig {
  std::string source;
  std::int64_t schema_version = kSchemaVersion;
  std::uint64_t seed = 1;
  int dim = 1;
  PhiKind phi_kind = PhiKind::smooth;
  OperatorConfig op;
  FunctionConfig function;
  RatesConfig rates;
  ConditionsConfig conditions;
  LpCheckConfig lp_check;
  SharpnessConfig sharpness;
  GridInfoConfig grid_info;
};

/// Parses and validates a TOML config; throws ConfigError naming the failing field.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& text, const std::string& source = "<string>");

QuasiInterpOp build_operator(const ExperimentConfig& cfg);
EvalPath eval_path(const ExperimentConfig& cfg);
TestFunction build_function(const ExperimentConfig& cfg);

std::string format_real(double v);

}  // namespace hypercross::cli
