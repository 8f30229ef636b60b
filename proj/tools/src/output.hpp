#pragma once

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "config.hpp"

namespace hypercross::cli {

/// Output directory plus a plain-text summary mirrored to stdout.
class OutputSink {
 public:
  explicit OutputSink(std::filesystem::path dir);

  const std::filesystem::path& dir() const { return dir_; }
  void write_file(const std::string& name, const std::string& contents) const;
  void write_json(const std::string& name, const nlohmann::json& j) const;

  /// Appends a line to summary.txt and prints it.
  void line(const std::string& text);
  void flush_summary() const;

 private:
  std::filesystem::path dir_;
  std::ostringstream summary_;
};

/// Run metadata echoed into every JSON output.
nlohmann::json metadata(const ExperimentConfig& cfg, const std::string& command, const QuasiInterpOp& op);

/// JSON number, or the string "inf" for infinite values.
nlohmann::json json_real(double v);

std::string pad(const std::string& s, std::size_t width);
/// Quotes a CSV field when it contains separators.
std::string csv_field(const std::string& s);
/// Round-trip decimal form (17 significant digits), "inf" for infinity.
std::string num(double v);
std::string fixed(double v, int digits = 3);

}  // namespace hypercross::cli
