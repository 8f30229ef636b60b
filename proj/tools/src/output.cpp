#include "output.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>

namespace hypercross::cli {

OutputSink::OutputSink(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

void OutputSink::write_file(const std::string& name, const std::string& contents) const {
  const auto path = dir_ / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << contents;
}

void OutputSink::write_json(const std::string& name, const nlohmann::json& j) const { write_file(name, j.dump(2) + "\n"); }

void OutputSink::line(const std::string& text) {
  summary_ << text << '\n';
  std::cout << text << '\n';
}

void OutputSink::flush_summary() const { write_file("summary.txt", summary_.str()); }

nlohmann::json json_real(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  return v;
}

nlohmann::json metadata(const ExperimentConfig& cfg, const std::string& command, const QuasiInterpOp& op) {
  return {{"command", command},
          {"config", cfg.source},
          {"schema_version", cfg.schema_version},
          {"seed", cfg.seed},
          {"dim", cfg.dim},
          {"operator", op.label()},
          {"kernel", op.kern().name()},
          {"averager", op.avg().name()},
          {"measure", "normalized: (2 pi)^{-d} dx on the torus"},
          {"phi_kind", ResolutionOfUnity(cfg.phi_kind).name()}};
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string fixed(double v, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

}  // namespace hypercross::cli
