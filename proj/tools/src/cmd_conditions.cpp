#include <cmath>

#include "commands.hpp"
#include "output.hpp"

namespace hypercross::cli {

namespace {

enum class Status { pass, fail, na, heuristic_pass, heuristic_fail, info };

std::string to_string(Status s) {
  switch (s) {
    case Status::pass: return "PASS";
    case Status::fail: return "FAIL";
    case Status::na: return "N/A";
    case Status::heuristic_pass: return "HEURISTIC PASS";
    case Status::heuristic_fail: return "HEURISTIC FAIL";
    case Status::info: return "INFO";
  }
  return "?";
}

struct Row {
  std::string check;
  Status status;
  std::string value;
  nlohmann::json data = nullptr;
};

/// log2 slope of v over the upper half of the levels.
double growth(const std::vector<double>& v) {
  const std::size_t lo = v.size() / 2;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  double n = 0;
  for (std::size_t j = lo; j < v.size(); ++j) {
    if (!(v[j] > 0.0)) continue;
    const double x = static_cast<double>(j);
    const double y = std::log2(v[j]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    n += 1;
  }
  if (n < 2) return 0.0;
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

int cmd_conditions(const RunContext& ctx) {
  const ExperimentConfig& cfg = ctx.cfg;
  const ConditionsConfig& cc = cfg.conditions;
  const QuasiInterpOp op = build_operator(cfg);
  const KernelFamily& kern = op.kern();
  const AveragerFamily& avg = op.avg();
  std::vector<Row> rows;

  {
    bool ok = true;
    for (int j = 0; j <= cc.jmax && ok; ++j) {
      const std::int64_t b = kern.bandwidth(j);
      for (std::int64_t k = b; k <= 2 * b + 1 && ok; ++k) {
        ok = kern.symbol(j, k) == Complex(0.0) && kern.symbol(j, -k) == Complex(0.0);
      }
    }
    rows.push_back({"bandwidth: symbol vanishes for |k| >= B_j", ok ? Status::pass : Status::fail,
                    "B_" + std::to_string(cc.jmax) + " = " + std::to_string(kern.bandwidth(cc.jmax))});
  }
  {
    double worst = 0.0;
    for (int j = 0; j <= cc.jmax; ++j) worst = std::max(worst, std::abs(kern.symbol(j, 0) - 1.0));
    const bool ok = kern.normalized() && worst <= 1e-14;
    rows.push_back({"normalization: phi^_j(0) = 1", ok ? Status::pass : Status::fail, "max |phi^_j(0) - 1| = " + num(worst)});
  }
  for (double q : cc.q) {
    const std::string name = "L_{" + format_real(q) + ",j} norm of the averager bounded in j";
    if (avg.kind() != AveragerKind::function) {
      rows.push_back({name, Status::na, avg.name() + " is not a function"});
      continue;
    }
    std::vector<double> values;
    for (int j = 0; j <= cc.jmax; ++j) values.push_back(averager_norm_Lqj(avg, q, j));
    const double g = growth(values);
    const double top = *std::max_element(values.begin(), values.end());
    rows.push_back({name, g < 0.1 ? Status::pass : Status::fail, "max " + num(top) + ", growth " + fixed(g),
                    nlohmann::json(values)});
  }
  for (double s : cc.s) {
    const CompatProxy proxy = compat_condition_proxy(op, s, cc.delta, cc.jmax);
    rows.push_back({"compat proxy s=" + format_real(s) + " (sampled Sobolev heuristic)",
                    proxy.pass ? Status::heuristic_pass : Status::heuristic_fail, "growth " + fixed(proxy.growth),
                    nlohmann::json(proxy.values)});
  }
  {
    const DefectOrder d = taylor_defect(kern, avg);
    const std::string v = d.status == DefectOrder::Status::finite
                              ? std::to_string(d.order) + " (slope " + fixed(d.slope) + ")"
                              : hypercross::to_string(d.status);
    rows.push_back({"defect order of 1 - phi^ phi~^", Status::info, v});
  }
  {
    const auto cond = check_cond(avg, cc.umax);
    const std::string v = cond ? "(xi, lambda) = (" + std::to_string(cond->xi) + ", " + num(cond->lambda.real()) +
                                     (cond->lambda.imag() != 0.0 ? " + " + num(cond->lambda.imag()) + "i" : "") + ")"
                               : "none";
    nlohmann::json data = nullptr;
    if (cond) data = {{"xi", cond->xi}, {"lambda_re", cond->lambda.real()}, {"lambda_im", cond->lambda.imag()}};
    rows.push_back({"averager pattern (cond) at frequencies 2^u", Status::info, v, data});
  }

  OutputSink out(ctx.out);
  out.line("conditions: " + op.label() + ", d=" + std::to_string(cfg.dim) + ", jmax=" + std::to_string(cc.jmax));
  bool ok = true;
  nlohmann::json table = nlohmann::json::array();
  for (const auto& r : rows) {
    out.line(pad(to_string(r.status), 16) + pad(r.check, 58) + r.value);
    if (r.status == Status::fail) ok = false;
    table.push_back({{"check", r.check}, {"status", to_string(r.status)}, {"value", r.value}, {"data", r.data}});
  }
  nlohmann::json doc = metadata(cfg, "conditions", op);
  doc["delta"] = cc.delta;
  doc["checks"] = table;
  doc["note"] = "HEURISTIC rows are sampled diagnostics and do not affect the exit code";
  doc["pass"] = ok;
  out.write_json("conditions.json", doc);
  out.line(ok ? "result: PASS" : "result: FAIL");
  out.flush_summary();
  return ok ? 0 : 1;
}

}  // namespace hypercross::cli
