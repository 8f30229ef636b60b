#include <cmath>
#include <sstream>

#include "commands.hpp"
#include "output.hpp"
#include "worker_pool.hpp"

namespace hypercross::cli {

namespace {

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

int cmd_sharpness(const RunContext& ctx) {
  const ExperimentConfig& cfg = ctx.cfg;
  const SharpnessConfig& sc = cfg.sharpness;
  const QuasiInterpOp op = build_operator(cfg);
  const int d = cfg.dim;
  OutputSink out(ctx.out);
  out.line("sharpness: " + op.label() + ", d=" + std::to_string(d) + ", n=" + std::to_string(sc.n_min) + ".." +
           std::to_string(sc.n_max));

  const auto cond = check_cond(op.avg(), 40);
  if (!cond || (sc.xi && *sc.xi != cond->xi)) {
    out.line(cond ? "configured xi differs from the averager pattern (xi = " + std::to_string(cond->xi) + ")"
                  : "the averager has no (xi, lambda) pattern; the witness is undefined");
    out.line("result: FAIL");
    out.flush_summary();
    return 1;
  }
  const int xi = cond->xi;
  const Complex lambda = cond->lambda;

  struct Row {
    Complex c0;
    Complex expected;
  };
  const int count = sc.n_max - sc.n_min + 1;
  const std::vector<Row> rows = parallel_map(static_cast<std::size_t>(count), ctx.jobs, [&](std::size_t i) {
    const int n = sc.n_min + static_cast<int>(i);
    TrigPoly f = std::get<TrigPoly>(f_lower(n, xi, d).model) * Complex(sc.alpha);
    const Complex expected = sc.alpha * std::pow(lambda, d) * binom(n - 1, d - 1);
    return Row{c0_of_smolyak(op, f, n), expected};
  });

  std::ostringstream csv;
  csv << "n,c0_re,c0_im,expected_re,expected_im,abs_diff,match\n";
  nlohmann::json table = nlohmann::json::array();
  bool ok = true;
  out.line(pad("n", 5) + pad("c0", 26) + pad("alpha lambda^d C(n-1,d-1)", 28) + "match");
  for (int i = 0; i < count; ++i) {
    const int n = sc.n_min + i;
    const Row& r = rows[static_cast<std::size_t>(i)];
    const double diff = std::abs(r.c0 - r.expected);
    const bool match = diff <= sc.tol * std::max(1.0, std::abs(r.expected));
    ok = ok && match;
    csv << n << ',' << num(r.c0.real()) << ',' << num(r.c0.imag()) << ',' << num(r.expected.real()) << ','
        << num(r.expected.imag()) << ',' << num(diff) << ',' << (match ? "yes" : "no") << '\n';
    out.line(pad(std::to_string(n), 5) + pad(num(r.c0.real()), 26) + pad(num(r.expected.real()), 28) +
             (match ? "yes" : "no"));
    table.push_back({{"n", n}, {"c0_re", r.c0.real()}, {"c0_im", r.c0.imag()}, {"expected_re", r.expected.real()},
                     {"expected_im", r.expected.imag()}, {"abs_diff", diff}, {"match", match}});
  }
  out.write_file("sharpness.csv", csv.str());
  nlohmann::json doc = metadata(cfg, "sharpness", op);
  doc["xi"] = xi;
  doc["lambda"] = {lambda.real(), lambda.imag()};
  doc["alpha"] = sc.alpha;
  doc["tol"] = sc.tol;
  doc["rows"] = table;
  doc["pass"] = ok;
  out.write_json("sharpness.json", doc);
  out.line(ok ? "result: PASS" : "result: FAIL");
  out.flush_summary();
  return ok ? 0 : 1;
}

}  // namespace hypercross::cli
