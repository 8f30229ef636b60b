#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>

#include "commands.hpp"
#include "output.hpp"
#include "worker_pool.hpp"

namespace hypercross::cli {

namespace {

std::string q_tag(double q) { return std::isinf(q) ? "inf" : format_real(q); }

}  // namespace

int cmd_rates(const RunContext& ctx) {
  const ExperimentConfig& cfg = ctx.cfg;
  const RatesConfig& rc = cfg.rates;
  const QuasiInterpOp op = build_operator(cfg);
  const TestFunction f = build_function(cfg);
  const EvalPath path = eval_path(cfg);
  OutputSink out(ctx.out);

  struct Job {
    double q;
    int n;
  };
  std::vector<Job> jobs;
  for (double q : rc.q) {
    for (int n = rc.n_min; n <= rc.n_max; ++n) jobs.push_back({q, n});
  }
  const std::vector<ErrorRecord> records = parallel_map(jobs.size(), ctx.jobs, [&](std::size_t i) {
    ErrorRecord r = measure_error(op, f, jobs[i].n, jobs[i].q, path);
    if (!rc.timing) r.wallclock_ms = 0.0;
    return r;
  });

  std::ostringstream csv;
  csv << "label,op,d,n,q,error,dof,tail,wallclock_ms\n";
  int unreliable = 0;
  for (const auto& r : records) {
    csv << csv_field(r.label) << ',' << csv_field(r.op) << ',' << r.d << ',' << r.n << ',' << num(r.q) << ','
        << num(r.error) << ',' << r.dof << ',' << num(r.tail) << ',' << num(r.wallclock_ms) << '\n';
    if (!r.reliable()) ++unreliable;
  }
  out.write_file("records.csv", csv.str());

  // Smoothness used for the predicted exponent: config overrides, else the claimed membership.
  std::optional<NormSpec> target;
  if (f.claimed) target = f.claimed->space;
  if (rc.p && rc.theta && rc.r) target = NormSpec{NormFamily::B, *rc.p, *rc.theta, *rc.r};
  if (target) {
    if (rc.p) target->p = *rc.p;
    if (rc.theta) target->theta = *rc.theta;
    if (rc.r) target->r = *rc.r;
  }

  bool ok = unreliable == 0;
  nlohmann::json fits = nlohmann::json::array();
  out.line("rates: " + f.label + " with " + op.label() + ", d=" + std::to_string(cfg.dim) + ", n=" +
           std::to_string(rc.n_min) + ".." + std::to_string(rc.n_max));
  if (target) {
    out.line("smoothness: B^" + format_real(target->r) + "_{" + format_real(target->p) + "," + format_real(target->theta) + "}");
  }
  out.line(pad("q", 6) + pad("r_hat", 9) + pad("beta_hat", 10) + pad("predicted", 11) + pad("log_power", 11) + "status");
  for (double q : rc.q) {
    std::vector<ErrorRecord> subset;
    for (const auto& rec : records) {
      if (rec.q == q) subset.push_back(rec);
    }
    std::ostringstream plot;
    plot << "n,log2_error\n";
    for (const auto& rec : subset) plot << rec.n << ',' << num(std::log2(rec.error)) << '\n';
    out.write_file("plot_q" + q_tag(q) + ".csv", plot.str());

    nlohmann::json entry{{"q", json_real(q)}};
    std::string status;
    std::string r_hat = "-";
    std::string beta_hat = "-";
    try {
      const RateFit fit = fit_rate(subset, rc.drop);
      entry["r_hat"] = fit.r;
      entry["beta_hat"] = fit.beta;
      entry["C"] = fit.C;
      entry["residual_rms"] = fit.residual_rms;
      entry["ns"] = fit.ns;
      r_hat = fixed(fit.r);
      beta_hat = fixed(fit.beta);
      status = "fit";
      if (target) {
        const PredictedRate pred = predicted_rate(target->r, target->p, q, target->theta, cfg.dim);
        entry["predicted"] = {{"rate", pred.rate}, {"log_power", pred.log_power}, {"regime", pred.regime}};
        if (rc.rate_tolerance) {
          const bool within = std::abs(fit.r - pred.rate) <= *rc.rate_tolerance;
          entry["within_tolerance"] = within;
          status = within ? "PASS" : "FAIL";
          ok = ok && within;
        }
      }
    } catch (const FitError& e) {
      entry["fit_error"] = e.what();
      status = std::string("FAIL (") + e.what() + ")";
      ok = false;
    }
    std::string predicted = "-";
    std::string log_power = "-";
    if (entry.contains("predicted")) {
      predicted = fixed(entry["predicted"]["rate"].get<double>());
      log_power = fixed(entry["predicted"]["log_power"].get<double>());
    }
    out.line(pad(q_tag(q), 6) + pad(r_hat, 9) + pad(beta_hat, 10) + pad(predicted, 11) + pad(log_power, 11) + status);
    fits.push_back(entry);
  }
  if (unreliable > 0) out.line("unreliable records (tail >= 1% of error): " + std::to_string(unreliable));

  nlohmann::json doc = metadata(cfg, "rates", op);
  doc["function"] = f.label;
  if (f.claimed) doc["claimed_membership"] = f.claimed->justification;
  doc["rate_tolerance"] = rc.rate_tolerance ? nlohmann::json(*rc.rate_tolerance) : nlohmann::json(nullptr);
  doc["unreliable_records"] = unreliable;
  doc["fits"] = fits;
  doc["pass"] = ok;
  out.write_json("fit.json", doc);
  out.line(ok ? "result: PASS" : "result: FAIL");
  out.flush_summary();
  return ok ? 0 : 1;
}

}  // namespace hypercross::cli
