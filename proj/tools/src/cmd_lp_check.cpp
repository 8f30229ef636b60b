#include <cmath>
#include <sstream>

#include <hypercross/json_io.hpp>

#include "commands.hpp"
#include "output.hpp"
#include "worker_pool.hpp"

namespace hypercross::cli {

namespace {

struct Entry {
  std::string label;
  int l1 = -1;  // level sum for Phi_j entries, -1 otherwise
  FunctionModel model = TrigPoly(1);
};

struct Result {
  double discrete = 0.0;
  double shell = 0.0;
  double continuous = 0.0;
};

double continuous_norm(const FunctionModel& f, const NormSpec& spec, const ResolutionOfUnity& phi) {
  if (const auto* t = std::get_if<TrigPoly>(&f)) {
    return spec.family == NormFamily::B ? besov_norm(*t, spec, phi) : tl_norm(*t, spec, phi);
  }
  const auto& s = std::get<SeparableModel>(f);
  return spec.family == NormFamily::B ? besov_norm(s, spec, phi) : tl_norm(s.to_trig(), spec, phi);
}

}  // namespace

int cmd_lp_check(const RunContext& ctx) {
  const ExperimentConfig& cfg = ctx.cfg;
  const LpCheckConfig& lc = cfg.lp_check;
  const QuasiInterpOp op = build_operator(cfg);
  const ResolutionOfUnity phi(cfg.phi_kind);

  std::vector<Entry> corpus;
  for (const auto& j : simplex_levels(lc.corpus_levels, cfg.dim)) {
    TestFunction t = phi_j(j, phi);
    corpus.push_back({t.label, j.l1(), std::move(t.model)});
  }
  if (lc.include_constant) corpus.push_back({"constant", -1, TrigPoly::constant(cfg.dim, 1.0)});
  if (lc.include_function) {
    TestFunction t = build_function(cfg);
    corpus.push_back({t.label, -1, std::move(t.model)});
  }

  const std::vector<Result> results = parallel_map(corpus.size(), ctx.jobs, [&](std::size_t i) {
    const DiscreteNorm d = discrete_lp_quasi_norm(op, corpus[i].model, lc.spec, lc.jmax);
    return Result{d.value, d.shell, continuous_norm(corpus[i].model, lc.spec, phi)};
  });

  OutputSink out(ctx.out);
  out.line("lp-check: " + op.label() + ", " + to_string(lc.spec.family) + "^" + format_real(lc.spec.r) + "_{" +
           format_real(lc.spec.p) + "," + format_real(lc.spec.theta) + "}, jmax=" + std::to_string(lc.jmax) +
           ", corpus " + std::to_string(corpus.size()));
  std::ostringstream ratios;
  std::ostringstream plot;
  ratios << "label,l1,ratio\n";
  plot << "l1,ratio\n";
  nlohmann::json records = nlohmann::json::array();
  double lo = kInf;
  double hi = 0.0;
  double phi_lo = kInf;
  double phi_hi = 0.0;
  int bad = 0;
  int truncated = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const Result& r = results[i];
    const double ratio = r.discrete / r.continuous;
    const bool finite = std::isfinite(ratio) && ratio > 0.0;
    const bool reliable = r.shell <= 1e-2 * r.discrete;
    if (!finite) ++bad;
    if (!reliable) ++truncated;
    if (finite) {
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
      if (corpus[i].l1 >= 0) {
        phi_lo = std::min(phi_lo, ratio);
        phi_hi = std::max(phi_hi, ratio);
      }
    }
    ratios << csv_field(corpus[i].label) << ',' << corpus[i].l1 << ',' << num(ratio) << '\n';
    if (corpus[i].l1 >= 0) plot << corpus[i].l1 << ',' << num(ratio) << '\n';
    const NormRecord norm{to_string(lc.spec.family), lc.spec.p, lc.spec.theta, lc.spec.r, r.continuous,
                          model_tail(corpus[i].model), phi.name()};
    records.push_back({{"label", corpus[i].label},
                       {"norm", nlohmann::json::parse(to_json(norm))},
                       {"discrete", r.discrete},
                       {"shell", r.shell},
                       {"ratio", json_real(ratio)},
                       {"reliable", reliable}});
  }
  out.write_file("lp_ratios.csv", ratios.str());
  out.write_file("lp_plot.csv", plot.str());

  const double spread = phi_hi / phi_lo;
  bool ok = bad == 0 && truncated == 0;
  out.line("ratio interval, whole corpus: [" + num(lo) + ", " + num(hi) + "]");
  if (phi_hi > 0.0) out.line("ratio interval, Phi_j family: [" + num(phi_lo) + ", " + num(phi_hi) + "], max/min " + fixed(spread));
  if (bad > 0) out.line("undefined ratios: " + std::to_string(bad));
  if (truncated > 0) out.line("records with a non-negligible outer shell (raise jmax): " + std::to_string(truncated));
  if (lc.max_spread) {
    const bool within = spread <= *lc.max_spread;
    out.line("Phi_j spread check (max/min <= " + format_real(*lc.max_spread) + "): " + (within ? "PASS" : "FAIL"));
    ok = ok && within;
  }
  nlohmann::json doc = metadata(cfg, "lp-check", op);
  doc["spec"] = {{"family", to_string(lc.spec.family)}, {"p", json_real(lc.spec.p)}, {"theta", json_real(lc.spec.theta)},
                 {"r", lc.spec.r}};
  doc["jmax"] = lc.jmax;
  doc["ratio_min"] = json_real(lo);
  doc["ratio_max"] = json_real(hi);
  doc["phi_ratio_min"] = json_real(phi_lo);
  doc["phi_ratio_max"] = json_real(phi_hi);
  doc["records"] = records;
  doc["pass"] = ok;
  out.write_json("lp_check.json", doc);
  out.line(ok ? "result: PASS" : "result: FAIL");
  out.flush_summary();
  return ok ? 0 : 1;
}

}  // namespace hypercross::cli
