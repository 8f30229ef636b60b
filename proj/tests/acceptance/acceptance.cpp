// Runs the ten acceptance criteria and prints one PASS/FAIL line per criterion.

#include <hypercross/errors.hpp>
#include <hypercross/kernels.hpp>
#include <hypercross/operators.hpp>
#include <hypercross/smolyak.hpp>
#include <hypercross/spaces.hpp>
#include <hypercross/testbed.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace hypercross;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string sci(double v, int digits = 2) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(digits) << v;
  return os.str();
}

std::string fixed(double v, int digits = 3) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

TrigPoly random_poly(std::mt19937_64& rng, int d, int terms, int max_freq) {
  std::uniform_int_distribution<int> freq(-max_freq, max_freq);
  std::normal_distribution<double> coef(0.0, 1.0);
  std::vector<std::pair<FreqIndex, Complex>> t;
  for (int i = 0; i < terms; ++i) {
    FreqIndex k(static_cast<std::size_t>(d));
    for (auto& v : k) v = freq(rng);
    t.emplace_back(std::move(k), Complex(coef(rng), coef(rng)));
  }
  return TrigPoly::from_terms(d, std::move(t));
}

/// Random polynomial with frequencies in the union of prod A_{j_i} over |j|_1 <= n.
TrigPoly random_cross_poly(std::mt19937_64& rng, int d, int n, int terms) {
  const auto levels = levels_with_l1(n, d);
  std::uniform_int_distribution<std::size_t> pick(0, levels.size() - 1);
  std::normal_distribution<double> coef(0.0, 1.0);
  std::vector<std::pair<FreqIndex, Complex>> t;
  for (int i = 0; i < terms; ++i) {
    const LevelVec& j = levels[pick(rng)];
    FreqIndex k(static_cast<std::size_t>(d));
    for (int a = 0; a < d; ++a) {
      const int size = 1 << j[a];
      std::uniform_int_distribution<int> m(-(size / 2), size - size / 2 - 1);
      k[static_cast<std::size_t>(a)] = m(rng);
    }
    t.emplace_back(std::move(k), Complex(coef(rng), coef(rng)));
  }
  return TrigPoly::from_terms(d, std::move(t));
}

double rel_distance(const TrigPoly& a, const TrigPoly& b, double scale) {
  return l2_distance(a, b) / std::max(scale, 1e-300);
}

std::vector<QuasiInterpOp> oracle_ops(int d) {
  NamedOpParams p;
  p.dim = d;
  return {named_operator("I", p), named_operator("K", p), named_operator("Kstar", p),
          QuasiInterpOp(dirichlet_kernel(), char_averager(2), d, OpMode::sampling, std::nullopt, "D+char")};
}

Outcome ac1() {
  std::mt19937_64 rng(101);
  double worst = 0.0;
  long checks = 0;
  for (int d = 1; d <= 3; ++d) {
    for (const auto& op : oracle_ops(d)) {
      for (int s = 0; s < 50; ++s) {
        const TrigPoly f = random_poly(rng, d, 12, 40);
        std::vector<LevelVec> levels;
        if (d <= 2) {
          levels = box_levels(6, d);
        } else {
          std::uniform_int_distribution<int> l(0, 6);
          levels = {LevelVec{0, 0, 0}, LevelVec{6, 6, 6}};
          while (levels.size() < 8) levels.push_back(LevelVec{l(rng), l(rng), l(rng)});
        }
        for (const auto& j : levels) {
          const TrigPoly a = apply_aliasing(op, f, j);
          const TrigPoly b = apply_sampled(op, f, j);
          worst = std::max(worst, rel_distance(b, a, std::max(a.l2_norm(), f.l2_norm())));
          ++checks;
        }
      }
    }
  }
  return {worst <= 1e-10, std::to_string(checks) + " comparisons, max rel err " + sci(worst)};
}

Outcome ac2() {
  const QuasiInterpOp op(modified_dirichlet_kernel(2), char_averager(2), 1);
  double worst = 0.0;
  for (int j = 0; j <= 10; ++j) {
    const int size = 1 << j;
    for (int k = -(size / 2); k < size - size / 2; ++k) {
      const TrigPoly t = TrigPoly::monomial({k});
      const LevelVec level{j};
      worst = std::max(worst, l2_distance(apply_sampled(op, t, level), t));
      worst = std::max(worst, l2_distance(apply_aliasing(op, t, level), t));
    }
  }
  std::mt19937_64 rng(202);
  const QuasiInterpOp op2 = op.with_dim(2);
  double worst_t = 0.0;
  for (int n = 0; n <= 8; ++n) {
    for (int s = 0; s < 3; ++s) {
      const TrigPoly t = random_cross_poly(rng, 2, n, 25);
      const TrigPoly out = smolyak_apply(op2, t, n);
      worst_t = std::max(worst_t, l2_distance(out, t) / t.l2_norm());
    }
  }
  return {worst <= 1e-12 && worst_t <= 1e-12,
          "Q_j basis max err " + sci(worst) + " (j<=10), T_n cross max rel err " + sci(worst_t) + " (d=2, n<=8)"};
}

Outcome ac3() {
  std::mt19937_64 rng(303);
  double worst = 0.0;
  int cases = 0;
  for (int d = 2; d <= 3; ++d) {
    for (const auto& op : oracle_ops(d)) {
      for (int n = 0; n <= 8; ++n) {
        const TrigPoly f = random_poly(rng, d, 20, 24);
        const TrigPoly direct = smolyak_apply(op, f, n, SmolyakMode::direct);
        const TrigPoly comb = smolyak_apply(op, f, n, SmolyakMode::combination);
        worst = std::max(worst, rel_distance(direct, comb, std::max(comb.l2_norm(), f.l2_norm())));
        ++cases;
      }
    }
  }
  return {worst <= 1e-10, std::to_string(cases) + " cases, max rel err " + sci(worst)};
}

Outcome ac4() {
  Outcome out;
  double worst = 0.0;
  for (int d = 1; d <= 2; ++d) {
    const QuasiInterpOp op(dirichlet_kernel(), char_averager(2), d);
    const auto cond = check_cond(op.avg(), 20);
    const int xi = cond ? cond->xi : 1;
    for (int n = 3; n <= 12; ++n) {
      const TrigPoly fn = std::get<TrigPoly>(f_lower(n, xi, d).model);
      const Complex c0 = c0_of_smolyak(op, fn, n);
      double binom = 1.0;
      for (int i = 1; i <= d - 1; ++i) binom = binom * (n - 1 - (d - 1) + i) / i;
      const double expected = std::pow(2.0 / kPi, d) * binom;
      worst = std::max(worst, std::abs(c0 - expected));
    }
  }
  out.pass = worst <= 1e-10;
  out.detail = "max |c0 - (2/pi)^d C(n-1,d-1)| = " + sci(worst) + " over d in {1,2}, n=3..12";
  return out;
}

std::vector<ErrorRecord> rate_sweep(const QuasiInterpOp& op, const TestFunction& f) {
  std::vector<ErrorRecord> recs;
  for (int n = 4; n <= 10; ++n) recs.push_back(measure_error(op, f, n, 2.0));
  return recs;
}

bool all_reliable(const std::vector<ErrorRecord>& recs) {
  for (const auto& r : recs) {
    if (!r.reliable()) return false;
  }
  return true;
}

RateFit g_kstar_fit;

Outcome ac5() {
  NamedOpParams p;
  p.dim = 2;
  const auto recs = rate_sweep(named_operator("Kstar", p), korobov(2.0, 2, std::int64_t{1} << 17));
  const RateFit fit = fit_rate(recs);
  g_kstar_fit = fit;
  const bool ok = fit.r >= 1.3 && fit.r <= 1.7 && all_reliable(recs);
  return {ok, "K* korobov(2) d=2: r_hat=" + fixed(fit.r) + " (target [1.3,1.7], predicted 1.5), beta_hat=" +
                  fixed(fit.beta) + " (reported only), e_10=" + sci(recs.back().error)};
}

Outcome ac6() {
  NamedOpParams p;
  p.dim = 2;
  const auto recs = rate_sweep(named_operator("I", p), korobov(2.0, 2, std::int64_t{1} << 17));
  const RateFit fit = fit_rate(recs);
  const bool ok = std::abs(fit.r - 1.5) <= 0.2 && std::abs(fit.r - g_kstar_fit.r) <= 0.2 && all_reliable(recs);
  return {ok, "I korobov(2) d=2: r_hat=" + fixed(fit.r) + " vs predicted 1.5 and r_hat(K*)=" + fixed(g_kstar_fit.r) +
                  ", beta_hat=" + fixed(fit.beta)};
}

Outcome ac7() {
  const QuasiInterpOp op = named_operator("K");
  const std::vector<TestFunction> fs{{TrigPoly::monomial({1}), "e^{ix}", std::nullopt},
                                     {TrigPoly::monomial({3}), "e^{3ix}", std::nullopt},
                                     korobov(2.0, 1, std::int64_t{1} << 14)};
  bool ok = true;
  std::string detail;
  double lo = 1e300;
  double hi = 0.0;
  for (const auto& f : fs) {
    const TrigPoly ft = std::holds_alternative<TrigPoly>(f.model) ? std::get<TrigPoly>(f.model)
                                                                  : std::get<SeparableModel>(f.model).to_trig();
    for (double p : {2.0, kInf}) {
      double flo = 1e300;
      double fhi = 0.0;
      for (int j = 3; j <= 10; ++j) {
        const double err = lq_norm(ft - apply_sampled(op, f.model, LevelVec{j}), p);
        const double mod = modulus2(f.model, std::ldexp(1.0, -j), p);
        const double ratio = err / mod;
        flo = std::min(flo, ratio);
        fhi = std::max(fhi, ratio);
      }
      lo = std::min(lo, flo);
      hi = std::max(hi, fhi);
      if (flo < 0.05 || fhi > 20.0) ok = false;
      detail += (detail.empty() ? "" : "; ") + f.label + " p=" + (std::isinf(p) ? "inf" : "2") + " ratio in [" +
                fixed(flo) + "," + fixed(fhi) + "] max/min=" + fixed(fhi / flo, 2);
    }
  }
  return {ok, "overall [" + fixed(lo) + "," + fixed(hi) + "]; " + detail};
}

Outcome ac8() {
  bool ok = true;
  std::string detail;
  double cond_err = 0.0;
  for (int sigma = 1; sigma <= 5; ++sigma) {
    const auto c = check_cond(char_averager(sigma), 14);
    if (!c || c->xi != sigma - 1) {
      ok = false;
      continue;
    }
    cond_err = std::max(cond_err, std::abs(c->lambda - 2.0 / kPi));
  }
  if (cond_err > 1e-12) ok = false;
  detail += "check_cond sigma=1..5 max |lambda-2/pi|=" + sci(cond_err);

  const QuasiInterpOp dchar(dirichlet_kernel(), char_averager(2), 1);
  const auto p2 = compat_condition_proxy(dchar, 2.0, 4.0, 12);
  const auto p3 = compat_condition_proxy(dchar, 3.0, 4.0, 12);
  if (!p2.pass || p3.pass) ok = false;
  detail += "; compat s=2 " + std::string(p2.pass ? "PASS" : "FAIL") + " (growth " + fixed(p2.growth) + "), s=3 " +
            (p3.pass ? "PASS" : "FAIL") + " (growth " + fixed(p3.growth) + ")";

  const auto t_d = taylor_defect(dirichlet_kernel(), char_averager(2));
  const auto sol = solve_shift_coefficients(3, 2);
  const auto t_s = taylor_defect(shifted_dirichlet_combo(2, {sol.a.begin(), sol.a.end()}), char_averager(2));
  const auto t_star = taylor_defect(modified_dirichlet_kernel(2), char_averager(2));
  const auto t_paper = taylor_defect(shifted_dirichlet_combo(2, {6.0 / 7.0, 2.0 / 7.0, -1.0 / 7.0}), char_averager(2));
  if (!(t_d.status == DefectOrder::Status::finite && t_d.order == 2)) ok = false;
  if (!(t_s.status == DefectOrder::Status::finite && t_s.order == 3)) ok = false;
  if (t_star.status != DefectOrder::Status::infinite) ok = false;
  const auto order_str = [](const DefectOrder& o) {
    return o.status == DefectOrder::Status::finite ? std::to_string(o.order) : to_string(o.status);
  };
  detail += "; defect orders D+char=" + order_str(t_d) + ", solver s=3 a=(" + fixed(sol.a[0], 4) + "," +
            fixed(sol.a[1], 4) + "," + fixed(sol.a[2], 4) + ")=" + order_str(t_s) + ", D*+char=" + order_str(t_star) +
            ", a=(6/7,2/7,-1/7) measured order " + order_str(t_paper) + " (recorded, not asserted)";
  return {ok, detail};
}

Outcome ac9() {
  NamedOpParams p;
  p.dim = 2;
  const QuasiInterpOp op = named_operator("Kstar", p);
  const NormSpec spec{NormFamily::B, 2.0, 2.0, 1.5};
  const ResolutionOfUnity phi(PhiKind::smooth);
  constexpr int jmax = 12;
  double lo = 1e300;
  double hi = 0.0;
  std::string lo_label;
  std::string hi_label;
  const auto record = [&](const std::string& label, double ratio) {
    if (ratio < lo) {
      lo = ratio;
      lo_label = label;
    }
    if (ratio > hi) {
      hi = ratio;
      hi_label = label;
    }
  };
  int count = 0;
  for (const auto& j : simplex_levels(8, 2)) {
    const TestFunction f = phi_j(j, phi);
    const TrigPoly& t = std::get<TrigPoly>(f.model);
    record(f.label, discrete_lp_quasi_norm(op, t, spec, jmax).value / besov_norm(t, spec, phi));
    ++count;
  }
  {
    const TestFunction f = korobov(2.0, 2, 256);
    const auto& s = std::get<SeparableModel>(f.model);
    record(f.label, discrete_lp_quasi_norm(op, s, spec, jmax).value / besov_norm(s, spec, phi));
    ++count;
  }
  {
    const TestFunction f = f_lower(6, 1, 2);
    const TrigPoly& t = std::get<TrigPoly>(f.model);
    record(f.label, discrete_lp_quasi_norm(op, t, spec, jmax).value / besov_norm(t, spec, phi));
    ++count;
  }
  return {hi / lo <= 50.0, std::to_string(count) + " functions, ratio in [" + fixed(lo) + " (" + lo_label + "), " +
                               fixed(hi) + " (" + hi_label + ")], max/min=" + fixed(hi / lo, 2)};
}

Outcome ac10() {
  const ResolutionOfUnity phi(PhiKind::smooth);
  double lo = 1e300;
  double hi = 0.0;
  for (int d = 1; d <= 2; ++d) {
    for (const auto& j : simplex_levels(12, d)) {
      const TrigPoly t = std::get<TrigPoly>(phi_j(j, phi).model);
      const double ratio = t.l2_norm() / std::exp2(0.5 * j.l1());
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
  }
  return {hi / lo <= 4.0, "||Phi_j||_2 / 2^{|j|_1/2} in [" + fixed(lo) + "," + fixed(hi) + "], C/c=" + fixed(hi / lo)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"AC1 aliasing oracle", ac1},      {"AC2 reproduction", ac2},
      {"AC3 combination identity", ac3}, {"AC4 sharpness witness", ac4},
      {"AC5 rate K*", ac5},              {"AC6 operator contrast I", ac6},
      {"AC7 Kantorovich equivalence", ac7}, {"AC8 condition checks", ac8},
      {"AC9 Littlewood-Paley ratio", ac9},  {"AC10 norm asymptotics", ac10},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << " [" << fixed(secs, 1) << " s] " << o.detail << std::endl;
  }
  std::cout << (failures == 0 ? "all acceptance criteria passed" : std::to_string(failures) + " criteria failed")
            << std::endl;
  return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
