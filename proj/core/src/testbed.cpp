#include "hypercross/testbed.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "hypercross/errors.hpp"

namespace hypercross {

namespace {

constexpr double kPi = std::numbers::pi;

/// sum_{k >= first} k^{-s} for s > 1: explicit head, Euler-Maclaurin remainder.
double zeta_tail(double s, std::int64_t first) {
  double head = 0.0;
  std::int64_t k = first;
  const std::int64_t stop = std::max<std::int64_t>(first, 1000);
  std::vector<double> terms;
  for (; k < stop; ++k) terms.push_back(std::pow(static_cast<double>(k), -s));
  for (auto it = terms.rbegin(); it != terms.rend(); ++it) head += *it;
  const double n = static_cast<double>(k);
  const double em = std::pow(n, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(n, -s) + s * std::pow(n, -s - 1.0) / 12.0 -
                    s * (s + 1.0) * (s + 2.0) * std::pow(n, -s - 3.0) / 720.0;
  return head + em;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

std::string level_string(const LevelVec& j) {
  std::string s = "(";
  for (int i = 0; i < j.dim(); ++i) s += (i ? "," : "") + std::to_string(j[i]);
  return s + ")";
}

}  // namespace

TestFunction phi_j(const LevelVec& j, const ResolutionOfUnity& phi) {
  if (j.dim() < 1) throw InvalidArgument("phi_j: empty level vector");
  TrigPoly out(1);
  for (int i = 0; i < j.dim(); ++i) {
    if (j[i] > 24) throw InvalidArgument("phi_j: level too large");
    TrigPoly axis(1);
    const std::int64_t b = std::int64_t{1} << (j[i] + 1);
    int k[1];
    for (std::int64_t v = -b; v <= b; ++v) {
      const double w = phi.phi(j[i], static_cast<double>(v));
      if (w == 0.0) continue;
      k[0] = static_cast<int>(v);
      axis.push_sorted(k, w);
    }
    out = i == 0 ? axis : tensor_product(out, axis);
  }
  return {out, "Phi" + level_string(j) + "[" + phi.name() + "]", std::nullopt};
}

TestFunction f_lower(int n, int xi, int dim) {
  if (dim < 1 || xi < 0) throw InvalidArgument("f_lower: needs dim >= 1 and xi >= 0");
  if (n < dim) throw InvalidArgument("f_lower: needs n >= d so that some u qualifies");
  if (n + xi - dim + 1 > 30) throw InvalidArgument("f_lower: frequencies exceed the integer range");
  std::vector<std::pair<FreqIndex, Complex>> terms;
  for (const auto& v : levels_with_l1(n - dim, dim)) {
    FreqIndex k(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) k[static_cast<std::size_t>(i)] = 1 << (v[i] + xi + 1);
    terms.emplace_back(std::move(k), 1.0);
  }
  return {TrigPoly::from_terms(dim, std::move(terms)),
          "f_lower(n=" + std::to_string(n) + ",xi=" + std::to_string(xi) + ",d=" + std::to_string(dim) + ")",
          std::nullopt};
}

TestFunction korobov(double a, int dim, std::int64_t bandwidth) {
  if (!(a > 0.5)) throw InvalidArgument("korobov: a must exceed 1/2");
  if (dim < 1 || bandwidth < 0) throw InvalidArgument("korobov: needs dim >= 1 and bandwidth >= 0");
  const double tail = std::sqrt(2.0 * zeta_tail(2.0 * a, bandwidth + 1));
  const SpectralFactor factor = SpectralFactor::from_callable(
      [a](std::int64_t k) { return Complex(std::pow(static_cast<double>(std::max<std::int64_t>(1, std::abs(k))), -a)); },
      bandwidth, tail);
  SeparableModel model;
  model.factors.assign(static_cast<std::size_t>(dim), factor);
  Membership m{NormSpec{NormFamily::B, 2.0, kInf, a - 0.5},
               "dyadic block masses sum_{2^{m-1}<=|k|<2^m} |k|^{-2a} ~ 2^{-(2a-1)m}"};
  return {model, "korobov(a=" + fmt(a) + ",d=" + std::to_string(dim) + ")", m};
}

TestFunction step_signal(int dim, std::int64_t bandwidth) {
  if (dim < 1 || bandwidth < 0) throw InvalidArgument("step_signal: needs dim >= 1 and bandwidth >= 0");
  double partial = 0.0;
  const std::int64_t top = bandwidth % 2 == 0 ? bandwidth - 1 : bandwidth;
  for (std::int64_t k = top; k >= 1; k -= 2) partial += 1.0 / (static_cast<double>(k) * static_cast<double>(k));
  const double odd_tail = std::max(0.0, kPi * kPi / 8.0 - partial);
  const double tail = std::sqrt(2.0 * 4.0 / (kPi * kPi) * odd_tail);
  const SpectralFactor factor = SpectralFactor::from_callable(
      [](std::int64_t k) {
        if (k % 2 == 0) return Complex(0.0);
        return Complex(0.0, -2.0 / (kPi * static_cast<double>(k)));
      },
      bandwidth, tail);
  SeparableModel model;
  model.factors.assign(static_cast<std::size_t>(dim), factor);
  return {model, "step_signal(d=" + std::to_string(dim) + ")",
          Membership{NormSpec{NormFamily::B, 1.0, kInf, 1.0}, "bounded variation per axis"}};
}

double l2_error(const SeparableModel& f, const TrigPoly& t) {
  const int d = f.dim();
  if (t.dim() != d) throw ShapeMismatch("l2_error: dimension mismatch");
  std::vector<std::vector<double>> masses(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    const auto& fac = f.factors[static_cast<std::size_t>(i)];
    auto& m = masses[static_cast<std::size_t>(i)];
    m.assign(static_cast<std::size_t>(block_level(fac.bandwidth) + 1), 0.0);
    for (std::int64_t k = -fac.bandwidth; k <= fac.bandwidth; ++k) {
      m[static_cast<std::size_t>(block_level(k))] += std::norm(fac.coeff(k));
    }
  }
  std::set<std::vector<int>> touched;
  for (std::size_t term = 0; term < t.size(); ++term) {
    std::vector<int> b;
    for (int v : t.freq(term)) b.push_back(block_level(v));
    touched.insert(std::move(b));
  }
  double inside = 0.0;
  for (const auto& b : touched) {
    for (const auto& k : dyadic_block(LevelVec(b))) inside += std::norm(f.coeff(k) - t.coeff(k));
  }
  const double s2 = std::norm(f.scale);
  double outside = 0.0;
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  while (true) {
    if (!touched.contains(idx)) {
      double v = s2;
      for (int i = 0; i < d; ++i) v *= masses[static_cast<std::size_t>(i)][static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
      outside += v;
    }
    int i = d;
    while (i-- > 0) {
      auto& c = idx[static_cast<std::size_t>(i)];
      if (++c < static_cast<int>(masses[static_cast<std::size_t>(i)].size())) break;
      c = 0;
    }
    if (i < 0) break;
  }
  return std::sqrt(inside + outside);
}

ErrorRecord measure_error(const QuasiInterpOp& op, const TestFunction& f, int n, double q, EvalPath path) {
  const auto start = std::chrono::steady_clock::now();
  const TrigPoly approx = smolyak_apply(op, f.model, n, SmolyakMode::combination, path);
  ErrorRecord rec;
  rec.label = f.label;
  rec.op = op.label();
  rec.d = op.dim();
  rec.n = n;
  rec.q = q;
  rec.dof = smolyak_grid_size(n, op.dim());
  rec.tail = model_tail(f.model);
  if (const auto* t = std::get_if<TrigPoly>(&f.model)) {
    rec.error = lq_norm(*t - approx, q);
  } else if (const auto* s = std::get_if<SeparableModel>(&f.model)) {
    rec.error = q == 2.0 ? l2_error(*s, approx) : lq_norm(s->to_trig() - approx, q);
  } else {
    throw InvalidArgument("measure_error requires an exact or spectral test function");
  }
  rec.wallclock_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

RateFit fit_rate(const std::vector<ErrorRecord>& records, int drop) {
  std::vector<ErrorRecord> sorted = records;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.n < b.n; });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].n == sorted[i - 1].n) throw FitError("fit_rate: records must have distinct n");
  }
  if (drop < 0) drop = 0;
  if (sorted.size() < static_cast<std::size_t>(drop) + 4) {
    throw FitError("fit_rate: needs at least 4 records after dropping the smallest n");
  }
  sorted.erase(sorted.begin(), sorted.begin() + drop);
  const auto m = static_cast<Eigen::Index>(sorted.size());
  Eigen::MatrixXd a(m, 3);
  Eigen::VectorXd b(m);
  RateFit fit;
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& r = sorted[static_cast<std::size_t>(i)];
    if (r.n < 1) throw FitError("fit_rate: n must be >= 1");
    if (!(r.error > 0.0)) throw FitError("fit_rate: errors must be positive");
    if (!(r.error > 10.0 * r.tail)) throw FitError("fit_rate: error within 10x of the truncation tail at n=" + std::to_string(r.n));
    a(i, 0) = 1.0;
    a(i, 1) = -static_cast<double>(r.n);
    a(i, 2) = std::log2(static_cast<double>(r.n));
    b(i) = std::log2(r.error);
    fit.ns.push_back(r.n);
  }
  const auto qr = a.colPivHouseholderQr();
  if (qr.rank() < 3) throw FitError("fit_rate: rank-deficient design");
  const Eigen::VectorXd x = qr.solve(b);
  fit.C = std::exp2(x(0));
  fit.r = x(1);
  fit.beta = x(2);
  fit.residual_rms = std::sqrt((a * x - b).squaredNorm() / static_cast<double>(m));
  return fit;
}

PredictedRate predicted_rate(double r, double p, double q, double theta, int dim) {
  const double inv_theta = std::isinf(theta) ? 0.0 : 1.0 / theta;
  const double inv_p = std::isinf(p) ? 0.0 : 1.0 / p;
  const double inv_q = std::isinf(q) ? 0.0 : 1.0 / q;
  const double dm1 = dim - 1.0;
  if (q <= p) return {r, dm1 * (1.0 - inv_theta), "q<=p"};
  if (!std::isinf(q)) return {r - inv_p + inv_q, dm1 * std::max(0.0, inv_q - inv_theta), "p<q<inf"};
  return {r - inv_p, dm1 * (1.0 - inv_theta), "p<q=inf"};
}

}  // namespace hypercross
