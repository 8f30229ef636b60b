#include "hypercross/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "hypercross/errors.hpp"
#include "quadrature.hpp"

namespace hypercross {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kMaxGridPoints = std::size_t{1} << 24;

bool is_inf(double v) { return std::isinf(v) && v > 0; }

/// Smallest level L with 2^L >= 4 (m + 1).
int oversampled_level(int m) {
  int level = 0;
  while ((std::int64_t{1} << level) < 4 * (static_cast<std::int64_t>(m) + 1)) ++level;
  return level;
}

std::size_t grid_points(const std::vector<int>& levels) {
  std::size_t total = 1;
  for (int l : levels) {
    if (l >= 40) return std::numeric_limits<std::size_t>::max();
    const std::size_t n = std::size_t{1} << l;
    if (total > kMaxGridPoints / n + 1) return std::numeric_limits<std::size_t>::max();
    total *= n;
  }
  return total;
}

std::vector<int> grid_levels_for(const std::vector<const TrigPoly*>& fs, int dim) {
  std::vector<int> levels(static_cast<std::size_t>(dim), 0);
  for (int i = 0; i < dim; ++i) {
    int m = 0;
    for (const auto* f : fs) m = std::max(m, f->max_abs_freq(i));
    levels[static_cast<std::size_t>(i)] = oversampled_level(m);
  }
  return levels;
}

/// (mean_x (sum_b |v_b(x)|^theta)^{p/theta})^{1/p} on one grid; theta or p may be inf.
double aggregate_on_grid(const std::vector<const TrigPoly*>& blocks, const std::vector<int>& levels, double p,
                         double theta) {
  const DyadicGrid grid{LevelVec(levels)};
  std::vector<double> acc(grid.size(), 0.0);
  for (const auto* b : blocks) {
    const GridValues v = eval_on_grid(*b, grid);
    for (std::size_t m = 0; m < acc.size(); ++m) {
      const double a = std::abs(v.values[m]);
      acc[m] = is_inf(theta) ? std::max(acc[m], a) : acc[m] + std::pow(a, theta);
    }
  }
  double out = 0.0;
  for (double a : acc) {
    const double pointwise = is_inf(theta) ? a : std::pow(a, 1.0 / theta);
    out = is_inf(p) ? std::max(out, pointwise) : out + std::pow(pointwise, p);
  }
  return is_inf(p) ? out : std::pow(out / static_cast<double>(acc.size()), 1.0 / p);
}

/// Grid quadrature with refinement doubling until two estimates agree to 1e-6.
double aggregate_norm(const std::vector<const TrigPoly*>& blocks, int dim, double p, double theta) {
  if (blocks.empty()) return 0.0;
  std::vector<int> levels = grid_levels_for(blocks, dim);
  if (grid_points(levels) > kMaxGridPoints) throw QuadratureError("norm quadrature grid exceeds 2^24 points");
  double prev = aggregate_on_grid(blocks, levels, p, theta);
  while (true) {
    for (auto& l : levels) ++l;
    if (grid_points(levels) > kMaxGridPoints) {
      throw QuadratureError("norm quadrature did not settle to 1e-6 within 2^24 points");
    }
    const double cur = aggregate_on_grid(blocks, levels, p, theta);
    if (is_inf(p)) return std::max(prev, cur);
    if (std::abs(cur - prev) <= 1e-6 * std::max(cur, 1e-300) || cur == prev) return cur;
    prev = cur;
  }
}

double ell_theta(const std::vector<double>& terms, double theta) {
  if (is_inf(theta)) {
    double m = 0.0;
    for (double t : terms) m = std::max(m, t);
    return m;
  }
  double s = 0.0;
  for (double t : terms) s += std::pow(t, theta);
  return std::pow(s, 1.0 / theta);
}

/// Groups terms of f by the tensor level vectors j with prod phi_{j_i}(k_i) != 0.
std::map<std::vector<int>, std::vector<std::pair<FreqIndex, Complex>>> split_blocks(const TrigPoly& f,
                                                                                    const ResolutionOfUnity& phi) {
  std::map<std::vector<int>, std::vector<std::pair<FreqIndex, Complex>>> blocks;
  const int d = f.dim();
  for (std::size_t t = 0; t < f.size(); ++t) {
    const auto k = f.freq(t);
    std::vector<std::vector<std::pair<int, double>>> axes(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
      const int ki = k[static_cast<std::size_t>(i)];
      for (int l : phi.levels_at(ki)) axes[static_cast<std::size_t>(i)].emplace_back(l, phi.phi(l, ki));
    }
    std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
    std::vector<int> level(static_cast<std::size_t>(d));
    bool any = true;
    for (const auto& a : axes) any = any && !a.empty();
    if (!any) continue;
    while (true) {
      double w = 1.0;
      for (std::size_t i = 0; i < static_cast<std::size_t>(d); ++i) {
        level[i] = axes[i][idx[i]].first;
        w *= axes[i][idx[i]].second;
      }
      blocks[level].emplace_back(FreqIndex(k.begin(), k.end()), w * f.coeff_at(t));
      std::size_t i = static_cast<std::size_t>(d);
      while (i-- > 0) {
        if (++idx[i] < axes[i].size()) break;
        idx[i] = 0;
      }
      if (i == static_cast<std::size_t>(-1)) break;
    }
  }
  return blocks;
}

int l1_of(const std::vector<int>& j) {
  int s = 0;
  for (int v : j) s += v;
  return s;
}

double defect(const Complex& kern, const Complex& avg) {
  const Complex prod = kern * avg;
  const Complex g = 1.0 - prod;
  // Below this the product is not resolvable from 1 in double precision.
  if (std::abs(g) <= 16.0 * std::numeric_limits<double>::epsilon() * std::abs(prod)) return 0.0;
  return std::abs(g);
}

TrigPoly univariate_of(const FunctionModel& f) {
  if (model_dim(f) != 1) throw InvalidArgument("expected a univariate function");
  if (const auto* t = std::get_if<TrigPoly>(&f)) return *t;
  if (const auto* s = std::get_if<SeparableModel>(&f)) return s->to_trig();
  throw InvalidArgument("expected an exact or spectral function");
}

}  // namespace

double ResolutionOfUnity::phi0(double xi) const {
  const double a = std::abs(xi);
  if (a <= 1.0) return 1.0;
  if (a >= 2.0) return 0.0;
  if (kind_ == PhiKind::piecewise_linear) return 2.0 - a;
  const double t = a - 1.0;
  return std::exp(1.0 - 1.0 / (1.0 - t * t));
}

double ResolutionOfUnity::phi(int j, double xi) const {
  if (j < 0) return 0.0;
  if (j == 0) return phi0(xi);
  return phi0(std::ldexp(xi, -j)) - phi0(std::ldexp(xi, 1 - j));
}

std::vector<int> ResolutionOfUnity::levels_at(std::int64_t k) const {
  std::vector<int> out;
  const int b = block_level(k);
  for (int j = std::max(0, b - 2); j <= b + 1; ++j) {
    if (phi(j, static_cast<double>(k)) != 0.0) out.push_back(j);
  }
  return out;
}

std::string ResolutionOfUnity::name() const { return kind_ == PhiKind::smooth ? "smooth" : "piecewise_linear"; }

void NormSpec::validate() const {
  if (!(p >= 1.0)) throw InvalidArgument("NormSpec: p must lie in [1, inf]");
  if (!(theta >= 1.0)) throw InvalidArgument("NormSpec: theta must lie in [1, inf]");
  if (!std::isfinite(r)) throw InvalidArgument("NormSpec: r must be finite");
  if (family == NormFamily::F && is_inf(p)) throw InvalidArgument("NormSpec: F-family requires p < inf");
}

std::string to_string(NormFamily family) { return family == NormFamily::B ? "B" : "F"; }

TrigPoly dyadic_projection(const TrigPoly& f, const LevelVec& j, const ResolutionOfUnity& phi) {
  if (j.dim() != f.dim()) throw ShapeMismatch("dyadic_projection: dimension mismatch");
  return f.multiplied([&](std::span<const int> k) {
    double w = 1.0;
    for (int i = 0; i < j.dim() && w != 0.0; ++i) w *= phi.phi(j[i], k[static_cast<std::size_t>(i)]);
    return w;
  });
}

double lq_norm(const TrigPoly& f, double q) {
  if (!(q >= 1.0)) throw InvalidArgument("lq_norm: q must lie in [1, inf]");
  if (f.empty()) return 0.0;
  if (q == 2.0) return f.l2_norm();
  const std::vector<const TrigPoly*> one{&f};
  return aggregate_norm(one, f.dim(), q, 1.0);
}

double besov_norm(const TrigPoly& f, const NormSpec& spec, const ResolutionOfUnity& phi) {
  spec.validate();
  std::vector<double> terms;
  for (auto& [level, entries] : split_blocks(f, phi)) {
    double norm;
    if (spec.p == 2.0) {
      double s = 0.0;
      for (const auto& e : entries) s += std::norm(e.second);
      norm = std::sqrt(s);
    } else {
      norm = lq_norm(TrigPoly::from_terms(f.dim(), std::move(entries)), spec.p);
    }
    terms.push_back(std::exp2(spec.r * l1_of(level)) * norm);
  }
  return ell_theta(terms, spec.theta);
}

double besov_norm(const SeparableModel& f, const NormSpec& spec, const ResolutionOfUnity& phi) {
  spec.validate();
  std::vector<std::vector<double>> axis_norms;
  for (const auto& fac : f.factors) {
    const int top = block_level(fac.bandwidth) + 1;
    std::vector<double> norms;
    for (int l = 0; l <= top; ++l) {
      const TrigPoly block = dyadic_projection(fac.to_trig(), LevelVec{l}, phi);
      norms.push_back(lq_norm(block, spec.p));
    }
    axis_norms.push_back(std::move(norms));
  }
  std::vector<double> terms;
  std::vector<std::size_t> idx(axis_norms.size(), 0);
  while (true) {
    double v = std::abs(f.scale);
    int l1 = 0;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      v *= axis_norms[i][idx[i]];
      l1 += static_cast<int>(idx[i]);
    }
    if (v > 0.0) terms.push_back(std::exp2(spec.r * l1) * v);
    std::size_t i = idx.size();
    while (i-- > 0) {
      if (++idx[i] < axis_norms[i].size()) break;
      idx[i] = 0;
    }
    if (i == static_cast<std::size_t>(-1)) break;
  }
  return ell_theta(terms, spec.theta);
}

double tl_norm(const TrigPoly& f, const NormSpec& spec, const ResolutionOfUnity& phi) {
  spec.validate();
  if (is_inf(spec.p)) throw InvalidArgument("tl_norm: p = inf is not admissible for F-norms");
  std::vector<TrigPoly> blocks;
  for (auto& [level, entries] : split_blocks(f, phi)) {
    TrigPoly b = TrigPoly::from_terms(f.dim(), std::move(entries));
    b *= std::exp2(spec.r * l1_of(level));
    blocks.push_back(std::move(b));
  }
  std::vector<const TrigPoly*> ptrs;
  for (const auto& b : blocks) ptrs.push_back(&b);
  return aggregate_norm(ptrs, f.dim(), spec.p, spec.theta);
}

DiscreteNorm discrete_lp_quasi_norm(const QuasiInterpOp& op, const FunctionModel& f, const NormSpec& spec, int jmax,
                                    EvalPath path) {
  spec.validate();
  if (jmax < 0) throw InvalidArgument("discrete_lp_quasi_norm: jmax must be >= 0");
  const int d = op.dim();
  if (model_dim(f) != d) throw ShapeMismatch("discrete_lp_quasi_norm: dimension mismatch");
  DiscreteNorm out;
  out.jmax = jmax;
  out.model_tail = model_tail(f);
  const auto levels = box_levels(jmax, d);

  const auto* sep = std::get_if<SeparableModel>(&f);
  if (spec.family == NormFamily::B && sep != nullptr) {
    std::vector<std::vector<double>> axis_norms(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
      TrigPoly prev(1);
      for (int l = 0; l <= jmax; ++l) {
        TrigPoly cur = apply_univariate(op, sep->factors[static_cast<std::size_t>(i)], l, path);
        axis_norms[static_cast<std::size_t>(i)].push_back(lq_norm(cur - prev, spec.p));
        prev = std::move(cur);
      }
    }
    std::vector<double> all;
    std::vector<double> shell;
    for (const auto& j : levels) {
      double v = std::abs(sep->scale) * std::exp2(spec.r * j.l1());
      for (int i = 0; i < d; ++i) v *= axis_norms[static_cast<std::size_t>(i)][static_cast<std::size_t>(j[i])];
      all.push_back(v);
      if (j.linf() == jmax) shell.push_back(v);
    }
    out.value = ell_theta(all, spec.theta);
    out.shell = ell_theta(shell, spec.theta);
    return out;
  }

  std::map<LevelVec, TrigPoly> applied;
  for (const auto& j : levels) applied.emplace(j, apply(op, f, j, path));
  std::vector<TrigPoly> blocks;
  std::vector<bool> on_shell;
  for (const auto& j : levels) {
    std::vector<TrigPoly> parts;
    for (unsigned mask = 0; mask < (1u << d); ++mask) {
      std::vector<int> lower(j.values());
      bool zero = false;
      bool negative = false;
      for (int i = 0; i < d; ++i) {
        if (mask & (1u << i)) {
          negative = !negative;
          if (--lower[static_cast<std::size_t>(i)] < 0) zero = true;
        }
      }
      if (zero) continue;
      TrigPoly q = applied.at(LevelVec(lower));
      if (negative) q *= -1.0;
      parts.push_back(std::move(q));
    }
    TrigPoly b = sum_pairwise(std::move(parts), d);
    b *= std::exp2(spec.r * j.l1());
    blocks.push_back(std::move(b));
    on_shell.push_back(j.linf() == jmax);
  }
  if (spec.family == NormFamily::B) {
    std::vector<double> all;
    std::vector<double> shell;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      const double v = lq_norm(blocks[b], spec.p);
      all.push_back(v);
      if (on_shell[b]) shell.push_back(v);
    }
    out.value = ell_theta(all, spec.theta);
    out.shell = ell_theta(shell, spec.theta);
    return out;
  }
  std::vector<const TrigPoly*> all;
  std::vector<const TrigPoly*> shell;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (blocks[b].empty()) continue;
    all.push_back(&blocks[b]);
    if (on_shell[b]) shell.push_back(&blocks[b]);
  }
  out.value = aggregate_norm(all, d, spec.p, spec.theta);
  out.shell = aggregate_norm(shell, d, spec.p, spec.theta);
  return out;
}

double averager_norm_Lqj(const AveragerFamily& avg, double q, int j) {
  if (avg.kind() != AveragerKind::function) throw InvalidArgument("averager_norm_Lqj: needs a function-kind averager");
  if (!(q >= 1.0)) throw InvalidArgument("averager_norm_Lqj: q must lie in [1, inf]");
  if (j < 0 || j > 16) throw InvalidArgument("averager_norm_Lqj: level out of range");
  const std::int64_t n = axis_size(j);
  const double cell = 2.0 * kPi / static_cast<double>(n);
  const double lo = -0.5 * cell;
  const double h = *avg.support_halfwidth(j);

  std::vector<double> cuts{lo, lo + cell};
  for (double e : {-h, h}) {
    double c = std::remainder(e, cell);
    if (c >= lo && c < lo + cell) cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  const auto periodized = [&](double x) {
    double sum = 0.0;
    for (std::int64_t m = -(n / 2); m < n - n / 2; ++m) {
      sum += std::abs(*avg.time_value(j, x - dyadic_node(j, static_cast<int>(m))));
    }
    return sum / static_cast<double>(n);
  };

  const auto& gl = detail::gauss_legendre(16);
  double acc = 0.0;
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const double a = cuts[c];
    const double b = cuts[c + 1];
    for (std::size_t q_i = 0; q_i < gl.nodes.size(); ++q_i) {
      const double v = periodized(0.5 * (a + b) + 0.5 * (b - a) * gl.nodes[q_i]);
      if (is_inf(q)) {
        acc = std::max(acc, v);
      } else {
        acc += 0.5 * (b - a) * gl.weights[q_i] * std::pow(v, q);
      }
    }
  }
  return is_inf(q) ? acc : std::pow(acc / cell, 1.0 / q);
}

CompatProxy compat_condition_proxy(const QuasiInterpOp& op, double s, double delta, int jmax) {
  if (!(s > 0.0) || !(delta > 0.0)) throw InvalidArgument("compat_condition_proxy: s and delta must be positive");
  if (jmax < 2 || jmax > 20) throw InvalidArgument("compat_condition_proxy: jmax must lie in [2, 20]");
  const ResolutionOfUnity phi(PhiKind::smooth);
  CompatProxy out;
  for (int j = 0; j <= jmax; ++j) {
    const double step = std::ldexp(1.0, -j);
    const auto kmax = static_cast<std::int64_t>(std::ceil(2.0 / (delta * step)));
    std::vector<double> g(static_cast<std::size_t>(2 * kmax + 1), 0.0);
    for (std::int64_t k = -kmax; k <= kmax; ++k) {
      if (k == 0) continue;
      const double xi = static_cast<double>(k) * step;
      const double cut = phi.phi0(delta * xi);
      if (cut == 0.0) continue;
      const double num = defect(op.kern().symbol(j, k), op.avg().symbol(j, k));
      g[static_cast<std::size_t>(k + kmax)] = num * cut / std::pow(std::abs(xi), s);
    }
    double l2 = 0.0;
    double d2 = 0.0;
    for (std::int64_t k = -kmax; k <= kmax; ++k) {
      if (k == 0) continue;
      const double v = g[static_cast<std::size_t>(k + kmax)];
      l2 += v * v;
      if (k - 1 <= 0 && k + 1 >= 0) continue;
      if (k - 1 < -kmax || k + 1 > kmax) continue;
      const double sec = (g[static_cast<std::size_t>(k + 1 + kmax)] - 2.0 * v + g[static_cast<std::size_t>(k - 1 + kmax)]) /
                         (step * step);
      d2 += sec * sec;
    }
    out.values.push_back(std::sqrt(step * l2) + std::sqrt(step * d2));
  }
  std::vector<double> xs;
  std::vector<double> ys;
  for (int j = jmax / 2; j <= jmax; ++j) {
    const double v = out.values[static_cast<std::size_t>(j)];
    if (v > 0.0) {
      xs.push_back(j);
      ys.push_back(std::log2(v));
    }
  }
  if (xs.size() >= 2) {
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sx += xs[i];
      sy += ys[i];
      sxx += xs[i] * xs[i];
      sxy += xs[i] * ys[i];
    }
    out.growth = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  }
  out.pass = out.growth < 0.1;
  return out;
}

std::optional<CondPattern> check_cond(const AveragerFamily& avg, int umax, double tol) {
  if (umax < 1 || umax > 40) throw InvalidArgument("check_cond: umax must lie in [1, 40]");
  const auto diff = [&](int j, int u) {
    const std::int64_t k = std::int64_t{1} << u;
    return avg.symbol(j, k) - (j == 0 ? Complex(0.0) : avg.symbol(j - 1, k));
  };
  for (int xi = 0; xi < umax; ++xi) {
    const Complex lambda = diff(1, xi + 1);
    if (std::abs(lambda) <= tol) continue;
    bool ok = true;
    for (int u = xi + 1; u <= umax && ok; ++u) {
      if (std::abs(diff(u - xi, u) - lambda) > tol) ok = false;
      for (int j = 0; j < u - xi && ok; ++j) {
        if (std::abs(diff(j, u)) > tol) ok = false;
      }
    }
    if (ok) return CondPattern{xi, lambda};
  }
  return std::nullopt;
}

double best_approx_error_L2(const FunctionModel& f, int m) {
  if (m < 0) throw InvalidArgument("best_approx_error_L2: m must be >= 0");
  if (const auto* t = std::get_if<TrigPoly>(&f)) {
    double s = 0.0;
    for (std::size_t term = 0; term < t->size(); ++term) {
      bool inside = true;
      for (int v : t->freq(term)) inside = inside && std::abs(v) <= m;
      if (!inside) s += std::norm(t->coeff_at(term));
    }
    return std::sqrt(s);
  }
  const auto* sep = std::get_if<SeparableModel>(&f);
  if (sep == nullptr) throw InvalidArgument("best_approx_error_L2 requires an exact or spectral input");
  double a = 1.0;
  double b = 0.0;
  for (const auto& fac : sep->factors) {
    double in = 0.0;
    double out = fac.tail_l2 * fac.tail_l2;
    for (std::int64_t k = -fac.bandwidth; k <= fac.bandwidth; ++k) {
      (std::abs(k) <= m ? in : out) += std::norm(fac.coeff(k));
    }
    b = b * (in + out) + a * out;
    a *= in;
  }
  return std::abs(sep->scale) * std::sqrt(b);
}

double modulus2(const FunctionModel& f, double delta, double p) {
  if (!(delta > 0.0)) throw InvalidArgument("modulus2: delta must be positive");
  const TrigPoly t = univariate_of(f);
  double best = 0.0;
  for (int i = 1; i <= 64; ++i) {
    const double h = delta * i / 64.0;
    const TrigPoly d2 = t.multiplied([h](std::span<const int> k) { return 2.0 * std::cos(k[0] * h) - 2.0; });
    best = std::max(best, lq_norm(d2, p));
  }
  return best;
}

}  // namespace hypercross
