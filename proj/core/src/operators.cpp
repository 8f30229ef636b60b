#include "hypercross/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hypercross/errors.hpp"
#include "quadrature.hpp"

namespace hypercross {

namespace {

constexpr double kPi = std::numbers::pi;

std::int64_t half_size(int level) { return axis_size(level) / 2; }

/// Nonzero kernel values phi^_j(k), |k| < B_j, grouped by folded residue (index r + N/2).
std::vector<std::vector<std::pair<int, Complex>>> alias_lists(const KernelFamily& kern, int j) {
  const std::int64_t n = axis_size(j);
  const std::int64_t b = kern.bandwidth(j);
  std::vector<std::vector<std::pair<int, Complex>>> lists(static_cast<std::size_t>(n));
  for (std::int64_t k = -b + 1; k < b; ++k) {
    const Complex v = kern.symbol(j, k);
    if (v == Complex(0.0)) continue;
    lists[static_cast<std::size_t>(fold_frequency(k, j) + half_size(j))].emplace_back(static_cast<int>(k), v);
  }
  return lists;
}

/// Output Q^(k) = phi^_j(k) c[fold(k)] for a dense table c over A_j (index r + N/2).
TrigPoly reconstruct_axis(const KernelFamily& kern, int j, const std::vector<Complex>& c) {
  const std::int64_t b = kern.bandwidth(j);
  TrigPoly out(1);
  int k_buf[1];
  for (std::int64_t k = -b + 1; k < b; ++k) {
    const Complex ck = c[static_cast<std::size_t>(fold_frequency(k, j) + half_size(j))];
    if (ck == Complex(0.0)) continue;
    const Complex v = kern.symbol(j, k) * ck;
    if (v == Complex(0.0)) continue;
    k_buf[0] = static_cast<int>(k);
    out.push_sorted(k_buf, v);
  }
  return out;
}

Complex avg_product(const AveragerFamily& avg, const LevelVec& j, std::span<const int> k) {
  Complex w = 1.0;
  for (int i = 0; i < j.dim(); ++i) w *= avg.symbol(j[i], k[static_cast<std::size_t>(i)]);
  return w;
}

Complex kern_product(const KernelFamily& kern, const LevelVec& j, std::span<const int> k) {
  Complex w = 1.0;
  for (int i = 0; i < j.dim(); ++i) {
    w *= kern.symbol(j[i], k[static_cast<std::size_t>(i)]);
    if (w == Complex(0.0)) break;
  }
  return w;
}

void check_level(const QuasiInterpOp& op, int model_d, const LevelVec& j) {
  if (model_d != op.dim()) throw ShapeMismatch("operator dimension differs from function dimension");
  if (j.dim() != op.dim()) throw ShapeMismatch("level vector dimension differs from operator dimension");
  if (j.linf() > 24) throw InvalidArgument("level too large");
}

TrigPoly convolve(const QuasiInterpOp& op, const TrigPoly& f, const LevelVec& j) {
  return f.multiplied([&](std::span<const int> k) { return kern_product(op.kern(), j, k); });
}

TrigPoly tensor_of(const SeparableModel& f, const std::vector<TrigPoly>& axes) {
  TrigPoly out = axes.front();
  for (std::size_t i = 1; i < axes.size(); ++i) out = tensor_product(out, axes[i]);
  if (f.scale != Complex(1.0)) out *= f.scale;
  return out;
}

TrigPoly apply_separable(const QuasiInterpOp& op, const SeparableModel& f, const LevelVec& j, EvalPath path) {
  std::vector<TrigPoly> axes;
  for (int i = 0; i < f.dim(); ++i) axes.push_back(apply_univariate(op, f.factors[static_cast<std::size_t>(i)], j[i], path));
  return tensor_of(f, axes);
}

/// Composite Gauss-Legendre average of a pointwise model over the box x + [-h, h].
Complex box_average(const PointwiseModel& f, std::span<const double> x, const std::vector<double>& h,
                    const QuadratureRule& rule) {
  const auto& gl = detail::gauss_legendre(rule.nodes);
  const std::size_t d = x.size();
  auto estimate = [&](int panels) {
    const std::size_t per_axis = static_cast<std::size_t>(panels) * gl.nodes.size();
    std::vector<std::vector<double>> pts(d);
    std::vector<std::vector<double>> wts(d);
    for (std::size_t i = 0; i < d; ++i) {
      const double width = 2.0 * h[i] / panels;
      for (int p = 0; p < panels; ++p) {
        const double mid = x[i] - h[i] + (p + 0.5) * width;
        for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
          pts[i].push_back(mid + 0.5 * width * gl.nodes[q]);
          wts[i].push_back(0.5 * width * gl.weights[q] / (2.0 * h[i]));
        }
      }
    }
    std::vector<std::size_t> idx(d, 0);
    std::vector<double> y(d);
    Complex sum = 0.0;
    while (true) {
      double w = 1.0;
      for (std::size_t i = 0; i < d; ++i) {
        y[i] = pts[i][idx[i]];
        w *= wts[i][idx[i]];
      }
      sum += w * f.eval(y);
      std::size_t i = d;
      while (i-- > 0) {
        if (++idx[i] < per_axis) break;
        idx[i] = 0;
      }
      if (i == static_cast<std::size_t>(-1)) break;
    }
    return sum;
  };
  int panels = 1;
  Complex prev = estimate(panels);
  for (int it = 0; it < rule.max_doublings; ++it) {
    panels *= 2;
    const Complex cur = estimate(panels);
    if (std::abs(cur - prev) < rule.tol) return cur;
    prev = cur;
  }
  throw QuadratureError("kantorovich_avg: quadrature did not reach tolerance");
}

/// (f * phi~_j)(x) for a pointwise model.
Complex averaged_sample(const QuasiInterpOp& op, const PointwiseModel& f, const LevelVec& j,
                        std::span<const double> x) {
  const AveragerFamily& avg = op.avg();
  switch (avg.kind()) {
    case AveragerKind::delta:
      return f.eval(x);
    case AveragerKind::delta_combination: {
      const auto& s = std::get<DeltaCombinationAverager>(avg.spec());
      const std::size_t d = x.size();
      std::vector<std::size_t> idx(d, 0);
      std::vector<double> y(d);
      Complex sum = 0.0;
      while (true) {
        Complex w = 1.0;
        for (std::size_t i = 0; i < d; ++i) {
          y[i] = x[i] - kPi * s.shifts[idx[i]] * std::ldexp(1.0, -j[static_cast<int>(i)] - s.sigma);
          w *= s.weights[idx[i]];
        }
        sum += w * f.eval(y);
        std::size_t i = d;
        while (i-- > 0) {
          if (++idx[i] < s.shifts.size()) break;
          idx[i] = 0;
        }
        if (i == static_cast<std::size_t>(-1)) break;
      }
      return sum;
    }
    case AveragerKind::function: {
      if (!op.quadrature()) throw InvalidArgument("pointwise input with a function averager needs a quadrature rule");
      const auto& s = std::get<CharAverager>(avg.spec());
      std::vector<double> h;
      for (int i = 0; i < j.dim(); ++i) h.push_back(*avg.support_halfwidth(j[i]));
      return std::pow(s.scale, j.dim()) * box_average(f, x, h, *op.quadrature());
    }
  }
  throw InvalidArgument("unknown averager kind");
}

}  // namespace

SpectralFactor SpectralFactor::from_callable(const std::function<Complex(std::int64_t)>& coeff,
                                             std::int64_t bandwidth, double tail_l2) {
  if (bandwidth < 0) throw InvalidArgument("SpectralFactor: bandwidth must be >= 0");
  if (!(tail_l2 >= 0.0)) throw InvalidArgument("SpectralFactor: tail must be >= 0");
  SpectralFactor out;
  out.bandwidth = bandwidth;
  out.tail_l2 = tail_l2;
  out.coeffs.reserve(static_cast<std::size_t>(2 * bandwidth + 1));
  for (std::int64_t k = -bandwidth; k <= bandwidth; ++k) out.coeffs.push_back(coeff(k));
  return out;
}

SpectralFactor SpectralFactor::from_trig(const TrigPoly& univariate) {
  if (univariate.dim() != 1) throw ShapeMismatch("SpectralFactor::from_trig: needs a univariate polynomial");
  SpectralFactor out;
  out.bandwidth = univariate.max_abs_freq(0);
  out.coeffs.assign(static_cast<std::size_t>(2 * out.bandwidth + 1), 0.0);
  for (std::size_t t = 0; t < univariate.size(); ++t) {
    out.coeffs[static_cast<std::size_t>(univariate.freq(t)[0] + out.bandwidth)] = univariate.coeff_at(t);
  }
  return out;
}

double SpectralFactor::mass() const {
  double s = 0.0;
  for (const auto& c : coeffs) s += std::norm(c);
  return s;
}

TrigPoly SpectralFactor::to_trig() const {
  TrigPoly out(1);
  int k[1];
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(coeffs.size()); ++i) {
    if (coeffs[static_cast<std::size_t>(i)] == Complex(0.0)) continue;
    k[0] = static_cast<int>(i - bandwidth);
    out.push_sorted(k, coeffs[static_cast<std::size_t>(i)]);
  }
  return out;
}

Complex SeparableModel::coeff(std::span<const int> k) const {
  if (static_cast<int>(k.size()) != dim()) throw ShapeMismatch("SeparableModel::coeff: wrong frequency length");
  Complex c = scale;
  for (int i = 0; i < dim(); ++i) c *= factors[static_cast<std::size_t>(i)].coeff(k[static_cast<std::size_t>(i)]);
  return c;
}

double SeparableModel::tail_l2() const {
  // a: mass with every axis inside the box so far; b: mass with at least one axis in its tail.
  double a = 1.0;
  double b = 0.0;
  for (const auto& f : factors) {
    const double in = f.mass();
    const double out = f.tail_l2 * f.tail_l2;
    b = b * (in + out) + a * out;
    a *= in;
  }
  return std::abs(scale) * std::sqrt(b);
}

double SeparableModel::l2_norm() const {
  double s = std::abs(scale);
  for (const auto& f : factors) s *= std::sqrt(f.mass());
  return s;
}

TrigPoly SeparableModel::to_trig(std::size_t max_terms) const {
  if (factors.empty()) throw InvalidArgument("SeparableModel: no factors");
  double count = 1.0;
  std::vector<TrigPoly> axes;
  for (const auto& f : factors) {
    axes.push_back(f.to_trig());
    count *= static_cast<double>(axes.back().size());
  }
  if (count > static_cast<double>(max_terms)) {
    throw InvalidArgument("SeparableModel::to_trig: too many terms to materialize");
  }
  return tensor_of(*this, axes);
}

int model_dim(const FunctionModel& f) {
  if (const auto* t = std::get_if<TrigPoly>(&f)) return t->dim();
  if (const auto* s = std::get_if<SeparableModel>(&f)) return s->dim();
  return std::get<PointwiseModel>(f).dim;
}

double model_tail(const FunctionModel& f) {
  if (const auto* s = std::get_if<SeparableModel>(&f)) return s->tail_l2();
  return 0.0;
}

QuasiInterpOp::QuasiInterpOp(KernelFamily kern, AveragerFamily avg, int dim, OpMode mode,
                             std::optional<QuadratureRule> quadrature, std::string label)
    : kern_(std::move(kern)),
      avg_(std::move(avg)),
      dim_(dim),
      mode_(mode),
      quadrature_(std::move(quadrature)),
      label_(std::move(label)) {
  if (dim_ < 1) throw InvalidArgument("QuasiInterpOp: dimension must be >= 1");
  if (quadrature_ && (quadrature_->nodes < 16 || quadrature_->tol <= 0.0 || quadrature_->max_doublings < 1)) {
    throw InvalidArgument("QuadratureRule: needs >= 16 nodes, positive tolerance, >= 1 doubling");
  }
  if (label_.empty()) label_ = kern_.name() + "+" + avg_.name();
}

QuasiInterpOp QuasiInterpOp::with_dim(int dim) const {
  return QuasiInterpOp(kern_, avg_, dim, mode_, quadrature_, label_);
}

TrigPoly apply_univariate(const QuasiInterpOp& op, const SpectralFactor& f, int j, EvalPath path) {
  if (j < 0 || j > 24) throw InvalidArgument("apply_univariate: level out of range");
  const KernelFamily& kern = op.kern();
  const std::int64_t band = f.bandwidth;
  if (op.mode() == OpMode::convolution) {
    const std::int64_t b = std::min(kern.bandwidth(j) - 1, band);
    TrigPoly out(1);
    int k_buf[1];
    for (std::int64_t k = -b; k <= b; ++k) {
      const Complex v = kern.symbol(j, k) * f.coeff(k);
      if (v == Complex(0.0)) continue;
      k_buf[0] = static_cast<int>(k);
      out.push_sorted(k_buf, v);
    }
    return out;
  }
  const std::int64_t n = axis_size(j);
  if (path == EvalPath::aliasing) {
    std::vector<Complex> bins(static_cast<std::size_t>(n), 0.0);
    for (std::int64_t k = -band; k <= band; ++k) {
      const Complex c = f.coeff(k);
      if (c == Complex(0.0)) continue;
      bins[static_cast<std::size_t>(fold_frequency(k, j) + half_size(j))] += op.avg().symbol(j, k) * c;
    }
    return reconstruct_axis(kern, j, bins);
  }
  std::vector<Complex> weighted(f.coeffs.size());
  for (std::int64_t k = -band; k <= band; ++k) {
    weighted[static_cast<std::size_t>(k + band)] = op.avg().symbol(j, k) * f.coeff(k);
  }
  const std::vector<Complex> samples = eval_on_axis(weighted, band, j);
  return reconstruct_axis(kern, j, axis_to_coeffs(samples, j));
}

TrigPoly apply_aliasing(const QuasiInterpOp& op, const FunctionModel& f, const LevelVec& j) {
  check_level(op, model_dim(f), j);
  if (const auto* s = std::get_if<SeparableModel>(&f)) return apply_separable(op, *s, j, EvalPath::aliasing);
  const auto* t = std::get_if<TrigPoly>(&f);
  if (t == nullptr) throw InvalidArgument("apply_aliasing requires an exact or spectral input");
  if (op.mode() == OpMode::convolution) return convolve(op, *t, j);

  const int d = op.dim();
  std::vector<std::pair<FreqIndex, Complex>> folded;
  folded.reserve(t->size());
  for (std::size_t term = 0; term < t->size(); ++term) {
    const auto k = t->freq(term);
    const Complex w = t->coeff_at(term) * avg_product(op.avg(), j, k);
    if (w == Complex(0.0)) continue;
    FreqIndex r(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) r[static_cast<std::size_t>(i)] = fold_frequency(k[static_cast<std::size_t>(i)], j[i]);
    folded.emplace_back(std::move(r), w);
  }
  const TrigPoly bins = TrigPoly::from_terms(d, std::move(folded));

  std::vector<std::vector<std::vector<std::pair<int, Complex>>>> lists;
  for (int i = 0; i < d; ++i) lists.push_back(alias_lists(op.kern(), j[i]));

  std::vector<std::pair<FreqIndex, Complex>> terms;
  for (std::size_t b = 0; b < bins.size(); ++b) {
    const auto r = bins.freq(b);
    std::vector<const std::vector<std::pair<int, Complex>>*> axes(static_cast<std::size_t>(d));
    bool empty = false;
    for (int i = 0; i < d; ++i) {
      axes[static_cast<std::size_t>(i)] =
          &lists[static_cast<std::size_t>(i)][static_cast<std::size_t>(r[static_cast<std::size_t>(i)] + half_size(j[i]))];
      if (axes[static_cast<std::size_t>(i)]->empty()) empty = true;
    }
    if (empty) continue;
    std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
    FreqIndex k(static_cast<std::size_t>(d));
    while (true) {
      Complex v = bins.coeff_at(b);
      for (std::size_t i = 0; i < static_cast<std::size_t>(d); ++i) {
        k[i] = (*axes[i])[idx[i]].first;
        v *= (*axes[i])[idx[i]].second;
      }
      terms.emplace_back(k, v);
      std::size_t i = static_cast<std::size_t>(d);
      while (i-- > 0) {
        if (++idx[i] < axes[i]->size()) break;
        idx[i] = 0;
      }
      if (i == static_cast<std::size_t>(-1)) break;
    }
  }
  return TrigPoly::from_terms(d, std::move(terms));
}

namespace {

/// Multiplies a dense A_j coefficient tensor by the kernel over the bandwidth box.
TrigPoly reconstruct(const QuasiInterpOp& op, const LevelVec& j, const TrigPoly& c) {
  const int d = op.dim();
  std::vector<std::vector<std::pair<int, Complex>>> axes(static_cast<std::size_t>(d));
  // Per box entry: offset of its folded frequency in the dense A_j table (row-major).
  std::vector<std::vector<std::size_t>> offsets(static_cast<std::size_t>(d));
  std::vector<std::size_t> strides(static_cast<std::size_t>(d), 1);
  for (int i = d - 1; i > 0; --i) {
    strides[static_cast<std::size_t>(i - 1)] = strides[static_cast<std::size_t>(i)] * static_cast<std::size_t>(axis_size(j[i]));
  }
  for (int i = 0; i < d; ++i) {
    const auto u = static_cast<std::size_t>(i);
    const std::int64_t b = op.kern().bandwidth(j[i]);
    for (std::int64_t k = -b + 1; k < b; ++k) {
      const Complex v = op.kern().symbol(j[i], k);
      if (v == Complex(0.0)) continue;
      axes[u].emplace_back(static_cast<int>(k), v);
      offsets[u].push_back(static_cast<std::size_t>(fold_frequency(k, j[i]) + half_size(j[i])) * strides[u]);
    }
    if (axes[u].empty()) return TrigPoly(d);
  }
  std::vector<Complex> dense(strides[0] * static_cast<std::size_t>(axis_size(j[0])), 0.0);
  for (std::size_t t = 0; t < c.size(); ++t) {
    const auto r = c.freq(t);
    std::size_t flat = 0;
    for (int i = 0; i < d; ++i) {
      flat += static_cast<std::size_t>(r[static_cast<std::size_t>(i)] + half_size(j[i])) * strides[static_cast<std::size_t>(i)];
    }
    dense[flat] = c.coeff_at(t);
  }
  TrigPoly out(d);
  std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
  FreqIndex k(static_cast<std::size_t>(d));
  while (true) {
    Complex v = 1.0;
    std::size_t flat = 0;
    for (std::size_t i = 0; i < static_cast<std::size_t>(d); ++i) {
      k[i] = axes[i][idx[i]].first;
      flat += offsets[i][idx[i]];
      v *= axes[i][idx[i]].second;
    }
    v *= dense[flat];
    if (v != Complex(0.0)) out.push_sorted(k, v);
    std::size_t i = static_cast<std::size_t>(d);
    while (i-- > 0) {
      if (++idx[i] < axes[i].size()) break;
      idx[i] = 0;
    }
    if (i == static_cast<std::size_t>(-1)) break;
  }
  return out;
}

}  // namespace

TrigPoly apply_sampled(const QuasiInterpOp& op, const FunctionModel& f, const LevelVec& j) {
  check_level(op, model_dim(f), j);
  if (const auto* s = std::get_if<SeparableModel>(&f)) return apply_separable(op, *s, j, EvalPath::sampled);
  const DyadicGrid grid(j);
  if (const auto* t = std::get_if<TrigPoly>(&f)) {
    if (op.mode() == OpMode::convolution) return convolve(op, *t, j);
    const TrigPoly weighted = t->multiplied([&](std::span<const int> k) { return avg_product(op.avg(), j, k); });
    return reconstruct(op, j, grid_to_coeffs(eval_on_grid(weighted, grid)));
  }
  const auto& p = std::get<PointwiseModel>(f);
  if (op.mode() == OpMode::convolution) throw InvalidArgument("convolution operators need an exact or spectral input");
  GridValues samples{j, std::vector<Complex>(grid.size())};
  for (std::size_t m = 0; m < grid.size(); ++m) samples.values[m] = averaged_sample(op, p, j, grid.point(m));
  return reconstruct(op, j, grid_to_coeffs(samples));
}

TrigPoly apply(const QuasiInterpOp& op, const FunctionModel& f, const LevelVec& j, EvalPath path) {
  return path == EvalPath::aliasing ? apply_aliasing(op, f, j) : apply_sampled(op, f, j);
}

Complex kantorovich_avg(const FunctionModel& f, const LevelVec& j, int sigma, std::span<const double> x,
                        const QuadratureRule& rule) {
  if (sigma < 1) throw InvalidArgument("kantorovich_avg: sigma must be >= 1");
  if (j.dim() != model_dim(f) || static_cast<int>(x.size()) != j.dim()) {
    throw ShapeMismatch("kantorovich_avg: dimension mismatch");
  }
  const auto weight = [&](int axis, std::int64_t k) {
    return sinc_pi(std::ldexp(static_cast<double>(k), -j[axis] - sigma));
  };
  if (const auto* t = std::get_if<TrigPoly>(&f)) {
    Complex sum = 0.0;
    for (std::size_t term = 0; term < t->size(); ++term) {
      const auto k = t->freq(term);
      double w = 1.0;
      double phase = 0.0;
      for (int i = 0; i < j.dim(); ++i) {
        w *= weight(i, k[static_cast<std::size_t>(i)]);
        phase += k[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
      }
      sum += t->coeff_at(term) * w * std::polar(1.0, phase);
    }
    return sum;
  }
  if (const auto* s = std::get_if<SeparableModel>(&f)) {
    Complex prod = s->scale;
    for (int i = 0; i < s->dim(); ++i) {
      const auto& fac = s->factors[static_cast<std::size_t>(i)];
      Complex sum = 0.0;
      for (std::int64_t k = -fac.bandwidth; k <= fac.bandwidth; ++k) {
        const Complex c = fac.coeff(k);
        if (c == Complex(0.0)) continue;
        sum += c * weight(i, k) * std::polar(1.0, static_cast<double>(k) * x[static_cast<std::size_t>(i)]);
      }
      prod *= sum;
    }
    return prod;
  }
  std::vector<double> h;
  for (int i = 0; i < j.dim(); ++i) h.push_back(kPi * std::ldexp(1.0, -j[i] - sigma));
  return box_average(std::get<PointwiseModel>(f), x, h, rule);
}

Complex kantorovich_avg(const FunctionModel& f, int j, int sigma, double x, const QuadratureRule& rule) {
  const double xs[1] = {x};
  return kantorovich_avg(f, LevelVec{j}, sigma, xs, rule);
}

Complex c0_of_level(const QuasiInterpOp& op, const TrigPoly& f, const LevelVec& j) {
  check_level(op, f.dim(), j);
  const FreqIndex zero(static_cast<std::size_t>(f.dim()), 0);
  const Complex k0 = kern_product(op.kern(), j, zero);
  if (k0 == Complex(0.0)) return 0.0;
  if (op.mode() == OpMode::convolution) return k0 * f.coeff(zero);
  Complex sum = 0.0;
  for (std::size_t term = 0; term < f.size(); ++term) {
    const auto k = f.freq(term);
    bool aliased = true;
    for (int i = 0; i < f.dim() && aliased; ++i) aliased = fold_frequency(k[static_cast<std::size_t>(i)], j[i]) == 0;
    if (aliased) sum += f.coeff_at(term) * avg_product(op.avg(), j, k);
  }
  return k0 * sum;
}

QuasiInterpOp named_operator(const std::string& name, const NamedOpParams& params) {
  if (name == "I") {
    return QuasiInterpOp(dlvp_kernel(params.rho, params.support), delta_averager(), params.dim, OpMode::sampling,
                         std::nullopt, "I");
  }
  if (name == "V") {
    return QuasiInterpOp(dlvp_kernel(params.rho, params.support), delta_averager(), params.dim, OpMode::convolution,
                         std::nullopt, "V");
  }
  if (name == "K") {
    return QuasiInterpOp(dlvp_kernel(params.rho, params.support), char_averager(params.sigma), params.dim,
                         OpMode::sampling, QuadratureRule{}, "K");
  }
  if (name == "Kstar" || name == "K*") {
    return QuasiInterpOp(modified_dlvp_kernel(params.rho, params.support, params.sigma), char_averager(params.sigma),
                         params.dim, OpMode::sampling, QuadratureRule{}, "Kstar");
  }
  throw InvalidArgument("unknown operator name '" + name + "' (expected I, V, K or Kstar)");
}

}  // namespace hypercross
