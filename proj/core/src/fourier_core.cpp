#include "hypercross/fourier_core.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include "hypercross/errors.hpp"

namespace hypercross {

namespace {

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

/// In-place multidimensional DFT in standard (bin) order; sign +1 is the inverse without scaling.
void dft(std::vector<Complex>& data, const std::vector<int>& dims, int sign) {
  if (data.size() <= 1) return;
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    plan = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), buf, buf,
                         sign > 0 ? FFTW_BACKWARD : FFTW_FORWARD, FFTW_ESTIMATE);
  }
  if (plan == nullptr) throw Error("FFTW planning failed");
  fftw_execute(plan);
  std::lock_guard<std::mutex> lock(fftw_planner_mutex());
  fftw_destroy_plan(plan);
}

std::vector<int> axis_sizes(const LevelVec& level) {
  std::vector<int> dims;
  for (int i = 0; i < level.dim(); ++i) {
    if (level[i] > 28) throw InvalidArgument("dyadic level too large");
    dims.push_back(static_cast<int>(axis_size(level[i])));
  }
  return dims;
}

std::size_t checked_total(const std::vector<int>& dims) {
  std::size_t total = 1;
  for (int n : dims) {
    if (total > (std::size_t{1} << 32) / static_cast<std::size_t>(n)) throw InvalidArgument("dyadic grid too large");
    total *= static_cast<std::size_t>(n);
  }
  return total;
}

/// Bin index (k mod N) for a node-ordered position p: node m = p - N/2.
inline std::size_t node_to_bin(std::size_t p, std::size_t n) { return (p + n - n / 2) % n; }

/// Permutes between node order and bin order along every axis.
std::vector<Complex> reorder(const std::vector<Complex>& in, const std::vector<int>& dims, bool node_to_bin_order) {
  std::vector<Complex> out(in.size());
  const std::size_t d = dims.size();
  std::vector<std::size_t> idx(d, 0);
  for (std::size_t flat = 0; flat < in.size(); ++flat) {
    std::size_t target = 0;
    for (std::size_t i = 0; i < d; ++i) {
      const auto n = static_cast<std::size_t>(dims[i]);
      const std::size_t mapped = node_to_bin_order ? node_to_bin(idx[i], n) : (idx[i] + n / 2) % n;
      target = target * n + mapped;
    }
    out[target] = in[flat];
    for (std::size_t i = d; i-- > 0;) {
      if (++idx[i] < static_cast<std::size_t>(dims[i])) break;
      idx[i] = 0;
    }
  }
  return out;
}

}  // namespace

LevelVec::LevelVec(std::vector<int> j) : j_(std::move(j)) {
  for (int v : j_) {
    if (v < 0) throw InvalidArgument("LevelVec: entries must be nonnegative");
  }
}

int LevelVec::l1() const {
  int s = 0;
  for (int v : j_) s += v;
  return s;
}

int LevelVec::linf() const {
  int m = 0;
  for (int v : j_) m = std::max(m, v);
  return m;
}

int fold_frequency(std::int64_t k, int level) {
  const std::int64_t n = axis_size(level);
  const std::int64_t h = n / 2;
  std::int64_t r = (k + h) % n;
  if (r < 0) r += n;
  return static_cast<int>(r - h);
}

double dyadic_node(int level, int m) {
  return 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(axis_size(level));
}

DyadicGrid::DyadicGrid(LevelVec level) : level_(std::move(level)) {
  if (level_.dim() < 1) throw InvalidArgument("DyadicGrid: dimension must be >= 1");
  size_ = checked_total(axis_sizes(level_));
}

std::vector<double> DyadicGrid::axis_nodes(int axis) const {
  const int n = static_cast<int>(axis_size(level_[axis]));
  std::vector<double> x;
  x.reserve(static_cast<std::size_t>(n));
  for (int m = -(n / 2); m < n - n / 2; ++m) x.push_back(dyadic_node(level_[axis], m));
  return x;
}

std::vector<double> DyadicGrid::point(std::size_t flat) const {
  std::vector<double> x(static_cast<std::size_t>(dim()));
  for (int i = dim() - 1; i >= 0; --i) {
    const auto n = static_cast<std::size_t>(axis_size(level_[i]));
    const auto p = flat % n;
    flat /= n;
    x[static_cast<std::size_t>(i)] = dyadic_node(level_[i], static_cast<int>(p) - static_cast<int>(n / 2));
  }
  return x;
}

GridValues eval_on_grid(const TrigPoly& f, const DyadicGrid& grid) {
  if (f.dim() != grid.dim()) throw ShapeMismatch("eval_on_grid: dimension mismatch");
  const auto dims = axis_sizes(grid.level());
  std::vector<Complex> bins(grid.size(), 0.0);
  for (std::size_t t = 0; t < f.size(); ++t) {
    const auto k = f.freq(t);
    std::size_t flat = 0;
    for (std::size_t i = 0; i < dims.size(); ++i) {
      const auto n = static_cast<std::int64_t>(dims[i]);
      std::int64_t r = k[i] % n;
      if (r < 0) r += n;
      flat = flat * static_cast<std::size_t>(n) + static_cast<std::size_t>(r);
    }
    bins[flat] += f.coeff_at(t);
  }
  dft(bins, dims, +1);
  return {grid.level(), reorder(bins, dims, false)};
}

TrigPoly grid_to_coeffs(const GridValues& values) { return grid_to_coeffs(values.values, values.level); }

TrigPoly grid_to_coeffs(std::span<const Complex> values, const LevelVec& level) {
  if (level.dim() < 1) throw InvalidArgument("grid_to_coeffs: dimension must be >= 1");
  const auto dims = axis_sizes(level);
  const std::size_t total = checked_total(dims);
  if (values.size() != total) {
    throw ShapeMismatch("grid_to_coeffs: expected " + std::to_string(total) + " values, got " +
                        std::to_string(values.size()));
  }
  std::vector<Complex> bins = reorder(std::vector<Complex>(values.begin(), values.end()), dims, true);
  dft(bins, dims, -1);
  const double scale = 1.0 / static_cast<double>(total);
  // Node-order permutation of frequency bins is exactly k in A_j in increasing order.
  const std::vector<Complex> ordered = reorder(bins, dims, false);
  TrigPoly out(level.dim());
  const std::size_t d = dims.size();
  std::vector<int> k(d);
  std::vector<std::size_t> idx(d, 0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    for (std::size_t i = 0; i < d; ++i) k[i] = static_cast<int>(idx[i]) - dims[i] / 2;
    const Complex c = ordered[flat] * scale;
    if (c != Complex(0.0)) out.push_sorted(k, c);
    for (std::size_t i = d; i-- > 0;) {
      if (++idx[i] < static_cast<std::size_t>(dims[i])) break;
      idx[i] = 0;
    }
  }
  return out;
}

std::vector<Complex> eval_on_axis(std::span<const Complex> coeffs, std::int64_t offset, int level) {
  const std::int64_t n = axis_size(level);
  std::vector<Complex> bins(static_cast<std::size_t>(n), 0.0);
  for (std::size_t t = 0; t < coeffs.size(); ++t) {
    std::int64_t r = (static_cast<std::int64_t>(t) - offset) % n;
    if (r < 0) r += n;
    bins[static_cast<std::size_t>(r)] += coeffs[t];
  }
  const std::vector<int> dims{static_cast<int>(n)};
  dft(bins, dims, +1);
  return reorder(bins, dims, false);
}

std::vector<Complex> axis_to_coeffs(std::span<const Complex> values, int level) {
  const std::int64_t n = axis_size(level);
  if (static_cast<std::int64_t>(values.size()) != n) throw ShapeMismatch("axis_to_coeffs: wrong number of values");
  const std::vector<int> dims{static_cast<int>(n)};
  std::vector<Complex> bins = reorder(std::vector<Complex>(values.begin(), values.end()), dims, true);
  dft(bins, dims, -1);
  std::vector<Complex> out = reorder(bins, dims, false);
  for (auto& c : out) c /= static_cast<double>(n);
  return out;
}

int block_level(std::int64_t k) {
  return static_cast<int>(std::bit_width(static_cast<std::uint64_t>(k < 0 ? -k : k)));
}

namespace {

std::vector<int> axis_block(int j) {
  if (j == 0) return {0};
  const int lo = 1 << (j - 1);
  const int hi = 1 << j;
  std::vector<int> out;
  for (int k = -hi + 1; k <= -lo; ++k) out.push_back(k);
  for (int k = lo; k < hi; ++k) out.push_back(k);
  return out;
}

template <class Visit>
void for_each_product(const std::vector<std::vector<int>>& axes, Visit&& visit) {
  const std::size_t d = axes.size();
  for (const auto& a : axes) {
    if (a.empty()) return;
  }
  std::vector<std::size_t> idx(d, 0);
  FreqIndex k(d);
  while (true) {
    for (std::size_t i = 0; i < d; ++i) k[i] = axes[i][idx[i]];
    visit(k);
    std::size_t i = d;
    while (i-- > 0) {
      if (++idx[i] < axes[i].size()) break;
      idx[i] = 0;
    }
    if (i == static_cast<std::size_t>(-1)) return;
  }
}

void enumerate_levels(int dim, int axis, int budget, std::vector<int>& cur, bool exact, std::vector<LevelVec>& out) {
  if (axis == dim) {
    if (!exact || budget == 0) out.emplace_back(cur);
    return;
  }
  for (int v = 0; v <= budget; ++v) {
    cur[static_cast<std::size_t>(axis)] = v;
    enumerate_levels(dim, axis + 1, budget - v, cur, exact, out);
  }
}

}  // namespace

std::vector<FreqIndex> dyadic_block(const LevelVec& j) {
  std::vector<std::vector<int>> axes;
  for (int i = 0; i < j.dim(); ++i) {
    if (j[i] > 30) throw InvalidArgument("dyadic_block: level too large");
    axes.push_back(axis_block(j[i]));
  }
  std::vector<FreqIndex> out;
  for_each_product(axes, [&](const FreqIndex& k) { out.push_back(k); });
  return out;
}

std::set<FreqIndex> hyperbolic_cross(int n, int dim) {
  if (n < 0) throw InvalidArgument("hyperbolic_cross: n must be >= 0");
  std::set<FreqIndex> out;
  for (const auto& j : simplex_levels(n, dim)) {
    for (auto& k : dyadic_block(j)) out.insert(std::move(k));
  }
  return out;
}

std::vector<LevelVec> simplex_levels(int n, int dim) {
  if (dim < 1) throw InvalidArgument("simplex_levels: dimension must be >= 1");
  std::vector<LevelVec> out;
  if (n < 0) return out;
  std::vector<int> cur(static_cast<std::size_t>(dim), 0);
  enumerate_levels(dim, 0, n, cur, false, out);
  return out;
}

std::vector<LevelVec> levels_with_l1(int n, int dim) {
  if (dim < 1) throw InvalidArgument("levels_with_l1: dimension must be >= 1");
  std::vector<LevelVec> out;
  if (n < 0) return out;
  std::vector<int> cur(static_cast<std::size_t>(dim), 0);
  enumerate_levels(dim, 0, n, cur, true, out);
  return out;
}

std::vector<LevelVec> box_levels(int m, int dim) {
  if (dim < 1) throw InvalidArgument("box_levels: dimension must be >= 1");
  std::vector<LevelVec> out;
  if (m < 0) return out;
  std::vector<int> cur(static_cast<std::size_t>(dim), 0);
  while (true) {
    out.emplace_back(cur);
    int i = dim;
    while (i-- > 0) {
      if (++cur[static_cast<std::size_t>(i)] <= m) break;
      cur[static_cast<std::size_t>(i)] = 0;
    }
    if (i < 0) return out;
  }
}

}  // namespace hypercross
