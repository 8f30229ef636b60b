#pragma once

#include <cstdint>
#include <initializer_list>
#include <set>
#include <span>
#include <vector>

#include "hypercross/trig_poly.hpp"

namespace hypercross {

/// Nonnegative level vector j in Z_+^d.
class LevelVec {
 public:
  LevelVec() = default;
  explicit LevelVec(std::vector<int> j);
  LevelVec(std::initializer_list<int> j) : LevelVec(std::vector<int>(j)) {}

  static LevelVec zeros(int dim) { return LevelVec(std::vector<int>(static_cast<std::size_t>(dim), 0)); }

  int dim() const { return static_cast<int>(j_.size()); }
  int operator[](int axis) const { return j_[static_cast<std::size_t>(axis)]; }
  int l1() const;
  int linf() const;
  const std::vector<int>& values() const { return j_; }

  friend auto operator<=>(const LevelVec&, const LevelVec&) = default;

 private:
  std::vector<int> j_;
};

/// Number of sampling nodes 2^j on a dyadic axis.
inline std::int64_t axis_size(int level) { return std::int64_t{1} << level; }

/// Representative of k mod 2^level in A_level = [-2^{level-1}, 2^{level-1}).
int fold_frequency(std::int64_t k, int level);

/// Node x_m^j = pi m / 2^{j-1} = 2 pi m / 2^j.
double dyadic_node(int level, int m);

/// Tensor dyadic grid  prod_i { x_m^{j_i} : m in A_{j_i} }.
class DyadicGrid {
 public:
  explicit DyadicGrid(LevelVec level);

  const LevelVec& level() const { return level_; }
  int dim() const { return level_.dim(); }
  std::size_t size() const { return size_; }
  /// Nodes along one axis in increasing order, from -pi.
  std::vector<double> axis_nodes(int axis) const;
  /// Coordinates of the point with row-major flat index (axis 0 slowest).
  std::vector<double> point(std::size_t flat) const;

 private:
  LevelVec level_;
  std::size_t size_;
};

/// Values of a function at every node of a dyadic grid, row-major, each axis
/// ordered by increasing node (m = -2^{j-1}, ..., 2^{j-1}-1).
struct GridValues {
  LevelVec level;
  std::vector<Complex> values;
};

/// f at all grid nodes via axis-wise inverse DFTs with frequency folding.
GridValues eval_on_grid(const TrigPoly& f, const DyadicGrid& grid);

/// The unique element of span{e^{i(k,x)} : k in prod A_{j_i}} interpolating
/// the values. Throws ShapeMismatch if the tensor has the wrong size.
TrigPoly grid_to_coeffs(const GridValues& values);
TrigPoly grid_to_coeffs(std::span<const Complex> values, const LevelVec& level);

/// Univariate variant used by the per-axis operator paths: folds a dense
/// coefficient table (index k + offset) into 2^level bins and returns the
/// 2^level node values in increasing node order.
std::vector<Complex> eval_on_axis(std::span<const Complex> coeffs, std::int64_t offset, int level);
/// Inverse of eval_on_axis on A_level: returned vector is indexed by k + 2^{level-1}.
std::vector<Complex> axis_to_coeffs(std::span<const Complex> values, int level);

/// Dyadic block  prod_i { floor(2^{j_i-1}) <= |k_i| < 2^{j_i} }, lexicographic.
std::vector<FreqIndex> dyadic_block(const LevelVec& j);

/// Block level of a single frequency: 0 for k=0, else bit_width(|k|).
int block_level(std::int64_t k);

/// Step hyperbolic cross  Q_n = union_{|j|_1 <= n} dyadic_block(j).
std::set<FreqIndex> hyperbolic_cross(int n, int dim);

/// All level vectors with |j|_1 <= n (lexicographic).
std::vector<LevelVec> simplex_levels(int n, int dim);
/// All level vectors with |j|_1 == n (lexicographic).
std::vector<LevelVec> levels_with_l1(int n, int dim);
/// All level vectors with |j|_inf <= m (lexicographic).
std::vector<LevelVec> box_levels(int m, int dim);

}  // namespace hypercross
