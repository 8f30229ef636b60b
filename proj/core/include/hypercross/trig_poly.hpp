#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace hypercross {

using Complex = std::complex<double>;

/// Integer frequency vector on Z^d.
using FreqIndex = std::vector<int>;

/// Sparse multivariate trigonometric polynomial  f(x) = sum_k c_k e^{i(k,x)}.
///
/// Terms are kept sorted lexicographically by frequency and unique. Exact
/// zeros are dropped; nothing is pruned by magnitude.
class TrigPoly {
 public:
  explicit TrigPoly(int dim);

  /// Builds from arbitrary (possibly repeated, unsorted) terms; duplicates add.
  static TrigPoly from_terms(int dim, std::vector<std::pair<FreqIndex, Complex>> terms);
  static TrigPoly constant(int dim, Complex value);
  static TrigPoly monomial(FreqIndex k, Complex value = 1.0);

  int dim() const { return dim_; }
  std::size_t size() const { return coeffs_.size(); }
  bool empty() const { return coeffs_.empty(); }

  std::span<const int> freq(std::size_t term) const {
    return {keys_.data() + term * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
  }
  Complex coeff_at(std::size_t term) const { return coeffs_[term]; }
  const std::vector<Complex>& coeffs() const { return coeffs_; }

  /// Coefficient at frequency k, zero if absent.
  Complex coeff(std::span<const int> k) const;
  Complex coeff(std::initializer_list<int> k) const {
    return coeff(std::span<const int>(k.begin(), k.size()));
  }

  /// Direct pointwise evaluation.
  Complex operator()(std::span<const double> x) const;
  Complex operator()(std::initializer_list<double> x) const {
    return (*this)(std::span<const double>(x.begin(), x.size()));
  }

  /// max |k_axis| over stored terms (0 for the zero polynomial).
  int max_abs_freq(int axis) const;

  /// sqrt(sum |c_k|^2): the L2 norm under the normalized measure.
  double l2_norm() const;

  /// Multiplies every coefficient c_k by symbol(k); exact zeros are removed.
  template <class Symbol>
  TrigPoly multiplied(Symbol&& symbol) const {
    TrigPoly out(dim_);
    out.keys_.reserve(keys_.size());
    out.coeffs_.reserve(coeffs_.size());
    for (std::size_t t = 0; t < size(); ++t) {
      const Complex c = coeffs_[t] * Complex(symbol(freq(t)));
      if (c != Complex(0.0)) out.push_sorted(freq(t), c);
    }
    return out;
  }

  TrigPoly& operator+=(const TrigPoly& other);
  TrigPoly& operator-=(const TrigPoly& other);
  TrigPoly& operator*=(Complex scale);

  friend TrigPoly operator+(TrigPoly a, const TrigPoly& b) { return a += b; }
  friend TrigPoly operator-(TrigPoly a, const TrigPoly& b) { return a -= b; }
  friend TrigPoly operator*(TrigPoly a, Complex s) { return a *= s; }
  friend TrigPoly operator*(Complex s, TrigPoly a) { return a *= s; }

  friend bool operator==(const TrigPoly& a, const TrigPoly& b) {
    return a.dim_ == b.dim_ && a.keys_ == b.keys_ && a.coeffs_ == b.coeffs_;
  }

  /// Appends a term whose frequency is strictly greater than the last one.
  /// Callers that enumerate frequencies lexicographically use this to avoid a sort.
  void push_sorted(std::span<const int> k, Complex c);

 private:
  TrigPoly merged(const TrigPoly& other, double sign) const;

  int dim_;
  std::vector<int> keys_;  // size() * dim_, row-major
  std::vector<Complex> coeffs_;
};

/// (a ⊗ b)(x, y) = a(x) b(y); dimension adds.
TrigPoly tensor_product(const TrigPoly& a, const TrigPoly& b);

/// Sums polynomials with a fixed pairwise reduction tree (order-stable).
TrigPoly sum_pairwise(std::vector<TrigPoly> terms, int dim);

/// sqrt(sum |a_k - b_k|^2) over the union of supports.
double l2_distance(const TrigPoly& a, const TrigPoly& b);

/// Largest |a_k - b_k| over the union of supports.
double max_coeff_difference(const TrigPoly& a, const TrigPoly& b);

}  // namespace hypercross
