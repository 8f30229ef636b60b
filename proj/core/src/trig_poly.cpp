#include "hypercross/trig_poly.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hypercross/errors.hpp"

namespace hypercross {

namespace {

int compare_keys(std::span<const int> a, std::span<const int> b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  }
  return 0;
}

}  // namespace

TrigPoly::TrigPoly(int dim) : dim_(dim) {
  if (dim < 1) throw InvalidArgument("TrigPoly: dimension must be >= 1");
}

TrigPoly TrigPoly::from_terms(int dim, std::vector<std::pair<FreqIndex, Complex>> terms) {
  for (const auto& [k, c] : terms) {
    if (static_cast<int>(k.size()) != dim) throw ShapeMismatch("TrigPoly: frequency length differs from dimension");
  }
  std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  TrigPoly out(dim);
  std::size_t t = 0;
  while (t < terms.size()) {
    Complex sum = 0.0;
    std::size_t u = t;
    while (u < terms.size() && terms[u].first == terms[t].first) sum += terms[u++].second;
    if (sum != Complex(0.0)) out.push_sorted(terms[t].first, sum);
    t = u;
  }
  return out;
}

TrigPoly TrigPoly::constant(int dim, Complex value) {
  TrigPoly out(dim);
  if (value != Complex(0.0)) out.push_sorted(FreqIndex(static_cast<std::size_t>(dim), 0), value);
  return out;
}

TrigPoly TrigPoly::monomial(FreqIndex k, Complex value) {
  TrigPoly out(static_cast<int>(k.size()));
  if (value != Complex(0.0)) out.push_sorted(k, value);
  return out;
}

Complex TrigPoly::coeff(std::span<const int> k) const {
  if (static_cast<int>(k.size()) != dim_) throw ShapeMismatch("TrigPoly::coeff: wrong frequency length");
  std::size_t lo = 0;
  std::size_t hi = size();
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    const int c = compare_keys(freq(mid), k);
    if (c == 0) return coeffs_[mid];
    if (c < 0) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  return 0.0;
}

Complex TrigPoly::operator()(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim_) throw ShapeMismatch("TrigPoly: point dimension mismatch");
  Complex sum = 0.0;
  for (std::size_t t = 0; t < size(); ++t) {
    double phase = 0.0;
    const auto k = freq(t);
    for (int i = 0; i < dim_; ++i) phase += k[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
    sum += coeffs_[t] * std::polar(1.0, phase);
  }
  return sum;
}

int TrigPoly::max_abs_freq(int axis) const {
  int m = 0;
  for (std::size_t t = 0; t < size(); ++t) m = std::max(m, std::abs(freq(t)[static_cast<std::size_t>(axis)]));
  return m;
}

double TrigPoly::l2_norm() const {
  double s = 0.0;
  for (const auto& c : coeffs_) s += std::norm(c);
  return std::sqrt(s);
}

void TrigPoly::push_sorted(std::span<const int> k, Complex c) {
  if (static_cast<int>(k.size()) != dim_) throw ShapeMismatch("TrigPoly: frequency length differs from dimension");
  if (!empty() && compare_keys(freq(size() - 1), k) >= 0) {
    throw InvalidArgument("TrigPoly::push_sorted: frequencies must be strictly increasing");
  }
  keys_.insert(keys_.end(), k.begin(), k.end());
  coeffs_.push_back(c);
}

TrigPoly TrigPoly::merged(const TrigPoly& other, double sign) const {
  if (other.dim_ != dim_) throw ShapeMismatch("TrigPoly: dimension mismatch");
  TrigPoly out(dim_);
  out.keys_.reserve(keys_.size() + other.keys_.size());
  out.coeffs_.reserve(size() + other.size());
  std::size_t a = 0;
  std::size_t b = 0;
  while (a < size() || b < other.size()) {
    int c;
    if (a == size()) {
      c = 1;
    } else if (b == other.size()) {
      c = -1;
    } else {
      c = compare_keys(freq(a), other.freq(b));
    }
    if (c < 0) {
      out.push_sorted(freq(a), coeffs_[a]);
      ++a;
    } else if (c > 0) {
      out.push_sorted(other.freq(b), sign * other.coeffs_[b]);
      ++b;
    } else {
      const Complex v = coeffs_[a] + sign * other.coeffs_[b];
      if (v != Complex(0.0)) out.push_sorted(freq(a), v);
      ++a;
      ++b;
    }
  }
  return out;
}

TrigPoly& TrigPoly::operator+=(const TrigPoly& other) {
  *this = merged(other, 1.0);
  return *this;
}

TrigPoly& TrigPoly::operator-=(const TrigPoly& other) {
  *this = merged(other, -1.0);
  return *this;
}

TrigPoly& TrigPoly::operator*=(Complex scale) {
  *this = multiplied([scale](std::span<const int>) { return scale; });
  return *this;
}

TrigPoly tensor_product(const TrigPoly& a, const TrigPoly& b) {
  TrigPoly out(a.dim() + b.dim());
  std::vector<int> k(static_cast<std::size_t>(a.dim() + b.dim()));
  for (std::size_t s = 0; s < a.size(); ++s) {
    std::copy(a.freq(s).begin(), a.freq(s).end(), k.begin());
    for (std::size_t t = 0; t < b.size(); ++t) {
      std::copy(b.freq(t).begin(), b.freq(t).end(), k.begin() + a.dim());
      const Complex c = a.coeff_at(s) * b.coeff_at(t);
      if (c != Complex(0.0)) out.push_sorted(k, c);
    }
  }
  return out;
}

TrigPoly sum_pairwise(std::vector<TrigPoly> terms, int dim) {
  if (terms.empty()) return TrigPoly(dim);
  while (terms.size() > 1) {
    std::vector<TrigPoly> next;
    next.reserve((terms.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < terms.size(); i += 2) next.push_back(terms[i] + terms[i + 1]);
    if (terms.size() % 2 == 1) next.push_back(std::move(terms.back()));
    terms = std::move(next);
  }
  return std::move(terms.front());
}

double l2_distance(const TrigPoly& a, const TrigPoly& b) { return (a - b).l2_norm(); }

double max_coeff_difference(const TrigPoly& a, const TrigPoly& b) {
  const TrigPoly d = a - b;
  double m = 0.0;
  for (const auto& c : d.coeffs()) m = std::max(m, std::abs(c));
  return m;
}

}  // namespace hypercross
