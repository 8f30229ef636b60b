#include "hypercross/smolyak.hpp"

#include <algorithm>
#include <map>
#include <optional>

#include "hypercross/errors.hpp"

namespace hypercross {

namespace {

std::int64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// Lazily computed Q_j f. Separable inputs are cached per (axis, level).
class LevelCache {
 public:
  LevelCache(const QuasiInterpOp& op, const FunctionModel& f, EvalPath path) : op_(op), f_(f), path_(path) {
    sep_ = std::get_if<SeparableModel>(&f_);
    if (sep_ != nullptr) axes_.resize(static_cast<std::size_t>(sep_->dim()));
  }

  bool separable() const { return sep_ != nullptr; }

  /// Univariate Q_{level} f_axis; level -1 is the zero operator.
  const TrigPoly& axis(int i, int level) {
    auto& cache = axes_[static_cast<std::size_t>(i)];
    auto it = cache.find(level);
    if (it != cache.end()) return it->second;
    TrigPoly v = level < 0 ? TrigPoly(1)
                           : apply_univariate(op_, sep_->factors[static_cast<std::size_t>(i)], level, path_);
    return cache.emplace(level, std::move(v)).first->second;
  }

  /// Univariate Q_{level} - Q_{level-1}.
  const TrigPoly& axis_difference(int i, int level) {
    auto& cache = diffs_[{i, level}];
    if (!cache) cache = axis(i, level) - axis(i, level - 1);
    return *cache;
  }

  const TrigPoly& full(const LevelVec& j) {
    auto it = full_.find(j);
    if (it != full_.end()) return it->second;
    TrigPoly v = separable() ? tensor(j, false) : apply(op_, f_, j, path_);
    return full_.emplace(j, std::move(v)).first->second;
  }

  TrigPoly tensor(const LevelVec& j, bool differences) {
    TrigPoly out = differences ? axis_difference(0, j[0]) : axis(0, j[0]);
    for (int i = 1; i < j.dim(); ++i) out = tensor_product(out, differences ? axis_difference(i, j[i]) : axis(i, j[i]));
    if (sep_->scale != Complex(1.0)) out *= sep_->scale;
    return out;
  }

 private:
  const QuasiInterpOp& op_;
  const FunctionModel& f_;
  EvalPath path_;
  const SeparableModel* sep_ = nullptr;
  std::vector<std::map<int, TrigPoly>> axes_;
  std::map<std::pair<int, int>, std::optional<TrigPoly>> diffs_;
  std::map<LevelVec, TrigPoly> full_;
};

TrigPoly mixed_difference_cached(LevelCache& cache, const LevelVec& j) {
  if (cache.separable()) return cache.tensor(j, true);
  const int d = j.dim();
  std::vector<TrigPoly> terms;
  for (unsigned mask = 0; mask < (1u << d); ++mask) {
    std::vector<int> level(j.values());
    bool zero = false;
    int sign = 1;
    for (int i = 0; i < d; ++i) {
      if (mask & (1u << i)) {
        level[static_cast<std::size_t>(i)] -= 1;
        sign = -sign;
        if (level[static_cast<std::size_t>(i)] < 0) zero = true;
      }
    }
    if (zero) continue;
    TrigPoly q = cache.full(LevelVec(level));
    if (sign < 0) q *= -1.0;
    terms.push_back(std::move(q));
  }
  return sum_pairwise(std::move(terms), d);
}

}  // namespace

SmolyakPlan combination_plan(int n, int dim) {
  if (n < 0) throw InvalidArgument("combination_plan: n must be >= 0");
  if (dim < 1) throw InvalidArgument("combination_plan: dimension must be >= 1");
  SmolyakPlan plan;
  plan.n = n;
  plan.dim = dim;
  for (int l = std::max(0, n - dim + 1); l <= n; ++l) {
    const int m = n - l;
    const auto c = static_cast<int>(((m % 2 == 0) ? 1 : -1) * binomial(dim - 1, m));
    for (auto& j : levels_with_l1(l, dim)) plan.terms.push_back({std::move(j), c});
  }
  std::sort(plan.terms.begin(), plan.terms.end(), [](const auto& a, const auto& b) { return a.j < b.j; });
  return plan;
}

TrigPoly mixed_difference(const QuasiInterpOp& op, const FunctionModel& f, const LevelVec& j, EvalPath path) {
  if (j.dim() != op.dim()) throw ShapeMismatch("mixed_difference: level dimension mismatch");
  LevelCache cache(op, f, path);
  return mixed_difference_cached(cache, j);
}

TrigPoly smolyak_apply(const QuasiInterpOp& op, const FunctionModel& f, int n, SmolyakMode mode, EvalPath path) {
  if (n < 0) throw InvalidArgument("smolyak_apply: n must be >= 0");
  if (model_dim(f) != op.dim()) throw ShapeMismatch("smolyak_apply: dimension mismatch");
  LevelCache cache(op, f, path);
  std::vector<TrigPoly> terms;
  if (mode == SmolyakMode::direct) {
    for (const auto& j : simplex_levels(n, op.dim())) terms.push_back(mixed_difference_cached(cache, j));
  } else {
    for (const auto& term : combination_plan(n, op.dim()).terms) {
      TrigPoly q = cache.full(term.j);
      if (term.coefficient != 1) q *= static_cast<double>(term.coefficient);
      terms.push_back(std::move(q));
    }
  }
  return sum_pairwise(std::move(terms), op.dim());
}

std::uint64_t smolyak_grid_size(int n, int dim) {
  if (n < 0) throw InvalidArgument("smolyak_grid_size: n must be >= 0");
  std::uint64_t total = 0;
  for (const auto& j : simplex_levels(n, dim)) {
    std::uint64_t count = 1;
    for (int i = 0; i < dim; ++i) count *= j[i] == 0 ? 1 : (std::uint64_t{1} << (j[i] - 1));
    total += count;
  }
  return total;
}

Complex c0_of_smolyak(const QuasiInterpOp& op, const TrigPoly& f, int n) {
  Complex sum = 0.0;
  for (const auto& term : combination_plan(n, op.dim()).terms) {
    sum += static_cast<double>(term.coefficient) * c0_of_level(op, f, term.j);
  }
  return sum;
}

}  // namespace hypercross
