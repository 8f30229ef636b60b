#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hypercross/operators.hpp"

namespace hypercross {

struct SmolyakTerm {
  LevelVec j;
  int coefficient;
};

/// Combination-technique form of T_n: sum of c_j Q_j over the simplex boundary.
struct SmolyakPlan {
  int n = 0;
  int dim = 1;
  std::vector<SmolyakTerm> terms;  // sorted lexicographically by j
};

SmolyakPlan combination_plan(int n, int dim);

/// JSON dump  [{"j":[...], "c":int}, ...].
std::string plan_to_json(const SmolyakPlan& plan);

/// Delta_j^Q f = prod_i (Q_{j_i} - Q_{j_i - 1}) f with Q_{-1} = 0.
TrigPoly mixed_difference(const QuasiInterpOp& op, const FunctionModel& f, const LevelVec& j,
                          EvalPath path = EvalPath::sampled);

enum class SmolyakMode { direct, combination };

/// T_n^Q f. Direct mode sums mixed differences over |j|_1 <= n; combination
/// mode evaluates the plan. Both yield the same polynomial.
TrigPoly smolyak_apply(const QuasiInterpOp& op, const FunctionModel& f, int n,
                       SmolyakMode mode = SmolyakMode::combination, EvalPath path = EvalPath::sampled);

/// Number of distinct nodes in the union of grids over |j|_1 <= n.
std::uint64_t smolyak_grid_size(int n, int dim);

/// c_0(T_n^Q f) via the aliasing formula.
Complex c0_of_smolyak(const QuasiInterpOp& op, const TrigPoly& f, int n);

}  // namespace hypercross
