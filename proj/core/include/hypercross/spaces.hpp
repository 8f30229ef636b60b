#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "hypercross/operators.hpp"

namespace hypercross {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class PhiKind { smooth, piecewise_linear };

/// Dyadic resolution of unity phi_j(xi) = phi_0(2^{-j} xi) - phi_0(2^{1-j} xi), j >= 1.
class ResolutionOfUnity {
 public:
  explicit ResolutionOfUnity(PhiKind kind = PhiKind::smooth) : kind_(kind) {}

  PhiKind kind() const { return kind_; }
  double phi0(double xi) const;
  double phi(int j, double xi) const;
  /// Levels j with phi_j(k) != 0 (at most three).
  std::vector<int> levels_at(std::int64_t k) const;
  std::string name() const;

 private:
  PhiKind kind_;
};

enum class NormFamily { B, F };

struct NormSpec {
  NormFamily family = NormFamily::B;
  double p = 2.0;
  double theta = 2.0;
  double r = 0.0;

  /// Throws InvalidArgument on p, theta outside [1, inf] or F with p = inf.
  void validate() const;
};

std::string to_string(NormFamily family);

/// delta_j(f): coefficient-wise multiplication by prod_i phi_{j_i}(k_i).
TrigPoly dyadic_projection(const TrigPoly& f, const LevelVec& j, const ResolutionOfUnity& phi);

/// (2 pi)^{-d}-normalized L_q norm. Throws QuadratureError if refinement does not settle.
double lq_norm(const TrigPoly& f, double q);

double besov_norm(const TrigPoly& f, const NormSpec& spec, const ResolutionOfUnity& phi);
/// Separable input: block norms factor over axes.
double besov_norm(const SeparableModel& f, const NormSpec& spec, const ResolutionOfUnity& phi);

/// Triebel-Lizorkin norm; rejects p = inf.
double tl_norm(const TrigPoly& f, const NormSpec& spec, const ResolutionOfUnity& phi);

struct DiscreteNorm {
  double value = 0.0;
  /// Aggregate of the outermost shell |j|_inf == jmax (the truncation indicator).
  double shell = 0.0;
  /// Truncation tail of the input model.
  double model_tail = 0.0;
  int jmax = 0;
};

/// l_theta / L_p aggregate of 2^{r|j|_1} Delta_j^Q f over |j|_inf <= jmax.
/// The aliasing path keeps high levels sparse for band-limited inputs.
DiscreteNorm discrete_lp_quasi_norm(const QuasiInterpOp& op, const FunctionModel& f, const NormSpec& spec,
                                    int jmax, EvalPath path = EvalPath::aliasing);

/// L_{q,j} norm of a function-kind averager (normalized measure).
double averager_norm_Lqj(const AveragerFamily& avg, double q, int j);

/// Sampled L2-Sobolev proxy for the compatibility multiplier. Heuristic only.
struct CompatProxy {
  std::vector<double> values;  // proxy per level j = 0..jmax
  double growth = 0.0;         // log2 slope over the upper half of the levels
  bool pass = false;
};

CompatProxy compat_condition_proxy(const QuasiInterpOp& op, double s, double delta, int jmax);

struct CondPattern {
  int xi;
  Complex lambda;
};

/// Searches the averager symbol at 2^u for the (xi, lambda) pattern, u <= umax.
std::optional<CondPattern> check_cond(const AveragerFamily& avg, int umax, double tol = 1e-12);

/// L2 best approximation error by frequencies in [-m, m]^d.
double best_approx_error_L2(const FunctionModel& f, int m);

/// sup over 64 equispaced h in (0, delta] of ||f(.+h) - 2f + f(.-h)||_p; univariate f.
double modulus2(const FunctionModel& f, double delta, double p);

/// Result record for JSON output.
struct NormRecord {
  std::string family;
  double p;
  double theta;
  double r;
  double value;
  double truncation;
  std::string phi_kind;
};

}  // namespace hypercross
