#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hypercross/trig_poly.hpp"

namespace hypercross {

/// sin(pi t), exact at integers and half-integers.
double sin_pi(double t);
/// sin(pi t) / (pi t) with the limit value 1 at t = 0.
double sinc_pi(double t);

// ---------------------------------------------------------------------------
// Reconstruction kernels phi_j

/// de la Vallée Poussin generator: eta = 1 on [-rho, rho], 0 outside
/// (-support, support), linear in between.
struct DlvpKernel {
  double rho;
  double support;
};

/// Dirichlet kernel on A_j: symbol 1_{A_j}(k).
struct DirichletKernel {};

/// Inverse-sinc corrected Dirichlet kernel on A_j.
struct ModifiedDirichletKernel {
  int sigma;
};

/// sum_nu a_nu D_j(x - pi nu / 2^{j+sigma}).
struct ShiftedDirichletKernel {
  int sigma;
  std::vector<Complex> a;
};

/// eta(2^{-j}k) * (pi 2^{-j-sigma} k) / sin(pi 2^{-j-sigma} k): the kernel of K*_j.
struct ModifiedDlvpKernel {
  double rho;
  double support;
  int sigma;
};

class KernelFamily {
 public:
  using Spec = std::variant<DlvpKernel, DirichletKernel, ModifiedDirichletKernel,
                            ShiftedDirichletKernel, ModifiedDlvpKernel>;

  explicit KernelFamily(Spec spec);

  /// Fourier coefficient of phi_j at k.
  Complex symbol(int j, std::int64_t k) const;
  /// B_j: symbol(j, k) == 0 whenever |k| >= B_j.
  std::int64_t bandwidth(int j) const;
  /// Declared normalization symbol(j, 0) == 1.
  bool normalized() const;
  std::string name() const;
  const Spec& spec() const { return spec_; }

 private:
  Spec spec_;
};

KernelFamily dlvp_kernel(double rho, double support);
KernelFamily dirichlet_kernel();
KernelFamily modified_dirichlet_kernel(int sigma);
KernelFamily shifted_dirichlet_combo(int sigma, std::vector<Complex> a);
KernelFamily modified_dlvp_kernel(double rho, double support, int sigma);

/// Piecewise-linear generator used by dlvp_kernel.
double dlvp_eta(double xi, double rho, double support);

// ---------------------------------------------------------------------------
// Averagers phi~_j

enum class AveragerKind { function, delta, delta_combination };

/// scale * 2^{j+sigma} chi_{[-pi 2^{-j-sigma}, pi 2^{-j-sigma}]}.
struct CharAverager {
  int sigma;
  double scale = 1.0;
};

/// Periodic delta function.
struct DeltaAverager {};

/// sum_nu b_nu delta(x - h_nu) with h_nu = pi t_nu 2^{-j-sigma}.
struct DeltaCombinationAverager {
  int sigma;
  std::vector<double> shifts;  // t_nu
  std::vector<Complex> weights;
};

class AveragerFamily {
 public:
  using Spec = std::variant<CharAverager, DeltaAverager, DeltaCombinationAverager>;

  explicit AveragerFamily(Spec spec);

  Complex symbol(int j, std::int64_t k) const;
  AveragerKind kind() const;
  std::string name() const;
  const Spec& spec() const { return spec_; }

  /// Time-domain value on one period, for function-kind averagers.
  std::optional<double> time_value(int j, double x) const;
  /// Half-width of the support around 0, for function-kind averagers.
  std::optional<double> support_halfwidth(int j) const;

 private:
  Spec spec_;
};

AveragerFamily char_averager(int sigma, double scale = 1.0);
AveragerFamily delta_averager();
AveragerFamily delta_combination(int sigma, std::vector<double> shifts, std::vector<Complex> weights);

// ---------------------------------------------------------------------------
// Shift coefficients and defect order

struct ShiftCoefficients {
  std::vector<double> a;  // a_0 .. a_{s-1}
  /// Leading defect coefficient: 1 - sinc(x) sum a_nu e^{i nu x} = alpha x^s + O(x^{s+1}).
  Complex alpha;
};

/// Solves the square Taylor system that cancels orders 0..s-1 (N = s-1 shifts).
/// Throws SingularSystem when the system has no unique solution.
ShiftCoefficients solve_shift_coefficients(int s, int sigma);

/// Taylor coefficients c_0..c_{order} of 1 - sinc(x) sum_nu a_nu e^{i nu x} (exact series).
std::vector<Complex> shift_defect_series(const std::vector<Complex>& a, int order);

struct DefectOrder {
  enum class Status { finite, infinite, indeterminate };
  Status status = Status::indeterminate;
  int order = 0;          // valid when status == finite
  Complex leading = 0.0;  // g(xi) ~ leading * xi^order, xi = 2^{-j} k
  double slope = 0.0;     // fitted log-log slope
  double residual = 0.0;  // RMS residual of the log-log fit
};

/// Vanishing order of g(xi) = 1 - phi^_j(k) phi~^_j(k) as xi = 2^{-j} k -> 0.
DefectOrder taylor_defect(const KernelFamily& kern, const AveragerFamily& avg, int j = 12);

std::string to_string(DefectOrder::Status status);

}  // namespace hypercross
