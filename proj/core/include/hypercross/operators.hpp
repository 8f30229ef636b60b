#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "hypercross/fourier_core.hpp"
#include "hypercross/kernels.hpp"

namespace hypercross {

/// Coefficients of a univariate function, truncated to |k| <= bandwidth.
struct SpectralFactor {
  std::int64_t bandwidth = 0;
  std::vector<Complex> coeffs;  // index k + bandwidth
  /// sqrt(sum_{|k| > bandwidth} |c_k|^2) of the untruncated function.
  double tail_l2 = 0.0;

  static SpectralFactor from_callable(const std::function<Complex(std::int64_t)>& coeff,
                                      std::int64_t bandwidth, double tail_l2);
  static SpectralFactor from_trig(const TrigPoly& univariate);

  Complex coeff(std::int64_t k) const {
    return (k < -bandwidth || k > bandwidth) ? Complex(0.0) : coeffs[static_cast<std::size_t>(k + bandwidth)];
  }
  /// sum |c_k|^2 over |k| <= bandwidth.
  double mass() const;
  TrigPoly to_trig() const;
};

/// scale * prod_i f_i(x_i) with each f_i given spectrally.
struct SeparableModel {
  std::vector<SpectralFactor> factors;
  Complex scale = 1.0;

  int dim() const { return static_cast<int>(factors.size()); }
  Complex coeff(std::span<const int> k) const;
  /// L2 norm of the discarded part f - f_trunc.
  double tail_l2() const;
  /// sqrt(sum |c_k|^2) of the truncated model.
  double l2_norm() const;
  /// Materializes f_trunc; throws InvalidArgument when it would exceed max_terms.
  TrigPoly to_trig(std::size_t max_terms = std::size_t{1} << 24) const;
};

/// Point values only; usable with delta-kind averagers, or with function-kind
/// averagers through a configured quadrature rule.
struct PointwiseModel {
  int dim = 1;
  std::function<Complex(std::span<const double>)> eval;
};

using FunctionModel = std::variant<TrigPoly, SeparableModel, PointwiseModel>;

int model_dim(const FunctionModel& f);
/// L2 truncation tail recorded with the model (0 for exact inputs).
double model_tail(const FunctionModel& f);

/// Composite Gauss-Legendre rule for Kantorovich averages of pointwise data.
struct QuadratureRule {
  int nodes = 16;          // Gauss-Legendre nodes per panel
  double tol = 1e-9;       // two successive estimates must agree to this
  int max_doublings = 12;  // panel doublings before giving up
};

enum class OpMode {
  sampling,     // Q_j(f) = 2^{-j} sum_k (f * phi~_j)(x_k) phi_j(x - x_k)
  convolution,  // V_j(f) = f * phi_j
};

enum class EvalPath { aliasing, sampled };

/// Quasi-interpolation operator Q_j(., phi, phi~), tensorized over d axes.
class QuasiInterpOp {
 public:
  QuasiInterpOp(KernelFamily kern, AveragerFamily avg, int dim, OpMode mode = OpMode::sampling,
                std::optional<QuadratureRule> quadrature = std::nullopt, std::string label = {});

  const KernelFamily& kern() const { return kern_; }
  const AveragerFamily& avg() const { return avg_; }
  int dim() const { return dim_; }
  OpMode mode() const { return mode_; }
  const std::optional<QuadratureRule>& quadrature() const { return quadrature_; }
  const std::string& label() const { return label_; }

  /// Same operator acting on a different number of variables.
  QuasiInterpOp with_dim(int dim) const;

 private:
  KernelFamily kern_;
  AveragerFamily avg_;
  int dim_;
  OpMode mode_;
  std::optional<QuadratureRule> quadrature_;
  std::string label_;
};

/// Exact Fourier aliasing formula
///   Q^_j(k) = prod_i phi^_{j_i}(k_i) * sum_l prod_i phi~^_{j_i}(k_i + l_i 2^{j_i}) f^(k + l 2^j).
/// Requires exact or spectral input.
TrigPoly apply_aliasing(const QuasiInterpOp& op, const FunctionModel& f, const LevelVec& j);

/// Sampled-data reconstruction: averaged samples on the dyadic grid, DFT, kernel multiply.
TrigPoly apply_sampled(const QuasiInterpOp& op, const FunctionModel& f, const LevelVec& j);

TrigPoly apply(const QuasiInterpOp& op, const FunctionModel& f, const LevelVec& j, EvalPath path);

/// Univariate Q_j on a single spectral factor (used for separable inputs).
TrigPoly apply_univariate(const QuasiInterpOp& op, const SpectralFactor& f, int j, EvalPath path);

/// Normalized average (2^{sigma-1}/pi)^d  int_{|t_i| <= pi 2^{-j_i-sigma}} f(x + t) dt.
/// Exact/spectral input uses the closed form; pointwise input uses the rule.
Complex kantorovich_avg(const FunctionModel& f, const LevelVec& j, int sigma, std::span<const double> x,
                        const QuadratureRule& rule = {});
Complex kantorovich_avg(const FunctionModel& f, int j, int sigma, double x, const QuadratureRule& rule = {});

/// Zeroth Fourier coefficient of Q_j f, evaluated with the aliasing formula only at k = 0.
Complex c0_of_level(const QuasiInterpOp& op, const TrigPoly& f, const LevelVec& j);

struct NamedOpParams {
  double rho = 0.5;
  double support = 0.75;
  int sigma = 2;
  int dim = 1;
};

/// I (sampling), V (dlvp convolution), K (Kantorovich), Kstar (corrected Kantorovich).
/// Accepts "K*" as a synonym for "Kstar". Throws InvalidArgument for other names.
QuasiInterpOp named_operator(const std::string& name, const NamedOpParams& params = {});

}  // namespace hypercross
