#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hypercross/smolyak.hpp"
#include "hypercross/spaces.hpp"

namespace hypercross {

struct Membership {
  NormSpec space;
  std::string justification;
};

struct TestFunction {
  FunctionModel model;
  std::string label;
  std::optional<Membership> claimed;
};

/// Phi_j(x) = sum_k prod_i phi_{j_i}(k_i) e^{i(k,x)}.
TestFunction phi_j(const LevelVec& j, const ResolutionOfUnity& phi);

/// Lacunary witness sum over |u|_1 = n + d xi, u_i >= xi + 1, of e^{i(2^{u_1} x_1 + ...)}.
TestFunction f_lower(int n, int xi, int dim);

/// prod_i max(1, |k_i|)^{-a}, truncated to |k_i| <= bandwidth.
TestFunction korobov(double a, int dim, std::int64_t bandwidth);

/// prod_i sign(sin x_i), truncated to |k_i| <= bandwidth.
TestFunction step_signal(int dim, std::int64_t bandwidth);

struct ErrorRecord {
  std::string label;
  std::string op;
  int d = 1;
  int n = 0;
  double q = 2.0;
  double error = 0.0;
  std::uint64_t dof = 0;
  double tail = 0.0;
  double wallclock_ms = 0.0;

  /// A record is certified only when the truncation tail is below 1% of the error.
  bool reliable() const { return tail < error / 100.0; }
};

/// ||f_trunc - T_n^Q f||_q with the model's truncation tail attached.
ErrorRecord measure_error(const QuasiInterpOp& op, const TestFunction& f, int n, double q,
                          EvalPath path = EvalPath::sampled);

/// Exact ||f_trunc - t||_2 using dyadic block masses of the separable model.
double l2_error(const SeparableModel& f, const TrigPoly& t);

struct RateFit {
  double r = 0.0;
  double beta = 0.0;
  double C = 0.0;
  double residual_rms = 0.0;
  std::vector<int> ns;  // n values entering the fit
};

/// Least squares for log2 e = c - r n + beta log2 n, dropping the `drop` smallest n.
RateFit fit_rate(const std::vector<ErrorRecord>& records, int drop = 2);

struct PredictedRate {
  double rate;
  double log_power;
  std::string regime;
};

/// Predicted 2^{-rate n} n^{log_power} decay of the Smolyak error for f in B^r_{p,theta}, error in L_q.
PredictedRate predicted_rate(double r, double p, double q, double theta, int dim);

}  // namespace hypercross
