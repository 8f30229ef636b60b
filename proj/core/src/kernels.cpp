#include "hypercross/kernels.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "hypercross/errors.hpp"

namespace hypercross {

namespace {

constexpr double kPi = std::numbers::pi;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool in_sampling_set(int j, std::int64_t k) {
  const std::int64_t n = std::int64_t{1} << j;
  return k >= -(n / 2) && k < n - n / 2;
}

double inv_sinc_pi(double t) { return t == 0.0 ? 1.0 : 1.0 / sinc_pi(t); }

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

void check_sigma(int sigma) {
  if (sigma < 1) throw InvalidArgument("sigma must be >= 1");
}

/// Coefficient of x^m in sinc(x) e^{i nu x}.
Complex sinc_shift_taylor(int m, int nu) {
  Complex sum = 0.0;
  double fact_odd = 1.0;  // (2p+1)!
  for (int p = 0; 2 * p <= m; ++p) {
    if (p > 0) fact_odd *= (2.0 * p) * (2.0 * p + 1.0);
    const int e = m - 2 * p;
    double fact_e = 1.0;
    for (int q = 2; q <= e; ++q) fact_e *= q;
    const Complex inu(0.0, static_cast<double>(nu));
    const Complex power = e == 0 ? Complex(1.0) : std::pow(inu, e);
    sum += ((p % 2 == 0) ? 1.0 : -1.0) / fact_odd * power / fact_e;
  }
  return sum;
}

}  // namespace

double sin_pi(double t) {
  const double r = std::remainder(t, 2.0);  // in [-1, 1]
  if (r == 0.0 || r == 1.0 || r == -1.0) return 0.0;
  if (r == 0.5) return 1.0;
  if (r == -0.5) return -1.0;
  return std::sin(kPi * r);
}

double sinc_pi(double t) { return t == 0.0 ? 1.0 : sin_pi(t) / (kPi * t); }

double dlvp_eta(double xi, double rho, double support) {
  const double a = std::abs(xi);
  if (a <= rho) return 1.0;
  if (a >= support) return 0.0;
  return (support - a) / (support - rho);
}

KernelFamily::KernelFamily(Spec spec) : spec_(std::move(spec)) {
  std::visit(Overloaded{
                 [](const DlvpKernel& s) {
                   if (!(s.rho > 0.0 && s.rho < s.support && s.support <= 2.0)) {
                     throw InvalidArgument("dlvp kernel requires 0 < rho < support <= 2");
                   }
                 },
                 [](const DirichletKernel&) {},
                 [](const ModifiedDirichletKernel& s) { check_sigma(s.sigma); },
                 [](const ShiftedDirichletKernel& s) {
                   check_sigma(s.sigma);
                   if (s.a.empty()) throw InvalidArgument("shifted Dirichlet combination needs coefficients");
                 },
                 [](const ModifiedDlvpKernel& s) {
                   check_sigma(s.sigma);
                   if (!(s.rho > 0.0 && s.rho < s.support && s.support <= 2.0)) {
                     throw InvalidArgument("dlvp kernel requires 0 < rho < support <= 2");
                   }
                 },
             },
             spec_);
}

Complex KernelFamily::symbol(int j, std::int64_t k) const {
  if (j < 0) return 0.0;
  return std::visit(
      Overloaded{
          [&](const DlvpKernel& s) -> Complex {
            return dlvp_eta(std::ldexp(static_cast<double>(k), -j), s.rho, s.support);
          },
          [&](const DirichletKernel&) -> Complex { return in_sampling_set(j, k) ? 1.0 : 0.0; },
          [&](const ModifiedDirichletKernel& s) -> Complex {
            if (!in_sampling_set(j, k)) return 0.0;
            return inv_sinc_pi(std::ldexp(static_cast<double>(k), -j - s.sigma));
          },
          [&](const ShiftedDirichletKernel& s) -> Complex {
            if (!in_sampling_set(j, k)) return 0.0;
            const double t = std::ldexp(static_cast<double>(k), -j - s.sigma);
            Complex sum = 0.0;
            for (std::size_t nu = 0; nu < s.a.size(); ++nu) {
              const double arg = static_cast<double>(nu) * t;
              sum += s.a[nu] * Complex(sin_pi(arg + 0.5), -sin_pi(arg));
            }
            return sum;
          },
          [&](const ModifiedDlvpKernel& s) -> Complex {
            const double eta = dlvp_eta(std::ldexp(static_cast<double>(k), -j), s.rho, s.support);
            if (eta == 0.0) return 0.0;
            return eta * inv_sinc_pi(std::ldexp(static_cast<double>(k), -j - s.sigma));
          },
      },
      spec_);
}

std::int64_t KernelFamily::bandwidth(int j) const {
  const std::int64_t n = std::int64_t{1} << j;
  const auto dlvp_band = [&](double support) {
    return static_cast<std::int64_t>(std::ceil(support * static_cast<double>(n)));
  };
  return std::visit(Overloaded{
                        [&](const DlvpKernel& s) { return dlvp_band(s.support); },
                        [&](const ModifiedDlvpKernel& s) { return dlvp_band(s.support); },
                        [&](const auto&) { return n / 2 + 1; },
                    },
                    spec_);
}

bool KernelFamily::normalized() const {
  if (const auto* s = std::get_if<ShiftedDirichletKernel>(&spec_)) {
    Complex sum = 0.0;
    for (const auto& a : s->a) sum += a;
    return std::abs(sum - 1.0) <= 1e-12;
  }
  return true;
}

std::string KernelFamily::name() const {
  return std::visit(Overloaded{
                        [](const DlvpKernel& s) { return "dlvp(rho=" + fmt(s.rho) + ",support=" + fmt(s.support) + ")"; },
                        [](const DirichletKernel&) { return std::string("dirichlet"); },
                        [](const ModifiedDirichletKernel& s) { return "modified_dirichlet(sigma=" + fmt(s.sigma) + ")"; },
                        [](const ShiftedDirichletKernel& s) {
                          std::string out = "shifted_dirichlet(sigma=" + fmt(s.sigma) + ",a=[";
                          for (std::size_t i = 0; i < s.a.size(); ++i) {
                            if (i) out += ",";
                            out += fmt(s.a[i].real());
                            if (s.a[i].imag() != 0.0) out += (s.a[i].imag() > 0 ? "+" : "") + fmt(s.a[i].imag()) + "i";
                          }
                          return out + "])";
                        },
                        [](const ModifiedDlvpKernel& s) {
                          return "modified_dlvp(rho=" + fmt(s.rho) + ",support=" + fmt(s.support) +
                                 ",sigma=" + fmt(s.sigma) + ")";
                        },
                    },
                    spec_);
}

KernelFamily dlvp_kernel(double rho, double support) { return KernelFamily(DlvpKernel{rho, support}); }
KernelFamily dirichlet_kernel() { return KernelFamily(DirichletKernel{}); }
KernelFamily modified_dirichlet_kernel(int sigma) { return KernelFamily(ModifiedDirichletKernel{sigma}); }
KernelFamily shifted_dirichlet_combo(int sigma, std::vector<Complex> a) {
  return KernelFamily(ShiftedDirichletKernel{sigma, std::move(a)});
}
KernelFamily modified_dlvp_kernel(double rho, double support, int sigma) {
  return KernelFamily(ModifiedDlvpKernel{rho, support, sigma});
}

AveragerFamily::AveragerFamily(Spec spec) : spec_(std::move(spec)) {
  std::visit(Overloaded{
                 [](const CharAverager& s) { check_sigma(s.sigma); },
                 [](const DeltaAverager&) {},
                 [](const DeltaCombinationAverager& s) {
                   check_sigma(s.sigma);
                   if (s.shifts.empty() || s.shifts.size() != s.weights.size()) {
                     throw InvalidArgument("delta combination needs matching nonempty shifts and weights");
                   }
                 },
             },
             spec_);
}

Complex AveragerFamily::symbol(int j, std::int64_t k) const {
  return std::visit(Overloaded{
                        [&](const CharAverager& s) -> Complex {
                          return s.scale * sinc_pi(std::ldexp(static_cast<double>(k), -j - s.sigma));
                        },
                        [&](const DeltaAverager&) -> Complex { return 1.0; },
                        [&](const DeltaCombinationAverager& s) -> Complex {
                          Complex sum = 0.0;
                          const double t = std::ldexp(static_cast<double>(k), -j - s.sigma);
                          for (std::size_t nu = 0; nu < s.shifts.size(); ++nu) {
                            const double arg = s.shifts[nu] * t;
                            sum += s.weights[nu] * Complex(sin_pi(arg + 0.5), -sin_pi(arg));
                          }
                          return sum;
                        },
                    },
                    spec_);
}

AveragerKind AveragerFamily::kind() const {
  return std::visit(Overloaded{
                        [](const CharAverager&) { return AveragerKind::function; },
                        [](const DeltaAverager&) { return AveragerKind::delta; },
                        [](const DeltaCombinationAverager&) { return AveragerKind::delta_combination; },
                    },
                    spec_);
}

std::string AveragerFamily::name() const {
  return std::visit(Overloaded{
                        [](const CharAverager& s) {
                          std::string out = "char(sigma=" + fmt(s.sigma);
                          if (s.scale != 1.0) out += ",scale=" + fmt(s.scale);
                          return out + ")";
                        },
                        [](const DeltaAverager&) { return std::string("delta"); },
                        [](const DeltaCombinationAverager& s) {
                          return "delta_combination(sigma=" + fmt(s.sigma) + ",terms=" + fmt(static_cast<double>(s.shifts.size())) + ")";
                        },
                    },
                    spec_);
}

std::optional<double> AveragerFamily::time_value(int j, double x) const {
  const auto* s = std::get_if<CharAverager>(&spec_);
  if (s == nullptr) return std::nullopt;
  const double y = std::remainder(x, 2.0 * kPi);
  const double half = kPi * std::ldexp(1.0, -j - s->sigma);
  return std::abs(y) <= half ? s->scale * std::ldexp(1.0, j + s->sigma) : 0.0;
}

std::optional<double> AveragerFamily::support_halfwidth(int j) const {
  const auto* s = std::get_if<CharAverager>(&spec_);
  if (s == nullptr) return std::nullopt;
  return kPi * std::ldexp(1.0, -j - s->sigma);
}

AveragerFamily char_averager(int sigma, double scale) { return AveragerFamily(CharAverager{sigma, scale}); }
AveragerFamily delta_averager() { return AveragerFamily(DeltaAverager{}); }
AveragerFamily delta_combination(int sigma, std::vector<double> shifts, std::vector<Complex> weights) {
  return AveragerFamily(DeltaCombinationAverager{sigma, std::move(shifts), std::move(weights)});
}

std::vector<Complex> shift_defect_series(const std::vector<Complex>& a, int order) {
  std::vector<Complex> c(static_cast<std::size_t>(order + 1));
  for (int m = 0; m <= order; ++m) {
    Complex sum = m == 0 ? 1.0 : 0.0;
    for (std::size_t nu = 0; nu < a.size(); ++nu) sum -= a[nu] * sinc_shift_taylor(m, static_cast<int>(nu));
    c[static_cast<std::size_t>(m)] = sum;
  }
  return c;
}

ShiftCoefficients solve_shift_coefficients(int s, int sigma) {
  if (s < 2) throw InvalidArgument("solve_shift_coefficients: s must be >= 2");
  check_sigma(sigma);
  Eigen::MatrixXcd m(s, s);
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(s);
  rhs(0) = 1.0;
  for (int row = 0; row < s; ++row) {
    for (int nu = 0; nu < s; ++nu) m(row, nu) = sinc_shift_taylor(row, nu);
  }
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(m);
  if (!lu.isInvertible()) throw SingularSystem("shift-coefficient system is singular for s=" + std::to_string(s));
  const Eigen::VectorXcd x = lu.solve(rhs);
  ShiftCoefficients out;
  std::vector<Complex> ac;
  for (int nu = 0; nu < s; ++nu) {
    if (std::abs(x(nu).imag()) > 1e-9 * std::max(1.0, std::abs(x(nu)))) {
      throw SingularSystem("shift-coefficient system produced a non-real solution");
    }
    out.a.push_back(x(nu).real());
    ac.emplace_back(x(nu).real());
  }
  out.alpha = shift_defect_series(ac, s).back();
  return out;
}

DefectOrder taylor_defect(const KernelFamily& kern, const AveragerFamily& avg, int j) {
  static constexpr std::array<int, 13> kSamples{4, 5, 6, 8, 10, 12, 16, 20, 24, 32, 40, 48, 64};
  if (j < 7) throw InvalidArgument("taylor_defect: level must be >= 7");
  std::vector<double> xs;
  std::vector<Complex> gs;
  bool all_zero = true;
  for (int k : kSamples) {
    const Complex g = 1.0 - kern.symbol(j, k) * avg.symbol(j, k);
    xs.push_back(std::ldexp(static_cast<double>(k), -j));
    gs.push_back(g);
    if (std::abs(g) > 1e-13) all_zero = false;
  }
  DefectOrder out;
  if (all_zero) {
    out.status = DefectOrder::Status::infinite;
    return out;
  }
  Eigen::MatrixXd a(static_cast<Eigen::Index>(xs.size()), 2);
  Eigen::VectorXd b(static_cast<Eigen::Index>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (gs[i] == Complex(0.0)) return out;
    a(static_cast<Eigen::Index>(i), 0) = 1.0;
    a(static_cast<Eigen::Index>(i), 1) = std::log(xs[i]);
    b(static_cast<Eigen::Index>(i)) = std::log(std::abs(gs[i]));
  }
  const Eigen::VectorXd coef = a.colPivHouseholderQr().solve(b);
  const Eigen::VectorXd res = a * coef - b;
  out.slope = coef(1);
  out.residual = std::sqrt(res.squaredNorm() / static_cast<double>(xs.size()));
  const int order = static_cast<int>(std::lround(out.slope));
  if (out.residual > 0.05 || std::abs(out.slope - order) > 0.15) return out;
  out.status = DefectOrder::Status::finite;
  out.order = order;
  const Complex h0 = gs[0] / std::pow(xs[0], order);
  const Complex h1 = gs[1] / std::pow(xs[1], order);
  out.leading = h0 - xs[0] * (h1 - h0) / (xs[1] - xs[0]);
  return out;
}

std::string to_string(DefectOrder::Status status) {
  switch (status) {
    case DefectOrder::Status::finite:
      return "finite";
    case DefectOrder::Status::infinite:
      return "infinite";
    case DefectOrder::Status::indeterminate:
      return "indeterminate";
  }
  return "indeterminate";
}

}  // namespace hypercross
