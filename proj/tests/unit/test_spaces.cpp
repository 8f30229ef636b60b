#include <doctest.h>

#include <hypercross/errors.hpp>
#include <hypercross/spaces.hpp>
#include <hypercross/testbed.hpp>

#include <cmath>
#include <numbers>
#include <random>

using namespace hypercross;

namespace {

constexpr double kPi = std::numbers::pi;

TrigPoly random_poly(std::mt19937_64& rng, int d, int terms, int max_freq) {
  std::uniform_int_distribution<int> freq(-max_freq, max_freq);
  std::normal_distribution<double> coef;
  std::vector<std::pair<FreqIndex, Complex>> t;
  for (int i = 0; i < terms; ++i) {
    FreqIndex k(static_cast<std::size_t>(d));
    for (auto& v : k) v = freq(rng);
    t.emplace_back(k, Complex(coef(rng), coef(rng)));
  }
  return TrigPoly::from_terms(d, t);
}

// Direct definition for a single exponential: every block is a multiple of e^{ikx}.
double single_frequency_besov(int k, double r, double theta, const ResolutionOfUnity& phi) {
  double acc = 0.0;
  for (int j = 0; j <= 40; ++j) {
    const double v = std::pow(2.0, r * j) * std::abs(phi.phi(j, k));
    acc = std::isinf(theta) ? std::max(acc, v) : acc + std::pow(v, theta);
  }
  return std::isinf(theta) ? acc : std::pow(acc, 1.0 / theta);
}

}  // namespace

TEST_CASE("resolution of unity sums to one and has dyadic support") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> xi(-1e6, 1e6);
  for (PhiKind kind : {PhiKind::smooth, PhiKind::piecewise_linear}) {
    const ResolutionOfUnity phi(kind);
    CHECK(phi.phi0(0.0) == 1.0);
    CHECK(phi.phi0(1.0) == 1.0);
    CHECK(phi.phi0(2.0) == 0.0);
    CHECK(phi.phi0(-2.5) == 0.0);
    for (int trial = 0; trial < 10000; ++trial) {
      const double x = trial < 100 ? xi(rng) * 1e-5 : xi(rng);
      double sum = 0.0;
      for (int j = 0; j <= 25; ++j) sum += phi.phi(j, x);
      CHECK(std::abs(sum - 1.0) <= 1e-12);
    }
    for (int j = 1; j <= 10; ++j) {
      CHECK(phi.phi(j, std::ldexp(1.0, j - 2)) == 0.0);
      CHECK(phi.phi(j, std::ldexp(1.0, j + 1)) == 0.0);
    }
    for (std::int64_t k : {0, 1, 3, 100, 4096, -77}) {
      const auto levels = phi.levels_at(k);
      CHECK(!levels.empty());
      CHECK(levels.size() <= 3);
      double sum = 0.0;
      for (int j : levels) sum += phi.phi(j, static_cast<double>(k));
      CHECK(std::abs(sum - 1.0) < 1e-12);
    }
  }
  CHECK(ResolutionOfUnity(PhiKind::piecewise_linear).phi0(1.5) == doctest::Approx(0.5));
}

TEST_CASE("dyadic projections reassemble the function") {
  std::mt19937_64 rng(32);
  const TrigPoly f = random_poly(rng, 2, 20, 35);
  const ResolutionOfUnity phi;
  TrigPoly sum(2);
  for (const auto& j : box_levels(7, 2)) sum += dyadic_projection(f, j, phi);
  CHECK(l2_distance(sum, f) < 1e-13 * f.l2_norm());
  const TrigPoly e1 = TrigPoly::monomial({1});
  const ResolutionOfUnity pwl(PhiKind::piecewise_linear);
  CHECK(dyadic_projection(e1, LevelVec{0}, pwl).coeff({1}) == Complex(1.0));
  CHECK(dyadic_projection(e1, LevelVec{1}, pwl).empty());
  CHECK(dyadic_projection(e1, LevelVec{3}, phi).empty());
}

TEST_CASE("Lq norm examples and Parseval") {
  for (double q : {1.0, 1.5, 2.0, 3.0, kInf}) {
    CHECK(lq_norm(TrigPoly::constant(2, Complex(0, -3)), q) == doctest::Approx(3.0));
    CHECK(lq_norm(TrigPoly::monomial({5, -2}), q) == doctest::Approx(1.0));
  }
  const TrigPoly g = TrigPoly::from_terms(1, {{{0}, 1.0}, {{1}, 1.0}});
  CHECK(lq_norm(g, 2.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(lq_norm(g, 1.0) == doctest::Approx(4.0 / kPi).epsilon(1e-6));
  CHECK(lq_norm(g, kInf) == doctest::Approx(2.0).epsilon(1e-6));

  std::mt19937_64 rng(33);
  const TrigPoly f3 = random_poly(rng, 3, 25, 9);
  CHECK(lq_norm(f3, 2.0) == doctest::Approx(f3.l2_norm()).epsilon(1e-10));
  const TrigPoly f = random_poly(rng, 1, 25, 9);
  CHECK(lq_norm(f, 1.0) <= lq_norm(f, 2.0) * (1 + 1e-9));
  CHECK(lq_norm(f, 2.0) <= lq_norm(f, 4.0) * (1 + 1e-9));
  CHECK_THROWS_AS(lq_norm(f, 0.5), InvalidArgument);
}

TEST_CASE("NormSpec validation") {
  CHECK_NOTHROW(NormSpec{NormFamily::B, kInf, kInf, 1.0}.validate());
  CHECK_THROWS_AS((NormSpec{NormFamily::B, 2.0, 0.0, 1.0}.validate()), InvalidArgument);
  CHECK_THROWS_AS((NormSpec{NormFamily::B, 0.5, 2.0, 1.0}.validate()), InvalidArgument);
  CHECK_THROWS_AS((NormSpec{NormFamily::F, kInf, 2.0, 1.0}.validate()), InvalidArgument);
  CHECK(to_string(NormFamily::F) == "F");
}

TEST_CASE("Besov norm of single exponentials") {
  const ResolutionOfUnity pwl(PhiKind::piecewise_linear);
  CHECK(besov_norm(TrigPoly::monomial({1}), NormSpec{NormFamily::B, 2.0, 2.0, 1.0}, pwl) == doctest::Approx(1.0));
  for (PhiKind kind : {PhiKind::smooth, PhiKind::piecewise_linear}) {
    const ResolutionOfUnity phi(kind);
    for (int k : {0, 1, 3, 6, 100}) {
      for (double theta : {1.0, 2.0, kInf}) {
        for (double p : {1.0, 2.0, kInf}) {
          const NormSpec spec{NormFamily::B, p, theta, 1.5};
          CHECK(besov_norm(TrigPoly::monomial({k}), spec, phi) ==
                doctest::Approx(single_frequency_besov(k, 1.5, theta, phi)).epsilon(1e-6));
          if (p < kInf) {
            const NormSpec fspec{NormFamily::F, p, theta, 1.5};
            CHECK(tl_norm(TrigPoly::monomial({k}), fspec, phi) ==
                  doctest::Approx(single_frequency_besov(k, 1.5, theta, phi)).epsilon(1e-6));
          }
        }
      }
    }
  }
}

TEST_CASE("Besov and Triebel-Lizorkin norm properties") {
  std::mt19937_64 rng(34);
  const ResolutionOfUnity phi;
  const TrigPoly f = random_poly(rng, 2, 15, 20);
  const NormSpec b22{NormFamily::B, 2.0, 2.0, 1.0};
  const double base = besov_norm(f, b22, phi);
  CHECK(besov_norm(Complex(0, 2) * f, b22, phi) == doctest::Approx(2 * base).epsilon(1e-9));
  CHECK(besov_norm(f, {NormFamily::B, 2.0, 4.0, 1.0}, phi) <= base * (1 + 1e-9));
  CHECK(besov_norm(f, {NormFamily::B, 2.0, kInf, 1.0}, phi) <= besov_norm(f, {NormFamily::B, 2.0, 4.0, 1.0}, phi) * (1 + 1e-9));
  CHECK(tl_norm(f, {NormFamily::F, 2.0, 2.0, 1.0}, phi) == doctest::Approx(base).epsilon(1e-5));
  CHECK(tl_norm(f, {NormFamily::F, 2.0, 3.0, 1.0}, phi) <= tl_norm(f, {NormFamily::F, 2.0, 2.0, 1.0}, phi) * (1 + 1e-6));
  CHECK_THROWS_AS(tl_norm(f, {NormFamily::F, kInf, 2.0, 1.0}, phi), InvalidArgument);

  const TestFunction phi_block = phi_j(LevelVec{4, 3}, phi);
  const auto& pb = std::get<TrigPoly>(phi_block.model);
  const double ratio = besov_norm(pb, {NormFamily::B, 2.0, kInf, 0.0}, phi) / std::pow(2.0, 3.5);
  CHECK(ratio > 0.2);
  CHECK(ratio < 5.0);
}

TEST_CASE("separable Besov norm matches the materialized polynomial") {
  const ResolutionOfUnity phi;
  const TestFunction k = korobov(1.5, 2, 40);
  const auto& sep = std::get<SeparableModel>(k.model);
  for (double theta : {1.0, 2.0, kInf}) {
    const NormSpec spec{NormFamily::B, 2.0, theta, 0.5};
    CHECK(besov_norm(sep, spec, phi) == doctest::Approx(besov_norm(sep.to_trig(), spec, phi)).epsilon(1e-6));
  }
}

TEST_CASE("claimed memberships stay bounded in the bandwidth") {
  const ResolutionOfUnity phi;
  const NormSpec claim = korobov(2.0, 1, 16).claimed->space;
  std::vector<double> values;
  for (int b = 4; b <= 12; ++b) values.push_back(besov_norm(std::get<SeparableModel>(korobov(2.0, 1, 1 << b).model), claim, phi));
  CHECK(values.back() < 1.01 * values[values.size() - 2] + 1e-12);
  NormSpec over = claim;
  over.theta = 2.0;
  const double small = besov_norm(std::get<SeparableModel>(korobov(2.0, 1, 1 << 4).model), over, phi);
  const double large = besov_norm(std::get<SeparableModel>(korobov(2.0, 1, 1 << 12).model), over, phi);
  CHECK(large > 1.2 * small);
}

TEST_CASE("discrete quasi-norm") {
  const QuasiInterpOp k = named_operator("K");
  for (double theta : {1.0, 2.0, kInf}) {
    const DiscreteNorm dn = discrete_lp_quasi_norm(k, TrigPoly::constant(1, 1.0), {NormFamily::B, 2.0, theta, 1.0}, 8);
    CHECK(dn.value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(dn.shell < 1e-14);
    CHECK(dn.jmax == 8);
  }
  const QuasiInterpOp dstar(modified_dirichlet_kernel(2), char_averager(2), 2);
  const DiscreteNorm band = discrete_lp_quasi_norm(dstar, TrigPoly::from_terms(2, {{{3, -2}, 1.0}, {{1, 0}, 0.5}}),
                                                   {NormFamily::B, 2.0, 2.0, 0.0}, 8);
  CHECK(band.shell < 1e-12);
  CHECK(band.value > 0.5);
  CHECK_THROWS_AS(discrete_lp_quasi_norm(k, TrigPoly::constant(2, 1.0), {}, 4), ShapeMismatch);
}

TEST_CASE("averager L_{q,j} norms") {
  for (int sigma = 1; sigma <= 3; ++sigma) {
    const auto avg = char_averager(sigma);
    for (int j = 0; j <= 12; ++j) {
      CHECK(averager_norm_Lqj(avg, 1.0, j) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(averager_norm_Lqj(avg, kInf, j) == doctest::Approx(std::ldexp(1.0, sigma)).epsilon(1e-12));
      for (double q : {1.5, 2.0, 4.0}) {
        CHECK(averager_norm_Lqj(avg, q, j) == doctest::Approx(std::pow(2.0, sigma * (1 - 1 / q))).epsilon(1e-12));
      }
    }
  }
  CHECK_THROWS_AS(averager_norm_Lqj(delta_averager(), 2.0, 1), InvalidArgument);
}

TEST_CASE("compatibility proxy") {
  const QuasiInterpOp dstar(modified_dirichlet_kernel(2), char_averager(2), 1);
  const CompatProxy p = compat_condition_proxy(dstar, 2.0, 4.0, 10);
  CHECK(p.pass);
  for (double v : p.values) CHECK(v < 1e-10);
  const QuasiInterpOp d(dirichlet_kernel(), char_averager(2), 1);
  CHECK(compat_condition_proxy(d, 2.0, 4.0, 12).pass);
  CHECK_FALSE(compat_condition_proxy(d, 3.0, 4.0, 12).pass);
  CHECK_THROWS_AS(compat_condition_proxy(d, 2.0, 4.0, 1), InvalidArgument);
}

TEST_CASE("averager pattern condition") {
  for (int sigma = 1; sigma <= 5; ++sigma) {
    const auto c = check_cond(char_averager(sigma), 20);
    REQUIRE(c.has_value());
    CHECK(c->xi == sigma - 1);
    CHECK(std::abs(c->lambda - 2.0 / kPi) < 1e-14);
  }
  const auto scaled = check_cond(char_averager(2, 2.0), 20);
  REQUIRE(scaled.has_value());
  CHECK(std::abs(scaled->lambda - 4.0 / kPi) < 1e-14);
  CHECK_FALSE(check_cond(delta_averager(), 20).has_value());
}

TEST_CASE("best approximation and second modulus") {
  CHECK(best_approx_error_L2(TrigPoly::from_terms(1, {{{2}, 1.0}, {{-3}, 2.0}}), 3) == 0.0);
  for (int m = 0; m <= 10; ++m) CHECK(best_approx_error_L2(TrigPoly::monomial({m + 1}), m) == doctest::Approx(1.0));

  const TestFunction k = korobov(2.0, 1, 200);
  const auto& fac = std::get<SeparableModel>(k.model).factors[0];
  double brute = fac.tail_l2 * fac.tail_l2;
  for (int j = 21; j <= 200; ++j) brute += 2 * std::pow(j, -4.0);
  CHECK(best_approx_error_L2(k.model, 20) == doctest::Approx(std::sqrt(brute)).epsilon(1e-12));

  for (double delta : {0.1, 0.5, 1.0}) {
    CHECK(modulus2(FunctionModel{TrigPoly::monomial({1})}, delta, 2.0) == doctest::Approx(4 * std::pow(std::sin(delta / 2), 2)).epsilon(1e-9));
    CHECK(modulus2(FunctionModel{TrigPoly::constant(1, 5.0)}, delta, 2.0) < 1e-14);
  }
  const FunctionModel two = TrigPoly::from_terms(1, {{{1}, 1.0}, {{4}, 0.3}});
  CHECK(modulus2(two, 0.2, 2.0) <= modulus2(two, 0.4, 2.0));
}
