#include <doctest.h>

#include <hypercross/errors.hpp>
#include <hypercross/smolyak.hpp>
#include <hypercross/testbed.hpp>

#include <json.hpp>

#include <cmath>
#include <random>
#include <set>

using namespace hypercross;

namespace {

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

double rel(const TrigPoly& a, const TrigPoly& b) { return l2_distance(a, b) / std::max(1.0, b.l2_norm()); }

long binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

TEST_CASE("combination plan examples") {
  const auto p1 = combination_plan(5, 1);
  REQUIRE(p1.terms.size() == 1);
  CHECK(p1.terms[0].j == LevelVec{5});
  CHECK(p1.terms[0].coefficient == 1);

  const auto p2 = combination_plan(2, 2);
  REQUIRE(p2.terms.size() == 5);
  const std::vector<std::pair<LevelVec, int>> expected{{{0, 1}, -1}, {{0, 2}, 1}, {{1, 0}, -1}, {{1, 1}, 1}, {{2, 0}, 1}};
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CHECK(p2.terms[i].j == expected[i].first);
    CHECK(p2.terms[i].coefficient == expected[i].second);
  }
  CHECK(combination_plan(0, 3).terms.size() == 1);
  CHECK_THROWS_AS(combination_plan(-1, 2), InvalidArgument);
}

TEST_CASE("combination coefficients follow the binomial rule and sum to one") {
  for (int d = 1; d <= 4; ++d) {
    for (int n = 0; n <= 8; ++n) {
      const auto plan = combination_plan(n, d);
      long sum = 0;
      for (const auto& t : plan.terms) {
        const int gap = n - t.j.l1();
        CHECK(gap >= 0);
        CHECK(gap <= d - 1);
        CHECK(t.coefficient == ((gap % 2) ? -1 : 1) * binom(d - 1, gap));
        sum += t.coefficient;
      }
      CHECK(sum == 1);
      for (std::size_t i = 1; i < plan.terms.size(); ++i) CHECK(plan.terms[i - 1].j < plan.terms[i].j);
    }
  }
}

TEST_CASE("plan JSON dump") {
  const auto parsed = nlohmann::json::parse(plan_to_json(combination_plan(2, 2)));
  REQUIRE(parsed.is_array());
  REQUIRE(parsed.size() == 5);
  CHECK(parsed[0]["j"] == nlohmann::json::array({0, 1}));
  CHECK(parsed[0]["c"] == -1);
  CHECK(parsed[4]["j"] == nlohmann::json::array({2, 0}));
}

TEST_CASE("mixed differences") {
  std::mt19937_64 rng(21);
  const QuasiInterpOp op1 = named_operator("K");
  const TrigPoly f1 = random_poly(rng, 1, 10, 20);
  CHECK(rel(mixed_difference(op1, f1, LevelVec{0}), apply_sampled(op1, f1, LevelVec{0})) < 1e-14);
  CHECK(rel(mixed_difference(op1, f1, LevelVec{3}), apply_sampled(op1, f1, LevelVec{3}) - apply_sampled(op1, f1, LevelVec{2})) < 1e-13);

  const QuasiInterpOp op2 = named_operator("K", {.dim = 2});
  const TrigPoly f2 = random_poly(rng, 2, 10, 20);
  const TrigPoly expected = apply_sampled(op2, f2, LevelVec{1, 1}) - apply_sampled(op2, f2, LevelVec{1, 0}) -
                            apply_sampled(op2, f2, LevelVec{0, 1}) + apply_sampled(op2, f2, LevelVec{0, 0});
  CHECK(rel(mixed_difference(op2, f2, LevelVec{1, 1}), expected) < 1e-13);
  CHECK(rel(mixed_difference(op2, f2, LevelVec{1, 1}, EvalPath::aliasing), expected) < 1e-12);

  // Constants are reproduced at every level, so only Delta_0 survives.
  for (const auto& j : box_levels(3, 2)) {
    const TrigPoly m = mixed_difference(op2, TrigPoly::constant(2, 1.0), j, EvalPath::aliasing);
    if (j == LevelVec{0, 0}) {
      CHECK(rel(m, TrigPoly::constant(2, 1.0)) < 1e-15);
    } else {
      CHECK(m.l2_norm() < 1e-15);
    }
  }
}

TEST_CASE("Smolyak operator basics") {
  std::mt19937_64 rng(22);
  const QuasiInterpOp op1 = named_operator("I");
  const TrigPoly f1 = random_poly(rng, 1, 10, 40);
  for (int n = 0; n <= 6; ++n) CHECK(rel(smolyak_apply(op1, f1, n), apply_sampled(op1, f1, LevelVec{n})) < 1e-13);

  for (int d = 1; d <= 3; ++d) {
    const QuasiInterpOp op = named_operator("Kstar", {.dim = d});
    for (int n = 0; n <= 5; ++n) {
      CHECK(rel(smolyak_apply(op, TrigPoly::constant(d, 1.0), n), TrigPoly::constant(d, 1.0)) < 1e-13);
    }
  }
}

TEST_CASE("Smolyak nesting: T_n - T_{n-1} equals the sum of mixed differences with |j|_1 = n") {
  std::mt19937_64 rng(23);
  const QuasiInterpOp op = named_operator("K", {.dim = 2});
  const TrigPoly f = random_poly(rng, 2, 12, 30);
  for (int n = 1; n <= 6; ++n) {
    TrigPoly layer(2);
    for (const auto& j : levels_with_l1(n, 2)) layer += mixed_difference(op, f, j);
    CHECK(rel(smolyak_apply(op, f, n) - smolyak_apply(op, f, n - 1), layer) < 1e-12);
  }
}

TEST_CASE("direct and combination modes agree, separable and materialized inputs agree") {
  const TestFunction f = korobov(2.0, 2, 32);
  const TrigPoly mat = std::get<SeparableModel>(f.model).to_trig();
  const QuasiInterpOp op = named_operator("Kstar", {.dim = 2});
  for (int n = 0; n <= 6; ++n) {
    const TrigPoly comb = smolyak_apply(op, f.model, n);
    CHECK(rel(smolyak_apply(op, f.model, n, SmolyakMode::direct), comb) < 1e-13);
    CHECK(rel(smolyak_apply(op, mat, n), comb) < 1e-12);
    CHECK(rel(smolyak_apply(op, mat, n, SmolyakMode::combination, EvalPath::aliasing), comb) < 1e-12);
  }
}

TEST_CASE("sparse grid size") {
  for (int n = 0; n <= 20; ++n) CHECK(smolyak_grid_size(n, 1) == (std::uint64_t{1} << n));
  for (int d = 2; d <= 3; ++d) {
    for (int n = 0; n <= 5; ++n) {
      // Node 2 pi m / 2^j scaled to the integer m 2^{n-j} on the finest axis grid.
      std::set<std::vector<long>> nodes;
      for (const auto& j : simplex_levels(n, d)) {
        const DyadicGrid grid(j);
        for (std::size_t flat = 0; flat < grid.size(); ++flat) {
          std::vector<long> key;
          std::size_t rest = flat;
          std::vector<long> idx(static_cast<std::size_t>(d));
          for (int axis = d - 1; axis >= 0; --axis) {
            const std::size_t len = std::size_t{1} << j[axis];
            const long m = static_cast<long>(rest % len) - static_cast<long>(len / 2);
            rest /= len;
            idx[static_cast<std::size_t>(axis)] = m << (n - j[axis]);
          }
          nodes.insert(idx);
        }
      }
      CHECK(smolyak_grid_size(n, d) == nodes.size());
    }
  }
  CHECK(smolyak_grid_size(3, 2) < smolyak_grid_size(4, 2));
}

TEST_CASE("c0 of the Smolyak operator") {
  const QuasiInterpOp op = named_operator("K", {.dim = 2});
  CHECK(std::abs(c0_of_smolyak(op, TrigPoly::constant(2, 1.0), 6) - 1.0) < 1e-15);
  const TestFunction w = f_lower(4, 1, 2);
  const TrigPoly& t = std::get<TrigPoly>(w.model);
  for (int n = 2; n <= 7; ++n) {
    CHECK(std::abs(c0_of_smolyak(op, t, n) - smolyak_apply(op, t, n).coeff({0, 0})) < 1e-12);
  }
}
