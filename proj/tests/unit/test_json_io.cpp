#include <doctest.h>

#include <hypercross/errors.hpp>
#include <hypercross/json_io.hpp>

#include <json.hpp>

#include <random>

using namespace hypercross;

TEST_CASE("TrigPoly JSON round trip") {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<int> freq(-1000, 1000);
  std::normal_distribution<double> coef;
  for (int d = 1; d <= 3; ++d) {
    std::vector<std::pair<FreqIndex, Complex>> terms;
    for (int i = 0; i < 50; ++i) {
      FreqIndex k(static_cast<std::size_t>(d));
      for (auto& v : k) v = freq(rng);
      terms.emplace_back(k, Complex(coef(rng), coef(rng)));
    }
    const TrigPoly f = TrigPoly::from_terms(d, terms);
    CHECK(trig_poly_from_json(to_json(f)) == f);
  }
  CHECK(trig_poly_from_json(to_json(TrigPoly(2))) == TrigPoly(2));
}

TEST_CASE("TrigPoly JSON layout") {
  const auto j = nlohmann::json::parse(to_json(TrigPoly::monomial({2, -1}, Complex(0.5, -1.0))));
  CHECK(j["d"] == 2);
  REQUIRE(j["coeffs"].size() == 1);
  CHECK(j["coeffs"][0]["k"] == nlohmann::json::array({2, -1}));
  CHECK(j["coeffs"][0]["re"] == 0.5);
  CHECK(j["coeffs"][0]["im"] == -1.0);
}

TEST_CASE("malformed TrigPoly JSON is rejected") {
  CHECK_THROWS_AS(trig_poly_from_json("{"), InvalidArgument);
  CHECK_THROWS_AS(trig_poly_from_json("[1,2]"), InvalidArgument);
  CHECK_THROWS_AS(trig_poly_from_json(R"({"d":2,"coeffs":[{"k":[1],"re":1,"im":0}]})"), ShapeMismatch);
}

TEST_CASE("norm records") {
  const NormRecord r{"B", 2.0, kInf, 1.5, 3.25, 1e-9, "smooth"};
  const auto j = nlohmann::json::parse(to_json(r));
  CHECK(j["family"] == "B");
  CHECK(j["theta"] == "inf");
  CHECK(j["p"] == 2.0);
  CHECK(j["value"] == 3.25);
  CHECK(j["phi_kind"] == "smooth");
  const auto arr = nlohmann::json::parse(to_json(std::vector<NormRecord>{r, r}));
  CHECK(arr.size() == 2);
}
