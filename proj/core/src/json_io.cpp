#include "hypercross/json_io.hpp"

#include <json.hpp>

#include "hypercross/errors.hpp"
#include "hypercross/smolyak.hpp"

namespace hypercross {

namespace {

using nlohmann::json;

json record_json(const NormRecord& r) {
  const auto num = [](double v) { return std::isinf(v) ? json("inf") : json(v); };
  return json{{"family", r.family}, {"p", num(r.p)},         {"theta", num(r.theta)},      {"r", r.r},
              {"value", r.value},   {"truncation", r.truncation}, {"phi_kind", r.phi_kind}};
}

}  // namespace

std::string to_json(const TrigPoly& f) {
  json coeffs = json::array();
  for (std::size_t t = 0; t < f.size(); ++t) {
    const auto k = f.freq(t);
    coeffs.push_back({{"k", std::vector<int>(k.begin(), k.end())}, {"re", f.coeff_at(t).real()}, {"im", f.coeff_at(t).imag()}});
  }
  return json{{"d", f.dim()}, {"coeffs", coeffs}}.dump();
}

TrigPoly trig_poly_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("TrigPoly JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("d") || !j.contains("coeffs")) {
    throw InvalidArgument("TrigPoly JSON: expected {\"d\":..., \"coeffs\":[...]}");
  }
  const int d = j.at("d").get<int>();
  std::vector<std::pair<FreqIndex, Complex>> terms;
  for (const auto& c : j.at("coeffs")) {
    terms.emplace_back(c.at("k").get<FreqIndex>(), Complex(c.value("re", 0.0), c.value("im", 0.0)));
  }
  return TrigPoly::from_terms(d, std::move(terms));
}

std::string to_json(const NormRecord& record) { return record_json(record).dump(); }

std::string to_json(const std::vector<NormRecord>& records) {
  json arr = json::array();
  for (const auto& r : records) arr.push_back(record_json(r));
  return arr.dump(2);
}

std::string plan_to_json(const SmolyakPlan& plan) {
  json arr = json::array();
  for (const auto& t : plan.terms) arr.push_back({{"j", t.j.values()}, {"c", t.coefficient}});
  return arr.dump();
}

}  // namespace hypercross
