#pragma once

#include <string>
#include <vector>

#include "hypercross/spaces.hpp"
#include "hypercross/trig_poly.hpp"

namespace hypercross {

/// {"d": int, "coeffs": [{"k": [..], "re": .., "im": ..}, ...]}
std::string to_json(const TrigPoly& f);
TrigPoly trig_poly_from_json(const std::string& text);

std::string to_json(const NormRecord& record);
std::string to_json(const std::vector<NormRecord>& records);

}  // namespace hypercross
