#pragma once

#include <string>

#include <json.hpp>

#include "shiftcalc/apps.hpp"
#include "shiftcalc/poly.hpp"
#include "shiftcalc/shiftop.hpp"

namespace shiftcalc {

// Ordered JSON keeps serialization canonical (round-trip + determinism).
using Json = nlohmann::ordered_json;

Json poly_to_json(const Poly& f);
Poly poly_from_json(const Json& j);

Json multiset_to_json(const PointMultiset& A);
PointMultiset multiset_from_json(const Json& j);

Json combo_to_json(const ShiftCombo& l);
ShiftCombo combo_from_json(const Json& j);

Json family_to_json(const apps::SumFreeFamily& fam);
apps::SumFreeFamily family_from_json(const Json& j);

Json expansion_to_json(const DerivExpansion& e);
Json delta_to_json(const DeltaBasis& b);

// Numbers that can exceed 53-bit precision go out as decimal strings.
inline Json rational_json(const BigInt& num, const BigInt& den) {
    return Json{{"num", num.str()}, {"den", den.str()}};
}

std::string bigfloat_str(const BigFloat& x, int digits = 30);

Json load_json_file(const std::string& path);

} // namespace shiftcalc
