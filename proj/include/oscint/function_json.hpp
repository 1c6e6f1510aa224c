#pragma once

#include <nlohmann/json.hpp>

#include "oscint/function_spec.hpp"

namespace oscint {

/// Extended reals in JSON: numbers, or the strings "inf", "+inf", "-inf".
double ext_real_from_json(const nlohmann::json& j);
nlohmann::json ext_real_to_json(double v);

ExtInterval interval_from_json(const nlohmann::json& j);  // [lo, hi] or {"lo":..,"hi":..}
nlohmann::json interval_to_json(const ExtInterval& I);

/// Builds a FunctionSpec from a document (see docs/schemas.md). A bare string
/// is taken as a corpus name. Throws PreconditionError on malformed input.
FunctionSpec function_from_json(const nlohmann::json& j);

/// Parameters of built-in kinds; combinators and callables dump as
/// {"kind": "user", "description": label}.
nlohmann::json function_to_json(const FunctionSpec& f);

}  // namespace oscint
