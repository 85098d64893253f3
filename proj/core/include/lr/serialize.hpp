#pragma once

#include <json.hpp>

#include "lr/solution_sets.hpp"
#include "lr/theory.hpp"

namespace lr {

// JSON views of the report types. NaN-valued fields serialize as null; the
// accompanying notes say why a quantity is undefined.

nlohmann::json to_json(const TheoryConstants& c);
nlohmann::json to_json(const AffineSet& set);
nlohmann::json to_json(const ClaimsReport& report);
nlohmann::json to_json(const LemmaReport& report);

nlohmann::json vector_to_json(const Vector& v);
nlohmann::json matrix_to_json(const Matrix& m);

} // namespace lr
