#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace geoconn::support {

// Validates the subset of JSON Schema used by the checked-in schemas: type
// (string or list), properties, required, additionalProperties (bool or
// schema), items, enum, const, minimum, minItems, maxItems, $ref to
// #/definitions/<name>.
std::vector<std::string> validate(const nlohmann::json& schema, const nlohmann::json& doc);

nlohmann::json load_json(const std::string& path);

}  // namespace geoconn::support
