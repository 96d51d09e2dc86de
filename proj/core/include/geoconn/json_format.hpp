#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "geoconn/manifold.hpp"

namespace geoconn {

// "%.17g": round-trips every double; non-finite values print as nan/inf.
std::string format_number(double x);
std::string join_numbers(const Vec& x, const char* sep = ",");

// JSON text with every floating-point number written by format_number
// (non-finite as null). indent < 0 gives a single line.
std::string dump_json(const nlohmann::ordered_json& j, int indent = -1);

nlohmann::ordered_json to_json(const Vec& x);
nlohmann::ordered_json to_json(const Mat& m);  // array of rows

}  // namespace geoconn
