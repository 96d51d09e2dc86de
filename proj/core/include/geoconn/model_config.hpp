#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "geoconn/manifold.hpp"

namespace geoconn {

// Model config file: UTF-8, `key = value` lines, `[section]` headers, '#'
// comments. Only the [manifold] section exists:
//
//   [manifold]
//   type = dsl              # or builtin
//   name = warped
//   dim = 2
//   signature = +,+         # also accepts 1,-1
//   g_1_1 = "1"
//   g_2_2 = "x1^2"          # upper triangle, missing entries are zero
//   lower = 0.1, -inf       # optional chart box
//   upper = inf, inf
//
// Unknown sections or keys are ConfigError.
struct ModelConfig {
  std::string type;
  std::string name;
  int dim = 0;
  std::vector<int> signature;
  std::map<std::pair<int, int>, std::string> components;  // 1-based (i, j), i <= j
  std::optional<Vec> lower;
  std::optional<Vec> upper;
};

ModelConfig parse_model_config(std::string_view text);
ModelConfig load_model_config(const std::filesystem::path& path);

// Builtin configs go through make_model; dsl configs through make_dsl_model.
ModelPtr build_model(const ModelConfig& config);

// Metric from expression strings over x1..xn; Christoffel symbols by finite
// differences. Points where a component fails to evaluate, or the metric is
// degenerate, are outside the chart.
ModelPtr make_dsl_model(std::string name, std::vector<int> signature,
                        const std::map<std::pair<int, int>, std::string>& components,
                        std::optional<Vec> lower = std::nullopt,
                        std::optional<Vec> upper = std::nullopt);

std::vector<int> parse_signature(std::string_view text);

}  // namespace geoconn
