#pragma once

#include <string>
#include <vector>

#include "geoconn/manifold.hpp"

namespace geoconn {

struct ModelParams {
  int dim = 2;
};

struct ModelInfo {
  std::string name;
  std::string dims;  // "n" for families, a number otherwise
  std::string signature;
  std::string chart;
  bool oracle = false;
};

// Built-in models: euclidean(n), minkowski(n), sphere2, hyperbolic2,
// desitter (n = 2), paraboloid, clifton_pohl. Throws UnknownModel.
ModelPtr make_model(const std::string& name, const ModelParams& params = {});

std::vector<ModelInfo> builtin_models();

// Base point used when none is given: the equator point (pi/2, 0) on sphere2,
// (1, 0) on clifton_pohl, the origin when it is a chart point, otherwise the
// center of the finite part of the chart box.
Vec reference_point(const ManifoldModel& model);

}  // namespace geoconn
