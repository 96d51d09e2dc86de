#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "geoconn/manifold.hpp"

namespace geoconn::support {

struct NamedModel {
  std::string label;
  ModelPtr model;
};

// Every builtin, with euclidean and minkowski in dimensions 2 to 4.
std::vector<NamedModel> builtin_zoo();

double max_abs(const Mat& m);

// Minkowski product on R^{n,1}, last coordinate timelike.
double minkowski_dot(const Vec& a, const Vec& b);

// Random vector with entries uniform in [-scale, scale].
Vec random_vec(std::mt19937_64& rng, int n, double scale = 1.0);

// de Sitter (phi, tau) chart point of an ambient point on the hyperboloid.
Vec desitter_chart(const Vec& X);

struct CommandResult {
  int exit_code = -1;
  std::string out;
};

// Runs through /bin/sh; stderr is discarded.
CommandResult run_command(const std::string& cmd);

}  // namespace geoconn::support
