#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

namespace geoconn::support {

struct EvalCase {
  std::string src;
  int dim;
  std::vector<double> x;
  double value;
};

struct DerivativeCase {
  std::string src;
  int dim;
  // gradient, 0-based coordinates
  std::function<std::vector<double>(const std::vector<double>&)> grad;
};

struct ErrorCase {
  std::string src;
  int dim;
  std::size_t position;
};

// Values worked out by hand (or from elementary identities).
inline const std::vector<EvalCase>& eval_golden() {
  constexpr double pi = std::numbers::pi;
  constexpr double e = std::numbers::e;
  static const std::vector<EvalCase> cases = {
      {"x1^2 + sin(x2)", 2, {2, 0}, 4.0},
      {"cos(x1)^2 + sin(x1)^2", 1, {0.7}, 1.0},
      {"1 + 2 * 3", 0, {}, 7.0},
      {"(1 + 2) * 3", 0, {}, 9.0},
      {"2^3^2", 0, {}, 512.0},
      {"(2^3)^2", 0, {}, 64.0},
      {"-2^2", 0, {}, -4.0},
      {"(-2)^2", 0, {}, 4.0},
      {"2*-x1", 1, {3}, -6.0},
      {"10 - 4 - 3", 0, {}, 3.0},
      {"64 / 4 / 2", 0, {}, 8.0},
      {"x1 / x2", 2, {1, 4}, 0.25},
      {"x1*x2 - x2*x1", 2, {1.3, -0.7}, 0.0},
      {"--x1", 1, {5}, 5.0},
      {"- - - x1", 1, {5}, -5.0},
      {"pi", 0, {}, pi},
      {"e", 0, {}, e},
      {"sin(pi/2)", 0, {}, 1.0},
      {"cos(pi)", 0, {}, -1.0},
      {"tan(pi/4)", 0, {}, 1.0},
      {"exp(0)", 0, {}, 1.0},
      {"exp(1)", 0, {}, e},
      {"log(e)", 0, {}, 1.0},
      {"log(1)", 0, {}, 0.0},
      {"sqrt(16)", 0, {}, 4.0},
      {"sqrt(x1^2 + x2^2)", 2, {3, 4}, 5.0},
      {"abs(-3.5)", 0, {}, 3.5},
      {"abs(x1 - x2)", 2, {1, 4}, 3.0},
      {"sinh(0)", 0, {}, 0.0},
      {"cosh(0)", 0, {}, 1.0},
      {"tanh(0)", 0, {}, 0.0},
      {"cosh(x1)^2 - sinh(x1)^2", 1, {1.1}, 1.0},
      {"x1^0.5", 1, {9}, 3.0},
      {"x1^-1", 1, {4}, 0.25},
      {"x1^-2", 1, {-2}, 0.25},
      {"(-2)^3", 0, {}, -8.0},
      {"x1^3", 1, {-1.5}, -3.375},
      {"2^10", 0, {}, 1024.0},
      {"1e3 * x1", 1, {0.002}, 2.0},
      {"2.5e-1 + .75", 0, {}, 1.0},
      {"1 / (1 + x1^2)", 1, {2}, 0.2},
      {"x1^2 * sin(x2)^2", 2, {2, pi / 6}, 1.0},
      {"exp(log(x1))", 1, {7.25}, 7.25},
      {"sin(x1) * cos(x1) * 2 - sin(2 * x1)", 1, {0.4}, 0.0},
      {"x1 + x2 + x3 + x4", 4, {1, 2, 3, 4}, 10.0},
      {"x3 - x1 * x2", 3, {2, 3, 10}, 4.0},
      {"(x1 + 1) * (x1 - 1)", 1, {3}, 8.0},
      {"  x1\t*\n x2 ", 2, {6, 7}, 42.0},
      {"cosh(x2)^2", 2, {0, std::log(2.0)}, 1.5625},
      {"2 * x1 * (1 - x1)", 1, {0.25}, 0.375},
  };
  return cases;
}

inline const std::vector<DerivativeCase>& derivative_corpus() {
  using V = std::vector<double>;
  static const std::vector<DerivativeCase> cases = {
      {"x1^2", 1, [](const V& x) { return V{2 * x[0]}; }},
      {"x1^3 - 2*x1", 1, [](const V& x) { return V{3 * x[0] * x[0] - 2}; }},
      {"sin(x1) * cos(x2)", 2,
       [](const V& x) {
         return V{std::cos(x[0]) * std::cos(x[1]), -std::sin(x[0]) * std::sin(x[1])};
       }},
      {"exp(x1 * x2)", 2,
       [](const V& x) {
         const double e = std::exp(x[0] * x[1]);
         return V{x[1] * e, x[0] * e};
       }},
      {"log(1 + x1^2)", 1, [](const V& x) { return V{2 * x[0] / (1 + x[0] * x[0])}; }},
      {"sqrt(1 + x1^2 + x2^2)", 2,
       [](const V& x) {
         const double r = std::sqrt(1 + x[0] * x[0] + x[1] * x[1]);
         return V{x[0] / r, x[1] / r};
       }},
      {"1 / (2 + x1^2)", 1,
       [](const V& x) {
         const double d = 2 + x[0] * x[0];
         return V{-2 * x[0] / (d * d)};
       }},
      {"tanh(x1)", 1,
       [](const V& x) {
         const double c = std::cosh(x[0]);
         return V{1 / (c * c)};
       }},
      {"sinh(x1) + cosh(x2)", 2,
       [](const V& x) { return V{std::cosh(x[0]), std::sinh(x[1])}; }},
      {"x1^2 * x2 + x3^3", 3,
       [](const V& x) { return V{2 * x[0] * x[1], x[0] * x[0], 3 * x[2] * x[2]}; }},
      {"cos(x1)^2", 1, [](const V& x) { return V{-2 * std::cos(x[0]) * std::sin(x[0])}; }},
      {"x1 / (1 + x2^2)", 2,
       [](const V& x) {
         const double d = 1 + x[1] * x[1];
         return V{1 / d, -2 * x[0] * x[1] / (d * d)};
       }},
      {"exp(-x1^2)", 1, [](const V& x) { return V{-2 * x[0] * std::exp(-x[0] * x[0])}; }},
      {"(3 + x1)^0.5", 1, [](const V& x) { return V{0.5 / std::sqrt(3 + x[0])}; }},
      {"tan(x1 / 2)", 1,
       [](const V& x) {
         const double c = std::cos(x[0] / 2);
         return V{0.5 / (c * c)};
       }},
      {"cosh(x2)^2", 2,
       [](const V& x) { return V{0.0, 2 * std::cosh(x[1]) * std::sinh(x[1])}; }},
      {"5", 2, [](const V&) { return V{0.0, 0.0}; }},
      {"sin(x2)", 2, [](const V& x) { return V{0.0, std::cos(x[1])}; }},
  };
  return cases;
}

inline const std::vector<ErrorCase>& parse_error_corpus() {
  static const std::vector<ErrorCase> cases = {
      {"x3", 2, 0},          {"sin(x1", 2, 6},       {"foo(x1)", 2, 0},
      {"sin(x1, x2)", 2, 0}, {"x1 + )", 2, 5},       {"(x1", 2, 3},
      {"x1 x2", 2, 3},       {"", 2, 0},             {"3 +", 2, 3},
      {"sqrt()", 2, 0},      {"x0", 2, 0},           {"x1)", 2, 2},
      {"  x1 + @", 2, 7},    {"abs x1", 2, 4},       {"1.2.3", 2, 3},
      {"2 * x1 + x5", 3, 9}, {"cos(x1) * bar", 2, 10},
  };
  return cases;
}

}  // namespace geoconn::support
