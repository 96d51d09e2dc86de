#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <limits>

#include <Eigen/Dense>

namespace geoconn::ode {

using Vec = Eigen::VectorXd;

struct Options {
  double rtol = 1e-10;
  double atol = 1e-12;
  std::size_t max_steps = 1'000'000;
  double h_init = 0.0;  // 0: automatic
  double h_max = std::numeric_limits<double>::infinity();
};

// One accepted Dormand-Prince step with its quartic continuous extension.
class DenseStep {
 public:
  double t0 = 0.0;
  double t1 = 0.0;
  Vec y0;
  Vec y1;
  Vec dy1;  // f(t1, y1)
  std::array<Vec, 5> rcont;

  double h() const noexcept { return t1 - t0; }
  Vec eval(double t) const;
  // Components [offset, offset + count) only.
  Vec eval_segment(double t, Eigen::Index offset, Eigen::Index count) const;
};

enum class Control { Continue, Stop };

struct Summary {
  double t = 0.0;
  Vec y;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  bool stopped = false;  // observer asked to stop before t_end
};

// f(t, y, dy). Throwing geoconn::Error from a stage rejects the step and
// shrinks h; the initial evaluation must succeed.
using Rhs = std::function<void(double, const Vec&, Vec&)>;
using Observer = std::function<Control(const DenseStep&)>;

// Adaptive embedded Runge-Kutta 5(4) (Dormand-Prince) with PI step-size
// control, forward in t from t0 to t_end. Throws StepSizeUnderflow and
// IntegrationError (step budget exhausted).
Summary dopri5(const Rhs& f, double t0, const Vec& y0, double t_end, const Options& opts,
               const Observer& observer = {});

}  // namespace geoconn::ode
