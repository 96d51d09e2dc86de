#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "geoconn/manifold.hpp"
#include "geoconn/ode.hpp"

namespace geoconn {

struct IntegratorConfig {
  double rtol = 1e-10;
  double atol = 1e-12;
  double t_max = 1.0;
  std::size_t max_steps = 1'000'000;
  double blowup_norm = 1e8;

  // Throws ConfigError unless every field is positive.
  void validate() const;
};

struct PathNode {
  double t = 0.0;
  Vec x;
  Vec v;
};

class GeodesicPath {
 public:
  ModelPtr model;
  std::vector<PathNode> nodes;
  std::vector<ode::DenseStep> steps;  // empty for oracle paths
  Termination termination = Termination::ReachedTmax;
  double t_end = 0.0;
  std::size_t rejected_steps = 0;
  Vec p0;
  Vec v0;

  const PathNode& terminal() const { return nodes.back(); }
  // Dense-output (or closed-form) state at t, clamped to [0, t_end].
  PathNode state(double t) const;
};

// Generic flow over a state whose first 2n entries are (x, x'). Locates chart
// exit by bisection on the dense output, stops on ||(x, x')|| > blowup_norm.
// The observer sees each accepted step together with the last valid time in
// it (smaller than step.t1 only for the terminal step of a chart exit).
struct FlowOutcome {
  Termination termination = Termination::ReachedTmax;
  double t = 0.0;
  Vec y;
  std::size_t rejected = 0;
};
using FlowObserver = std::function<ode::Control(const ode::DenseStep&, double t_valid)>;
FlowOutcome integrate_flow(const ManifoldModel& model, const ode::Rhs& rhs, const Vec& y0,
                           double t_end, const IntegratorConfig& cfg,
                           const FlowObserver& observer = {});

// x'' + Gamma(x)(x', x') = 0 as a first-order system on (x, x').
ode::Rhs geodesic_rhs(const ManifoldModel& model);

GeodesicPath integrate_geodesic(const ModelPtr& model, const Vec& p0, const Vec& v0,
                                const IntegratorConfig& cfg);

struct ExpResult {
  Vec x;
  Vec v;  // velocity at the final time
  Termination termination = Termination::ReachedTmax;
  double t = 1.0;
  bool ok() const noexcept { return termination == Termination::ReachedTmax; }
};

// exp_p(v) without storing the path; cfg.t_max is ignored (always 1).
ExpResult try_exp(const ManifoldModel& model, const Vec& p, const Vec& v,
                  const IntegratorConfig& cfg = {});
// As try_exp, but throws DomainEscape when v is outside the sampled domain.
Vec exp_map(const ManifoldModel& model, const Vec& p, const Vec& v,
            const IntegratorConfig& cfg = {});

// Closed-form point in ambient coordinates. Throws NoOracle.
Vec oracle_point(const ManifoldModel& model, const Vec& p, const Vec& v, double t);

// Closed-form path in chart coordinates, periodic coordinates unwrapped
// continuously. `samples` = 0 picks a spacing of about 0.05 in t * |v|.
GeodesicPath oracle_geodesic(const ModelPtr& model, const Vec& p, const Vec& v, double t_max,
                             std::size_t samples = 0);

// max_t |g(x', x') - g(x'(0), x'(0))| over the stored nodes (a terminal
// chart-exit node is skipped).
double energy_drift(const GeodesicPath& path);

}  // namespace geoconn
