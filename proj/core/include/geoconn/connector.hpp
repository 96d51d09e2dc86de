#pragma once

#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "geoconn/geodesic.hpp"
#include "geoconn/jacobi.hpp"
#include "geoconn/locus.hpp"

namespace geoconn {

enum class PathKind { ChartSegment, AuxGeodesic, UserPolyline };
const char* to_string(PathKind k) noexcept;

// sigma: [0, length] -> chart, with its derivative.
struct TargetPath {
  PathKind provenance = PathKind::ChartSegment;
  double length = 0.0;
  std::function<Vec(double)> point;
  std::function<Vec(double)> tangent;  // one-sided (outgoing) at kinks
  std::vector<double> kinks;           // interior parameters where tangent jumps
  std::string note;
};

// Straight chart segment from r towards q (periodic coordinates take the
// short way round); length is the chart distance.
TargetPath chart_segment(const ManifoldModel& model, const Vec& r, const Vec& q);
// Geodesic of the model itself when Riemannian, of auxiliary_riemannian with
// the timelike eigenfield otherwise; falls back to a chart segment (and says
// so in `note`) when that geodesic cannot be found.
TargetPath aux_geodesic_path(const ModelPtr& model, const Vec& r, const Vec& q,
                             const IntegratorConfig& cfg = {});
// r, the given vertices, then q.
TargetPath polyline_path(const ManifoldModel& model, const Vec& r, const std::vector<Vec>& vertices,
                         const Vec& q);
// sigma(t) + magnitude sin(pi t / length) direction.
TargetPath with_bump(const TargetPath& base, const Vec& direction, double magnitude);

struct LogOptions {
  double tol = 1e-10;
  int max_iterations = 50;
  // Give up once this many iterations needed a damped (backtracked) step;
  // callers fall back to path lifting.
  int max_damped_iterations = 4;
  double sv_floor = 1e-6;
  // Reject solutions whose ray t v, t in (0, 1], crosses a conjugate point,
  // or whose differential is nearly singular: such v are outside the normal
  // neighborhood even when exp_p(v) = q.
  bool normal_neighborhood_only = true;
};

// Damped Newton on exp_p(v) = q seeded with the chart difference q - p.
// Throws NoConvergence.
Vec local_log(const ManifoldModel& model, const Vec& p, const Vec& q,
              const IntegratorConfig& cfg = {}, const LogOptions& opts = {});

enum class LiftStatus { Connected, ConjugateHit, EscapeWitness, DomainExit, Stalled };
const char* to_string(LiftStatus s) noexcept;

struct ConnectConfig {
  IntegratorConfig integrator;
  LogOptions log;
  PathKind path = PathKind::ChartSegment;
  std::vector<Vec> polyline;  // interior vertices for UserPolyline
  double corrector_tol = 1e-9;
  double connect_tol = 1e-6;
  double sv_floor = 1e-6;
  double escape_factor = 1e4;  // escape_bound = escape_factor * length
  int max_retries = 8;
  double bump_factor = 0.05;  // bump magnitude = bump_factor * length * (1 + k / 2)
  int newton_iterations = 8;
  double initial_step = 0.05;  // fractions of the path length
  double max_step = 0.25;
  double min_step = 1e-9;
  std::size_t max_lift_steps = 20000;
};

struct LiftSample {
  double t = 0.0;
  Vec v;
  double residual = 0.0;
  double min_singular_value = 1.0;
};

struct Detour {
  int attempt = 0;
  Vec direction;
  double magnitude = 0.0;
  LiftStatus status = LiftStatus::Stalled;
  double t_fail = 0.0;
};

struct LiftOutcome {
  LiftStatus status = LiftStatus::Stalled;
  Vec p;
  Vec q;
  Vec v;                  // connecting vector on Connected, last lift otherwise
  double residual = 0.0;  // chart norm of exp_p(v) - target at the end
  bool via_local_log = false;
  PathKind provenance = PathKind::ChartSegment;
  double path_length = 0.0;
  double escape_bound = 0.0;
  double t_fail = 0.0;
  std::vector<LiftSample> trace;
  std::vector<Detour> detours;
  std::string witness;  // human-readable failure cause
};

// Two-point connection by lifting a target path through exp_p (predictor
// plus Newton corrector), with reroute bumps on conjugate hits. Geometric
// failures are statuses; only invalid input throws.
LiftOutcome connect(const ModelPtr& model, const Vec& p, const Vec& q,
                    const ConnectConfig& cfg = {});

// Lift a given path from v(0) = v0 (exp_p(v0) = path.point(0)).
LiftOutcome lift_path(const ManifoldModel& model, const Vec& p, const TargetPath& path,
                      const Vec& v0, const ConnectConfig& cfg = {});

struct ConnectReport {
  std::string text;
  nlohmann::ordered_json json;
};

// Status, v, residuals, length and causal class of the connecting geodesic,
// escaping norm sequence or attempted detours on failure, and the locus
// complement component containing q when a locus sample is given.
ConnectReport connect_report(const ManifoldModel& model, const LiftOutcome& outcome,
                             const ConjugateLocusSample* locus = nullptr);

}  // namespace geoconn
