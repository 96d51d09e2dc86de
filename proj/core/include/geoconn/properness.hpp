#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "geoconn/geodesic.hpp"
#include "geoconn/manifold.hpp"

namespace geoconn {

// ---- weak properness -------------------------------------------------------

// A curve in T_pM escaping along a schedule of parameters whose lift norms
// are log-spaced up to 1.01 * norm_cap.
struct ProbeCurve {
  std::string id;
  std::function<Vec(double)> lift;
  std::vector<double> schedule;
  std::optional<Vec> radial;  // direction u when lift(s) = s u
};

struct ProbeCurveFamily {
  std::string name;
  std::vector<ProbeCurve> curves;
};

// Auto uses the closed-form geodesic map when the model has one: at lift
// norms near the cap, integration error is amplified far beyond the Cauchy
// tolerance on hyperbolic models.
enum class ExpEvaluation { Auto, Integrate, Oracle };

struct ProbeConfig {
  IntegratorConfig integrator;
  ExpEvaluation evaluation = ExpEvaluation::Auto;
  double norm_cap = 1e3;
  double cauchy_tol = 1e-6;
  double start_norm = 0.1;
  std::size_t samples = 48;
  // Norm of lifts: the chart Euclidean norm by default, or sqrt(h_p(a, a))
  // for this model's metric at p (e.g. an auxiliary Riemannian metric).
  ModelPtr lift_metric;
};

double lift_norm(const Vec& p, const Vec& a, const ProbeConfig& cfg);

// Rays s u over a direction grid (all causal classes on Lorentzian models).
ProbeCurveFamily radial_family(const ManifoldModel& model, const Vec& p, std::size_t count,
                               const ProbeConfig& cfg);
// s (cos(a0 + log(1 + s)) e1 + sin(a0 + log(1 + s)) e2) in a g-orthonormal frame.
ProbeCurveFamily spiral_family(const ManifoldModel& model, const Vec& p, std::size_t count,
                               const ProbeConfig& cfg);
// Constant g-norm c: spacelike c (cosh a w + sinh a e_t), timelike
// c (sinh a w +- cosh a e_t), a -> +-inf; null rays s (w +- e_t). Lorentzian
// models only (ConfigError otherwise).
ProbeCurveFamily hyperboloid_sweep(const ManifoldModel& model, const Vec& p, double c,
                                   CausalClass causal, const ProbeConfig& cfg);
// Piecewise linear through 0 and the given tangent vertices, continued along
// the last edge until the norm cap.
ProbeCurveFamily polyline_family(const Vec& p, const std::vector<Vec>& vertices,
                                 const ProbeConfig& cfg);

struct ProbeRow {
  std::string curve;
  std::size_t samples = 0;
  bool image_convergent = false;
  Vec image_limit;        // last image point (ambient coordinates)
  double divergence = 0;  // max distance of tail images to the last one
  bool lift_bounded = true;
  double max_lift_norm = 0;
  bool domain_escape = false;
  std::string escape;  // termination and parameter when the curve left D_p
};

enum class ProbeSummary { ConsistentWithWeakProperness, Violation };
const char* to_string(ProbeSummary s) noexcept;

struct ProbeVerdict {
  std::string family;
  std::vector<ProbeRow> rows;
  ProbeSummary summary = ProbeSummary::ConsistentWithWeakProperness;
  std::optional<std::size_t> witness;  // first Violation row
  std::string label = "sampled evidence, not a proof";
  bool oracle = false;  // images from the closed-form geodesic map
};

bool probe_uses_oracle(const ManifoldModel& model, const ProbeConfig& cfg);

// One curve: images exp_p(alpha(s_k)); Cauchy test on the samples whose lift
// norm is at least norm_cap / 4.
ProbeRow probe_curve(const ManifoldModel& model, const Vec& p, const ProbeCurve& curve,
                     const ProbeConfig& cfg);

ProbeVerdict weak_properness_probe(const ManifoldModel& model, const Vec& p,
                                   const ProbeCurveFamily& family, const ProbeConfig& cfg);

// ---- disprisonment ---------------------------------------------------------

struct DisprisonConfig {
  IntegratorConfig integrator;  // t_max is the horizon in each direction
  double base_radius = 1.0;     // K_m = box of half-width base_radius 2^m
};

struct DisprisonRow {
  Tangent seed;
  Termination forward = Termination::ReachedTmax;
  Termination backward = Termination::ReachedTmax;
  double t_forward = 0;
  double t_backward = 0;
  double extent_half = 0;  // sup-distance reached by half the horizon
  double extent_full = 0;
  int box_half = 0;
  int box_full = 0;
  bool exits = false;
  std::string error;
};

struct DisprisonReport {
  std::vector<DisprisonRow> rows;
  std::size_t exiting = 0;
  std::size_t blowups = 0;
  std::string verdict;  // "disprisoned (sampled)" or "imprisoned up to horizon"
};

// Seeds: chart points with random unit directions (deterministic in seed).
std::vector<Tangent> random_seeds(const ManifoldModel& model, std::size_t count,
                                  std::uint64_t seed, double extent = 3.0);

// Each maximal geodesic is integrated both ways to the horizon. It exits the
// exhaustion when it blows up, leaves the chart, or its smallest containing
// box K_m keeps growing between half and full horizon. Boxes are centered at
// the seed in ambient coordinates when the model has an embedding.
DisprisonReport disprisonment_probe(const ManifoldModel& model, const std::vector<Tangent>& seeds,
                                    const DisprisonConfig& cfg);

// ---- pseudoconvexity -------------------------------------------------------

struct PseudoconvexConfig {
  IntegratorConfig integrator;  // t_max is the shooting horizon
  std::size_t sample_count = 64;
  std::uint64_t seed = 1;
  double growth_tol = 0.01;
  std::size_t path_samples = 400;
};

struct PseudoconvexReport {
  Vec k_lower;
  Vec k_upper;
  std::vector<std::size_t> counts;  // N, 2N, 4N
  std::vector<Vec> kstar_lower;     // ambient coordinates, one per count
  std::vector<Vec> kstar_upper;
  std::size_t segments = 0;
  bool unbounded = false;
  std::string verdict;
};

// Shoots from random points of the chart box K and records every return to
// K (periodic coordinates wrapped); K* is the bounding box of the segments
// between leaving and the last return. Unbounded when K* grows by more than
// growth_tol both from N to 2N and from 2N to 4N shots.
PseudoconvexReport pseudoconvexity_probe(const ManifoldModel& model, const Vec& k_lower,
                                         const Vec& k_upper, const PseudoconvexConfig& cfg);

// ---- convex functions ------------------------------------------------------

struct ConvexConfig {
  IntegratorConfig integrator;
  double step = 1e-3;     // second-difference step in the geodesic parameter
  std::size_t nodes = 20;  // interior checks at t = j / nodes
  double rel_tol = 1e-8;   // tol = rel_tol * max(1, max |f|)
};

struct ConvexRow {
  std::size_t index = 0;
  double min_second_difference = 0;
  double t_worst = 0;
  double speed2 = 0;  // g(v, v)
  double endpoint_max = 0;
  double interior_max = 0;
  bool bound_applies = false;  // f >= 0 along the path
  bool second_ok = true;
  bool bound_ok = true;
  std::string error;
};

struct ConvexReport {
  std::vector<ConvexRow> rows;
  bool pass = true;
  std::size_t worst = 0;  // row with the most negative second difference
  double tol = 0;
};

// Geodesics t -> exp_p(t v), t in [0, 1], from the given seeds. Second
// differences of f o gamma use short local exp steps from gamma(t).
ConvexReport convex_check(const ManifoldModel& model, const ScalarField& f,
                          const std::vector<Tangent>& segments, const ConvexConfig& cfg);

std::vector<Tangent> random_segments(const ManifoldModel& model, std::size_t count,
                                     std::uint64_t seed, double extent = 2.0, double speed = 1.0);

// ---- Gauss lemma -----------------------------------------------------------

struct GaussConfig {
  IntegratorConfig integrator = [] {
    IntegratorConfig c;
    c.rtol = 1e-12;
    c.atol = 1e-14;
    return c;
  }();
  std::size_t radial = 32;
  std::size_t angular = 32;
  double r_max = 1.0;  // r_k = r_max (k + 1/2) / radial
  double fd_step = 1e-5;
  double tol = 1e-6;
};

struct GaussRow {
  double r = 0;
  double s = 0;
  double radial_norm = 0;  // <d phi/dr, d phi/dr>
  double cross = 0;        // <d phi/dr, d phi/ds>
  bool skipped = false;    // domain escape
};

struct GaussReport {
  std::vector<GaussRow> rows;
  double max_radial_deviation = 0;
  double max_cross = 0;
  std::size_t skipped = 0;
  bool pass = true;
};

// Polar map phi(r, s) = exp_p(r (cos s e1 + sin s e2)), partials by central
// differences. Riemannian models only (ConfigError otherwise).
GaussReport gauss_lemma_check(const ManifoldModel& model, const Vec& p, const GaussConfig& cfg);

}  // namespace geoconn
