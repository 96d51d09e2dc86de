#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "geoconn/geodesic.hpp"
#include "geoconn/manifold.hpp"

namespace geoconn {

struct DirectionGrid {
  std::vector<Vec> directions;  // normalized per causal class
  std::vector<CausalClass> classes;
  std::string description;
};

// Directions at p from a g-orthonormal frame. Riemannian: angles
// (k + 1/2) 2 pi / count in 2D, a Fibonacci lattice in higher dimension.
// Lorentzian: spacelike +-(cosh a w + sinh a e_t), timelike
// sinh a w +- cosh a e_t, null w +- e_t, for spatial unit w and
// a in [-2, 2]. `only` restricts to one causal class.
DirectionGrid direction_grid(const ManifoldModel& model, const Vec& p, std::size_t count,
                             std::optional<CausalClass> only = std::nullopt);

struct GridSpec {
  std::size_t count = 64;
  std::optional<CausalClass> causal;
};

struct LocusOptions {
  std::size_t refine = 0;          // extra doublings for the stability diagnostic
  double cluster_radius = 1e-3;    // embedding distance
  std::size_t flood_resolution = 0;  // cells per axis, 0 = by dimension
  double extent = 4.0;             // half-width of the flood box on unbounded axes
};

enum class RayStatus { Conjugate, None, Escape, Error };
const char* to_string(RayStatus s) noexcept;

struct ConjugateRay {
  std::size_t index = 0;
  Vec u;
  CausalClass causal = CausalClass::Spacelike;
  RayStatus status = RayStatus::None;
  double t_star = 0.0;  // Conjugate only
  Vec point;            // Conjugate only, chart coordinates
  Termination escape = Termination::ReachedTmax;
  double escape_time = 0.0;
  std::string error;
};

struct WWReport {
  std::vector<std::size_t> grid_sizes;      // per refinement level
  std::vector<std::size_t> cluster_counts;  // same order
  bool closedness_stable = true;
  std::size_t flood_cells = 0;
  std::size_t complement_components = 0;
  bool complement_connected = true;
  std::string caveat;
};

struct ConjugateLocusSample {
  Vec p;
  std::string grid_description;
  double t_max = 0.0;
  std::vector<ConjugateRay> rays;
  std::vector<Vec> clusters;        // representative conjugate points, chart
  std::vector<Vec> cluster_points;  // same, ambient (embedding) coordinates
  WWReport ww;

  // Index of the flood-fill component containing x, or -1 when x falls in a
  // removed cell or outside the flood box.
  int component_of(const Vec& x) const;

  // flood-fill grid, kept for component lookup
  Vec flood_lower;
  Vec flood_upper;
  std::vector<int> flood_labels;
  std::size_t flood_resolution = 0;
  std::vector<bool> flood_periodic;
};

const std::string& locus_caveat();

// First conjugate time on every grid direction, greedy clustering of the
// conjugate points, and the sampled WW diagnostics: cluster count stable
// under grid doubling, and a flood fill of a chart grid minus small balls
// around the sampled locus.
ConjugateLocusSample conjugate_locus_sample(const ModelPtr& model, const Vec& p,
                                            const GridSpec& grid, double t_max,
                                            const IntegratorConfig& cfg = {},
                                            const LocusOptions& opts = {});

// Greedy clustering: a point joins the first representative within radius.
std::vector<std::size_t> cluster_representatives(const std::vector<Vec>& points, double radius);

}  // namespace geoconn
