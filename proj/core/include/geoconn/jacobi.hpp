#pragma once

#include <optional>

#include "geoconn/geodesic.hpp"
#include "geoconn/manifold.hpp"

namespace geoconn {

// d(exp_p)_v in chart bases: column i is J_i(1) for the Jacobi field with
// J_i(0) = 0, J_i'(0) = e_i along t -> exp_p(t v).
struct DifferentialFrame {
  Tangent base;
  Mat matrix;
  double det = 1.0;
  double min_singular_value = 1.0;
  double condition = 1.0;
  Vec endpoint;  // exp_p(v), a by-product of the same integration
};

inline constexpr double kSingularTol = 1e-9;
inline constexpr double kLinearizationLimit = 1e12;

// Augmented state (x, x', J, J') with J, J' stored column-major after the
// first 2n entries; the variational part solves
//   J'' = -(d_l Gamma^k_ij) J^l x'^i x'^j - 2 Gamma^k_ij x'^i J'^j.
ode::Rhs jacobi_rhs(const ManifoldModel& model);
Vec jacobi_initial_state(const Vec& p, const Vec& v);
Mat jacobi_block(const Vec& y, int n);  // J from an augmented state

// Throws DomainEscape when t -> exp_p(t v) does not reach t = 1 and
// LinearizationFailure when the variational state exceeds 1e12.
DifferentialFrame dexp_matrix(const ManifoldModel& model, const Vec& p, const Vec& v,
                              const IntegratorConfig& cfg = {});

// Central differences of exp_p in v, for cross-checking dexp_matrix.
Mat dexp_finite_difference(const ManifoldModel& model, const Vec& p, const Vec& v,
                           const IntegratorConfig& cfg = {}, double step = 1e-5);

// Unit g-norm for spacelike/timelike u, unit chart norm for null u.
Vec normalize_direction(const ManifoldModel& model, const Vec& p, const Vec& u);

struct ConjugateTime {
  double t_star = 0.0;
  Vec point;        // exp_p(t_star u)
  bool dip = false;  // |det| fell below the tolerance without a sign change
};

// Smallest t in (0, t_max] where det(dexp_p(t u)) changes sign or
// |det| < kSingularTol, bisected on the dense output. Sampled at eight
// points per accepted step. Throws DomainEscape if the ray leaves the
// domain first.
std::optional<ConjugateTime> first_conjugate_time(const ManifoldModel& model, const Vec& p,
                                                  const Vec& u, double t_max,
                                                  const IntegratorConfig& cfg = {});

}  // namespace geoconn
