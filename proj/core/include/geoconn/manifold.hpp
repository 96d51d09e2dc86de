#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "geoconn/errors.hpp"

namespace geoconn {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Base point and components of a tangent vector, both in chart coordinates.
struct Tangent {
  Vec base;
  Vec vec;
};

// Connection coefficients Gamma^k_ij stored densely, k-major.
class Christoffel {
 public:
  explicit Christoffel(int n) : n_(n), data_(static_cast<std::size_t>(n * n * n), 0.0) {}

  int dim() const noexcept { return n_; }
  double& operator()(int k, int i, int j) { return data_[index(k, i, j)]; }
  double operator()(int k, int i, int j) const { return data_[index(k, i, j)]; }

  // (Gamma(a, b))^k = Gamma^k_ij a^i b^j
  Vec contract(const Vec& a, const Vec& b) const;
  double max_abs() const;
  double max_abs_diff(const Christoffel& other) const;
  // max_k,i,j |Gamma^k_ij - Gamma^k_ji|
  double lower_asymmetry() const;

 private:
  std::size_t index(int k, int i, int j) const noexcept {
    return static_cast<std::size_t>((k * n_ + i) * n_ + j);
  }
  int n_;
  std::vector<double> data_;
};

// A coordinate that is identified modulo `period` (e.g. an azimuth).
struct PeriodicCoordinate {
  int index;
  double period;
};

// Open coordinate box, optionally intersected with a predicate.
class ChartDomain {
 public:
  using Predicate = std::function<bool(const Vec&)>;

  static ChartDomain whole(int n);
  ChartDomain(Vec lower, Vec upper, Predicate extra = {}, std::string extra_description = {});

  bool contains(const Vec& x) const;
  const Vec& lower() const noexcept { return lower_; }
  const Vec& upper() const noexcept { return upper_; }
  const std::string& description() const noexcept { return description_; }

 private:
  Vec lower_;
  Vec upper_;
  Predicate extra_;
  std::string description_;
};

enum class AmbientForm { Euclidean, Minkowski };

class ManifoldModel {
 public:
  ManifoldModel(std::string name, std::vector<int> signature, ChartDomain domain);
  virtual ~ManifoldModel() = default;

  const std::string& name() const noexcept { return name_; }
  int dim() const noexcept { return static_cast<int>(signature_.size()); }
  const std::vector<int>& signature() const noexcept { return signature_; }
  bool is_riemannian() const noexcept;
  const ChartDomain& domain() const noexcept { return domain_; }

  virtual bool in_chart(const Vec& x) const { return domain_.contains(x); }

  // Raw metric, no chart or signature checks. Expression-backed models may
  // throw EvalError.
  virtual Mat metric(const Vec& x) const = 0;

  virtual bool has_analytic_christoffel() const { return false; }
  // Analytic coefficients when the model has them, finite differences of
  // metric() otherwise. No chart checks.
  virtual Christoffel christoffel(const Vec& x) const { return christoffel_fd(x); }
  Christoffel christoffel_fd(const Vec& x) const;
  // d_l Gamma^k_ij for l = 0..n-1: closed form where the model has one,
  // central differences of christoffel() otherwise.
  virtual std::vector<Christoffel> christoffel_derivatives(const Vec& x) const;
  std::vector<Christoffel> christoffel_derivatives_fd(const Vec& x) const;

  virtual bool has_embedding() const { return false; }
  virtual int ambient_dim() const { return dim(); }
  virtual AmbientForm ambient_form() const { return AmbientForm::Euclidean; }
  virtual Vec embed(const Vec& x) const;
  virtual Mat embed_jacobian(const Vec& x) const;
  // Embedding coordinates when available, chart coordinates otherwise.
  Vec position(const Vec& x) const { return has_embedding() ? embed(x) : x; }

  virtual bool has_oracle() const { return false; }
  // Closed-form geodesic state (X(t), X'(t)) in ambient coordinates.
  virtual std::pair<Vec, Vec> oracle_embedded(const Vec& p, const Vec& v, double t) const;
  // Chart point for an ambient point, choosing the periodic branch nearest hint.
  virtual Vec chart_from_embedding(const Vec& X, const Vec& hint) const;

  const std::vector<PeriodicCoordinate>& periodic() const noexcept { return periodic_; }
  // a - b with periodic coordinates wrapped into [-period/2, period/2).
  Vec chart_difference(const Vec& a, const Vec& b) const;

  // Free-form notes: identifications, chart caveats.
  const std::string& metadata() const noexcept { return metadata_; }

 protected:
  void set_periodic(std::vector<PeriodicCoordinate> p) { periodic_ = std::move(p); }
  void set_metadata(std::string m) { metadata_ = std::move(m); }

 private:
  std::string name_;
  std::vector<int> signature_;
  ChartDomain domain_;
  std::vector<PeriodicCoordinate> periodic_;
  std::string metadata_;
};

using ModelPtr = std::shared_ptr<const ManifoldModel>;

struct ScalarField {
  std::string name;
  std::function<double(const Vec&)> eval;
};

struct VectorField {
  std::string name;
  std::function<Vec(const Vec&)> eval;
};

enum class CausalClass { Spacelike, Timelike, Null };

const char* to_string(CausalClass c) noexcept;

inline constexpr double kDegeneracyTol = 1e-12;

// Central-difference step for coordinate i: 1e-5 * max(1, |x_i|).
double fd_step(double xi) noexcept;

// Checked metric: OutOfChart outside the domain, DegenerateMetric when an
// eigenvalue is below 1e-12 in magnitude or the signs disagree with the
// declared signature.
Mat metric_eval(const ManifoldModel& model, const Vec& x);

// Checked Christoffel symbols. For finite-difference models the stencil
// x +- h e_i must also lie in the chart.
Christoffel christoffel_eval(const ManifoldModel& model, const Vec& x);

double inner(const ManifoldModel& model, const Vec& x, const Vec& u, const Vec& w);

CausalClass causal_class(const ManifoldModel& model, const Vec& x, const Vec& u);

// g-orthonormal frame at x: columns e_i with g(e_i, e_j) = diag(signs).
// Spacelike columns come first, timelike last.
Mat orthonormal_frame(const ManifoldModel& model, const Vec& x);

// Deterministic sample of chart points: finite bounds are sampled with a
// small inset, infinite ones in [-extent, extent].
std::vector<Vec> sample_chart_points(const ManifoldModel& model, std::size_t count,
                                     std::uint64_t seed, double extent = 3.0);

// Riemannian metric h(X,Y) = 2 g(V,X) g(V,Y) + g(X,Y) built from a timelike
// field V, rescaled pointwise to g(V,V) = -1. Throws NotTimelike at the first
// sample point (or later evaluation point) where g(V,V) >= 0.
ModelPtr auxiliary_riemannian(const ModelPtr& model, VectorField V,
                              const std::vector<Vec>& samples);
ModelPtr auxiliary_riemannian(const ModelPtr& model, VectorField V);

// Unit timelike eigen-direction of g, oriented so its largest-magnitude
// component is positive. Used as the default V for Lorentzian models.
VectorField timelike_eigenfield(const ModelPtr& model);

}  // namespace geoconn
