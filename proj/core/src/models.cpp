#include "geoconn/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace geoconn {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

double minkowski_dot(const Vec& a, const Vec& b) {
  const Eigen::Index m = a.size() - 1;
  return a.head(m).dot(b.head(m)) - a[m] * b[m];
}

double nearest_branch(double angle, double hint, double period) {
  return angle + period * std::round((hint - angle) / period);
}

class EuclideanModel final : public ManifoldModel {
 public:
  explicit EuclideanModel(int n)
      : ManifoldModel("euclidean", std::vector<int>(static_cast<std::size_t>(n), 1),
                      ChartDomain::whole(n)) {}
  Mat metric(const Vec& x) const override { return Mat::Identity(x.size(), x.size()); }
  bool has_analytic_christoffel() const override { return true; }
  Christoffel christoffel(const Vec& x) const override {
    return Christoffel(static_cast<int>(x.size()));
  }
  std::vector<Christoffel> christoffel_derivatives(const Vec& x) const override {
    const int n = static_cast<int>(x.size());
    return std::vector<Christoffel>(static_cast<std::size_t>(n), Christoffel(n));
  }
  bool has_embedding() const override { return true; }
  Vec embed(const Vec& x) const override { return x; }
  Mat embed_jacobian(const Vec& x) const override { return Mat::Identity(x.size(), x.size()); }
};

class MinkowskiModel final : public ManifoldModel {
 public:
  explicit MinkowskiModel(int n) : ManifoldModel("minkowski", signature(n), ChartDomain::whole(n)) {}
  Mat metric(const Vec& x) const override {
    Mat g = Mat::Identity(x.size(), x.size());
    g(x.size() - 1, x.size() - 1) = -1.0;
    return g;
  }
  bool has_analytic_christoffel() const override { return true; }
  Christoffel christoffel(const Vec& x) const override {
    return Christoffel(static_cast<int>(x.size()));
  }
  std::vector<Christoffel> christoffel_derivatives(const Vec& x) const override {
    const int n = static_cast<int>(x.size());
    return std::vector<Christoffel>(static_cast<std::size_t>(n), Christoffel(n));
  }
  bool has_embedding() const override { return true; }
  AmbientForm ambient_form() const override { return AmbientForm::Minkowski; }
  Vec embed(const Vec& x) const override { return x; }
  Mat embed_jacobian(const Vec& x) const override { return Mat::Identity(x.size(), x.size()); }

 private:
  static std::vector<int> signature(int n) {
    std::vector<int> s(static_cast<std::size_t>(n), 1);
    s.back() = -1;
    return s;
  }
};

// Unit sphere in polar coordinates (theta, phi), theta in (0, pi).
class Sphere2Model final : public ManifoldModel {
 public:
  Sphere2Model()
      : ManifoldModel("sphere2", {1, 1},
                      ChartDomain(Vec((Vec(2) << 0.0, -kInf).finished()),
                                  Vec((Vec(2) << kPi, kInf).finished()))) {
    set_periodic({{1, 2 * kPi}});
    set_metadata("polar chart; phi is identified modulo 2 pi; the poles theta = 0, pi are chart boundary");
  }

  Mat metric(const Vec& x) const override {
    const double s = std::sin(x[0]);
    Mat g = Mat::Zero(2, 2);
    g(0, 0) = 1.0;
    g(1, 1) = s * s;
    return g;
  }
  bool has_analytic_christoffel() const override { return true; }
  Christoffel christoffel(const Vec& x) const override {
    Christoffel G(2);
    const double s = std::sin(x[0]), c = std::cos(x[0]);
    G(0, 1, 1) = -s * c;
    G(1, 0, 1) = G(1, 1, 0) = c / s;
    return G;
  }
  std::vector<Christoffel> christoffel_derivatives(const Vec& x) const override {
    std::vector<Christoffel> d(2, Christoffel(2));
    const double s = std::sin(x[0]), c = std::cos(x[0]);
    d[0](0, 1, 1) = s * s - c * c;
    d[0](1, 0, 1) = d[0](1, 1, 0) = -1.0 / (s * s);
    return d;
  }

  bool has_embedding() const override { return true; }
  int ambient_dim() const override { return 3; }
  Vec embed(const Vec& x) const override {
    const double st = std::sin(x[0]);
    return (Vec(3) << st * std::cos(x[1]), st * std::sin(x[1]), std::cos(x[0])).finished();
  }
  Mat embed_jacobian(const Vec& x) const override {
    const double st = std::sin(x[0]), ct = std::cos(x[0]);
    const double sp = std::sin(x[1]), cp = std::cos(x[1]);
    Mat J(3, 2);
    J << ct * cp, -st * sp, ct * sp, st * cp, -st, 0.0;
    return J;
  }

  bool has_oracle() const override { return true; }
  std::pair<Vec, Vec> oracle_embedded(const Vec& p, const Vec& v, double t) const override {
    const Vec P = embed(p);
    const Vec U = embed_jacobian(p) * v;
    const double s = U.norm();
    if (s == 0.0) return {P, Vec::Zero(3)};
    const double c = std::cos(s * t), sn = std::sin(s * t);
    return {c * P + (sn / s) * U, -s * sn * P + c * U};
  }
  Vec chart_from_embedding(const Vec& X, const Vec& hint) const override {
    const double r = X.norm();
    const double theta = std::acos(std::clamp(X[2] / r, -1.0, 1.0));
    const double phi = nearest_branch(std::atan2(X[1], X[0]), hint[1], 2 * kPi);
    return (Vec(2) << theta, phi).finished();
  }
};

// Hyperboloid model projected to its first two ambient coordinates.
class Hyperbolic2Model final : public ManifoldModel {
 public:
  Hyperbolic2Model() : ManifoldModel("hyperbolic2", {1, 1}, ChartDomain::whole(2)) {
    set_metadata("global chart x -> (x, sqrt(1 + |x|^2)) onto the upper hyperboloid sheet");
  }

  Mat metric(const Vec& x) const override {
    return Mat::Identity(2, 2) - x * x.transpose() / (1.0 + x.squaredNorm());
  }
  bool has_analytic_christoffel() const override { return true; }
  Christoffel christoffel(const Vec& x) const override {
    const Mat g = metric(x);
    Christoffel G(2);
    for (int k = 0; k < 2; ++k)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) G(k, i, j) = -x[k] * g(i, j);
    return G;
  }
  std::vector<Christoffel> christoffel_derivatives(const Vec& x) const override {
    const Mat g = metric(x);
    const double w = 1.0 + x.squaredNorm();
    std::vector<Christoffel> d(2, Christoffel(2));
    for (int l = 0; l < 2; ++l)
      for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) {
            const double dg = -((i == l) * x[j] + (j == l) * x[i]) / w +
                              2.0 * x[i] * x[j] * x[l] / (w * w);
            d[static_cast<std::size_t>(l)](k, i, j) = -(k == l) * g(i, j) - x[k] * dg;
          }
    return d;
  }

  bool has_embedding() const override { return true; }
  int ambient_dim() const override { return 3; }
  AmbientForm ambient_form() const override { return AmbientForm::Minkowski; }
  Vec embed(const Vec& x) const override {
    return (Vec(3) << x[0], x[1], std::sqrt(1.0 + x.squaredNorm())).finished();
  }
  Mat embed_jacobian(const Vec& x) const override {
    const double w = std::sqrt(1.0 + x.squaredNorm());
    Mat J(3, 2);
    J << 1.0, 0.0, 0.0, 1.0, x[0] / w, x[1] / w;
    return J;
  }

  bool has_oracle() const override { return true; }
  std::pair<Vec, Vec> oracle_embedded(const Vec& p, const Vec& v, double t) const override {
    const Vec P = embed(p);
    const Vec U = embed_jacobian(p) * v;
    const double c2 = minkowski_dot(U, U);
    if (c2 <= 0.0) return {P, Vec::Zero(3)};
    const double s = std::sqrt(c2);
    const double ch = std::cosh(s * t), sh = std::sinh(s * t);
    return {ch * P + (sh / s) * U, s * sh * P + ch * U};
  }
  Vec chart_from_embedding(const Vec& X, const Vec&) const override { return X.head(2); }
};

// Two-dimensional de Sitter space x1^2 + x2^2 - x3^2 = 1 in Minkowski R^3,
// chart (phi, tau) -> (cosh tau cos phi, cosh tau sin phi, sinh tau).
class DeSitter2Model final : public ManifoldModel {
 public:
  DeSitter2Model() : ManifoldModel("desitter", {1, -1}, ChartDomain::whole(2)) {
    set_periodic({{0, 2 * kPi}});
    set_metadata("global chart (phi, tau) of the one-sheeted hyperboloid; phi is identified modulo 2 pi");
  }

  Mat metric(const Vec& x) const override {
    const double ch = std::cosh(x[1]);
    Mat g = Mat::Zero(2, 2);
    g(0, 0) = ch * ch;
    g(1, 1) = -1.0;
    return g;
  }
  bool has_analytic_christoffel() const override { return true; }
  Christoffel christoffel(const Vec& x) const override {
    Christoffel G(2);
    const double sh = std::sinh(x[1]), ch = std::cosh(x[1]);
    G(0, 0, 1) = G(0, 1, 0) = sh / ch;
    G(1, 0, 0) = sh * ch;
    return G;
  }
  std::vector<Christoffel> christoffel_derivatives(const Vec& x) const override {
    std::vector<Christoffel> d(2, Christoffel(2));
    const double ch = std::cosh(x[1]);
    d[1](0, 0, 1) = d[1](0, 1, 0) = 1.0 / (ch * ch);
    d[1](1, 0, 0) = std::cosh(2.0 * x[1]);
    return d;
  }

  bool has_embedding() const override { return true; }
  int ambient_dim() const override { return 3; }
  AmbientForm ambient_form() const override { return AmbientForm::Minkowski; }
  Vec embed(const Vec& x) const override {
    const double ch = std::cosh(x[1]);
    return (Vec(3) << ch * std::cos(x[0]), ch * std::sin(x[0]), std::sinh(x[1])).finished();
  }
  Mat embed_jacobian(const Vec& x) const override {
    const double ch = std::cosh(x[1]), sh = std::sinh(x[1]);
    const double c = std::cos(x[0]), s = std::sin(x[0]);
    Mat J(3, 2);
    J << -ch * s, sh * c, ch * c, sh * s, 0.0, ch;
    return J;
  }

  bool has_oracle() const override { return true; }
  // Spacelike: cos/sin, timelike: cosh/sinh, null: straight line.
  std::pair<Vec, Vec> oracle_embedded(const Vec& p, const Vec& v, double t) const override {
    const Vec P = embed(p);
    const Vec U = embed_jacobian(p) * v;
    const double c2 = minkowski_dot(U, U);
    if (std::abs(c2) <= 1e-14 * U.squaredNorm()) return {P + t * U, U};
    if (c2 > 0) {
      const double s = std::sqrt(c2);
      const double c = std::cos(s * t), sn = std::sin(s * t);
      return {c * P + (sn / s) * U, -s * sn * P + c * U};
    }
    const double s = std::sqrt(-c2);
    const double ch = std::cosh(s * t), sh = std::sinh(s * t);
    return {ch * P + (sh / s) * U, s * sh * P + ch * U};
  }
  Vec chart_from_embedding(const Vec& X, const Vec& hint) const override {
    const double tau = std::asinh(X[2]);
    const double phi = nearest_branch(std::atan2(X[1], X[0]), hint[0], 2 * kPi);
    return (Vec(2) << phi, tau).finished();
  }
};

// Graph z = x^2 + y^2 in Euclidean R^3.
class ParaboloidModel final : public ManifoldModel {
 public:
  ParaboloidModel() : ManifoldModel("paraboloid", {1, 1}, ChartDomain::whole(2)) {}

  Mat metric(const Vec& x) const override {
    return Mat::Identity(2, 2) + 4.0 * x * x.transpose();
  }
  bool has_analytic_christoffel() const override { return true; }
  Christoffel christoffel(const Vec& x) const override {
    Christoffel G(2);
    const double d = 1.0 + 4.0 * x.squaredNorm();
    for (int k = 0; k < 2; ++k)
      for (int i = 0; i < 2; ++i) G(k, i, i) = 4.0 * x[k] / d;
    return G;
  }
  std::vector<Christoffel> christoffel_derivatives(const Vec& x) const override {
    const double den = 1.0 + 4.0 * x.squaredNorm();
    std::vector<Christoffel> d(2, Christoffel(2));
    for (int l = 0; l < 2; ++l)
      for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 2; ++i)
          d[static_cast<std::size_t>(l)](k, i, i) =
              4.0 * (k == l) / den - 32.0 * x[k] * x[l] / (den * den);
    return d;
  }
  bool has_embedding() const override { return true; }
  int ambient_dim() const override { return 3; }
  Vec embed(const Vec& x) const override {
    return (Vec(3) << x[0], x[1], x.squaredNorm()).finished();
  }
  Mat embed_jacobian(const Vec& x) const override {
    Mat J(3, 2);
    J << 1.0, 0.0, 0.0, 1.0, 2.0 * x[0], 2.0 * x[1];
    return J;
  }
};

// 2 du dv / (u^2 + v^2) on the punctured plane; the torus is the quotient by
// (u, v) ~ (2u, 2v), kept as metadata only.
class CliftonPohlModel final : public ManifoldModel {
 public:
  CliftonPohlModel()
      : ManifoldModel("clifton_pohl", {1, -1},
                      ChartDomain(Vec::Constant(2, -kInf), Vec::Constant(2, kInf),
                                  [](const Vec& x) { return x.squaredNorm() > 0.0; },
                                  "(u, v) != (0, 0)")) {
    set_metadata("torus identification (u, v) ~ (2u, 2v); geodesics are integrated in the covering chart");
  }

  Mat metric(const Vec& x) const override {
    const double f = 1.0 / x.squaredNorm();
    Mat g = Mat::Zero(2, 2);
    g(0, 1) = g(1, 0) = f;
    return g;
  }
  bool has_analytic_christoffel() const override { return true; }
  Christoffel christoffel(const Vec& x) const override {
    const double r2 = x.squaredNorm();
    Christoffel G(2);
    G(0, 0, 0) = -2.0 * x[0] / r2;
    G(1, 1, 1) = -2.0 * x[1] / r2;
    return G;
  }
  std::vector<Christoffel> christoffel_derivatives(const Vec& x) const override {
    const double r2 = x.squaredNorm();
    std::vector<Christoffel> d(2, Christoffel(2));
    for (int l = 0; l < 2; ++l)
      for (int k = 0; k < 2; ++k)
        d[static_cast<std::size_t>(l)](k, k, k) = -2.0 * (k == l) / r2 + 4.0 * x[k] * x[l] / (r2 * r2);
    return d;
  }
};

}  // namespace

ModelPtr make_model(const std::string& name, const ModelParams& params) {
  if (name == "euclidean") {
    if (params.dim < 1) throw ConfigError("euclidean needs dim >= 1");
    return std::make_shared<EuclideanModel>(params.dim);
  }
  if (name == "minkowski") {
    if (params.dim < 2) throw ConfigError("minkowski needs dim >= 2");
    return std::make_shared<MinkowskiModel>(params.dim);
  }
  if (name == "sphere2") return std::make_shared<Sphere2Model>();
  if (name == "hyperbolic2") return std::make_shared<Hyperbolic2Model>();
  if (name == "desitter") {
    if (params.dim != 2) throw ConfigError("desitter is available for n = 2 only");
    return std::make_shared<DeSitter2Model>();
  }
  if (name == "paraboloid") return std::make_shared<ParaboloidModel>();
  if (name == "clifton_pohl") return std::make_shared<CliftonPohlModel>();
  throw UnknownModel(name);
}

std::vector<ModelInfo> builtin_models() {
  return {
      {"euclidean", "n", "+...+", "cartesian R^n", false},
      {"minkowski", "n", "+...+-", "cartesian R^n", false},
      {"sphere2", "2", "++", "polar (theta, phi)", true},
      {"hyperbolic2", "2", "++", "hyperboloid projection (x, y)", true},
      {"desitter", "2", "+-", "(phi, tau) on x1^2 + x2^2 - x3^2 = 1", true},
      {"paraboloid", "2", "++", "graph z = x^2 + y^2", false},
      {"clifton_pohl", "2", "+-", "punctured plane (u, v)", false},
  };
}

Vec reference_point(const ManifoldModel& model) {
  const int n = model.dim();
  if (model.name() == "sphere2") return (Vec(2) << kPi / 2, 0.0).finished();
  if (model.name() == "clifton_pohl") return (Vec(2) << 1.0, 0.0).finished();
  Vec x = Vec::Zero(n);
  if (model.in_chart(x)) return x;
  const Vec& lo = model.domain().lower();
  const Vec& hi = model.domain().upper();
  for (int i = 0; i < n; ++i) {
    const bool fl = std::isfinite(lo[i]), fh = std::isfinite(hi[i]);
    if (fl && fh) x[i] = 0.5 * (lo[i] + hi[i]);
    else if (fl) x[i] = lo[i] + 1.0;
    else if (fh) x[i] = hi[i] - 1.0;
  }
  return x;
}

}  // namespace geoconn
