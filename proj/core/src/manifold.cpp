#include "geoconn/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace geoconn {

Vec Christoffel::contract(const Vec& a, const Vec& b) const {
  Vec out = Vec::Zero(n_);
  for (int k = 0; k < n_; ++k) {
    double s = 0.0;
    for (int i = 0; i < n_; ++i) {
      if (a[i] == 0.0) continue;
      for (int j = 0; j < n_; ++j) s += (*this)(k, i, j) * a[i] * b[j];
    }
    out[k] = s;
  }
  return out;
}

double Christoffel::max_abs() const {
  double m = 0.0;
  for (double d : data_) m = std::max(m, std::abs(d));
  return m;
}

double Christoffel::max_abs_diff(const Christoffel& other) const {
  double m = 0.0;
  for (std::size_t i = 0; i < data_.size(); ++i)
    m = std::max(m, std::abs(data_[i] - other.data_[i]));
  return m;
}

double Christoffel::lower_asymmetry() const {
  double m = 0.0;
  for (int k = 0; k < n_; ++k)
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j)
        m = std::max(m, std::abs((*this)(k, i, j) - (*this)(k, j, i)));
  return m;
}

ChartDomain ChartDomain::whole(int n) {
  const double inf = std::numeric_limits<double>::infinity();
  return ChartDomain(Vec::Constant(n, -inf), Vec::Constant(n, inf));
}

ChartDomain::ChartDomain(Vec lower, Vec upper, Predicate extra, std::string extra_description)
    : lower_(std::move(lower)), upper_(std::move(upper)), extra_(std::move(extra)) {
  std::string d;
  for (Eigen::Index i = 0; i < lower_.size(); ++i) {
    if (std::isinf(lower_[i]) && std::isinf(upper_[i])) continue;
    if (!d.empty()) d += ", ";
    d += std::to_string(lower_[i]) + " < x" + std::to_string(i + 1) + " < " +
         std::to_string(upper_[i]);
  }
  if (!extra_description.empty()) {
    if (!d.empty()) d += ", ";
    d += extra_description;
  }
  description_ = d.empty() ? "R^" + std::to_string(lower_.size()) : d;
}

bool ChartDomain::contains(const Vec& x) const {
  if (x.size() != lower_.size()) return false;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i])) return false;
    if (!(x[i] > lower_[i] && x[i] < upper_[i])) return false;
  }
  return !extra_ || extra_(x);
}

ManifoldModel::ManifoldModel(std::string name, std::vector<int> signature, ChartDomain domain)
    : name_(std::move(name)), signature_(std::move(signature)), domain_(std::move(domain)) {}

bool ManifoldModel::is_riemannian() const noexcept {
  return std::all_of(signature_.begin(), signature_.end(), [](int s) { return s > 0; });
}

double fd_step(double xi) noexcept { return 1e-5 * std::max(1.0, std::abs(xi)); }

Christoffel ManifoldModel::christoffel_fd(const Vec& x) const {
  const int n = dim();
  std::vector<Mat> dg(static_cast<std::size_t>(n));
  for (int l = 0; l < n; ++l) {
    const double h = fd_step(x[l]);
    Vec xp = x, xm = x;
    xp[l] += h;
    xm[l] -= h;
    dg[static_cast<std::size_t>(l)] = (metric(xp) - metric(xm)) / (xp[l] - xm[l]);
  }
  const Mat g = metric(x);
  Eigen::FullPivLU<Mat> lu(g);
  if (!lu.isInvertible()) throw DegenerateMetric(x, "metric is not invertible");
  const Mat ginv = lu.inverse();

  Christoffel gamma(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      // first-kind symbols Gamma_{l,ij}
      Vec first(n);
      for (int l = 0; l < n; ++l) {
        first[l] = 0.5 * (dg[static_cast<std::size_t>(i)](j, l) +
                          dg[static_cast<std::size_t>(j)](i, l) -
                          dg[static_cast<std::size_t>(l)](i, j));
      }
      const Vec second = ginv * first;
      for (int k = 0; k < n; ++k) {
        gamma(k, i, j) = second[k];
        gamma(k, j, i) = second[k];
      }
    }
  }
  return gamma;
}

std::vector<Christoffel> ManifoldModel::christoffel_derivatives(const Vec& x) const {
  return christoffel_derivatives_fd(x);
}

std::vector<Christoffel> ManifoldModel::christoffel_derivatives_fd(const Vec& x) const {
  // Nested differences need a wider outer step to stay above roundoff.
  const double scale = has_analytic_christoffel() ? 1.0 : 50.0;
  const int n = dim();
  std::vector<Christoffel> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int l = 0; l < n; ++l) {
    const double h = scale * fd_step(x[l]);
    Vec xp = x, xm = x;
    xp[l] += h;
    xm[l] -= h;
    const Christoffel gp = christoffel(xp);
    const Christoffel gm = christoffel(xm);
    const double inv = 1.0 / (xp[l] - xm[l]);
    Christoffel d(n);
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) d(k, i, j) = (gp(k, i, j) - gm(k, i, j)) * inv;
    out.push_back(std::move(d));
  }
  return out;
}

Vec ManifoldModel::embed(const Vec& x) const { return x; }

Mat ManifoldModel::embed_jacobian(const Vec& x) const {
  const Vec e0 = embed(x);
  Mat J(e0.size(), dim());
  for (int i = 0; i < dim(); ++i) {
    const double h = fd_step(x[i]);
    Vec xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    J.col(i) = (embed(xp) - embed(xm)) / (xp[i] - xm[i]);
  }
  return J;
}

std::pair<Vec, Vec> ManifoldModel::oracle_embedded(const Vec&, const Vec&, double) const {
  throw NoOracle(name_);
}

Vec ManifoldModel::chart_from_embedding(const Vec&, const Vec&) const { throw NoOracle(name_); }

Vec ManifoldModel::chart_difference(const Vec& a, const Vec& b) const {
  Vec d = a - b;
  for (const auto& pc : periodic_) {
    double& c = d[pc.index];
    c -= pc.period * std::floor(c / pc.period + 0.5);
  }
  return d;
}

const char* to_string(CausalClass c) noexcept {
  switch (c) {
    case CausalClass::Spacelike: return "spacelike";
    case CausalClass::Timelike: return "timelike";
    case CausalClass::Null: return "null";
  }
  return "?";
}

Mat metric_eval(const ManifoldModel& model, const Vec& x) {
  if (!model.in_chart(x)) throw OutOfChart(x);
  Mat g;
  try {
    g = model.metric(x);
  } catch (const EvalError&) {
    throw OutOfChart(x);
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(g, Eigen::EigenvaluesOnly);
  const Vec& ev = es.eigenvalues();
  int negatives = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (!std::isfinite(ev[i]) || std::abs(ev[i]) < kDegeneracyTol)
      throw DegenerateMetric(x, "eigenvalue " + std::to_string(ev[i]));
    if (ev[i] < 0) ++negatives;
  }
  const auto& sig = model.signature();
  const auto expected = std::count(sig.begin(), sig.end(), -1);
  if (negatives != expected)
    throw DegenerateMetric(x, "eigenvalue signs do not match the declared signature");
  return g;
}

Christoffel christoffel_eval(const ManifoldModel& model, const Vec& x) {
  if (!model.in_chart(x)) throw OutOfChart(x);
  if (!model.has_analytic_christoffel()) {
    for (int i = 0; i < model.dim(); ++i) {
      const double h = fd_step(x[i]);
      Vec xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      if (!model.in_chart(xp) || !model.in_chart(xm)) throw OutOfChart(x);
    }
  }
  metric_eval(model, x);
  return model.christoffel(x);
}

double inner(const ManifoldModel& model, const Vec& x, const Vec& u, const Vec& w) {
  if (!model.in_chart(x)) throw OutOfChart(x);
  return u.dot(model.metric(x) * w);
}

CausalClass causal_class(const ManifoldModel& model, const Vec& x, const Vec& u) {
  const double q = inner(model, x, u, u);
  if (std::abs(q) <= 1e-12 * u.squaredNorm()) return CausalClass::Null;
  return q > 0 ? CausalClass::Spacelike : CausalClass::Timelike;
}

Mat orthonormal_frame(const ManifoldModel& model, const Vec& x) {
  const Mat g = metric_eval(model, x);
  Eigen::SelfAdjointEigenSolver<Mat> es(g);
  const int n = model.dim();
  Mat frame(n, n);
  int col = 0;
  // descending eigenvalues: positive (spacelike) directions first
  for (int i = n - 1; i >= 0; --i) {
    Vec e = es.eigenvectors().col(i) / std::sqrt(std::abs(es.eigenvalues()[i]));
    Eigen::Index arg;
    e.cwiseAbs().maxCoeff(&arg);
    if (e[arg] < 0) e = -e;
    frame.col(col++) = e;
  }
  return frame;
}

std::vector<Vec> sample_chart_points(const ManifoldModel& model, std::size_t count,
                                     std::uint64_t seed, double extent) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto& lo = model.domain().lower();
  const auto& hi = model.domain().upper();
  std::vector<Vec> out;
  out.reserve(count);
  std::size_t attempts = 0;
  while (out.size() < count && attempts < 1000 * count + 1000) {
    ++attempts;
    Vec x(model.dim());
    for (int i = 0; i < model.dim(); ++i) {
      double a = std::isfinite(lo[i]) ? lo[i] : -extent;
      double b = std::isfinite(hi[i]) ? hi[i] : extent;
      if (std::isfinite(lo[i]) && !std::isfinite(hi[i])) b = lo[i] + 2 * extent;
      if (!std::isfinite(lo[i]) && std::isfinite(hi[i])) a = hi[i] - 2 * extent;
      const double inset = 1e-2 * (b - a);
      x[i] = a + inset + (b - a - 2 * inset) * unit(rng);
    }
    if (model.in_chart(x)) out.push_back(std::move(x));
  }
  return out;
}

namespace {

class AuxiliaryRiemannianModel final : public ManifoldModel {
 public:
  AuxiliaryRiemannianModel(ModelPtr base, VectorField V)
      : ManifoldModel(base->name() + "+aux", std::vector<int>(static_cast<std::size_t>(base->dim()), 1),
                      base->domain()),
        base_(std::move(base)),
        V_(std::move(V)) {
    set_periodic(base_->periodic());
    set_metadata("auxiliary Riemannian metric of " + base_->name() + " from field " + V_.name);
  }

  bool in_chart(const Vec& x) const override { return base_->in_chart(x); }

  Mat metric(const Vec& x) const override {
    const Mat g = base_->metric(x);
    const Vec V = V_.eval(x);
    const Vec gV = g * V;
    const double q = V.dot(gV);
    if (!(q < 0)) throw NotTimelike(x);
    // V rescaled to g(V,V) = -1
    return g + (2.0 / -q) * gV * gV.transpose();
  }

  bool has_embedding() const override { return base_->has_embedding(); }
  int ambient_dim() const override { return base_->ambient_dim(); }
  AmbientForm ambient_form() const override { return base_->ambient_form(); }
  Vec embed(const Vec& x) const override { return base_->embed(x); }
  Mat embed_jacobian(const Vec& x) const override { return base_->embed_jacobian(x); }

 private:
  ModelPtr base_;
  VectorField V_;
};

}  // namespace

ModelPtr auxiliary_riemannian(const ModelPtr& model, VectorField V,
                              const std::vector<Vec>& samples) {
  for (const Vec& x : samples) {
    const Vec v = V.eval(x);
    if (!(inner(*model, x, v, v) < 0)) throw NotTimelike(x);
  }
  return std::make_shared<AuxiliaryRiemannianModel>(model, std::move(V));
}

ModelPtr auxiliary_riemannian(const ModelPtr& model, VectorField V) {
  return auxiliary_riemannian(model, std::move(V), sample_chart_points(*model, 100, 0x5eed));
}

VectorField timelike_eigenfield(const ModelPtr& model) {
  return VectorField{"timelike-eigendirection", [model](const Vec& x) {
                       Eigen::SelfAdjointEigenSolver<Mat> es(model->metric(x));
                       if (!(es.eigenvalues()[0] < 0)) throw NotTimelike(x);
                       Vec e = es.eigenvectors().col(0);
                       Eigen::Index arg;
                       e.cwiseAbs().maxCoeff(&arg);
                       return e[arg] < 0 ? Vec(-e) : e;
                     }};
}

}  // namespace geoconn
