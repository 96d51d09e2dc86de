#include "geoconn/jacobi.hpp"

#include <cmath>
#include <limits>

namespace geoconn {
namespace {

double det_ratio(const Vec& y, int n, double t) {
  return jacobi_block(y, n).determinant() / std::pow(t, n);
}

void check_linearization(const Vec& y, int n, double t) {
  const double norm = y.tail(2 * n * n).lpNorm<Eigen::Infinity>();
  if (!(norm <= kLinearizationLimit)) throw LinearizationFailure(t, norm);
}

}  // namespace

ode::Rhs jacobi_rhs(const ManifoldModel& model) {
  const int n = model.dim();
  return [&model, n](double, const Vec& y, Vec& dy) {
    const Vec x = y.head(n);
    const Vec v = y.segment(n, n);
    const Christoffel G = model.christoffel(x);
    const std::vector<Christoffel> dG = model.christoffel_derivatives(x);
    Mat A = Mat::Zero(n, n);  // A(k, l) = d_l Gamma^k_ij v^i v^j
    Mat B = Mat::Zero(n, n);  // B(k, j) = 2 Gamma^k_ij v^i
    for (int k = 0; k < n; ++k) {
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          B(k, j) += 2.0 * G(k, i, j) * v[i];
          for (int l = 0; l < n; ++l) A(k, l) += dG[static_cast<std::size_t>(l)](k, i, j) * v[i] * v[j];
        }
      }
    }
    const auto nn = static_cast<Eigen::Index>(n) * n;
    Eigen::Map<const Mat> J(y.data() + 2 * n, n, n);
    Eigen::Map<const Mat> Jd(y.data() + 2 * n + nn, n, n);
    dy.head(n) = v;
    dy.segment(n, n) = -G.contract(v, v);
    Eigen::Map<Mat>(dy.data() + 2 * n, n, n) = Jd;
    Eigen::Map<Mat>(dy.data() + 2 * n + nn, n, n) = -A * J - B * Jd;
  };
}

Vec jacobi_initial_state(const Vec& p, const Vec& v) {
  const auto n = p.size();
  Vec y = Vec::Zero(2 * n + 2 * n * n);
  y.head(n) = p;
  y.segment(n, n) = v;
  Eigen::Map<Mat>(y.data() + 2 * n + n * n, n, n).setIdentity();
  return y;
}

Mat jacobi_block(const Vec& y, int n) { return Eigen::Map<const Mat>(y.data() + 2 * n, n, n); }

DifferentialFrame dexp_matrix(const ManifoldModel& model, const Vec& p, const Vec& v,
                              const IntegratorConfig& cfg) {
  const int n = model.dim();
  if (!model.in_chart(p)) throw OutOfChart(p);
  DifferentialFrame f;
  f.base = {p, v};
  if (v.isZero(0.0)) {
    f.matrix = Mat::Identity(n, n);
    f.endpoint = p;
    return f;
  }
  const FlowOutcome fo = integrate_flow(model, jacobi_rhs(model), jacobi_initial_state(p, v), 1.0,
                                        cfg, [n](const ode::DenseStep& s, double t) {
                                          check_linearization(s.y1, n, t);
                                          return ode::Control::Continue;
                                        });
  if (fo.termination != Termination::ReachedTmax) throw DomainEscape(fo.termination, fo.t);
  f.matrix = jacobi_block(fo.y, n);
  f.endpoint = fo.y.head(n);
  f.det = f.matrix.determinant();
  Eigen::JacobiSVD<Mat> svd(f.matrix);
  const Vec& sv = svd.singularValues();
  f.min_singular_value = sv[n - 1];
  f.condition = sv[n - 1] > 0 ? sv[0] / sv[n - 1] : std::numeric_limits<double>::infinity();
  return f;
}

Mat dexp_finite_difference(const ManifoldModel& model, const Vec& p, const Vec& v,
                           const IntegratorConfig& cfg, double step) {
  const int n = model.dim();
  Mat D(n, n);
  for (int i = 0; i < n; ++i) {
    Vec vp = v, vm = v;
    vp[i] += step;
    vm[i] -= step;
    D.col(i) = model.chart_difference(exp_map(model, p, vp, cfg), exp_map(model, p, vm, cfg)) /
               (2.0 * step);
  }
  return D;
}

Vec normalize_direction(const ManifoldModel& model, const Vec& p, const Vec& u) {
  const double q = inner(model, p, u, u);
  switch (causal_class(model, p, u)) {
    case CausalClass::Spacelike: return u / std::sqrt(q);
    case CausalClass::Timelike: return u / std::sqrt(-q);
    case CausalClass::Null: break;
  }
  const double norm = u.norm();
  if (norm == 0.0) throw Error("cannot normalize the zero vector");
  return u / norm;
}

std::optional<ConjugateTime> first_conjugate_time(const ManifoldModel& model, const Vec& p,
                                                  const Vec& u, double t_max,
                                                  const IntegratorConfig& cfg) {
  const int n = model.dim();
  if (!model.in_chart(p)) throw OutOfChart(p);
  constexpr int kSamples = 8;
  std::optional<ConjugateTime> hit;
  double t_prev = 0.0, d_prev = 1.0;

  auto observer = [&](const ode::DenseStep& step, double t_valid) {
    check_linearization(step.y1, n, step.t1);
    for (int k = 1; k <= kSamples; ++k) {
      const double t = step.t0 + (t_valid - step.t0) * k / kSamples;
      const Vec y = step.eval(t);
      const double d = det_ratio(y, n, t);
      if (std::abs(d) < kSingularTol || (d > 0) != (d_prev > 0)) {
        double lo = t_prev, hi = t;
        bool dip = std::abs(d) < kSingularTol && (d > 0) == (d_prev > 0);
        if (!dip) {
          const bool lo_pos = d_prev > 0;
          while (hi - lo > 1e-12 * std::max(1.0, hi)) {
            const double mid = 0.5 * (lo + hi);
            if ((det_ratio(step.eval(mid), n, mid) > 0) == lo_pos)
              lo = mid;
            else
              hi = mid;
          }
        }
        const double ts = dip ? t : 0.5 * (lo + hi);
        hit = ConjugateTime{ts, step.eval_segment(ts, 0, n), dip};
        return ode::Control::Stop;
      }
      t_prev = t;
      d_prev = d;
    }
    return ode::Control::Continue;
  };

  const FlowOutcome fo =
      integrate_flow(model, jacobi_rhs(model), jacobi_initial_state(p, u), t_max, cfg, observer);
  if (hit) return hit;
  if (fo.termination != Termination::ReachedTmax) throw DomainEscape(fo.termination, fo.t);
  return std::nullopt;
}

}  // namespace geoconn
