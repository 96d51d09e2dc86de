#include "geoconn/geodesic.hpp"

#include <algorithm>
#include <cmath>

namespace geoconn {
namespace {

constexpr double kExitTol = 1e-10;

ode::Options to_ode(const IntegratorConfig& cfg) {
  ode::Options o;
  o.rtol = cfg.rtol;
  o.atol = cfg.atol;
  o.max_steps = cfg.max_steps;
  return o;
}

void check_start(const ManifoldModel& model, const Vec& p, const Vec& v) {
  if (p.size() != model.dim() || v.size() != model.dim())
    throw Error("point and vector must have " + std::to_string(model.dim()) + " components");
  if (!model.in_chart(p)) throw OutOfChart(p);
  if (!v.allFinite()) throw Error("tangent vector is not finite");
}

}  // namespace

void IntegratorConfig::validate() const {
  if (!(rtol > 0 && atol > 0 && t_max > 0 && max_steps > 0 && blowup_norm > 0))
    throw ConfigError("integrator settings must all be positive");
}

PathNode GeodesicPath::state(double t) const {
  t = std::clamp(t, 0.0, t_end);
  const auto n = static_cast<Eigen::Index>(p0.size());
  if (termination == Termination::OracleExact) {
    const auto [X, U] = model->oracle_embedded(p0, v0, t);
    // nearest stored node gives the branch hint
    auto it = std::lower_bound(nodes.begin(), nodes.end(), t,
                               [](const PathNode& a, double s) { return a.t < s; });
    const Vec& hint = (it == nodes.end() ? nodes.back() : *it).x;
    const Vec x = model->chart_from_embedding(X, hint);
    const Mat J = model->embed_jacobian(x);
    return {t, x, J.colPivHouseholderQr().solve(U)};
  }
  if (steps.empty()) return nodes.front();
  auto it = std::lower_bound(steps.begin(), steps.end(), t,
                             [](const ode::DenseStep& s, double v) { return s.t1 < v; });
  if (it == steps.end()) it = std::prev(steps.end());
  const Vec y = it->eval(t);
  return {t, y.head(n), y.segment(n, n)};
}

FlowOutcome integrate_flow(const ManifoldModel& model, const ode::Rhs& rhs, const Vec& y0,
                           double t_end, const IntegratorConfig& cfg,
                           const FlowObserver& observer) {
  const Eigen::Index n = model.dim();
  FlowOutcome out;
  out.t = 0.0;
  out.y = y0;
  if (t_end <= 0) return out;

  auto on_step = [&](const ode::DenseStep& step) {
    if (!model.in_chart(step.y1.head(n))) {
      double lo = step.t0, hi = step.t1;
      while (hi - lo > kExitTol) {
        const double mid = 0.5 * (lo + hi);
        if (model.in_chart(step.eval_segment(mid, 0, n)))
          lo = mid;
        else
          hi = mid;
      }
      out.termination = Termination::ChartExit;
      out.t = hi;
      out.y = step.eval(hi);
      if (observer) observer(step, hi);
      return ode::Control::Stop;
    }
    out.t = step.t1;
    out.y = step.y1;
    if (step.y1.head(2 * n).norm() > cfg.blowup_norm) {
      out.termination = Termination::BlowUp;
      if (observer) observer(step, step.t1);
      return ode::Control::Stop;
    }
    if (observer && observer(step, step.t1) == ode::Control::Stop) return ode::Control::Stop;
    return ode::Control::Continue;
  };

  const ode::Summary s = ode::dopri5(rhs, 0.0, y0, t_end, to_ode(cfg), on_step);
  out.rejected = s.rejected;
  if (out.termination == Termination::ReachedTmax) {
    out.t = s.t;
    out.y = s.y;
  }
  return out;
}

ode::Rhs geodesic_rhs(const ManifoldModel& model) {
  const Eigen::Index n = model.dim();
  return [&model, n](double, const Vec& y, Vec& dy) {
    const Vec x = y.head(n);
    const Vec v = y.segment(n, n);
    const Christoffel G = model.christoffel(x);
    dy.head(n) = v;
    dy.segment(n, n) = -G.contract(v, v);
  };
}

GeodesicPath integrate_geodesic(const ModelPtr& model, const Vec& p0, const Vec& v0,
                                const IntegratorConfig& cfg) {
  cfg.validate();
  check_start(*model, p0, v0);
  const Eigen::Index n = model->dim();
  GeodesicPath path;
  path.model = model;
  path.p0 = p0;
  path.v0 = v0;
  path.nodes.push_back({0.0, p0, v0});

  Vec y0(2 * n);
  y0 << p0, v0;
  const FlowOutcome fo = integrate_flow(
      *model, geodesic_rhs(*model), y0, cfg.t_max, cfg,
      [&](const ode::DenseStep& step, double t_valid) {
        path.steps.push_back(step);
        const Vec y = t_valid < step.t1 ? step.eval(t_valid) : step.y1;
        path.nodes.push_back({t_valid, y.head(n), y.segment(n, n)});
        return ode::Control::Continue;
      });
  path.termination = fo.termination;
  path.t_end = fo.t;
  path.rejected_steps = fo.rejected;
  return path;
}

ExpResult try_exp(const ManifoldModel& model, const Vec& p, const Vec& v,
                  const IntegratorConfig& cfg) {
  check_start(model, p, v);
  const Eigen::Index n = model.dim();
  if (v.isZero(0.0)) return {p, v, Termination::ReachedTmax, 1.0};
  Vec y0(2 * n);
  y0 << p, v;
  const FlowOutcome fo = integrate_flow(model, geodesic_rhs(model), y0, 1.0, cfg);
  return {fo.y.head(n), fo.y.segment(n, n), fo.termination, fo.t};
}

Vec exp_map(const ManifoldModel& model, const Vec& p, const Vec& v, const IntegratorConfig& cfg) {
  ExpResult r = try_exp(model, p, v, cfg);
  if (!r.ok()) throw DomainEscape(r.termination, r.t);
  return std::move(r.x);
}

Vec oracle_point(const ManifoldModel& model, const Vec& p, const Vec& v, double t) {
  if (!model.has_oracle()) throw NoOracle(model.name());
  return model.oracle_embedded(p, v, t).first;
}

GeodesicPath oracle_geodesic(const ModelPtr& model, const Vec& p, const Vec& v, double t_max,
                             std::size_t samples) {
  if (!model->has_oracle()) throw NoOracle(model->name());
  check_start(*model, p, v);
  if (samples == 0) {
    const double span = t_max * std::max(1.0, v.norm());
    samples = static_cast<std::size_t>(std::ceil(span / 0.05)) + 1;
  }
  GeodesicPath path;
  path.model = model;
  path.p0 = p;
  path.v0 = v;
  path.termination = Termination::OracleExact;
  path.t_end = t_max;
  path.nodes.push_back({0.0, p, v});
  Vec hint = p;
  for (std::size_t k = 1; k <= samples; ++k) {
    const double t = t_max * static_cast<double>(k) / static_cast<double>(samples);
    const auto [X, U] = model->oracle_embedded(p, v, t);
    const Vec x = model->chart_from_embedding(X, hint);
    const Mat J = model->embed_jacobian(x);
    path.nodes.push_back({t, x, J.colPivHouseholderQr().solve(U)});
    hint = x;
  }
  return path;
}

double energy_drift(const GeodesicPath& path) {
  if (path.nodes.empty()) return 0.0;
  const ManifoldModel& m = *path.model;
  const auto& first = path.nodes.front();
  const double e0 = first.v.dot(m.metric(first.x) * first.v);
  double drift = 0.0;
  std::size_t count = path.nodes.size();
  if (path.termination == Termination::ChartExit) --count;
  for (std::size_t i = 1; i < count; ++i) {
    const auto& nd = path.nodes[i];
    drift = std::max(drift, std::abs(nd.v.dot(m.metric(nd.x) * nd.v) - e0));
  }
  return drift;
}

}  // namespace geoconn
