#include "geoconn/connector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "geoconn/json_format.hpp"

namespace geoconn {
namespace {

constexpr double kPi = std::numbers::pi;

double residual_norm(const ManifoldModel& model, const Vec& x, const Vec& target) {
  return model.chart_difference(x, target).norm();
}

// Unit bump directions orthogonal (in the chart) to the chord d.
Vec bump_direction(const Vec& d, int k) {
  const auto n = d.size();
  Vec dir = d.norm() > 0 ? Vec(d.normalized()) : Vec(Vec::Unit(n, 0));
  if (n == 1) return (k % 2 == 0 ? 1.0 : -1.0) * dir;
  std::vector<Vec> basis;
  for (Eigen::Index i = 0; i < n && basis.size() < 2; ++i) {
    Vec e = Vec::Unit(n, i);
    e -= e.dot(dir) * dir;
    for (const Vec& b : basis) e -= e.dot(b) * b;
    if (e.norm() > 1e-8) basis.push_back(e.normalized());
  }
  if (n == 2) return (k % 2 == 0 ? 1.0 : -1.0) * basis[0];
  const double a = k * kPi / 4;
  return std::cos(a) * basis[0] + std::sin(a) * basis[1];
}

struct Correction {
  bool ok = false;
  bool domain = false;  // failure came from leaving the domain of exp_p
  Vec v;
  double residual = 0.0;
  double min_sv = 0.0;
  Mat matrix;
  double t = 0.0;
  int iterations = 0;
};

Correction correct(const ManifoldModel& model, const Vec& p, Vec v, const Vec& target,
                   const ConnectConfig& cfg) {
  Correction c;
  double prev = std::numeric_limits<double>::infinity();
  for (int it = 0; it <= cfg.newton_iterations; ++it) {
    DifferentialFrame f;
    try {
      f = dexp_matrix(model, p, v, cfg.integrator);
    } catch (const DomainEscape&) {
      c.domain = true;
      return c;
    } catch (const Error&) {
      return c;
    }
    const Vec r = model.chart_difference(f.endpoint, target);
    const double rn = r.norm();
    if (rn <= cfg.corrector_tol) {
      c.ok = true;
      c.v = v;
      c.residual = rn;
      c.min_sv = f.min_singular_value;
      c.matrix = f.matrix;
      c.iterations = it;
      return c;
    }
    if (it == cfg.newton_iterations || !(rn < prev) || !std::isfinite(rn)) return c;
    prev = rn;
    Eigen::PartialPivLU<Mat> lu(f.matrix);
    v -= lu.solve(r);
    if (!v.allFinite()) return c;
  }
  return c;
}

// Newton on [exp_p(v) - sigma(t); tau . (z - zp)] = 0 from the predictor zp.
Correction correct_arclength(const ManifoldModel& model, const Vec& p, const TargetPath& path,
                             Vec z, const Vec& tau, const ConnectConfig& cfg) {
  const auto n = static_cast<Eigen::Index>(model.dim());
  const Vec zp = z;
  Correction c;
  double prev = std::numeric_limits<double>::infinity();
  for (int it = 0; it <= cfg.newton_iterations; ++it) {
    const Vec v = z.head(n);
    const double t = z[n];
    if (!(t >= 0.0 && t <= path.length)) return c;
    DifferentialFrame f;
    try {
      f = dexp_matrix(model, p, v, cfg.integrator);
    } catch (const DomainEscape&) {
      c.domain = true;
      return c;
    } catch (const Error&) {
      return c;
    }
    Vec r(n + 1);
    r.head(n) = model.chart_difference(f.endpoint, path.point(t));
    r[n] = tau.dot(z - zp);
    const double rn = r.head(n).norm();
    if (rn <= cfg.corrector_tol) {
      c.ok = true;
      c.v = v;
      c.t = t;
      c.residual = rn;
      c.min_sv = f.min_singular_value;
      c.matrix = f.matrix;
      c.iterations = it;
      return c;
    }
    if (it == cfg.newton_iterations || !(rn < prev) || !std::isfinite(rn)) return c;
    prev = rn;
    Mat A(n + 1, n + 1);
    A.topLeftCorner(n, n) = f.matrix;
    A.topRightCorner(n, 1) = -path.tangent(t);
    A.bottomRows(1) = tau.transpose();
    z -= Eigen::PartialPivLU<Mat>(A).solve(r);
    if (!z.allFinite()) return c;
  }
  return c;
}

}  // namespace

const char* to_string(PathKind k) noexcept {
  switch (k) {
    case PathKind::ChartSegment: return "segment";
    case PathKind::AuxGeodesic: return "aux";
    case PathKind::UserPolyline: return "polyline";
  }
  return "?";
}

const char* to_string(LiftStatus s) noexcept {
  switch (s) {
    case LiftStatus::Connected: return "Connected";
    case LiftStatus::ConjugateHit: return "ConjugateHit";
    case LiftStatus::EscapeWitness: return "EscapeWitness";
    case LiftStatus::DomainExit: return "DomainExit";
    case LiftStatus::Stalled: return "Stalled";
  }
  return "?";
}

TargetPath chart_segment(const ManifoldModel& model, const Vec& r, const Vec& q) {
  const Vec d = model.chart_difference(q, r);
  TargetPath s;
  s.provenance = PathKind::ChartSegment;
  s.length = d.norm();
  const double len = s.length;
  s.point = [r, d, len](double t) -> Vec { return len > 0 ? Vec(r + (t / len) * d) : r; };
  s.tangent = [d, len](double) -> Vec { return len > 0 ? Vec(d / len) : Vec(Vec::Zero(d.size())); };
  return s;
}

TargetPath aux_geodesic_path(const ModelPtr& model, const Vec& r, const Vec& q,
                             const IntegratorConfig& cfg) {
  try {
    const ModelPtr h = model->is_riemannian()
                           ? model
                           : auxiliary_riemannian(model, timelike_eigenfield(model));
    const Vec vh = local_log(*h, r, q, cfg);
    const double len = std::sqrt(vh.dot(h->metric(r) * vh));
    if (!(len > 0)) return chart_segment(*model, r, q);
    IntegratorConfig c = cfg;
    c.t_max = 1.0;
    auto path = std::make_shared<GeodesicPath>(integrate_geodesic(h, r, vh, c));
    if (path->termination != Termination::ReachedTmax) throw DomainEscape(path->termination, path->t_end);
    TargetPath s;
    s.provenance = PathKind::AuxGeodesic;
    s.length = len;
    s.point = [path, len](double t) { return path->state(t / len).x; };
    s.tangent = [path, len](double t) -> Vec { return path->state(t / len).v / len; };
    s.note = "geodesic of " + h->name();
    return s;
  } catch (const Error& e) {
    TargetPath s = chart_segment(*model, r, q);
    s.note = std::string("auxiliary geodesic unavailable (") + e.what() + "), using chart segment";
    return s;
  }
}

TargetPath polyline_path(const ManifoldModel& model, const Vec& r, const std::vector<Vec>& vertices,
                         const Vec& q) {
  std::vector<Vec> pts{r};
  for (const Vec& v : vertices) pts.push_back(pts.back() + model.chart_difference(v, pts.back()));
  pts.push_back(pts.back() + model.chart_difference(q, pts.back()));
  std::vector<double> cum{0.0};
  for (std::size_t i = 1; i < pts.size(); ++i) cum.push_back(cum.back() + (pts[i] - pts[i - 1]).norm());
  TargetPath s;
  s.provenance = PathKind::UserPolyline;
  s.length = cum.back();
  for (std::size_t i = 1; i + 1 < cum.size(); ++i)
    if (cum[i] > 0 && cum[i] < s.length && (s.kinks.empty() || cum[i] > s.kinks.back()))
      s.kinks.push_back(cum[i]);
  auto segment = [cum](double t) {
    const auto it = std::upper_bound(cum.begin(), cum.end(), t);
    std::size_t i = it == cum.begin() ? 0 : static_cast<std::size_t>(it - cum.begin()) - 1;
    i = std::min(i, cum.size() - 2);
    while (i + 1 < cum.size() - 1 && cum[i + 1] - cum[i] <= 0) ++i;
    return i;
  };
  s.point = [pts, cum, segment](double t) -> Vec {
    const std::size_t i = segment(t);
    const double w = cum[i + 1] - cum[i];
    if (w <= 0) return pts[i];
    return pts[i] + ((t - cum[i]) / w) * (pts[i + 1] - pts[i]);
  };
  s.tangent = [pts, cum, segment](double t) -> Vec {
    const std::size_t i = segment(t);
    const double w = cum[i + 1] - cum[i];
    if (w <= 0) return Vec::Zero(pts[i].size());
    return (pts[i + 1] - pts[i]) / w;
  };
  return s;
}

TargetPath with_bump(const TargetPath& base, const Vec& direction, double magnitude) {
  TargetPath s = base;
  const double len = base.length;
  s.point = [base, direction, magnitude, len](double t) -> Vec {
    return base.point(t) + magnitude * std::sin(kPi * t / len) * direction;
  };
  s.tangent = [base, direction, magnitude, len](double t) -> Vec {
    return base.tangent(t) + magnitude * (kPi / len) * std::cos(kPi * t / len) * direction;
  };
  return s;
}

Vec local_log(const ManifoldModel& model, const Vec& p, const Vec& q, const IntegratorConfig& cfg,
              const LogOptions& opts) {
  if (!model.in_chart(p)) throw OutOfChart(p);
  if (!model.in_chart(q)) throw OutOfChart(q);
  Vec v = model.chart_difference(q, p);
  double rn = std::numeric_limits<double>::infinity();
  int it = 0, damped = 0;
  for (;; ++it) {
    if (it >= opts.max_iterations) throw NoConvergence(it, rn, "iteration limit");
    if (damped > opts.max_damped_iterations)
      throw NoConvergence(it, rn, "Newton is not in its quadratic regime");
    DifferentialFrame f;
    try {
      f = dexp_matrix(model, p, v, cfg);
    } catch (const Error& e) {
      throw NoConvergence(it, rn, std::string("exp failed: ") + e.what());
    }
    const Vec r = model.chart_difference(f.endpoint, q);
    rn = r.norm();
    if (rn < opts.tol) {
      if (opts.normal_neighborhood_only) {
        if (f.min_singular_value < opts.sv_floor)
          throw NoConvergence(it, rn, "differential of exp is singular at the solution");
        std::optional<ConjugateTime> c;
        try {
          c = first_conjugate_time(model, p, v, 1.0, cfg);
        } catch (const Error& e) {
          throw NoConvergence(it, rn, std::string("ray scan failed: ") + e.what());
        }
        if (c) throw NoConvergence(it, rn, "solution lies beyond a conjugate point");
      }
      return v;
    }
    Eigen::FullPivLU<Mat> lu(f.matrix);
    if (!lu.isInvertible()) throw NoConvergence(it, rn, "singular differential");
    const Vec dv = -lu.solve(r);
    // backtracking on the residual norm
    double lambda = 1.0;
    bool improved = false;
    for (int k = 0; k < 12; ++k, lambda *= 0.5) {
      const Vec trial = v + lambda * dv;
      try {
        const ExpResult e = try_exp(model, p, trial, cfg);
        if (e.ok() && residual_norm(model, e.x, q) < rn) {
          v = trial;
          improved = true;
          if (k > 0) ++damped;
          break;
        }
      } catch (const Error&) {
      }
    }
    if (!improved) throw NoConvergence(it, rn, "no descent along the Newton direction");
  }
}

LiftOutcome lift_path(const ManifoldModel& model, const Vec& p, const TargetPath& path,
                      const Vec& v0, const ConnectConfig& cfg) {
  LiftOutcome out;
  out.p = p;
  out.provenance = path.provenance;
  out.path_length = path.length;
  const double len = path.length;
  const auto n = static_cast<Eigen::Index>(model.dim());
  out.escape_bound = cfg.escape_factor * std::max(len, 1e-12);
  out.q = path.point(len);

  Correction cur = correct(model, p, v0, path.point(0.0), cfg);
  if (!cur.ok) {
    out.status = cur.domain ? LiftStatus::DomainExit : LiftStatus::Stalled;
    out.v = v0;
    out.witness = "initial lift does not solve exp_p(v0) = sigma(0)";
    return out;
  }
  double t = 0.0;
  out.trace.push_back({0.0, cur.v, cur.residual, cur.min_sv});

  // Pseudo-arclength continuation of F(v, t) = exp_p(v) - sigma(t) = 0 in
  // z = (v, t); the unit tangent is (w, 1) / |(w, 1)| with J w = sigma'(t).
  auto tangent = [&](const Correction& c, double at) {
    Vec tau(n + 1);
    tau.head(n) = Eigen::PartialPivLU<Mat>(c.matrix).solve(path.tangent(at));
    tau[n] = 1.0;
    return Vec(tau.normalized());
  };
  Vec tau = tangent(cur, 0.0);
  double ds = cfg.initial_step * len;
  bool last_domain = false;

  while (true) {
    if (out.trace.size() > cfg.max_lift_steps) {
      out.status = LiftStatus::Stalled;
      out.witness = "lift step budget exhausted";
      break;
    }
    const double cap = std::max(cfg.max_step * len, 0.5 * cur.v.norm());
    ds = std::min(ds, cap);
    // next parameter the lift must land on exactly: a kink or the end
    const auto kink = std::upper_bound(path.kinks.begin(), path.kinks.end(), t * (1.0 + 1e-14));
    const double stop = kink == path.kinks.end() ? len : *kink;
    Correction next;
    double t_next;
    bool at_kink = false;
    if (t + ds * tau[n] >= stop - 1e-14 * len) {
      t_next = stop;
      at_kink = stop < len;
      const Vec v_pred = cur.v + ((stop - t) / tau[n]) * tau.head(n);
      next = correct(model, p, v_pred, path.point(stop), cfg);
    } else {
      Vec z(n + 1);
      z << cur.v, t;
      const Vec zp = z + ds * tau;
      next = correct_arclength(model, p, path, zp, tau, cfg);
      t_next = next.t;
    }
    Vec tau_next;
    if (next.ok) {
      tau_next = tangent(next, t_next);
      if ((!at_kink && tau_next.dot(tau) < 0.8) || !(t_next > t)) next.ok = false;  // branch jump guard
    }
    if (!next.ok) {
      last_domain = next.domain;
      ds *= 0.5;
      if (ds < cfg.min_step * len) {
        out.status = last_domain ? LiftStatus::DomainExit : LiftStatus::Stalled;
        out.witness = last_domain ? "exp_p left its domain near the lifted path"
                                  : "corrector failed at the minimum step";
        break;
      }
      continue;
    }
    t = t_next;
    cur = next;
    tau = tau_next;
    out.trace.push_back({t, cur.v, cur.residual, cur.min_sv});
    if (cur.min_sv < cfg.sv_floor) {
      out.status = LiftStatus::ConjugateHit;
      out.witness = "smallest singular value of d(exp_p) below " + format_number(cfg.sv_floor);
      break;
    }
    if (cur.v.norm() > out.escape_bound) {
      out.status = LiftStatus::EscapeWitness;
      out.witness = "lift norm exceeded " + format_number(out.escape_bound) +
                    " with the residual held below the corrector tolerance";
      break;
    }
    if (t >= len) {
      out.status = LiftStatus::Connected;
      break;
    }
    if (next.iterations <= 3) ds *= 1.5;
  }
  out.v = cur.v;
  out.residual = cur.residual;
  out.t_fail = out.status == LiftStatus::Connected ? len : t;
  if (out.status == LiftStatus::Connected && out.residual > cfg.connect_tol)
    out.status = LiftStatus::Stalled;
  return out;
}

LiftOutcome connect(const ModelPtr& model_ptr, const Vec& p, const Vec& q,
                    const ConnectConfig& cfg) {
  const ManifoldModel& model = *model_ptr;
  if (p.size() != model.dim() || q.size() != model.dim())
    throw Error("points must have " + std::to_string(model.dim()) + " components");
  if (!model.in_chart(p)) throw OutOfChart(p);
  if (!model.in_chart(q)) throw OutOfChart(q);
  cfg.integrator.validate();

  try {
    const Vec v = local_log(model, p, q, cfg.integrator, cfg.log);
    LiftOutcome out;
    out.status = LiftStatus::Connected;
    out.p = p;
    out.q = q;
    out.v = v;
    out.via_local_log = true;
    out.residual = residual_norm(model, exp_map(model, p, v, cfg.integrator), q);
    out.trace.push_back({1.0, v, out.residual, dexp_matrix(model, p, v, cfg.integrator).min_singular_value});
    return out;
  } catch (const NoConvergence&) {
  }

  // r = p, v(0) = 0
  TargetPath sigma;
  switch (cfg.path) {
    case PathKind::ChartSegment: sigma = chart_segment(model, p, q); break;
    case PathKind::AuxGeodesic: sigma = aux_geodesic_path(model_ptr, p, q, cfg.integrator); break;
    case PathKind::UserPolyline: sigma = polyline_path(model, p, cfg.polyline, q); break;
  }
  const Vec zero = Vec::Zero(model.dim());
  if (!(sigma.length > 0)) {
    LiftOutcome out;
    out.status = LiftStatus::Connected;
    out.p = p;
    out.q = q;
    out.v = zero;
    return out;
  }

  LiftOutcome first = lift_path(model, p, sigma, zero, cfg);
  first.q = q;
  if (first.status != LiftStatus::ConjugateHit) return first;

  const Vec chord = model.chart_difference(q, p);
  for (int k = 0; k < cfg.max_retries; ++k) {
    const Vec dir = bump_direction(chord, k);
    const double mag = cfg.bump_factor * sigma.length * (1 + k / 2);
    LiftOutcome retry = lift_path(model, p, with_bump(sigma, dir, mag), zero, cfg);
    first.detours.push_back({k + 1, dir, mag, retry.status, retry.t_fail});
    if (retry.status == LiftStatus::Connected || retry.status == LiftStatus::EscapeWitness) {
      retry.q = q;
      retry.detours = first.detours;
      return retry;
    }
  }
  first.witness += "; reroute exhausted after " + std::to_string(cfg.max_retries) +
                   " detours: either the conjugate image is not closed or its complement "
                   "is disconnected, or the detour schedule missed a route";
  return first;
}

ConnectReport connect_report(const ManifoldModel& model, const LiftOutcome& o,
                             const ConjugateLocusSample* locus) {
  ConnectReport r;
  auto& j = r.json;
  j["status"] = to_string(o.status);
  j["v"] = to_json(o.v);
  j["p"] = to_json(o.p);
  j["q"] = to_json(o.q);
  j["residual"] = o.residual;
  j["via_local_log"] = o.via_local_log;
  j["path"] = to_string(o.provenance);
  j["path_length"] = o.path_length;
  std::ostringstream t;
  t << "status: " << to_string(o.status) << "\n";
  t << "v: " << join_numbers(o.v, ", ") << "\n";
  t << "residual: " << format_number(o.residual) << "\n";

  if (o.status == LiftStatus::Connected) {
    const double e = o.v.dot(model.metric(o.p) * o.v);
    const char* cls = to_string(causal_class(model, o.p, o.v));
    j["length"] = std::sqrt(std::abs(e));
    j["energy"] = e;
    j["energy_class"] = cls;
    t << "geodesic length: " << format_number(std::sqrt(std::abs(e))) << " (" << cls << ")\n";
  } else {
    j["witness"] = o.witness;
    j["t_fail"] = o.t_fail;
    t << "witness: " << o.witness << "\n";
    if (o.status == LiftStatus::EscapeWitness) {
      auto norms = nlohmann::ordered_json::array();
      const std::size_t from = o.trace.size() > 16 ? o.trace.size() - 16 : 0;
      t << "escaping lift norms:";
      for (std::size_t i = from; i < o.trace.size(); ++i) {
        norms.push_back(o.trace[i].v.norm());
        t << " " << format_number(o.trace[i].v.norm());
      }
      t << "\n";
      j["escape_bound"] = o.escape_bound;
      j["lift_norms"] = norms;
    }
    auto detours = nlohmann::ordered_json::array();
    for (const auto& d : o.detours) {
      nlohmann::ordered_json dj;
      dj["attempt"] = d.attempt;
      dj["direction"] = to_json(d.direction);
      dj["magnitude"] = d.magnitude;
      dj["status"] = to_string(d.status);
      dj["t_fail"] = d.t_fail;
      detours.push_back(dj);
      t << "detour " << d.attempt << ": magnitude " << format_number(d.magnitude) << " -> "
        << to_string(d.status) << "\n";
    }
    j["detours"] = detours;
  }
  auto trace = nlohmann::ordered_json::array();
  for (const auto& s : o.trace) {
    nlohmann::ordered_json sj;
    sj["t"] = s.t;
    sj["v"] = to_json(s.v);
    sj["residual"] = s.residual;
    sj["min_singular_value"] = s.min_singular_value;
    trace.push_back(sj);
  }
  j["trace"] = trace;
  if (locus) {
    const int cq = locus->component_of(o.q);
    const int cp = locus->component_of(o.p);
    j["locus_component_q"] = cq;
    j["locus_component_p"] = cp;
    j["locus_components"] = locus->ww.complement_components;
    j["locus_caveat"] = locus->ww.caveat;
    t << "sampled complement component of q: " << cq << " (p: " << cp << ", of "
      << locus->ww.complement_components << ")\n";
    t << locus->ww.caveat << "\n";
  }
  r.text = t.str();
  return r;
}

}  // namespace geoconn
