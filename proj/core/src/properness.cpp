#include "geoconn/properness.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "geoconn/json_format.hpp"
#include "geoconn/parallel.hpp"

namespace geoconn {
namespace {

constexpr double kPi = std::numbers::pi;

// Parameters where |lift(s)| hits log-spaced targets up to 1.01 * cap;
// |lift| is assumed nondecreasing in s.
std::vector<double> make_schedule(const std::function<Vec(double)>& lift, const Vec& p,
                                  const ProbeConfig& cfg) {
  const double n0 = lift_norm(p, lift(0.0), cfg);
  const double first = std::max(cfg.start_norm, n0 * 1.001);
  const double last = 1.01 * cfg.norm_cap;
  const std::size_t m = std::max<std::size_t>(2, cfg.samples);
  std::vector<double> out;
  double s_hi = 1.0;
  for (std::size_t k = 0; k < m; ++k) {
    const double target =
        first * std::pow(last / first, static_cast<double>(k) / static_cast<double>(m - 1));
    double lo = out.empty() ? 0.0 : out.back();
    while (lift_norm(p, lift(s_hi), cfg) < target) s_hi *= 2;
    double hi = s_hi;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
      const double mid = 0.5 * (lo + hi);
      (lift_norm(p, lift(mid), cfg) < target ? lo : hi) = mid;
    }
    out.push_back(hi);
  }
  return out;
}

ProbeCurve make_curve(std::string id, std::function<Vec(double)> lift, const Vec& p,
                      const ProbeConfig& cfg, std::optional<Vec> radial = std::nullopt) {
  ProbeCurve c{std::move(id), std::move(lift), {}, std::move(radial)};
  c.schedule = make_schedule(c.lift, p, cfg);
  return c;
}

void require_lorentzian(const ManifoldModel& model) {
  const auto& sig = model.signature();
  if (std::count(sig.begin(), sig.end(), -1) != 1)
    throw ConfigError("hyperboloid sweeps need a Lorentzian model");
}

double sup_distance(const Vec& a, const Vec& b) { return (a - b).lpNorm<Eigen::Infinity>(); }

int box_index(double extent, double base) {
  if (extent <= base) return 0;
  return static_cast<int>(std::ceil(std::log2(extent / base) - 1e-12));
}

bool in_box(const ManifoldModel& model, Vec x, const Vec& lo, const Vec& hi) {
  for (const auto& pc : model.periodic()) {
    double& c = x[pc.index];
    c = lo[pc.index] + std::fmod(std::fmod(c - lo[pc.index], pc.period) + pc.period, pc.period);
  }
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (!(x[i] >= lo[i] && x[i] <= hi[i])) return false;
  return true;
}

}  // namespace

const char* to_string(ProbeSummary s) noexcept {
  return s == ProbeSummary::Violation ? "Violation" : "ConsistentWithWeakProperness";
}

bool probe_uses_oracle(const ManifoldModel& model, const ProbeConfig& cfg) {
  switch (cfg.evaluation) {
    case ExpEvaluation::Integrate: return false;
    case ExpEvaluation::Oracle:
      if (!model.has_oracle()) throw NoOracle(model.name());
      return true;
    case ExpEvaluation::Auto: break;
  }
  return model.has_oracle();
}

double lift_norm(const Vec& p, const Vec& a, const ProbeConfig& cfg) {
  if (cfg.lift_metric) return std::sqrt(std::max(0.0, a.dot(cfg.lift_metric->metric(p) * a)));
  return a.norm();
}

ProbeCurveFamily radial_family(const ManifoldModel& model, const Vec& p, std::size_t count,
                               const ProbeConfig& cfg) {
  ProbeCurveFamily fam{"radial", {}};
  const Mat F = orthonormal_frame(model, p);
  const int n = model.dim();
  std::vector<Vec> dirs;
  if (model.is_riemannian()) {
    for (std::size_t k = 0; k < count; ++k) {
      Vec w = Vec::Zero(n);
      const double a = (static_cast<double>(k) + 0.5) * 2 * kPi / static_cast<double>(count);
      w[0] = std::cos(a);
      if (n > 1) w[1] = std::sin(a);
      dirs.push_back(F * w);
    }
  } else {
    // spacelike, timelike and null rays in the first and last frame axes
    const Vec es = F.col(0), et = F.col(n - 1);
    for (std::size_t k = 0; k < count; ++k) {
      const double a = -2.0 + 4.0 * (static_cast<double>(k) + 0.5) / static_cast<double>(count);
      const double sg = k % 2 == 0 ? 1.0 : -1.0;
      switch (k % 3) {
        case 0: dirs.push_back(sg * (std::cosh(a) * es + std::sinh(a) * et)); break;
        case 1: dirs.push_back(std::sinh(a) * es + sg * std::cosh(a) * et); break;
        default: dirs.push_back((es + sg * et).normalized()); break;
      }
    }
  }
  for (std::size_t k = 0; k < dirs.size(); ++k) {
    const Vec u = dirs[k];
    fam.curves.push_back(make_curve("radial-" + std::to_string(k),
                                    [u](double s) -> Vec { return s * u; }, p, cfg, u));
  }
  return fam;
}

ProbeCurveFamily spiral_family(const ManifoldModel& model, const Vec& p, std::size_t count,
                               const ProbeConfig& cfg) {
  ProbeCurveFamily fam{"spiral", {}};
  const Mat F = orthonormal_frame(model, p);
  if (model.dim() < 2) throw ConfigError("spiral family needs dimension >= 2");
  const Vec e1 = F.col(0), e2 = F.col(1);
  for (std::size_t k = 0; k < count; ++k) {
    const double a0 = (static_cast<double>(k) + 0.5) * 2 * kPi / static_cast<double>(count);
    fam.curves.push_back(make_curve("spiral-" + std::to_string(k),
                                    [e1, e2, a0](double s) -> Vec {
                                      const double a = a0 + std::log1p(s);
                                      return s * (std::cos(a) * e1 + std::sin(a) * e2);
                                    },
                                    p, cfg));
  }
  return fam;
}

ProbeCurveFamily hyperboloid_sweep(const ManifoldModel& model, const Vec& p, double c,
                                   CausalClass causal, const ProbeConfig& cfg) {
  require_lorentzian(model);
  const int n = model.dim();
  const Mat F = orthonormal_frame(model, p);
  const Vec et = F.col(n - 1);
  std::vector<Vec> ws;
  for (int i = 0; i < n - 1; ++i) {
    ws.push_back(F.col(i));
    ws.push_back(-F.col(i));
  }
  ProbeCurveFamily fam{std::string("hyperboloid-") + to_string(causal), {}};
  int id = 0;
  for (const Vec& w : ws) {
    for (double sg : {1.0, -1.0}) {
      std::function<Vec(double)> lift;
      if (causal == CausalClass::Spacelike) {
        lift = [c, w, et, sg](double a) -> Vec {
          return c * (std::cosh(a) * w + std::sinh(sg * a) * et);
        };
      } else if (causal == CausalClass::Timelike) {
        lift = [c, w, et, sg](double a) -> Vec {
          return c * (std::sinh(a) * w + sg * std::cosh(a) * et);
        };
      } else {
        const Vec u = (w + sg * et).normalized();
        fam.curves.push_back(make_curve("null-" + std::to_string(id++),
                                        [u](double s) -> Vec { return s * u; }, p, cfg, u));
        continue;
      }
      fam.curves.push_back(make_curve(fam.name + "-" + std::to_string(id++), lift, p, cfg));
    }
  }
  return fam;
}

ProbeCurveFamily polyline_family(const Vec& p, const std::vector<Vec>& vertices,
                                 const ProbeConfig& cfg) {
  if (vertices.empty()) throw ConfigError("polyline family needs at least one vertex");
  std::vector<Vec> pts{Vec::Zero(vertices.front().size())};
  for (const Vec& v : vertices) pts.push_back(v);
  const Vec tail = pts.back() - pts[pts.size() - 2];
  if (tail.norm() == 0) throw ConfigError("polyline family: last edge has zero length");
  auto lift = [pts, tail](double s) -> Vec {
    const double edges = static_cast<double>(pts.size() - 1);
    if (s < edges) {
      const auto i = static_cast<std::size_t>(s);
      return pts[i] + (s - static_cast<double>(i)) * (pts[i + 1] - pts[i]);
    }
    return pts.back() + (s - edges) * tail;
  };
  ProbeCurveFamily fam{"polyline", {}};
  fam.curves.push_back(make_curve("polyline-0", lift, p, cfg));
  return fam;
}

ProbeRow probe_curve(const ManifoldModel& model, const Vec& p, const ProbeCurve& curve,
                     const ProbeConfig& cfg) {
  ProbeRow row;
  row.curve = curve.id;
  std::vector<Vec> images;
  std::vector<double> norms;

  if (probe_uses_oracle(model, cfg)) {
    for (double s : curve.schedule) {
      const Vec a = curve.lift(s);
      images.push_back(model.oracle_embedded(p, a, 1.0).first);
      norms.push_back(lift_norm(p, a, cfg));
    }
  } else if (curve.radial) {
    IntegratorConfig ic = cfg.integrator;
    ic.t_max = curve.schedule.back();
    const ModelPtr alias(std::shared_ptr<const ManifoldModel>{}, &model);
    const GeodesicPath path = integrate_geodesic(alias, p, *curve.radial, ic);
    for (double s : curve.schedule) {
      if (path.termination != Termination::ReachedTmax && s > path.t_end) {
        row.domain_escape = true;
        row.escape = std::string(to_string(path.termination)) + " at s = " + format_number(path.t_end);
        break;
      }
      images.push_back(model.position(path.state(s).x));
      norms.push_back(lift_norm(p, curve.lift(s), cfg));
    }
  } else {
    for (double s : curve.schedule) {
      const Vec a = curve.lift(s);
      ExpResult e;
      try {
        e = try_exp(model, p, a, cfg.integrator);
      } catch (const StepSizeUnderflow& err) {
        e.termination = Termination::BlowUp;
        e.t = err.time();
      }
      if (!e.ok()) {
        row.domain_escape = true;
        row.escape = std::string(to_string(e.termination)) + " at s = " + format_number(s);
        break;
      }
      images.push_back(model.position(e.x));
      norms.push_back(lift_norm(p, a, cfg));
    }
  }

  row.samples = images.size();
  if (images.empty()) return row;
  row.max_lift_norm = *std::max_element(norms.begin(), norms.end());
  row.lift_bounded = row.max_lift_norm <= cfg.norm_cap;
  row.image_limit = images.back();
  std::size_t tail = 0;
  for (std::size_t k = 0; k < images.size(); ++k) {
    if (norms[k] < cfg.norm_cap / 4) continue;
    ++tail;
    row.divergence = std::max(row.divergence, (images[k] - images.back()).norm());
  }
  row.image_convergent = !row.domain_escape && tail >= 3 && row.divergence <= cfg.cauchy_tol;
  return row;
}

ProbeVerdict weak_properness_probe(const ManifoldModel& model, const Vec& p,
                                   const ProbeCurveFamily& family, const ProbeConfig& cfg) {
  if (!model.in_chart(p)) throw OutOfChart(p);
  ProbeVerdict v;
  v.family = family.name;
  v.oracle = probe_uses_oracle(model, cfg);
  v.rows = parallel_map(family.curves.size(),
                        [&](std::size_t i) { return probe_curve(model, p, family.curves[i], cfg); });
  for (std::size_t i = 0; i < v.rows.size(); ++i) {
    if (v.rows[i].image_convergent && !v.rows[i].lift_bounded) {
      v.summary = ProbeSummary::Violation;
      v.witness = i;
      break;
    }
  }
  return v;
}

std::vector<Tangent> random_seeds(const ManifoldModel& model, std::size_t count,
                                  std::uint64_t seed, double extent) {
  const auto pts = sample_chart_points(model, count, seed, extent);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> nd;
  std::vector<Tangent> out;
  for (const Vec& x : pts) {
    Vec v(model.dim());
    for (int i = 0; i < model.dim(); ++i) v[i] = nd(rng);
    v.normalize();
    if (model.is_riemannian()) v /= std::sqrt(inner(model, x, v, v));
    out.push_back({x, v});
  }
  return out;
}

DisprisonReport disprisonment_probe(const ManifoldModel& model, const std::vector<Tangent>& seeds,
                                    const DisprisonConfig& cfg) {
  cfg.integrator.validate();
  const ModelPtr alias(std::shared_ptr<const ManifoldModel>{}, &model);
  const double T = cfg.integrator.t_max;
  DisprisonReport rep;
  rep.rows = parallel_map(seeds.size(), [&](std::size_t i) {
    const Tangent& sd = seeds[i];
    DisprisonRow row;
    row.seed = sd;
    const Vec center = model.position(sd.base);
    try {
      for (int dir : {1, -1}) {
        const GeodesicPath path = integrate_geodesic(alias, sd.base, dir * sd.vec, cfg.integrator);
        (dir > 0 ? row.forward : row.backward) = path.termination;
        (dir > 0 ? row.t_forward : row.t_backward) = path.t_end;
        constexpr int kSamples = 256;
        for (int k = 0; k <= kSamples; ++k) {
          const double t = path.t_end * k / kSamples;
          const double d = sup_distance(model.position(path.state(t).x), center);
          if (t <= T / 2) row.extent_half = std::max(row.extent_half, d);
          row.extent_full = std::max(row.extent_full, d);
        }
        for (const auto& nd : path.nodes) {
          if (path.termination == Termination::ChartExit && &nd == &path.nodes.back()) continue;
          const double d = sup_distance(model.position(nd.x), center);
          if (nd.t <= T / 2) row.extent_half = std::max(row.extent_half, d);
          row.extent_full = std::max(row.extent_full, d);
        }
      }
    } catch (const StepSizeUnderflow& e) {
      row.error = e.what();
      row.forward = Termination::BlowUp;
    }
    row.box_half = box_index(row.extent_half, cfg.base_radius);
    row.box_full = box_index(row.extent_full, cfg.base_radius);
    row.exits = row.forward != Termination::ReachedTmax || row.backward != Termination::ReachedTmax ||
                row.box_full > row.box_half;
    return row;
  });
  for (const auto& r : rep.rows) {
    if (r.exits) ++rep.exiting;
    if (r.forward == Termination::BlowUp || r.backward == Termination::BlowUp) ++rep.blowups;
  }
  rep.verdict = rep.exiting == rep.rows.size() ? "disprisoned (sampled)" : "imprisoned up to horizon";
  return rep;
}

PseudoconvexReport pseudoconvexity_probe(const ManifoldModel& model, const Vec& k_lower,
                                         const Vec& k_upper, const PseudoconvexConfig& cfg) {
  cfg.integrator.validate();
  const int n = model.dim();
  if (k_lower.size() != n || k_upper.size() != n || !(k_lower.array() < k_upper.array()).all())
    throw ConfigError("K must be a nonempty box with one bound pair per coordinate");
  const ModelPtr alias(std::shared_ptr<const ManifoldModel>{}, &model);
  PseudoconvexReport rep;
  rep.k_lower = k_lower;
  rep.k_upper = k_upper;

  const std::size_t total = 4 * cfg.sample_count;
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::normal_distribution<double> nd;
  std::vector<Tangent> shots;
  while (shots.size() < total) {
    Vec x(n), v(n);
    for (int i = 0; i < n; ++i) x[i] = k_lower[i] + (k_upper[i] - k_lower[i]) * uni(rng);
    for (int i = 0; i < n; ++i) v[i] = nd(rng);
    if (!model.in_chart(x)) continue;
    v.normalize();
    if (model.is_riemannian()) v /= std::sqrt(inner(model, x, v, v));
    shots.push_back({x, v});
  }

  struct Segment {
    bool returned = false;
    Vec lo, hi;
  };
  const auto segs = parallel_map(total, [&](std::size_t i) {
    Segment s;
    GeodesicPath path;
    try {
      path = integrate_geodesic(alias, shots[i].base, shots[i].vec, cfg.integrator);
    } catch (const Error&) {
      return s;
    }
    std::vector<Vec> pos;
    double last_return = -1;
    bool left = false;
    const std::size_t m = cfg.path_samples;
    for (std::size_t k = 0; k <= m; ++k) {
      const double t = path.t_end * static_cast<double>(k) / static_cast<double>(m);
      const Vec x = path.state(t).x;
      if (path.termination == Termination::ChartExit && k == m) break;
      pos.push_back(model.position(x));
      const bool inside = in_box(model, x, k_lower, k_upper);
      if (!inside) left = true;
      if (inside && (left || k > 0)) last_return = static_cast<double>(k);
    }
    if (last_return < 0) return s;
    s.returned = true;
    const auto end = static_cast<std::size_t>(last_return);
    s.lo = pos[0];
    s.hi = pos[0];
    for (std::size_t k = 0; k <= end; ++k) {
      s.lo = s.lo.cwiseMin(pos[k]);
      s.hi = s.hi.cwiseMax(pos[k]);
    }
    return s;
  });

  std::vector<double> widths;
  for (std::size_t level = 0; level < 3; ++level) {
    const std::size_t count = cfg.sample_count << level;
    Vec lo, hi;
    std::size_t used = 0;
    for (std::size_t i = 0; i < count; ++i) {
      if (!segs[i].returned) continue;
      ++used;
      lo = lo.size() ? Vec(lo.cwiseMin(segs[i].lo)) : segs[i].lo;
      hi = hi.size() ? Vec(hi.cwiseMax(segs[i].hi)) : segs[i].hi;
    }
    rep.counts.push_back(count);
    if (!used) {
      lo = model.position(0.5 * (k_lower + k_upper));
      hi = lo;
    }
    rep.kstar_lower.push_back(lo);
    rep.kstar_upper.push_back(hi);
    widths.push_back((hi - lo).maxCoeff());
    if (level == 2) rep.segments = used;
  }
  auto grows = [&](double a, double b) { return b > a * (1.0 + cfg.growth_tol) + 1e-12; };
  rep.unbounded = grows(widths[0], widths[1]) && grows(widths[1], widths[2]);
  rep.verdict = rep.unbounded ? "Unbounded" : "Bounded";
  return rep;
}

std::vector<Tangent> random_segments(const ManifoldModel& model, std::size_t count,
                                     std::uint64_t seed, double extent, double speed) {
  const auto pts = sample_chart_points(model, count, seed, extent);
  std::mt19937_64 rng(seed ^ 0xc0ffeeULL);
  std::normal_distribution<double> nd;
  std::vector<Tangent> out;
  for (const Vec& x : pts) {
    Vec v(model.dim());
    for (int i = 0; i < model.dim(); ++i) v[i] = nd(rng) * speed;
    out.push_back({x, v});
  }
  return out;
}

ConvexReport convex_check(const ManifoldModel& model, const ScalarField& f,
                          const std::vector<Tangent>& segments, const ConvexConfig& cfg) {
  const ModelPtr alias(std::shared_ptr<const ManifoldModel>{}, &model);
  IntegratorConfig ic = cfg.integrator;
  ic.t_max = 1.0;
  const double h = cfg.step;
  const std::size_t m = std::max<std::size_t>(2, cfg.nodes);

  struct Partial {
    ConvexRow row;
    double fmax = 0;
  };
  const auto parts = parallel_map(segments.size(), [&](std::size_t idx) {
    Partial out;
    ConvexRow& row = out.row;
    row.index = idx;
    const Tangent& sg = segments[idx];
    try {
      const GeodesicPath path = integrate_geodesic(alias, sg.base, sg.vec, ic);
      if (path.termination != Termination::ReachedTmax) throw DomainEscape(path.termination, path.t_end);
      row.speed2 = inner(model, sg.base, sg.vec, sg.vec);
      std::vector<double> fv(m + 1);
      row.min_second_difference = std::numeric_limits<double>::infinity();
      row.bound_applies = true;
      for (std::size_t j = 0; j <= m; ++j) {
        const PathNode nd = path.state(static_cast<double>(j) / static_cast<double>(m));
        fv[j] = f.eval(nd.x);
        out.fmax = std::max(out.fmax, std::abs(fv[j]));
        if (fv[j] < 0) row.bound_applies = false;
        if (j == 0 || j == m) continue;
        const Vec xp = exp_map(model, nd.x, h * nd.v, ic);
        const Vec xm = exp_map(model, nd.x, -h * nd.v, ic);
        const double fp = f.eval(xp), fm = f.eval(xm);
        out.fmax = std::max({out.fmax, std::abs(fp), std::abs(fm)});
        const double sd = (fp - 2 * fv[j] + fm) / (h * h);
        if (sd < row.min_second_difference) {
          row.min_second_difference = sd;
          row.t_worst = static_cast<double>(j) / static_cast<double>(m);
        }
      }
      row.endpoint_max = std::max(fv.front(), fv.back());
      row.interior_max = *std::max_element(fv.begin() + 1, fv.end() - 1);
    } catch (const Error& e) {
      row.error = e.what();
    }
    return out;
  });

  ConvexReport rep;
  double fmax = 0;
  for (const auto& pt : parts) fmax = std::max(fmax, pt.fmax);
  rep.tol = cfg.rel_tol * std::max(1.0, fmax);
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& pt : parts) {
    ConvexRow row = pt.row;
    if (row.error.empty()) {
      row.second_ok = row.min_second_difference >= -rep.tol;
      row.bound_ok = !row.bound_applies || row.interior_max <= row.endpoint_max + rep.tol;
      if (row.min_second_difference < worst) {
        worst = row.min_second_difference;
        rep.worst = rep.rows.size();
      }
    } else {
      row.second_ok = row.bound_ok = false;
    }
    rep.pass = rep.pass && row.second_ok && row.bound_ok;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

GaussReport gauss_lemma_check(const ManifoldModel& model, const Vec& p, const GaussConfig& cfg) {
  if (!model.is_riemannian()) throw ConfigError("the Gauss lemma check needs a Riemannian model");
  if (model.dim() < 2) throw ConfigError("the Gauss lemma check needs dimension >= 2");
  if (!model.in_chart(p)) throw OutOfChart(p);
  const Mat F = orthonormal_frame(model, p);
  const Vec e1 = F.col(0), e2 = F.col(1);
  const double d = cfg.fd_step;
  auto phi = [&](double r, double s) {
    return exp_map(model, p, r * (std::cos(s) * e1 + std::sin(s) * e2), cfg.integrator);
  };
  const std::size_t R = cfg.radial, S = cfg.angular;
  GaussReport rep;
  rep.rows = parallel_map(R * S, [&](std::size_t idx) {
    GaussRow row;
    row.r = cfg.r_max * (static_cast<double>(idx / S) + 0.5) / static_cast<double>(R);
    row.s = 2 * kPi * (static_cast<double>(idx % S) + 0.5) / static_cast<double>(S);
    try {
      const Vec x = phi(row.r, row.s);
      const Vec dr = model.chart_difference(phi(row.r + d, row.s), phi(row.r - d, row.s)) / (2 * d);
      const Vec ds = model.chart_difference(phi(row.r, row.s + d), phi(row.r, row.s - d)) / (2 * d);
      const Mat g = metric_eval(model, x);
      row.radial_norm = dr.dot(g * dr);
      row.cross = dr.dot(g * ds);
    } catch (const Error&) {
      row.skipped = true;
    }
    return row;
  });
  for (const auto& row : rep.rows) {
    if (row.skipped) {
      ++rep.skipped;
      continue;
    }
    rep.max_radial_deviation = std::max(rep.max_radial_deviation, std::abs(row.radial_norm - 1));
    rep.max_cross = std::max(rep.max_cross, std::abs(row.cross));
  }
  rep.pass = rep.max_radial_deviation <= cfg.tol && rep.max_cross <= cfg.tol;
  return rep;
}

}  // namespace geoconn
