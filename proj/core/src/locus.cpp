#include "geoconn/locus.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <random>

#include "geoconn/jacobi.hpp"
#include "geoconn/parallel.hpp"

namespace geoconn {
namespace {

constexpr double kPi = std::numbers::pi;

// Unit vectors in R^m: circle angles with half-step offset for m = 2,
// Fibonacci lattice for m = 3, seeded Gaussian directions beyond.
std::vector<Vec> sphere_points(int m, std::size_t count) {
  std::vector<Vec> out;
  if (m == 1) {
    out.push_back(Vec::Constant(1, 1.0));
    out.push_back(Vec::Constant(1, -1.0));
    return out;
  }
  for (std::size_t k = 0; k < count; ++k) {
    Vec w(m);
    if (m == 2) {
      const double a = (static_cast<double>(k) + 0.5) * 2 * kPi / static_cast<double>(count);
      w << std::cos(a), std::sin(a);
    } else if (m == 3) {
      const double golden = kPi * (3.0 - std::sqrt(5.0));
      const double z = 1.0 - 2.0 * (static_cast<double>(k) + 0.5) / static_cast<double>(count);
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double a = golden * static_cast<double>(k);
      w << r * std::cos(a), r * std::sin(a), z;
    }
    out.push_back(w);
  }
  if (m > 3) {
    std::mt19937_64 rng(0xd1ec7u);
    std::normal_distribution<double> nd;
    for (auto& w : out) {
      for (int i = 0; i < m; ++i) w[i] = nd(rng);
      w.normalize();
    }
  }
  return out;
}

std::vector<double> rapidities(std::size_t count, bool symmetric) {
  std::vector<double> a(std::max<std::size_t>(1, count));
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double s = (static_cast<double>(j) + 0.5) / static_cast<double>(a.size());
    a[j] = symmetric ? -2.0 + 4.0 * s : 2.0 * s;
  }
  return a;
}

ConjugateRay trace_ray(const ManifoldModel& model, const Vec& p, const Vec& u, CausalClass c,
                       std::size_t index, double t_max, const IntegratorConfig& cfg) {
  ConjugateRay ray;
  ray.index = index;
  ray.u = u;
  ray.causal = c;
  try {
    if (auto hit = first_conjugate_time(model, p, u, t_max, cfg)) {
      ray.status = RayStatus::Conjugate;
      ray.t_star = hit->t_star;
      ray.point = hit->point;
    } else {
      ray.status = RayStatus::None;
    }
  } catch (const DomainEscape& e) {
    ray.status = RayStatus::Escape;
    ray.escape = e.reason();
    ray.escape_time = e.time();
  } catch (const Error& e) {
    ray.status = RayStatus::Error;
    ray.error = e.what();
  }
  return ray;
}

std::vector<ConjugateRay> trace_grid(const ManifoldModel& model, const Vec& p,
                                     const DirectionGrid& grid, double t_max,
                                     const IntegratorConfig& cfg) {
  return parallel_map(grid.directions.size(), [&](std::size_t i) {
    return trace_ray(model, p, grid.directions[i], grid.classes[i], i, t_max, cfg);
  });
}

std::vector<Vec> conjugate_points(const std::vector<ConjugateRay>& rays) {
  std::vector<Vec> pts;
  for (const auto& r : rays)
    if (r.status == RayStatus::Conjugate) pts.push_back(r.point);
  return pts;
}

}  // namespace

const char* to_string(RayStatus s) noexcept {
  switch (s) {
    case RayStatus::Conjugate: return "conjugate";
    case RayStatus::None: return "none";
    case RayStatus::Escape: return "escape";
    case RayStatus::Error: return "error";
  }
  return "?";
}

const std::string& locus_caveat() {
  static const std::string s =
      "sampled locus: a finite sample cannot distinguish Conj(p) from its closure; "
      "closedness and complement connectivity are sampled evidence, not proof";
  return s;
}

DirectionGrid direction_grid(const ManifoldModel& model, const Vec& p, std::size_t count,
                             std::optional<CausalClass> only) {
  const int n = model.dim();
  const auto& sig = model.signature();
  const auto negatives = std::count(sig.begin(), sig.end(), -1);
  if (negatives > 1) throw ConfigError("direction grids support index 0 or 1 only");
  if (count == 0) throw ConfigError("direction grid needs at least one direction");
  const Mat F = orthonormal_frame(model, p);
  DirectionGrid grid;
  auto add = [&](const Vec& u, CausalClass c) {
    grid.directions.push_back(c == CausalClass::Null ? Vec(u / u.norm()) : u);
    grid.classes.push_back(c);
  };

  if (negatives == 0) {
    if (only && *only != CausalClass::Spacelike) return grid;
    for (const Vec& w : sphere_points(n, count)) add(F * w, CausalClass::Spacelike);
    grid.description = std::to_string(grid.directions.size()) + " unit directions";
    return grid;
  }

  const Mat S = F.leftCols(n - 1);
  const Vec et = F.col(n - 1);
  const bool planar = n == 2;
  const std::size_t nw = planar ? 2 : std::max<std::size_t>(2, (count + 3) / 4);
  const std::vector<Vec> ws = sphere_points(n - 1, nw);
  const std::size_t na = planar ? std::max<std::size_t>(1, count / 2) : 4;

  if (!only || *only == CausalClass::Spacelike) {
    for (const Vec& w : ws)
      for (double a : rapidities(na, true))
        add(std::cosh(a) * (S * w) + std::sinh(a) * et, CausalClass::Spacelike);
  }
  if (!only || *only == CausalClass::Timelike) {
    const Vec ws0 = S * ws.front();
    for (double sgn : {1.0, -1.0}) {
      if (planar) {
        for (double a : rapidities(na, true))
          add(std::sinh(a) * ws0 + sgn * std::cosh(a) * et, CausalClass::Timelike);
      } else {
        for (const Vec& w : ws)
          for (double a : rapidities(na / 2, false))
            add(std::sinh(a) * (S * w) + sgn * std::cosh(a) * et, CausalClass::Timelike);
      }
    }
  }
  if (!only || *only == CausalClass::Null) {
    for (const Vec& w : ws)
      for (double sgn : {1.0, -1.0}) add(S * w + sgn * et, CausalClass::Null);
  }
  grid.description = std::to_string(grid.directions.size()) + " directions (" +
                     (only ? std::string(to_string(*only)) : std::string("all causal classes")) +
                     ")";
  return grid;
}

std::vector<std::size_t> cluster_representatives(const std::vector<Vec>& points, double radius) {
  std::vector<std::size_t> reps;
  for (std::size_t i = 0; i < points.size(); ++i) {
    bool found = false;
    for (std::size_t r : reps) {
      if ((points[i] - points[r]).norm() <= radius) {
        found = true;
        break;
      }
    }
    if (!found) reps.push_back(i);
  }
  return reps;
}

int ConjugateLocusSample::component_of(const Vec& x) const {
  if (flood_labels.empty()) return -1;
  const auto n = flood_lower.size();
  std::size_t idx = 0, stride = 1;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double w = flood_upper[i] - flood_lower[i];
    double s = (x[i] - flood_lower[i]) / w;
    if (flood_periodic[static_cast<std::size_t>(i)]) s -= std::floor(s);
    if (s < 0.0 || s >= 1.0) return -1;
    const auto k = std::min(flood_resolution - 1, static_cast<std::size_t>(s * static_cast<double>(flood_resolution)));
    idx += k * stride;
    stride *= flood_resolution;
  }
  return flood_labels[idx];
}

ConjugateLocusSample conjugate_locus_sample(const ModelPtr& model_ptr, const Vec& p,
                                            const GridSpec& spec, double t_max,
                                            const IntegratorConfig& cfg,
                                            const LocusOptions& opts) {
  const ManifoldModel& model = *model_ptr;
  if (!model.in_chart(p)) throw OutOfChart(p);
  ConjugateLocusSample out;
  out.p = p;
  out.t_max = t_max;
  out.ww.caveat = locus_caveat();

  const std::size_t levels = std::max<std::size_t>(1, opts.refine) + 1;
  for (std::size_t level = 0; level < levels; ++level) {
    const std::size_t count = spec.count << level;
    const DirectionGrid grid = direction_grid(model, p, count, spec.causal);
    std::vector<ConjugateRay> rays = trace_grid(model, p, grid, t_max, cfg);
    const std::vector<Vec> pts = conjugate_points(rays);
    std::vector<Vec> ambient;
    ambient.reserve(pts.size());
    for (const Vec& x : pts) ambient.push_back(model.position(x));
    const auto reps = cluster_representatives(ambient, opts.cluster_radius);
    out.ww.grid_sizes.push_back(grid.directions.size());
    out.ww.cluster_counts.push_back(reps.size());
    if (level == 0) {
      out.grid_description = grid.description;
      out.rays = std::move(rays);
      for (std::size_t r : reps) {
        out.clusters.push_back(pts[r]);
        out.cluster_points.push_back(ambient[r]);
      }
    }
  }
  out.ww.closedness_stable =
      std::all_of(out.ww.cluster_counts.begin(), out.ww.cluster_counts.end(),
                  [&](std::size_t c) { return c == out.ww.cluster_counts.front(); });

  // Flood fill of a chart grid minus balls around the sampled locus.
  const int n = model.dim();
  std::size_t res = opts.flood_resolution;
  if (res == 0) {
    res = n == 1 ? 512 : n == 2 ? 96 : n == 3 ? 32
        : std::max<std::size_t>(4, static_cast<std::size_t>(std::pow(2e5, 1.0 / n)));
  }
  const std::vector<Vec> locus = conjugate_points(out.rays);
  double reach = 0.0;
  for (const Vec& x : locus) reach = std::max(reach, model.chart_difference(x, p).lpNorm<Eigen::Infinity>());
  const double extent = std::max(opts.extent, 1.25 * reach);

  Vec lo(n), hi(n);
  std::vector<bool> periodic(static_cast<std::size_t>(n), false);
  for (const auto& pc : model.periodic()) periodic[static_cast<std::size_t>(pc.index)] = true;
  for (int i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    if (periodic[ui]) {
      double period = 0;
      for (const auto& pc : model.periodic())
        if (pc.index == i) period = pc.period;
      lo[i] = p[i] - period / 2;
      hi[i] = p[i] + period / 2;
    } else {
      lo[i] = std::isfinite(model.domain().lower()[i]) ? model.domain().lower()[i] : p[i] - extent;
      hi[i] = std::isfinite(model.domain().upper()[i]) ? model.domain().upper()[i] : p[i] + extent;
    }
  }
  const Vec cell = (hi - lo) / static_cast<double>(res);
  const double ball = std::max(opts.cluster_radius, cell.norm());

  std::size_t total = 1;
  for (int i = 0; i < n; ++i) total *= res;
  std::vector<int> label(total, -1);
  std::vector<bool> open(total, false);
  Vec c(n);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rem = idx;
    for (int i = 0; i < n; ++i) {
      c[i] = lo[i] + (static_cast<double>(rem % res) + 0.5) * cell[i];
      rem /= res;
    }
    if (!model.in_chart(c)) continue;
    bool blocked = false;
    for (const Vec& x : locus) {
      if (model.chart_difference(c, x).norm() <= ball) {
        blocked = true;
        break;
      }
    }
    open[idx] = !blocked;
  }
  int components = 0;
  std::deque<std::size_t> queue;
  for (std::size_t seed = 0; seed < total; ++seed) {
    if (!open[seed] || label[seed] >= 0) continue;
    label[seed] = components;
    queue.push_back(seed);
    while (!queue.empty()) {
      const std::size_t idx = queue.front();
      queue.pop_front();
      std::size_t stride = 1;
      for (int i = 0; i < n; ++i) {
        const std::size_t k = (idx / stride) % res;
        for (int dir : {-1, 1}) {
          std::size_t nk;
          if (dir < 0) {
            if (k == 0 && !periodic[static_cast<std::size_t>(i)]) continue;
            nk = k == 0 ? res - 1 : k - 1;
          } else {
            if (k + 1 == res && !periodic[static_cast<std::size_t>(i)]) continue;
            nk = k + 1 == res ? 0 : k + 1;
          }
          const std::size_t nb = idx - k * stride + nk * stride;
          if (open[nb] && label[nb] < 0) {
            label[nb] = components;
            queue.push_back(nb);
          }
        }
        stride *= res;
      }
    }
    ++components;
  }
  out.ww.flood_cells = total;
  out.ww.complement_components = static_cast<std::size_t>(components);
  out.ww.complement_connected = components == 1;
  out.flood_lower = lo;
  out.flood_upper = hi;
  out.flood_labels = std::move(label);
  out.flood_resolution = res;
  out.flood_periodic = periodic;
  return out;
}

}  // namespace geoconn
