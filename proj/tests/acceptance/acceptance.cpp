// One PASS/FAIL line per acceptance criterion; nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dsl_corpus.hpp"
#include "geoconn/connector.hpp"
#include "geoconn/dsl.hpp"
#include "geoconn/errors.hpp"
#include "geoconn/jacobi.hpp"
#include "geoconn/locus.hpp"
#include "geoconn/models.hpp"
#include "geoconn/properness.hpp"
#include "helpers.hpp"

using namespace geoconn;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

Vec v2(double a, double b) { return (Vec(2) << a, b).finished(); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Vec vec_of(const std::vector<double>& x) {
  return Eigen::Map<const Vec>(x.data(), static_cast<Eigen::Index>(x.size()));
}

// ---------------------------------------------------------------------------

Outcome sphere_conjugate_point() {
  auto m = make_model("sphere2");
  const Vec p = v2(kPi / 2, 0);
  const auto t0 = std::chrono::steady_clock::now();
  const auto grid = direction_grid(*m, p, 64);
  double worst = 0;
  std::vector<Vec> points;
  bool all = true;
  for (const Vec& u : grid.directions) {
    const auto c = first_conjugate_time(*m, p, u, 4.0);
    if (!c) {
      all = false;
      continue;
    }
    worst = std::max(worst, std::abs(c->t_star - kPi));
    points.push_back(m->embed(c->point));
  }
  const double elapsed = seconds_since(t0);
  const auto reps = cluster_representatives(points, 1e-3);
  const double antipode = reps.empty() ? INFINITY : (points[reps[0]] + m->embed(p)).norm();
  const bool pass = all && grid.directions.size() == 64 && worst <= 1e-4 && elapsed < 5.0 &&
                    reps.size() == 1 && antipode <= 1e-3;
  return {pass, "64 directions, max |t*-pi| " + fmt("%.2e", worst) + ", " +
                    std::to_string(reps.size()) + " cluster(s) at distance " +
                    fmt("%.2e", antipode) + " from -p, " + fmt("%.2f", elapsed) + " s"};
}

Outcome desitter_conjugate_structure() {
  ModelPtr m = make_model("desitter");
  const Vec p = v2(0, 0);
  const Vec minus_p = -m->embed(p);
  double worst_t = 0, worst_x = 0;
  std::size_t spacelike = 0, conj = 0, causal = 0, none = 0;
  const auto s = conjugate_locus_sample(m, p, {64, CausalClass::Spacelike}, 10.0);
  for (const auto& r : s.rays) {
    ++spacelike;
    if (r.status != RayStatus::Conjugate) continue;
    ++conj;
    worst_t = std::max(worst_t, std::abs(r.t_star - kPi));
    worst_x = std::max(worst_x, (m->embed(r.point) - minus_p).norm());
  }
  for (auto c : {CausalClass::Timelike, CausalClass::Null}) {
    for (const auto& r : conjugate_locus_sample(m, p, {64, c}, 10.0).rays) {
      ++causal;
      if (r.status == RayStatus::None) ++none;
    }
  }
  const bool pass = spacelike > 0 && conj == spacelike && worst_t <= 1e-4 && worst_x <= 1e-6 &&
                    causal > 0 && none == causal;
  return {pass, std::to_string(conj) + "/" + std::to_string(spacelike) +
                    " spacelike rays conjugate (max |t*-pi| " + fmt("%.2e", worst_t) +
                    ", max |x+p| " + fmt("%.2e", worst_x) + "), " + std::to_string(none) + "/" +
                    std::to_string(causal) + " timelike/null rays without conjugate point"};
}

Outcome desitter_violation() {
  auto m = make_model("desitter");
  const Vec p = v2(0, 0);
  ProbeConfig cfg;
  const auto fam = hyperboloid_sweep(*m, p, kPi, CausalClass::Spacelike, cfg);
  const auto v = weak_properness_probe(*m, p, fam, cfg);
  if (v.summary != ProbeSummary::Violation || !v.witness) return {false, "no violation reported"};
  const auto& w = v.rows[*v.witness];
  // every image along the witness curve, not just the last one
  const Vec minus_p = -m->embed(p);
  double worst = 0;
  const auto& curve = fam.curves[*v.witness];
  for (double s : curve.schedule) {
    worst = std::max(worst, (oracle_point(*m, p, curve.lift(s), 1.0) - minus_p).norm());
  }
  const bool pass = w.image_convergent && !w.lift_bounded && w.max_lift_norm > 1e3 && worst <= 1e-8;
  return {pass, "witness " + w.curve + ": images within " + fmt("%.2e", worst) +
                    " of -p, lift norm " + fmt("%.4g", w.max_lift_norm)};
}

Outcome flat_connect() {
  std::mt19937_64 rng(101);
  double worst = 0;
  std::size_t connected = 0, total = 0;
  for (const char* name : {"euclidean", "minkowski"}) {
    ModelPtr m = make_model(name, {3});
    for (int k = 0; k < 100; ++k) {
      const Vec p = support::random_vec(rng, 3, 10), q = support::random_vec(rng, 3, 10);
      const auto o = connect(m, p, q);
      ++total;
      if (o.status != LiftStatus::Connected) continue;
      ++connected;
      worst = std::max(worst, support::max_abs(o.v - (q - p)));
    }
  }
  return {connected == total && worst <= 1e-10,
          std::to_string(connected) + "/" + std::to_string(total) +
              " pairs Connected, max |v-(q-p)| " + fmt("%.2e", worst)};
}

Outcome sphere_connect() {
  ModelPtr m = make_model("sphere2");
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> z(-1, 1), ang(-kPi, kPi);
  // uniform on the sphere; the poles themselves are outside the chart
  auto draw = [&] {
    for (;;) {
      const Vec x = v2(std::acos(z(rng)), ang(rng));
      if (m->in_chart(x)) return x;
    }
  };
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t connected = 0, pairs = 0;
  double worst_norm = 0, worst_trip = 0;
  while (pairs < 100) {
    const Vec p = draw(), q = draw();
    const double d = std::acos(std::clamp(m->embed(p).dot(m->embed(q)), -1.0, 1.0));
    if (kPi - d < 1e-3) continue;
    ++pairs;
    const auto o = connect(m, p, q);
    if (o.status != LiftStatus::Connected) continue;
    ++connected;
    worst_norm = std::max(worst_norm, std::abs(std::sqrt(inner(*m, p, o.v, o.v)) - d));
    worst_trip = std::max(worst_trip, m->chart_difference(exp_map(*m, p, o.v), q).norm());
  }
  const double elapsed = seconds_since(t0);
  return {connected == 100 && worst_norm <= 1e-5 && worst_trip <= 1e-6 && elapsed < 30.0,
          std::to_string(connected) + "/100 Connected, max | |v|_g - d | " +
              fmt("%.2e", worst_norm) + ", max round trip " + fmt("%.2e", worst_trip) + ", " +
              fmt("%.2f", elapsed) + " s"};
}

// Smallest ambient distance from each target to the three closed-form
// geodesic families through p = e1 on the de Sitter hyperboloid:
//   spacelike cos t e1 + sin t u,  timelike cosh t e1 + sinh t u,  null e1 + t u,
// with u over the unit (resp. null) vectors orthogonal to e1, both signs.
std::vector<double> desitter_brute_force(const std::vector<Vec>& targets, std::size_t directions,
                                         std::size_t params) {
  std::vector<double> best(targets.size(), INFINITY);
  const double a_max = 6.0, t_max = 10.0;
  const std::size_t per = directions / 2;
  std::vector<double> first(params), radial(params);
  // point = (first[j], sign * radial[j] * u1, sign * radial[j] * u2)
  auto sweep = [&](auto&& direction) {
    for (std::size_t i = 0; i < per; ++i) {
      const double a = -a_max + 2 * a_max * (static_cast<double>(i) + 0.5) / static_cast<double>(per);
      const auto [u1, u2] = direction(a);
      for (double sign : {-1.0, 1.0}) {
        for (std::size_t j = 0; j < params; ++j) {
          const double x0 = first[j], x1 = sign * radial[j] * u1, x2 = sign * radial[j] * u2;
          for (std::size_t k = 0; k < targets.size(); ++k) {
            const Vec& q = targets[k];
            const double d2 = (x0 - q[0]) * (x0 - q[0]) + (x1 - q[1]) * (x1 - q[1]) +
                              (x2 - q[2]) * (x2 - q[2]);
            if (d2 < best[k]) best[k] = d2;
          }
        }
      }
    }
  };
  const auto last = static_cast<double>(params - 1);
  for (std::size_t j = 0; j < params; ++j) {
    const double t = 2 * kPi * static_cast<double>(j) / static_cast<double>(params);
    first[j] = std::cos(t);
    radial[j] = std::sin(t);
  }
  sweep([](double a) { return std::pair{std::cosh(a), std::sinh(a)}; });
  for (std::size_t j = 0; j < params; ++j) {
    const double t = -t_max + 2 * t_max * static_cast<double>(j) / last;
    first[j] = std::cosh(t);
    radial[j] = std::sinh(t);
  }
  sweep([](double a) { return std::pair{std::sinh(a), std::cosh(a)}; });
  for (std::size_t j = 0; j < params; ++j) {
    first[j] = 1.0;
    radial[j] = -t_max + 2 * t_max * static_cast<double>(j) / last;
  }
  // both null lines: a < 0 scales (1, 1), a >= 0 scales (1, -1)
  sweep([](double a) {
    constexpr double a_half = 3.0;
    const double s = std::exp(a < 0 ? a + a_half : a - a_half);
    return std::pair{s, a < 0 ? s : -s};
  });
  for (double& b : best) b = std::sqrt(b);
  return best;
}

Outcome desitter_failure_soundness() {
  ModelPtr m = make_model("desitter");
  const Vec p = v2(0, 0);
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> eta(-3.0, -1.5), y(-1.5, 1.5);
  std::size_t non_connected = 0;
  std::vector<Vec> targets;
  for (int k = 0; k < 20; ++k) {
    const double e = k == 0 ? -1.5 : eta(rng);
    double yy = y(rng);
    if (std::abs(yy) < 0.05) yy = 0.05;  // q != -p and off the chart seam
    const double zz2 = e * e + yy * yy - 1;
    const Vec X = (Vec(3) << e, yy, (k % 2 ? 1 : -1) * std::sqrt(zz2)).finished();
    const auto o = connect(m, p, support::desitter_chart(X));
    if (o.status != LiftStatus::Connected) ++non_connected;
    targets.push_back(X);
  }
  const auto d = desitter_brute_force(targets, 10000, 1000);
  const double closest = *std::min_element(d.begin(), d.end());
  return {non_connected == 20 && closest > 1e-3,
          std::to_string(non_connected) + "/20 targets not Connected; brute force over 1e4 "
          "directions x 1e3 parameters per family: closest approach " + fmt("%.3g", closest)};
}

Outcome dexp_validation() {
  std::mt19937_64 rng(404);
  double worst_fd = 0, worst_id = 0;
  std::string detail;
  bool complete = true;
  for (const auto& [label, m] : support::builtin_zoo()) {
    const int n = m->dim();
    const auto pts = sample_chart_points(*m, 4000, 505, 2.0);
    std::size_t evaluated = 0, attempts = 0;
    for (const Vec& p : pts) {
      if (evaluated == 200) break;
      ++attempts;
      const Vec v = support::random_vec(rng, n, 1.0);
      DifferentialFrame f;
      try {
        f = dexp_matrix(*m, p, v);
      } catch (const DomainEscape&) {
        continue;
      } catch (const LinearizationFailure&) {
        continue;
      }
      const Mat fd = dexp_finite_difference(*m, p, v);
      worst_fd = std::max(worst_fd, support::max_abs(f.matrix - fd));
      const auto id = dexp_matrix(*m, p, Vec::Zero(n));
      worst_id = std::max(worst_id, support::max_abs(id.matrix - Mat::Identity(n, n)));
      ++evaluated;
    }
    if (evaluated < 200) complete = false;
    detail += " " + label + "=" + std::to_string(evaluated) + "/" + std::to_string(attempts);
  }
  return {complete && worst_fd <= 1e-4 && worst_id <= 1e-9,
          "max |dexp - fd| " + fmt("%.2e", worst_fd) + ", max |dexp(0) - I| " +
              fmt("%.2e", worst_id) + "; evaluated/drawn:" + detail};
}

Outcome gauss_lemma() {
  GaussConfig cfg;
  cfg.r_max = kPi;
  const auto s = gauss_lemma_check(*make_model("sphere2"), v2(kPi / 2, 0), cfg);
  cfg.r_max = 3.0;
  const auto h = gauss_lemma_check(*make_model("hyperbolic2"), v2(0, 0), cfg);
  const double radial = std::max(s.max_radial_deviation, h.max_radial_deviation);
  const double cross = std::max(s.max_cross, h.max_cross);
  const bool pass = s.pass && h.pass && s.rows.size() == 1024 && h.rows.size() == 1024 &&
                    s.skipped == 0 && h.skipped == 0 && radial <= 1e-6 && cross <= 1e-6;
  return {pass, "32x32 grids, max |<dr,dr>-1| " + fmt("%.2e", radial) + ", max |<dr,ds>| " +
                    fmt("%.2e", cross) + ", skipped " + std::to_string(s.skipped + h.skipped)};
}

Outcome convexity() {
  auto m = make_model("euclidean", {3});
  const auto seg = random_segments(*m, 500, 606);
  auto field = [](const std::string& src) {
    auto e = std::make_shared<dsl::Expr>(dsl::parse(src, 3));
    return ScalarField{src, [e](const Vec& x) { return e->eval(x); }};
  };
  const auto pos = convex_check(*m, field("x1^2 + x2^2 + x3^2"), seg, {});
  double min_second = INFINITY;
  bool bounds = true;
  for (const auto& r : pos.rows) {
    min_second = std::min(min_second, r.min_second_difference);
    bounds = bounds && r.bound_applies && r.bound_ok && r.error.empty();
  }
  const auto neg = convex_check(*m, field("-(x1^2 + x2^2 + x3^2)"), seg, {});
  const auto& w = neg.rows[neg.worst];
  const double expected = -2 * w.speed2;
  const double rel = std::abs(w.min_second_difference - expected) / std::abs(expected);
  const bool pass = pos.pass && pos.rows.size() == 500 && min_second >= -1e-8 && bounds &&
                    !neg.pass && w.min_second_difference < 0 && rel <= 0.01;
  return {pass, "|x|^2: min second difference " + fmt("%.4g", min_second) +
                    (bounds ? ", endpoint bound holds" : ", endpoint bound violated") +
                    "; -|x|^2: worst " + fmt("%.6g", w.min_second_difference) + " vs -2|v|^2 = " +
                    fmt("%.6g", expected) + " (rel " + fmt("%.1e", rel) + ")"};
}

Outcome auxiliary_identity() {
  ModelPtr g = make_model("minkowski", {4});
  const VectorField V = timelike_eigenfield(g);
  ModelPtr h = auxiliary_riemannian(g, V);
  std::mt19937_64 rng(707);
  double worst = 0, min_eig = INFINITY;
  for (int i = 0; i < 100; ++i) {
    const Vec x = support::random_vec(rng, 4, 5);
    const Mat G = metric_eval(*g, x);
    const Mat H = metric_eval(*h, x);
    Vec v = V.eval(x);
    v /= std::sqrt(-v.dot(G * v));
    min_eig = std::min(min_eig, Eigen::SelfAdjointEigenSolver<Mat>(H).eigenvalues().minCoeff());
    for (int j = 0; j < 100; ++j) {
      const Vec X = support::random_vec(rng, 4, 1);
      worst = std::max(worst, std::abs(v.dot(H * X) + v.dot(G * X)));
    }
  }
  return {worst <= 1e-12 && min_eig > 0,
          "max |h(V,X)+g(V,X)| " + fmt("%.2e", worst) + " over 1e4 samples, min eigenvalue of h " +
              fmt("%.4g", min_eig)};
}

Outcome integrator_quality() {
  ModelPtr s = make_model("sphere2");
  IntegratorConfig cfg;
  cfg.rtol = 1e-10;
  cfg.t_max = 10 * kPi;
  double drift = 0;
  // unit-speed geodesics through the equator inclined up to 1.2 rad stay in the chart
  for (int k = 0; k < 8; ++k) {
    const double inc = 1.2 * k / 7.0;
    const auto path = integrate_geodesic(s, v2(kPi / 2, 0.3 * k), v2(std::sin(inc), std::cos(inc)), cfg);
    if (path.termination != Termination::ReachedTmax) return {false, "geodesic left the chart"};
    drift = std::max(drift, energy_drift(path));
  }

  std::mt19937_64 rng(808);
  std::uniform_real_distribution<double> tt(0.0, 1.0);
  double worst = 0;
  std::string counts;
  bool complete = true;
  for (const char* name : {"sphere2", "desitter"}) {
    auto m = make_model(name);
    const auto pts = sample_chart_points(*m, 5000, 909, 1.5);
    std::size_t used = 0;
    for (const Vec& p : pts) {
      if (used == 1000) break;
      const Vec v = support::random_vec(rng, 2, 1.5);
      const double t = tt(rng);
      const auto r = try_exp(*m, p, t * v);
      if (!r.ok()) continue;
      worst = std::max(worst, (m->embed(r.x) - oracle_point(*m, p, v, t)).norm());
      ++used;
    }
    complete = complete && used == 1000;
    counts += std::string(" ") + name + "=" + std::to_string(used);
  }
  return {drift < 1e-8 && complete && worst <= 1e-7,
          "energy drift over [0, 10 pi] " + fmt("%.2e", drift) + "; oracle agreement " +
              fmt("%.2e", worst) + " over triples" + counts};
}

Outcome dsl_corpus() {
  std::size_t golden_bad = 0, deriv_bad = 0, pos_bad = 0, deriv_checks = 0;
  double worst_golden = 0, worst_deriv = 0;
  const auto& golden = support::eval_golden();
  for (const auto& c : golden) {
    const double got = dsl::parse(c.src, c.dim).eval(vec_of(c.x));
    const double rel = std::abs(got - c.value) / std::max(1.0, std::abs(c.value));
    worst_golden = std::max(worst_golden, rel);
    if (!(rel <= 1e-12)) ++golden_bad;
  }
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-2, 2);
  for (const auto& c : support::derivative_corpus()) {
    const auto e = dsl::parse(c.src, c.dim);
    for (int k = 0; k < 20; ++k) {
      std::vector<double> x(static_cast<std::size_t>(c.dim));
      for (auto& xi : x) xi = u(rng);
      const auto grad = c.grad(x);
      for (int i = 0; i < c.dim; ++i) {
        const double want = grad[static_cast<std::size_t>(i)];
        const double rel = std::abs(e.partial(vec_of(x), i, 1e-5) - want) / std::max(1.0, std::abs(want));
        worst_deriv = std::max(worst_deriv, rel);
        ++deriv_checks;
        if (!(rel <= 1e-7)) ++deriv_bad;
      }
    }
  }
  const auto& errors = support::parse_error_corpus();
  for (const auto& c : errors) {
    try {
      dsl::parse(c.src, c.dim);
      ++pos_bad;
    } catch (const ParseError& e) {
      if (e.position() != c.position) ++pos_bad;
    }
  }
  return {golden.size() == 50 && golden_bad == 0 && deriv_bad == 0 && pos_bad == 0,
          std::to_string(golden.size() - golden_bad) + "/" + std::to_string(golden.size()) +
              " golden (max rel " + fmt("%.1e", worst_golden) + "), " +
              std::to_string(deriv_checks - deriv_bad) + "/" + std::to_string(deriv_checks) +
              " derivatives (max rel " + fmt("%.1e", worst_deriv) + "), " +
              std::to_string(errors.size() - pos_bad) + "/" + std::to_string(errors.size()) +
              " error positions"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"sphere conjugate point", sphere_conjugate_point},
      {"de Sitter conjugate structure", desitter_conjugate_structure},
      {"de Sitter weak-properness violation", desitter_violation},
      {"flat connector", flat_connect},
      {"sphere connector", sphere_connect},
      {"de Sitter connector failure soundness", desitter_failure_soundness},
      {"dexp validation", dexp_validation},
      {"Gauss lemma", gauss_lemma},
      {"convexity criterion", convexity},
      {"auxiliary metric identity", auxiliary_identity},
      {"integrator quality", integrator_quality},
      {"expression language", dsl_corpus},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& [name, run] = criteria[i];
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s criterion %zu (%s): %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", i + 1, name,
                o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
