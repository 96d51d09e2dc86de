#include <cstdint>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "geoconn/connector.hpp"
#include "geoconn/dsl.hpp"
#include "geoconn/errors.hpp"
#include "geoconn/geodesic.hpp"
#include "geoconn/json_format.hpp"
#include "geoconn/locus.hpp"
#include "geoconn/model_config.hpp"
#include "geoconn/models.hpp"
#include "geoconn/properness.hpp"
#include "report.hpp"

namespace gc = geoconn;
using gc::cli::Json;
using gc::Vec;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kGeometric = 2;
constexpr int kModel = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string model = "euclidean";
  int dim = 2;
  std::string config;
  std::optional<double> rtol;
  std::optional<double> atol;
  std::optional<double> t_max;
  std::uint64_t seed = 1;
  std::string output;
  std::string format = "auto";
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--model", c.model, "builtin model name")->capture_default_str();
  sub->add_option("--dim", c.dim, "dimension for euclidean/minkowski")->capture_default_str();
  sub->add_option("--config", c.config, "model config file (overrides --model)");
  sub->add_option("--rtol", c.rtol, "integrator relative tolerance");
  sub->add_option("--atol", c.atol, "integrator absolute tolerance");
  sub->add_option("--t-max", c.t_max, "integration horizon");
  sub->add_option("--seed", c.seed, "seed for sampled grids and pairs")->capture_default_str();
  sub->add_option("--output", c.output, "write to this file instead of stdout");
  sub->add_option("--format", c.format, "csv or json")
      ->check(CLI::IsMember({"auto", "csv", "json", "text"}))
      ->capture_default_str();
}

gc::ModelPtr load_model(const Common& c) {
  if (!c.config.empty()) return gc::build_model(gc::load_model_config(c.config));
  gc::ModelParams mp;
  mp.dim = c.dim;
  return gc::make_model(c.model, mp);
}

gc::IntegratorConfig integrator(const Common& c, double default_t_max) {
  gc::IntegratorConfig cfg;
  if (c.rtol) cfg.rtol = *c.rtol;
  if (c.atol) cfg.atol = *c.atol;
  cfg.t_max = c.t_max.value_or(default_t_max);
  try {
    cfg.validate();
  } catch (const gc::ConfigError& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

// Components may be constant expressions ("pi/2").
Vec parse_vector(const std::string& text, const char* what) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      values.push_back(gc::dsl::parse(item, 0).eval(Vec()));
    } catch (const gc::Error& e) {
      throw UsageError(std::string("bad ") + what + " component '" + item + "': " + e.what());
    }
  }
  if (values.empty()) throw UsageError(std::string("empty ") + what);
  return Eigen::Map<Vec>(values.data(), static_cast<Eigen::Index>(values.size()));
}

Vec point_or_default(const std::string& text, const gc::ManifoldModel& model, const char* what) {
  Vec x = text.empty() ? gc::reference_point(model) : parse_vector(text, what);
  if (x.size() != model.dim()) {
    throw UsageError(std::string(what) + " has " + std::to_string(x.size()) +
                     " components, model dimension is " + std::to_string(model.dim()));
  }
  if (!model.in_chart(x)) throw gc::OutOfChart(x);
  return x;
}

Vec vector_of_dim(const std::string& text, int n, const char* what) {
  Vec v = parse_vector(text, what);
  if (v.size() != n) {
    throw UsageError(std::string(what) + " has " + std::to_string(v.size()) +
                     " components, model dimension is " + std::to_string(n));
  }
  return v;
}

std::vector<Vec> parse_vertices(const std::string& text, int n) {
  std::vector<Vec> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) out.push_back(vector_of_dim(item, n, "vertex"));
  return out;
}

std::optional<gc::CausalClass> parse_causal(const std::string& s) {
  if (s == "spacelike") return gc::CausalClass::Spacelike;
  if (s == "timelike") return gc::CausalClass::Timelike;
  if (s == "null") return gc::CausalClass::Null;
  return std::nullopt;
}

std::string resolve_format(const Common& c, const char* fallback) {
  return c.format == "auto" ? fallback : c.format;
}

void emit(const Common& c, const std::string& text) {
  if (c.output.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(c.output, std::ios::binary);
  if (!f) throw UsageError("cannot write " + c.output);
  f << text;
}

Json base_params(const Common& c, const gc::ManifoldModel& model) {
  Json p;
  p["model"] = model.name();
  p["dim"] = model.dim();
  if (!c.config.empty()) p["config"] = c.config;
  p["seed"] = c.seed;
  return p;
}

// ---------------------------------------------------------------------------

int run_models(const Common& c) {
  const auto models = gc::builtin_models();
  if (resolve_format(c, "csv") == "json") {
    Json arr = Json::array();
    for (const auto& m : models) {
      Json j;
      j["name"] = m.name;
      j["dim"] = m.dims;
      j["signature"] = m.signature;
      j["chart"] = m.chart;
      j["oracle"] = m.oracle;
      arr.push_back(std::move(j));
    }
    Json out;
    out["models"] = std::move(arr);
    emit(c, gc::dump_json(out, 2) + "\n");
    return kOk;
  }
  std::ostringstream out;
  out << "name,dim,signature,chart,oracle\n";
  for (const auto& m : models) {
    out << m.name << ',' << m.dims << ',' << m.signature << ",\"" << m.chart << "\","
        << (m.oracle ? "yes" : "no") << '\n';
  }
  emit(c, out.str());
  return kOk;
}

struct ShootArgs {
  std::string point;
  std::string vec;
};

int run_shoot(const Common& c, const ShootArgs& a) {
  auto model = load_model(c);
  const Vec p = point_or_default(a.point, *model, "point");
  const Vec v = vector_of_dim(a.vec, model->dim(), "vec");
  const auto cfg = integrator(c, 1.0);
  const auto path = gc::integrate_geodesic(model, p, v, cfg);
  if (resolve_format(c, "csv") == "json") {
    Json out;
    out["kind"] = "shoot";
    out["model"] = model->name();
    Json params = base_params(c, *model);
    params["point"] = gc::to_json(p);
    params["vec"] = gc::to_json(v);
    params["t_max"] = cfg.t_max;
    params["rtol"] = cfg.rtol;
    out["params"] = std::move(params);
    Json rows = Json::array();
    for (const auto& node : path.nodes) {
      Json r;
      r["t"] = node.t;
      r["x"] = gc::to_json(node.x);
      r["v"] = gc::to_json(node.v);
      rows.push_back(std::move(r));
    }
    out["rows"] = std::move(rows);
    Json verdict;
    verdict["termination"] = gc::to_string(path.termination);
    verdict["t_end"] = path.t_end;
    verdict["energy_drift"] = gc::energy_drift(path);
    out["verdict"] = std::move(verdict);
    emit(c, gc::dump_json(out, 2) + "\n");
  } else {
    emit(c, gc::cli::path_csv(path));
  }
  return kOk;
}

int run_exp(const Common& c, const ShootArgs& a) {
  auto model = load_model(c);
  const Vec p = point_or_default(a.point, *model, "point");
  const Vec v = vector_of_dim(a.vec, model->dim(), "vec");
  auto cfg = integrator(c, 1.0);
  cfg.t_max = 1.0;
  const auto r = gc::try_exp(*model, p, v, cfg);
  const bool json = resolve_format(c, "csv") == "json";
  if (json) {
    Json out;
    out["termination"] = gc::to_string(r.termination);
    out["t"] = r.t;
    out["x"] = gc::to_json(r.x);
    out["v"] = gc::to_json(r.v);
    emit(c, gc::dump_json(out) + "\n");
  } else {
    std::ostringstream s;
    for (Eigen::Index i = 1; i <= r.x.size(); ++i) s << (i > 1 ? "," : "") << 'x' << i;
    s << '\n' << gc::join_numbers(r.x) << '\n';
    emit(c, s.str());
  }
  if (!r.ok()) {
    std::cerr << "exp: v is outside the domain (" << gc::to_string(r.termination) << " at t = "
              << gc::format_number(r.t) << ")\n";
    return kGeometric;
  }
  return kOk;
}

struct ConnectArgs {
  std::string from;
  std::string to;
  std::string path = "segment";
  std::string via;
  bool json = false;
  bool locus = false;
  std::size_t locus_count = 64;
};

int run_connect(const Common& c, const ConnectArgs& a) {
  auto model = load_model(c);
  const Vec p = point_or_default(a.from, *model, "from");
  const Vec q = point_or_default(a.to, *model, "to");
  gc::ConnectConfig cfg;
  cfg.integrator = integrator(c, 1.0);
  cfg.integrator.t_max = 1.0;
  if (a.path == "aux") cfg.path = gc::PathKind::AuxGeodesic;
  if (a.path == "polyline") {
    cfg.path = gc::PathKind::UserPolyline;
    cfg.polyline = parse_vertices(a.via, model->dim());
  }
  const auto outcome = gc::connect(model, p, q, cfg);

  std::optional<gc::ConjugateLocusSample> locus;
  if (a.locus) {
    gc::GridSpec grid;
    grid.count = a.locus_count;
    auto lcfg = integrator(c, 10.0);
    locus = gc::conjugate_locus_sample(model, p, grid, c.t_max.value_or(10.0), lcfg);
  }
  const auto report = gc::connect_report(*model, outcome, locus ? &*locus : nullptr);
  const bool ok = outcome.status == gc::LiftStatus::Connected;

  if (a.json) {
    Json out;
    out["status"] = gc::to_string(outcome.status);
    out["v"] = gc::to_json(outcome.v);
    if (!ok) {
      Json w = report.json;
      w.erase("status");
      w.erase("v");
      out["witness"] = std::move(w);
    }
    emit(c, gc::dump_json(out) + "\n");
  } else if (resolve_format(c, "text") == "json") {
    emit(c, gc::dump_json(report.json, 2) + "\n");
  } else {
    emit(c, report.text);
  }
  return ok ? kOk : kGeometric;
}

struct LocusArgs {
  std::string point;
  std::size_t count = 64;
  std::size_t refine = 0;
  std::string causal = "all";
};

int run_locus(const Common& c, const LocusArgs& a) {
  auto model = load_model(c);
  const Vec p = point_or_default(a.point, *model, "point");
  gc::GridSpec grid;
  grid.count = a.count;
  grid.causal = parse_causal(a.causal);
  gc::LocusOptions opts;
  opts.refine = a.refine;
  const auto cfg = integrator(c, 10.0);
  const auto sample = gc::conjugate_locus_sample(model, p, grid, cfg.t_max, cfg, opts);
  if (resolve_format(c, "csv") == "json") {
    Json out;
    out["kind"] = "conj-locus";
    out["model"] = model->name();
    Json params = base_params(c, *model);
    params["count"] = a.count;
    params["refine"] = a.refine;
    params["causal"] = a.causal;
    out["params"] = std::move(params);
    out["locus"] = gc::cli::locus_json(sample);
    emit(c, gc::dump_json(out, 2) + "\n");
  } else {
    emit(c, gc::cli::locus_csv(sample));
  }
  return kOk;
}

struct ProbeArgs {
  std::string kind;
  std::string point;
  std::string family = "radial";
  std::string causal = "spacelike";
  double norm = std::numbers::pi;
  std::size_t count = 0;  // per kind default
  std::string vertices;
  double norm_cap = 1e3;
  double cauchy_tol = 1e-6;
  std::string evaluation = "auto";
  bool aux_norm = false;
  std::string box;
  std::string f;
  double r_max = 1.0;
  double base_radius = 1.0;
  double extent = 2.0;
  double speed = 1.0;
  double step = 1e-3;
};

gc::ScalarField parse_field(const std::string& text, int dim) {
  if (text.empty()) throw UsageError("--f is required");
  gc::dsl::Expr e;
  try {
    e = gc::dsl::parse(text, dim);
  } catch (const gc::ParseError& err) {
    throw UsageError("--f: " + std::string(err.what()));
  }
  return {text, [e](const Vec& x) { return e.eval(x); }};
}

std::pair<Vec, Vec> parse_box(const std::string& text, const gc::ManifoldModel& model) {
  const auto colon = text.find(':');
  if (text.empty() || colon == std::string::npos) throw UsageError("--box expects l1,..,ln:u1,..,un");
  Vec lo = vector_of_dim(text.substr(0, colon), model.dim(), "box lower corner");
  Vec hi = vector_of_dim(text.substr(colon + 1), model.dim(), "box upper corner");
  if ((hi.array() <= lo.array()).any()) throw UsageError("--box upper corner must exceed lower");
  return {lo, hi};
}

Json convex_output(const Common& c, const gc::ManifoldModel& model, const ProbeArgs& a,
                   Json& params) {
  gc::ConvexConfig cfg;
  cfg.integrator = integrator(c, 1.0);
  cfg.step = a.step;
  const auto f = parse_field(a.f, model.dim());
  const std::size_t count = a.count ? a.count : 500;
  const auto segs = gc::random_segments(model, count, c.seed, a.extent, a.speed);
  const auto report = gc::convex_check(model, f, segs, cfg);
  params["f"] = a.f;
  params["segments"] = count;
  params["extent"] = a.extent;
  params["speed"] = a.speed;
  params["step"] = a.step;
  Json out;
  out["rows"] = gc::cli::rows_json(report);
  out["verdict"] = gc::cli::verdict_json(report);
  return out;
}

int run_probe(const Common& c, const ProbeArgs& a) {
  auto model = load_model(c);
  Json params = base_params(c, *model);
  Json body;

  if (a.kind == "weakproper") {
    const Vec p = point_or_default(a.point, *model, "point");
    gc::ProbeConfig cfg;
    cfg.integrator = integrator(c, 1.0);
    cfg.norm_cap = a.norm_cap;
    cfg.cauchy_tol = a.cauchy_tol;
    cfg.evaluation = a.evaluation == "oracle"      ? gc::ExpEvaluation::Oracle
                     : a.evaluation == "integrate" ? gc::ExpEvaluation::Integrate
                                                   : gc::ExpEvaluation::Auto;
    if (a.aux_norm) {
      cfg.lift_metric = model->is_riemannian()
                            ? model
                            : gc::auxiliary_riemannian(model, gc::timelike_eigenfield(model));
    }
    const std::size_t count = a.count ? a.count : 8;
    gc::ProbeCurveFamily family;
    if (a.family == "radial") {
      family = gc::radial_family(*model, p, count, cfg);
    } else if (a.family == "spiral") {
      family = gc::spiral_family(*model, p, count, cfg);
    } else if (a.family == "hyperboloid") {
      const auto cls = parse_causal(a.causal);
      if (!cls) throw UsageError("--causal must be spacelike, timelike or null");
      family = gc::hyperboloid_sweep(*model, p, a.norm, *cls, cfg);
      params["causal"] = a.causal;
      params["norm"] = a.norm;
    } else if (a.family == "polyline") {
      family = gc::polyline_family(p, parse_vertices(a.vertices, model->dim()), cfg);
    } else {
      throw UsageError("--family must be radial, spiral, hyperboloid or polyline");
    }
    params["point"] = gc::to_json(p);
    params["family"] = a.family;
    params["norm_cap"] = cfg.norm_cap;
    params["cauchy_tol"] = cfg.cauchy_tol;
    params["lift_norm"] = a.aux_norm ? "auxiliary" : "chart";
    const auto verdict = gc::weak_properness_probe(*model, p, family, cfg);
    body["rows"] = gc::cli::rows_json(verdict);
    body["verdict"] = gc::cli::verdict_json(verdict);
  } else if (a.kind == "disprison") {
    gc::DisprisonConfig cfg;
    cfg.integrator = integrator(c, 20.0);
    cfg.base_radius = a.base_radius;
    const std::size_t count = a.count ? a.count : 32;
    const auto seeds = gc::random_seeds(*model, count, c.seed);
    params["seeds"] = count;
    params["horizon"] = cfg.integrator.t_max;
    params["base_radius"] = cfg.base_radius;
    const auto report = gc::disprisonment_probe(*model, seeds, cfg);
    body["rows"] = gc::cli::rows_json(report);
    body["verdict"] = gc::cli::verdict_json(report);
  } else if (a.kind == "pseudoconvex") {
    const auto [lo, hi] = parse_box(a.box, *model);
    gc::PseudoconvexConfig cfg;
    cfg.integrator = integrator(c, 4.0);
    cfg.sample_count = a.count ? a.count : 64;
    cfg.seed = c.seed;
    params["box_lower"] = gc::to_json(lo);
    params["box_upper"] = gc::to_json(hi);
    params["sample_count"] = cfg.sample_count;
    params["horizon"] = cfg.integrator.t_max;
    const auto report = gc::pseudoconvexity_probe(*model, lo, hi, cfg);
    body["rows"] = gc::cli::rows_json(report);
    body["verdict"] = gc::cli::verdict_json(report);
  } else if (a.kind == "convex") {
    body = convex_output(c, *model, a, params);
  } else if (a.kind == "gauss") {
    const Vec p = point_or_default(a.point, *model, "point");
    gc::GaussConfig cfg;
    if (c.rtol) cfg.integrator.rtol = *c.rtol;
    if (c.atol) cfg.integrator.atol = *c.atol;
    cfg.r_max = a.r_max;
    if (a.count) cfg.radial = cfg.angular = a.count;
    params["point"] = gc::to_json(p);
    params["r_max"] = cfg.r_max;
    params["grid"] = {cfg.radial, cfg.angular};
    const auto report = gc::gauss_lemma_check(*model, p, cfg);
    body["rows"] = gc::cli::rows_json(report);
    body["verdict"] = gc::cli::verdict_json(report);
  } else {
    throw UsageError("--kind must be weakproper, disprison, pseudoconvex, convex or gauss");
  }

  if (resolve_format(c, "json") == "csv") {
    emit(c, gc::cli::rows_csv(body["rows"]));
  } else {
    Json out;
    out["kind"] = a.kind;
    out["model"] = model->name();
    out["params"] = std::move(params);
    out["rows"] = std::move(body["rows"]);
    out["verdict"] = std::move(body["verdict"]);
    emit(c, gc::dump_json(out, 2) + "\n");
  }
  return kOk;
}

int run_convex(const Common& c, ProbeArgs a) {
  a.kind = "convex";
  return run_probe(c, a);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"geodesic connectedness toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "geoconn 0.1.0");

  Common common;
  ShootArgs shoot;
  ConnectArgs conn;
  LocusArgs locus;
  ProbeArgs probe;

  auto* models = app.add_subcommand("models", "list builtin models");
  add_common(models, common);

  auto* shoot_cmd = app.add_subcommand("shoot", "integrate a geodesic, CSV t,x..,v..");
  add_common(shoot_cmd, common);
  shoot_cmd->add_option("--point", shoot.point, "base point (default: model reference point)");
  shoot_cmd->add_option("--vec", shoot.vec, "initial velocity")->required();

  auto* exp_cmd = app.add_subcommand("exp", "exponential map exp_p(v)");
  add_common(exp_cmd, common);
  exp_cmd->add_option("--point", shoot.point, "base point");
  exp_cmd->add_option("--vec", shoot.vec, "tangent vector")->required();

  auto* conn_cmd = app.add_subcommand("connect", "two-point geodesic connection");
  add_common(conn_cmd, common);
  conn_cmd->add_option("--from", conn.from, "start point p")->required();
  conn_cmd->add_option("--to", conn.to, "target point q")->required();
  conn_cmd->add_option("--path", conn.path, "target path kind")
      ->check(CLI::IsMember({"segment", "aux", "polyline"}))
      ->capture_default_str();
  conn_cmd->add_option("--via", conn.via, "polyline vertices a1,..,an;b1,..,bn");
  conn_cmd->add_flag("--json", conn.json, "compact JSON: status, v, witness on failure");
  conn_cmd->add_flag("--locus", conn.locus, "sample the conjugate locus of p for the report");
  conn_cmd->add_option("--locus-count", conn.locus_count, "directions for --locus")
      ->capture_default_str();

  auto* locus_cmd = app.add_subcommand("conj-locus", "first conjugate times over a direction grid");
  add_common(locus_cmd, common);
  locus_cmd->add_option("--point", locus.point, "base point");
  locus_cmd->add_option("--count", locus.count, "directions")->capture_default_str();
  locus_cmd->add_option("--refine", locus.refine, "grid doublings for the stability check")
      ->capture_default_str();
  locus_cmd->add_option("--causal", locus.causal, "restrict to one causal class")
      ->check(CLI::IsMember({"all", "spacelike", "timelike", "null"}))
      ->capture_default_str();

  auto add_probe_options = [&](CLI::App* cmd) {
    add_common(cmd, common);
    cmd->add_option("--point", probe.point, "base point");
    cmd->add_option("--count", probe.count, "curves / seeds / shots / segments / grid size");
    cmd->add_option("--f", probe.f, "scalar field as a metric expression");
    cmd->add_option("--extent", probe.extent, "segment sampling half-width")->capture_default_str();
    cmd->add_option("--speed", probe.speed, "segment chart speed")->capture_default_str();
    cmd->add_option("--step", probe.step, "second-difference step")->capture_default_str();
  };

  auto* probe_cmd = app.add_subcommand("probe", "sampled probes of properness hypotheses");
  add_probe_options(probe_cmd);
  probe_cmd->add_option("--kind", probe.kind, "probe kind")
      ->required()
      ->check(CLI::IsMember({"weakproper", "disprison", "pseudoconvex", "convex", "gauss"}));
  probe_cmd->add_option("--family", probe.family, "radial, spiral, hyperboloid, polyline")
      ->check(CLI::IsMember({"radial", "spiral", "hyperboloid", "polyline"}))
      ->capture_default_str();
  probe_cmd->add_option("--causal", probe.causal, "hyperboloid sweep class")->capture_default_str();
  probe_cmd->add_option("--norm", probe.norm, "hyperboloid g-norm")->capture_default_str();
  probe_cmd->add_option("--vertices", probe.vertices, "polyline vertices in T_pM");
  probe_cmd->add_option("--norm-cap", probe.norm_cap, "lift norm cap")->capture_default_str();
  probe_cmd->add_option("--cauchy-tol", probe.cauchy_tol, "image Cauchy tolerance")
      ->capture_default_str();
  probe_cmd->add_option("--exp", probe.evaluation, "exp evaluation")
      ->check(CLI::IsMember({"auto", "integrate", "oracle"}))
      ->capture_default_str();
  probe_cmd->add_flag("--aux-norm", probe.aux_norm, "measure lifts in the auxiliary metric");
  probe_cmd->add_option("--box", probe.box, "chart box l1,..,ln:u1,..,un");
  probe_cmd->add_option("--r-max", probe.r_max, "Gauss grid radius")->capture_default_str();
  probe_cmd->add_option("--base-radius", probe.base_radius, "smallest exhaustion box")
      ->capture_default_str();

  auto* convex_cmd = app.add_subcommand("convex-check", "convex-function criterion on geodesics");
  add_probe_options(convex_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*models) return run_models(common);
    if (*shoot_cmd) return run_shoot(common, shoot);
    if (*exp_cmd) return run_exp(common, shoot);
    if (*conn_cmd) return run_connect(common, conn);
    if (*locus_cmd) return run_locus(common, locus);
    if (*probe_cmd) return run_probe(common, probe);
    if (*convex_cmd) return run_convex(common, probe);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const gc::UnknownModel& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kModel;
  } catch (const gc::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kModel;
  } catch (const gc::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kModel;
  } catch (const gc::OutOfChart& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kModel;
  } catch (const gc::DegenerateMetric& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kModel;
  } catch (const gc::NoOracle& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kModel;
  } catch (const gc::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kGeometric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kModel;
  }
  return kUsage;
}
