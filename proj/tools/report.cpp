#include "report.hpp"

#include <sstream>

#include "geoconn/json_format.hpp"

namespace geoconn::cli {

Json rows_json(const ProbeVerdict& v) {
  Json rows = Json::array();
  for (const auto& r : v.rows) {
    Json j;
    j["curve"] = r.curve;
    j["samples"] = r.samples;
    j["image_convergent"] = r.image_convergent;
    j["image_limit"] = to_json(r.image_limit);
    j["divergence"] = r.divergence;
    j["lift_bounded"] = r.lift_bounded;
    j["max_lift_norm"] = r.max_lift_norm;
    j["domain_escape"] = r.domain_escape;
    j["escape"] = r.escape;
    rows.push_back(std::move(j));
  }
  return rows;
}

Json verdict_json(const ProbeVerdict& v) {
  Json j;
  j["summary"] = to_string(v.summary);
  j["family"] = v.family;
  j["witness"] = v.witness ? Json(v.rows[*v.witness].curve) : Json(nullptr);
  j["exp_evaluation"] = v.oracle ? "oracle" : "integrated";
  j["label"] = v.label;
  return j;
}

Json rows_json(const DisprisonReport& r) {
  Json rows = Json::array();
  for (const auto& d : r.rows) {
    Json j;
    j["x"] = to_json(d.seed.base);
    j["v"] = to_json(d.seed.vec);
    j["forward"] = to_string(d.forward);
    j["t_forward"] = d.t_forward;
    j["backward"] = to_string(d.backward);
    j["t_backward"] = d.t_backward;
    j["box_half"] = d.box_half;
    j["box_full"] = d.box_full;
    j["exits"] = d.exits;
    j["error"] = d.error;
    rows.push_back(std::move(j));
  }
  return rows;
}

Json verdict_json(const DisprisonReport& r) {
  Json j;
  j["summary"] = r.verdict;
  j["exiting"] = r.exiting;
  j["blowups"] = r.blowups;
  j["label"] = "sampled evidence, not a proof";
  return j;
}

Json rows_json(const PseudoconvexReport& r) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < r.counts.size(); ++i) {
    Json j;
    j["shots"] = r.counts[i];
    j["kstar_lower"] = to_json(r.kstar_lower[i]);
    j["kstar_upper"] = to_json(r.kstar_upper[i]);
    rows.push_back(std::move(j));
  }
  return rows;
}

Json verdict_json(const PseudoconvexReport& r) {
  Json j;
  j["summary"] = r.verdict;
  j["unbounded"] = r.unbounded;
  j["segments"] = r.segments;
  j["label"] = "sampled evidence, not a proof";
  return j;
}

Json rows_json(const ConvexReport& r) {
  Json rows = Json::array();
  for (const auto& c : r.rows) {
    Json j;
    j["segment"] = c.index;
    j["min_second_difference"] = c.min_second_difference;
    j["t_worst"] = c.t_worst;
    j["speed2"] = c.speed2;
    j["endpoint_max"] = c.endpoint_max;
    j["interior_max"] = c.interior_max;
    j["bound_applies"] = c.bound_applies;
    j["second_ok"] = c.second_ok;
    j["bound_ok"] = c.bound_ok;
    j["error"] = c.error;
    rows.push_back(std::move(j));
  }
  return rows;
}

Json verdict_json(const ConvexReport& r) {
  Json j;
  j["summary"] = r.pass ? "pass" : "fail";
  j["tol"] = r.tol;
  if (!r.rows.empty()) {
    const auto& w = r.rows[r.worst];
    j["worst_segment"] = w.index;
    j["worst_second_difference"] = w.min_second_difference;
    j["worst_speed2"] = w.speed2;
  }
  return j;
}

Json rows_json(const GaussReport& r) {
  Json rows = Json::array();
  for (const auto& g : r.rows) {
    Json j;
    j["r"] = g.r;
    j["s"] = g.s;
    j["radial_norm"] = g.radial_norm;
    j["cross"] = g.cross;
    j["skipped"] = g.skipped;
    rows.push_back(std::move(j));
  }
  return rows;
}

Json verdict_json(const GaussReport& r) {
  Json j;
  j["summary"] = r.pass ? "pass" : "fail";
  j["max_radial_deviation"] = r.max_radial_deviation;
  j["max_cross"] = r.max_cross;
  j["skipped"] = r.skipped;
  return j;
}

Json locus_json(const ConjugateLocusSample& s) {
  Json j;
  j["p"] = to_json(s.p);
  j["grid"] = s.grid_description;
  j["t_max"] = s.t_max;
  Json rays = Json::array();
  for (const auto& r : s.rays) {
    Json ray;
    ray["dir_index"] = r.index;
    ray["u"] = to_json(r.u);
    ray["causal"] = to_string(r.causal);
    ray["status"] = to_string(r.status);
    ray["t_star"] = r.status == RayStatus::Conjugate ? Json(r.t_star) : Json(nullptr);
    ray["point"] = r.status == RayStatus::Conjugate ? to_json(r.point) : Json(nullptr);
    if (r.status == RayStatus::Escape) {
      ray["escape"] = to_string(r.escape);
      ray["escape_time"] = r.escape_time;
    }
    if (!r.error.empty()) ray["error"] = r.error;
    rays.push_back(std::move(ray));
  }
  j["rays"] = std::move(rays);
  Json clusters = Json::array();
  for (const auto& c : s.clusters) clusters.push_back(to_json(c));
  j["clusters"] = std::move(clusters);
  Json ww;
  ww["grid_sizes"] = s.ww.grid_sizes;
  ww["cluster_counts"] = s.ww.cluster_counts;
  ww["closedness_stable"] = s.ww.closedness_stable;
  ww["flood_cells"] = s.ww.flood_cells;
  ww["complement_components"] = s.ww.complement_components;
  ww["complement_connected"] = s.ww.complement_connected;
  ww["caveat"] = s.ww.caveat;
  j["ww"] = std::move(ww);
  return j;
}

std::string locus_csv(const ConjugateLocusSample& s) {
  std::ostringstream out;
  const Eigen::Index n = s.p.size();
  out << "dir_index";
  for (Eigen::Index i = 1; i <= n; ++i) out << ",u" << i;
  out << ",t_star";
  for (Eigen::Index i = 1; i <= n; ++i) out << ",cx" << i;
  out << ",status\n";
  for (const auto& r : s.rays) {
    out << r.index << ',' << join_numbers(r.u) << ',';
    if (r.status == RayStatus::Conjugate) {
      out << format_number(r.t_star) << ',' << join_numbers(r.point);
    } else {
      out << std::string(static_cast<std::size_t>(n), ',');
    }
    out << ',' << to_string(r.status) << '\n';
  }
  return out.str();
}

std::string path_csv(const GeodesicPath& path) {
  std::ostringstream out;
  const Eigen::Index n = path.p0.size();
  out << 't';
  for (Eigen::Index i = 1; i <= n; ++i) out << ",x" << i;
  for (Eigen::Index i = 1; i <= n; ++i) out << ",v" << i;
  out << '\n';
  for (const auto& node : path.nodes) {
    out << format_number(node.t) << ',' << join_numbers(node.x) << ',' << join_numbers(node.v)
        << '\n';
  }
  return out.str();
}

namespace {

std::string scalar_text(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + '"';
  }
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_float()) return format_number(v.get<double>());
  return v.dump();
}

}  // namespace

std::string rows_csv(const Json& rows) {
  std::ostringstream out;
  if (rows.empty()) return "";
  bool first = true;
  for (const auto& [key, value] : rows.front().items()) {
    if (value.is_array()) {
      for (std::size_t i = 1; i <= value.size(); ++i) {
        out << (first ? "" : ",") << key << i;
        first = false;
      }
    } else {
      out << (first ? "" : ",") << key;
      first = false;
    }
  }
  out << '\n';
  for (const auto& row : rows) {
    first = true;
    for (const auto& [key, value] : row.items()) {
      if (value.is_array()) {
        for (const auto& e : value) {
          out << (first ? "" : ",") << scalar_text(e);
          first = false;
        }
      } else {
        out << (first ? "" : ",") << scalar_text(value);
        first = false;
      }
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace geoconn::cli
