#include "geoconn/model_config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "geoconn/dsl.hpp"
#include "geoconn/models.hpp"

namespace geoconn {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    const auto piece = trim(s.substr(start, comma == std::string_view::npos ? s.npos : comma - start));
    out.emplace_back(piece);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_bound(const std::string& s, int line) {
  if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("line " + std::to_string(line) + ": bad number '" + s + "'");
  }
}

class DslModel final : public ManifoldModel {
 public:
  DslModel(std::string name, std::vector<int> signature, std::vector<std::vector<dsl::Expr>> g,
           ChartDomain domain)
      : ManifoldModel(std::move(name), std::move(signature), std::move(domain)), g_(std::move(g)) {}

  bool in_chart(const Vec& x) const override {
    if (!domain().contains(x)) return false;
    try {
      metric_eval_unchecked_signature(x);
      return true;
    } catch (const Error&) {
      return false;
    }
  }

  Mat metric(const Vec& x) const override {
    const int n = dim();
    Mat g = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        const auto& e = g_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        if (e.empty()) continue;
        g(i, j) = g(j, i) = e.eval(x);
      }
    }
    return g;
  }

 private:
  void metric_eval_unchecked_signature(const Vec& x) const {
    const Mat g = metric(x);
    Eigen::SelfAdjointEigenSolver<Mat> es(g, Eigen::EigenvaluesOnly);
    long negatives = 0;
    for (Eigen::Index i = 0; i < g.rows(); ++i) {
      const double ev = es.eigenvalues()[i];
      if (!std::isfinite(ev) || std::abs(ev) < kDegeneracyTol) throw DegenerateMetric(x, "eigenvalue");
      if (ev < 0) ++negatives;
    }
    if (negatives != std::count(signature().begin(), signature().end(), -1))
      throw DegenerateMetric(x, "signature");
  }

  std::vector<std::vector<dsl::Expr>> g_;
};

}  // namespace

std::vector<int> parse_signature(std::string_view text) {
  std::vector<int> sig;
  for (const auto& item : split_list(text)) {
    if (item == "+" || item == "+1" || item == "1") {
      sig.push_back(1);
    } else if (item == "-" || item == "-1") {
      sig.push_back(-1);
    } else {
      throw ConfigError("bad signature entry '" + item + "'");
    }
  }
  return sig;
}

ModelConfig parse_model_config(std::string_view text) {
  ModelConfig cfg;
  std::string section;
  bool saw_section = false;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto nl = text.find('\n', start);
    std::string_view line = text.substr(start, nl == std::string_view::npos ? text.npos : nl - start);
    start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    // strip comments outside quotes
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (!quoted && line[i] == '#') {
        line = line.substr(0, i);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";

    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + "unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section != "manifold") throw ConfigError(where + "unknown section [" + section + "]");
      saw_section = true;
      continue;
    }
    if (!saw_section) throw ConfigError(where + "key outside of a section");
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where + "expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
      value = value.substr(1, value.size() - 2);

    if (key == "type") {
      if (value != "builtin" && value != "dsl") throw ConfigError(where + "type must be builtin or dsl");
      cfg.type = value;
    } else if (key == "name") {
      cfg.name = value;
    } else if (key == "dim") {
      try {
        std::size_t used = 0;
        cfg.dim = std::stoi(value, &used);
        if (used != value.size() || cfg.dim < 1) throw std::invalid_argument(value);
      } catch (const std::exception&) {
        throw ConfigError(where + "dim must be a positive integer");
      }
    } else if (key == "signature") {
      try {
        cfg.signature = parse_signature(value);
      } catch (const ConfigError& e) {
        throw ConfigError(where + e.what());
      }
    } else if (key == "lower" || key == "upper") {
      const auto items = split_list(value);
      Vec b(static_cast<Eigen::Index>(items.size()));
      for (std::size_t i = 0; i < items.size(); ++i)
        b[static_cast<Eigen::Index>(i)] = parse_bound(items[i], line_no);
      (key == "lower" ? cfg.lower : cfg.upper) = b;
    } else if (key.rfind("g_", 0) == 0) {
      int i = 0, j = 0;
      char tail = 0;
      if (std::sscanf(key.c_str(), "g_%d_%d%c", &i, &j, &tail) != 2)
        throw ConfigError(where + "unknown key '" + key + "'");
      if (i < 1 || j < i) throw ConfigError(where + "metric entries must be upper triangle g_i_j with 1 <= i <= j");
      cfg.components[{i, j}] = value;
    } else {
      throw ConfigError(where + "unknown key '" + key + "'");
    }
  }

  if (cfg.type.empty()) throw ConfigError("missing 'type'");
  if (cfg.name.empty()) throw ConfigError("missing 'name'");
  if (cfg.type == "dsl") {
    if (cfg.dim == 0) throw ConfigError("missing 'dim'");
    if (cfg.signature.empty()) cfg.signature.assign(static_cast<std::size_t>(cfg.dim), 1);
    if (static_cast<int>(cfg.signature.size()) != cfg.dim)
      throw ConfigError("signature length does not match dim");
    for (const auto& [ij, _] : cfg.components)
      if (ij.second > cfg.dim) throw ConfigError("metric entry index exceeds dim");
  } else if (!cfg.components.empty()) {
    throw ConfigError("metric entries are only allowed for type = dsl");
  }
  return cfg;
}

ModelConfig load_model_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open model config '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_model_config(ss.str());
}

ModelPtr make_dsl_model(std::string name, std::vector<int> signature,
                        const std::map<std::pair<int, int>, std::string>& components,
                        std::optional<Vec> lower, std::optional<Vec> upper) {
  const int n = static_cast<int>(signature.size());
  std::vector<std::vector<dsl::Expr>> g(static_cast<std::size_t>(n),
                                        std::vector<dsl::Expr>(static_cast<std::size_t>(n)));
  for (const auto& [ij, src] : components) {
    const auto [i, j] = ij;
    if (i < 1 || j < i || j > n) throw ConfigError("bad metric entry index");
    try {
      g[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] = dsl::parse(src, n);
    } catch (const ParseError& e) {
      throw ConfigError("g_" + std::to_string(i) + "_" + std::to_string(j) + ": " + e.what());
    }
  }
  const double inf = std::numeric_limits<double>::infinity();
  Vec lo = lower.value_or(Vec::Constant(n, -inf));
  Vec hi = upper.value_or(Vec::Constant(n, inf));
  if (lo.size() != n || hi.size() != n) throw ConfigError("chart bounds must have dim entries");
  return std::make_shared<DslModel>(std::move(name), std::move(signature), std::move(g),
                                    ChartDomain(std::move(lo), std::move(hi)));
}

ModelPtr build_model(const ModelConfig& config) {
  if (config.type == "builtin") {
    ModelParams params;
    if (config.dim > 0) params.dim = config.dim;
    auto model = make_model(config.name, params);
    if (!config.signature.empty() && config.signature != model->signature())
      throw ConfigError("signature does not match builtin model '" + config.name + "'");
    return model;
  }
  return make_dsl_model(config.name, config.signature, config.components, config.lower, config.upper);
}

}  // namespace geoconn
