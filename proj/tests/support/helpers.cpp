#include "helpers.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <sys/wait.h>

#include "geoconn/models.hpp"

namespace geoconn::support {

std::vector<NamedModel> builtin_zoo() {
  std::vector<NamedModel> zoo;
  for (int n = 2; n <= 4; ++n) {
    zoo.push_back({"euclidean" + std::to_string(n), make_model("euclidean", {n})});
    zoo.push_back({"minkowski" + std::to_string(n), make_model("minkowski", {n})});
  }
  for (const char* name : {"sphere2", "hyperbolic2", "desitter", "paraboloid", "clifton_pohl"}) {
    zoo.push_back({name, make_model(name)});
  }
  return zoo;
}

double max_abs(const Mat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

double minkowski_dot(const Vec& a, const Vec& b) {
  const Eigen::Index m = a.size() - 1;
  return a.head(m).dot(b.head(m)) - a[m] * b[m];
}

Vec random_vec(std::mt19937_64& rng, int n, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = u(rng);
  return v;
}

Vec desitter_chart(const Vec& X) {
  return (Vec(2) << std::atan2(X[1], X[0]), std::asinh(X[2])).finished();
}

CommandResult run_command(const std::string& cmd) {
  CommandResult r;
  FILE* pipe = ::popen((cmd + " 2>/dev/null").c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int status = ::pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace geoconn::support
