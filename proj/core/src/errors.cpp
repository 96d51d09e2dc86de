#include "geoconn/errors.hpp"

#include <sstream>

namespace geoconn {
namespace {

std::string format_point(const Eigen::VectorXd& x) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (i) os << ", ";
    os << x[i];
  }
  os << ')';
  return os.str();
}

}  // namespace

OutOfChart::OutOfChart(Eigen::VectorXd x)
    : Error("point " + format_point(x) + " is outside the chart domain"), x_(std::move(x)) {}

DegenerateMetric::DegenerateMetric(Eigen::VectorXd x, const std::string& what)
    : Error("degenerate metric at " + format_point(x) + ": " + what), x_(std::move(x)) {}

UnknownModel::UnknownModel(const std::string& name) : Error("unknown model '" + name + "'") {}

NotTimelike::NotTimelike(Eigen::VectorXd x)
    : Error("vector field is not timelike at " + format_point(x)), x_(std::move(x)) {}

ParseError::ParseError(std::size_t position, std::string message)
    : Error("parse error at offset " + std::to_string(position) + ": " + message),
      position_(position),
      message_(std::move(message)) {}

EvalError::EvalError(std::string node, Eigen::VectorXd x, const std::string& why)
    : Error("cannot evaluate " + node + " at " + format_point(x) + ": " + why),
      node_(std::move(node)),
      x_(std::move(x)) {}

StepSizeUnderflow::StepSizeUnderflow(double t)
    : Error("step size underflow at t = " + std::to_string(t)), t_(t) {}

const char* to_string(Termination t) noexcept {
  switch (t) {
    case Termination::ReachedTmax: return "ReachedTmax";
    case Termination::ChartExit: return "ChartExit";
    case Termination::BlowUp: return "BlowUp";
    case Termination::OracleExact: return "OracleExact";
  }
  return "?";
}

DomainEscape::DomainEscape(Termination reason, double t)
    : Error(std::string("geodesic left the domain (") + to_string(reason) + ") at t = " +
            std::to_string(t)),
      reason_(reason),
      t_(t) {}

LinearizationFailure::LinearizationFailure(double t, double norm)
    : Error("variational state norm " + std::to_string(norm) + " exceeded bound at t = " +
            std::to_string(t)) {}

NoConvergence::NoConvergence(int iterations, double residual, const std::string& why)
    : Error("no convergence after " + std::to_string(iterations) +
            " iterations (residual " + std::to_string(residual) + "): " + why),
      iterations_(iterations),
      residual_(residual) {}

NoOracle::NoOracle(const std::string& model)
    : Error("model '" + model + "' has no closed-form geodesic oracle") {}

}  // namespace geoconn
