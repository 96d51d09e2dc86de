#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace geoconn {

// Base of every error raised by the library. Geometric failures inside the
// connector are reported as statuses, not exceptions.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OutOfChart : public Error {
 public:
  explicit OutOfChart(Eigen::VectorXd x);
  const Eigen::VectorXd& point() const noexcept { return x_; }

 private:
  Eigen::VectorXd x_;
};

class DegenerateMetric : public Error {
 public:
  DegenerateMetric(Eigen::VectorXd x, const std::string& what);
  const Eigen::VectorXd& point() const noexcept { return x_; }

 private:
  Eigen::VectorXd x_;
};

class UnknownModel : public Error {
 public:
  explicit UnknownModel(const std::string& name);
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class NotTimelike : public Error {
 public:
  explicit NotTimelike(Eigen::VectorXd x);
  const Eigen::VectorXd& point() const noexcept { return x_; }

 private:
  Eigen::VectorXd x_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t position, std::string message);
  std::size_t position() const noexcept { return position_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::size_t position_;
  std::string message_;
};

class EvalError : public Error {
 public:
  EvalError(std::string node, Eigen::VectorXd x, const std::string& why);
  const std::string& node() const noexcept { return node_; }
  const Eigen::VectorXd& point() const noexcept { return x_; }

 private:
  std::string node_;
  Eigen::VectorXd x_;
};

class StepSizeUnderflow : public Error {
 public:
  explicit StepSizeUnderflow(double t);
  double time() const noexcept { return t_; }

 private:
  double t_;
};

class IntegrationError : public Error {
 public:
  using Error::Error;
};

enum class Termination { ReachedTmax, ChartExit, BlowUp, OracleExact };

const char* to_string(Termination t) noexcept;

// Raised when v is not in the (operational) maximal domain of exp_p.
class DomainEscape : public Error {
 public:
  DomainEscape(Termination reason, double t);
  Termination reason() const noexcept { return reason_; }
  double time() const noexcept { return t_; }

 private:
  Termination reason_;
  double t_;
};

class LinearizationFailure : public Error {
 public:
  LinearizationFailure(double t, double norm);
};

class NoConvergence : public Error {
 public:
  NoConvergence(int iterations, double residual, const std::string& why);
  int iterations() const noexcept { return iterations_; }
  double residual() const noexcept { return residual_; }

 private:
  int iterations_;
  double residual_;
};

class NoOracle : public Error {
 public:
  explicit NoOracle(const std::string& model);
};

}  // namespace geoconn
