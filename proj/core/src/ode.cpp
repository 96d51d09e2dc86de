#include "geoconn/ode.hpp"

#include <algorithm>
#include <cmath>

#include "geoconn/errors.hpp"

namespace geoconn::ode {
namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

// PI controller constants (Hairer, Norsett & Wanner).
constexpr double kBeta = 0.04;
constexpr double kExpo = 0.2 - kBeta * 0.75;
constexpr double kSafe = 0.9;
constexpr double kFacMin = 0.2;   // h may shrink by at most 5x
constexpr double kFacMax = 10.0;  // and grow by at most 10x

double error_norm(const Vec& err, const Vec& ya, const Vec& yb, const Options& o) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    const double sk = o.atol + o.rtol * std::max(std::abs(ya[i]), std::abs(yb[i]));
    const double r = err[i] / sk;
    s += r * r;
  }
  return std::sqrt(s / static_cast<double>(std::max<Eigen::Index>(1, err.size())));
}

double initial_step(const Rhs& f, double t0, const Vec& y0, const Vec& f0, double span,
                    const Options& o) {
  const double dnf = error_norm(f0, y0, y0, o);
  const double dny = error_norm(y0, y0, y0, o);
  double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : 0.01 * dny / dnf;
  h = std::min(h, span);
  double h1 = h;
  try {
    const Vec y1 = y0 + h * f0;
    Vec f1(y0.size());
    f(t0 + h, y1, f1);
    const double der2 = error_norm(f1 - f0, y0, y0, o) / h;
    const double der12 = std::max(std::abs(der2), dnf);
    h1 = der12 <= 1e-15 ? std::max(1e-6, std::abs(h) * 1e-3) : std::pow(0.01 / der12, 0.2);
  } catch (const Error&) {
    return h * 1e-3;
  }
  return std::min({100 * h, h1, span, o.h_max});
}

}  // namespace

Vec DenseStep::eval(double t) const {
  const double s = (t - t0) / h();
  const double s1 = 1.0 - s;
  return rcont[0] + s * (rcont[1] + s1 * (rcont[2] + s * (rcont[3] + s1 * rcont[4])));
}

Vec DenseStep::eval_segment(double t, Eigen::Index offset, Eigen::Index count) const {
  const double s = (t - t0) / h();
  const double s1 = 1.0 - s;
  return rcont[0].segment(offset, count) +
         s * (rcont[1].segment(offset, count) +
              s1 * (rcont[2].segment(offset, count) +
                    s * (rcont[3].segment(offset, count) + s1 * rcont[4].segment(offset, count))));
}

Summary dopri5(const Rhs& f, double t0, const Vec& y0, double t_end, const Options& opts,
               const Observer& observer) {
  Summary out;
  out.t = t0;
  out.y = y0;
  if (!(t_end > t0)) return out;

  const Eigen::Index n = y0.size();
  Vec k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ystage(n), ynew(n), err(n);
  f(t0, y0, k1);

  double t = t0;
  Vec y = y0;
  double h = opts.h_init > 0 ? opts.h_init : initial_step(f, t0, y0, k1, t_end - t0, opts);
  double facold = 1e-4;
  bool last_rejected = false;
  DenseStep step;

  while (true) {
    if (out.accepted + out.rejected >= opts.max_steps)
      throw IntegrationError("integrator step budget exhausted at t = " + std::to_string(t));
    const double span = t_end - t;
    bool final_step = false;
    if (h >= span * (1.0 - 1e-13)) {
      h = span;
      final_step = true;
    }
    h = std::min(h, opts.h_max);
    if (h < 1e-14 * std::max(1.0, std::abs(t))) throw StepSizeUnderflow(t);

    double errn = 0.0;
    bool stage_failed = false;
    try {
      ystage = y + h * a21 * k1;
      f(t + c2 * h, ystage, k2);
      ystage = y + h * (a31 * k1 + a32 * k2);
      f(t + c3 * h, ystage, k3);
      ystage = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
      f(t + c4 * h, ystage, k4);
      ystage = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
      f(t + c5 * h, ystage, k5);
      ystage = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
      f(t + h, ystage, k6);
      ynew = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
      f(t + h, ynew, k7);
      err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
      errn = error_norm(err, y, ynew, opts);
      if (!std::isfinite(errn) || !ynew.allFinite()) stage_failed = true;
    } catch (const Error&) {
      stage_failed = true;
    }

    if (stage_failed) {
      ++out.rejected;
      h *= 0.25;
      last_rejected = true;
      continue;
    }

    const double fac11 = std::pow(errn, kExpo);
    if (errn <= 1.0) {
      double fac = fac11 / std::pow(facold, kBeta);
      fac = std::clamp(fac / kSafe, 1.0 / kFacMax, 1.0 / kFacMin);
      double hnew = h / fac;
      facold = std::max(errn, 1e-4);
      if (last_rejected) hnew = std::min(hnew, h);
      last_rejected = false;

      step.t0 = t;
      step.t1 = final_step ? t_end : t + h;
      step.y0 = y;
      step.y1 = ynew;
      step.dy1 = k7;
      const Vec ydiff = ynew - y;
      const Vec bspl = h * k1 - ydiff;
      step.rcont[0] = y;
      step.rcont[1] = ydiff;
      step.rcont[2] = bspl;
      step.rcont[3] = ydiff - h * k7 - bspl;
      step.rcont[4] = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);

      ++out.accepted;
      t = step.t1;
      y = ynew;
      k1 = k7;
      out.t = t;
      out.y = y;
      if (observer && observer(step) == Control::Stop) {
        out.stopped = true;
        return out;
      }
      if (final_step) return out;
      h = hnew;
    } else {
      ++out.rejected;
      h /= std::min(1.0 / kFacMin, fac11 / kSafe);
      last_rejected = true;
    }
  }
}

}  // namespace geoconn::ode
