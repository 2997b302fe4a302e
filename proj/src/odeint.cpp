#include "metashock/odeint.hpp"

#include <algorithm>
#include <cmath>

#include "metashock/errors.hpp"

namespace metashock {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// 5th-order minus embedded 4th-order weights (error estimator).
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace

Vec OdeSolution::eval(double t) const {
  // Hermite interpolation on the accepted step containing t.
  if (ts.empty()) throw StiffnessError("OdeSolution::eval on empty solution");
  const bool fwd = ts.back() >= ts.front();
  size_t i = 0;
  if (fwd) {
    if (t <= ts.front()) return ys.front();
    if (t >= ts.back()) return ys.back();
    i = std::upper_bound(ts.begin(), ts.end(), t) - ts.begin() - 1;
  } else {
    if (t >= ts.front()) return ys.front();
    if (t <= ts.back()) return ys.back();
    i = std::upper_bound(ts.begin(), ts.end(), t, std::greater<double>()) - ts.begin() - 1;
  }
  const double h = ts[i + 1] - ts[i];
  const double s = (t - ts[i]) / h;
  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
  Vec out(ys[i].size());
  for (size_t k = 0; k < out.size(); ++k)
    out[k] = h00 * ys[i][k] + h * h10 * fs[i][k] + h01 * ys[i + 1][k] + h * h11 * fs[i + 1][k];
  return out;
}

double OdeSolution::eval1(double t, int comp) const { return eval(t)[comp]; }

OdeSolution integrate_ode(const OdeRhs& rhs, Vec y0, double t0, double t1,
                          double tol, double hmax) {
  const int n = static_cast<int>(y0.size());
  const double dir = (t1 >= t0) ? 1.0 : -1.0;
  const double span = std::abs(t1 - t0);
  if (hmax <= 0.0) hmax = span;

  OdeSolution sol;
  Vec y = std::move(y0);
  Vec k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), y5(n);
  double t = t0;
  rhs(t, y, k1);
  for (double v : k1)
    if (!std::isfinite(v)) throw StiffnessError("integrate_ode: non-finite rhs at start");
  sol.ts.push_back(t);
  sol.ys.push_back(y);
  sol.fs.push_back(k1);

  if (span == 0.0) return sol;

  // initial step from rhs magnitude
  double ynorm = 0.0, fnorm = 0.0;
  for (int i = 0; i < n; ++i) {
    ynorm = std::max(ynorm, std::abs(y[i]));
    fnorm = std::max(fnorm, std::abs(k1[i]));
  }
  double h = (fnorm > 0.0) ? 0.01 * std::max(1.0, ynorm) / fnorm : span / 100.0;
  h = std::min({h, span, hmax});
  double err_prev = 1.0;

  while (dir * (t1 - t) > 0.0) {
    h = std::min(h, std::abs(t1 - t));
    if (h < 1e-14 * std::max(1.0, std::abs(t)))
      throw StiffnessError("integrate_ode: step size underflow");
    const double hd = dir * h;

    for (int i = 0; i < n; ++i) ytmp[i] = y[i] + hd * a21 * k1[i];
    rhs(t + c2 * hd, ytmp, k2);
    for (int i = 0; i < n; ++i) ytmp[i] = y[i] + hd * (a31 * k1[i] + a32 * k2[i]);
    rhs(t + c3 * hd, ytmp, k3);
    for (int i = 0; i < n; ++i) ytmp[i] = y[i] + hd * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    rhs(t + c4 * hd, ytmp, k4);
    for (int i = 0; i < n; ++i)
      ytmp[i] = y[i] + hd * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    rhs(t + c5 * hd, ytmp, k5);
    for (int i = 0; i < n; ++i)
      ytmp[i] = y[i] + hd * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    rhs(t + hd, ytmp, k6);
    for (int i = 0; i < n; ++i)
      y5[i] = y[i] + hd * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    rhs(t + hd, y5, k7);  // FSAL

    double err = 0.0;
    bool finite = true;
    for (int i = 0; i < n; ++i) {
      if (!std::isfinite(y5[i])) {
        finite = false;
        break;
      }
      const double sc = tol + tol * std::max(std::abs(y[i]), std::abs(y5[i]));
      const double e =
          hd * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      err += (e / sc) * (e / sc);
    }
    err = finite ? std::sqrt(err / n) : 2.0;

    if (err <= 1.0) {
      t += hd;
      y = y5;
      k1 = k7;
      sol.ts.push_back(t);
      sol.ys.push_back(y);
      sol.fs.push_back(k1);
      // PI controller
      const double fac =
          0.9 * std::pow(std::max(err, 1e-10), -0.7 / 5.0) * std::pow(err_prev, 0.4 / 5.0);
      h = std::min(h * std::clamp(fac, 0.2, 5.0), hmax);
      err_prev = std::max(err, 1e-10);
    } else {
      h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
    }
  }
  return sol;
}

}  // namespace metashock
