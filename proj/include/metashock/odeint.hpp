#pragma once

#include <functional>
#include <vector>

namespace metashock {

using Vec = std::vector<double>;
using OdeRhs = std::function<void(double t, const Vec& y, Vec& dy)>;

// Accepted steps of an adaptive integration, with the derivative at each
// node so states can be re-evaluated anywhere via cubic Hermite.
struct OdeSolution {
  std::vector<double> ts;
  std::vector<Vec> ys;
  std::vector<Vec> fs;

  Vec eval(double t) const;
  double eval1(double t, int comp = 0) const;
  const Vec& back() const { return ys.back(); }
};

// Dormand-Prince 5(4) embedded pair with PI step control. Integrates from
// t0 to t1 (either direction). Local error per step <= tol (mixed
// absolute/relative). Throws StiffnessError on step underflow.
OdeSolution integrate_ode(const OdeRhs& rhs, Vec y0, double t0, double t1,
                          double tol, double hmax = 0.0);

}  // namespace metashock
