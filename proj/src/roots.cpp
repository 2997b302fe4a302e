#include "metashock/roots.hpp"

#include <cmath>

#include "metashock/errors.hpp"

namespace metashock {

RootResult newton_safeguarded(const std::function<double(double)>& f,
                              const std::function<double(double)>& df,
                              double lo, double hi,
                              double ftol, double xtol, int maxit) {
  double flo = f(lo), fhi = f(hi);
  if (!std::isfinite(flo) || !std::isfinite(fhi))
    throw BracketError("newton_safeguarded: non-finite residual at bracket end");
  if (flo == 0.0) return {lo, 0.0, 0, true};
  if (fhi == 0.0) return {hi, 0.0, 0, true};
  if ((flo > 0.0) == (fhi > 0.0))
    throw BracketError("newton_safeguarded: no sign change on bracket");

  double a = lo, b = hi, fa = flo, fb = fhi;
  double x = lo, fx = flo;  // starting from an end lets a linear f converge in one step
  RootResult res;
  for (int it = 1; it <= maxit; ++it) {
    res.iterations = it;
    double slope;
    if (df) {
      slope = df(x);
    } else {
      slope = (fb - fa) / (b - a);
    }
    double xn;
    bool take_bisect = !(std::isfinite(slope)) || slope == 0.0;
    if (!take_bisect) {
      xn = x - fx / slope;
      // reject steps that leave the open bracket
      if (!(xn > a && xn < b)) take_bisect = true;
    }
    if (take_bisect) xn = a + 0.5 * (b - a);

    double fxn = f(xn);
    x = xn;
    fx = fxn;
    if (std::isfinite(fxn)) {
      if ((fxn > 0.0) == (fa > 0.0)) {
        a = xn;
        fa = fxn;
      } else {
        b = xn;
        fb = fxn;
      }
    }
    if (std::abs(fx) <= ftol || (b - a) <= xtol * std::max(1.0, std::abs(x))) {
      res.root = x;
      res.fval = fx;
      res.converged = true;
      return res;
    }
  }
  res.root = x;
  res.fval = fx;
  res.converged = false;
  return res;
}

}  // namespace metashock
